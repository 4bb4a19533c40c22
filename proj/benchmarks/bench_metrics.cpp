// Microbenchmarks for the hot paths: per-frame metrics, the distance
// transform behind boundary matching, the spatial prior, and a full
// sequence evaluation at challenge resolution (854x480).

#include <benchmark/benchmark.h>

#include <voskit/kinematic.hpp>
#include <voskit/mask.hpp>
#include <voskit/metrics.hpp>

namespace {

constexpr int kWidth = 854;
constexpr int kHeight = 480;

voskit::BinaryMask rect_mask(int cx, int cy, int half) {
    voskit::BinaryMask mask(kWidth, kHeight);
    const int x0 = std::max(0, cx - half), x1 = std::min(kWidth - 1, cx + half);
    const int y0 = std::max(0, cy - half), y1 = std::min(kHeight - 1, cy + half);
    for (int y = y0; y <= y1; ++y)
        for (int x = x0; x <= x1; ++x) mask.set(x, y, true);
    return mask;
}

voskit::LabeledFrame scene_frame(int t, int shift) {
    voskit::LabeledFrame frame(kWidth, kHeight);
    for (int o = 0; o < 3; ++o) {
        const int cx = 60 + 40 * o + (t * (2 + o)) % (kWidth - 160) + shift;
        const int cy = 60 + 120 * o + (t * (1 + o)) % (kHeight - 140) + shift;
        const int half = 25 + 6 * o;
        for (int y = std::max(0, cy - half); y <= std::min(kHeight - 1, cy + half); ++y)
            for (int x = std::max(0, cx - half); x <= std::min(kWidth - 1, cx + half); ++x)
                frame.set(x, y, o + 1);
    }
    return frame;
}

void BM_RegionSimilarity(benchmark::State& state) {
    const voskit::BinaryMask gt = rect_mask(300, 200, 90);
    const voskit::BinaryMask pred = rect_mask(305, 204, 92);
    for (auto _ : state) benchmark::DoNotOptimize(voskit::region_similarity(gt, pred));
}
BENCHMARK(BM_RegionSimilarity);

void BM_SquaredDistanceTransform(benchmark::State& state) {
    const voskit::BinaryMask mask = rect_mask(300, 200, 90);
    for (auto _ : state) benchmark::DoNotOptimize(voskit::squared_distance_transform(mask));
}
BENCHMARK(BM_SquaredDistanceTransform);

void BM_BoundaryAccuracy(benchmark::State& state) {
    const voskit::BinaryMask gt = rect_mask(300, 200, 90);
    const voskit::BinaryMask pred = rect_mask(305, 204, 92);
    const double tolerance = voskit::default_tolerance(kWidth, kHeight);
    for (auto _ : state) benchmark::DoNotOptimize(voskit::boundary_accuracy(gt, pred, tolerance));
}
BENCHMARK(BM_BoundaryAccuracy);

void BM_AdaptiveBoundaryAccuracy(benchmark::State& state) {
    const voskit::BinaryMask gt = rect_mask(300, 200, 90);
    const voskit::BinaryMask pred = rect_mask(305, 204, 92);
    for (auto _ : state)
        benchmark::DoNotOptimize(voskit::adaptive_boundary_accuracy(gt, pred));
}
BENCHMARK(BM_AdaptiveBoundaryAccuracy);

void BM_GaussianMap(benchmark::State& state) {
    voskit::KinematicState track;
    track.cx = 0.4;
    track.cy = 0.5;
    track.w = 0.2;
    track.h = 0.3;
    const voskit::MpmConfig config;
    for (auto _ : state)
        benchmark::DoNotOptimize(voskit::gaussian_map(track, kWidth, kHeight, config));
}
BENCHMARK(BM_GaussianMap);

void BM_EvaluateSequence(benchmark::State& state) {
    voskit::VideoSequence gt, pred;
    for (int t = 0; t < 20; ++t) {
        gt.frames.push_back(scene_frame(t, 0));
        pred.frames.push_back(scene_frame(t, 1));
    }
    for (auto _ : state)
        benchmark::DoNotOptimize(voskit::evaluate_sequence(gt, pred, voskit::MetricConfig{}));
}
BENCHMARK(BM_EvaluateSequence);

}  // namespace

BENCHMARK_MAIN();
