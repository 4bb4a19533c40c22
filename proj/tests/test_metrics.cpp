#include "voskit/metrics.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "voskit/synthgen.hpp"

using namespace voskit;

namespace {

BinaryMask random_mask(SplitMix64& rng, int w, int h, double fill) {
    BinaryMask mask(w, h);
    for (std::size_t k = 0; k < mask.pixel_count(); ++k)
        mask.data[k] = rng.next_double() < fill ? 1 : 0;
    return mask;
}

double oracle_region(const BinaryMask& gt, const BinaryMask& pred) {
    long long inter = 0, uni = 0;
    for (std::size_t k = 0; k < gt.pixel_count(); ++k) {
        inter += gt.data[k] && pred.data[k];
        uni += gt.data[k] || pred.data[k];
    }
    return uni == 0 ? 1.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

std::vector<std::pair<int, int>> oracle_boundary_set(const BinaryMask& m) {
    std::vector<std::pair<int, int>> out;
    for (int j = 0; j < m.height; ++j)
        for (int i = 0; i < m.width; ++i) {
            if (!m.at(i, j)) continue;
            const bool edge = i == 0 || j == 0 || i == m.width - 1 || j == m.height - 1 ||
                              !m.at(i - 1, j) || !m.at(i + 1, j) || !m.at(i, j - 1) ||
                              !m.at(i, j + 1);
            if (edge) out.emplace_back(i, j);
        }
    return out;
}

// All-pairs reference for the boundary F-measure.
double oracle_boundary_f(const BinaryMask& gt, const BinaryMask& pred, double tol) {
    if (gt.empty_foreground() && pred.empty_foreground()) return 1.0;
    if (gt.empty_foreground() || pred.empty_foreground()) return 0.0;
    const auto gb = oracle_boundary_set(gt);
    const auto pb = oracle_boundary_set(pred);
    auto fraction_within = [&](const auto& query, const auto& target) {
        long long hits = 0;
        for (const auto& q : query) {
            long long best = -1;
            for (const auto& t : target) {
                const long long dx = q.first - t.first, dy = q.second - t.second;
                const long long d2 = dx * dx + dy * dy;
                if (best < 0 || d2 < best) best = d2;
            }
            if (static_cast<double>(best) <= tol * tol) ++hits;
        }
        return static_cast<double>(hits) / static_cast<double>(query.size());
    };
    const double p = fraction_within(pb, gb);
    const double r = fraction_within(gb, pb);
    return p + r == 0 ? 0.0 : 2.0 * p * r / (p + r);
}

double oracle_adaptive_tol(long long area, double k_adapt) {
    return std::max(1.0, std::round(k_adapt * std::sqrt(static_cast<double>(area))));
}

VideoSequence random_sequence(SplitMix64& rng, int w, int h, int frames, int max_objects) {
    VideoSequence seq;
    const int n = rng.next_int(1, max_objects);
    for (int t = 0; t < frames; ++t) {
        LabeledFrame frame(w, h);
        for (int j = 0; j < h; ++j)
            for (int i = 0; i < w; ++i) {
                const int roll = rng.next_int(0, 3 * n);
                if (roll >= 1 && roll <= n) frame.set(i, j, roll);
            }
        seq.frames.push_back(std::move(frame));
    }
    return seq;
}

// Sequence where object 1 is a 2x2 block present on the listed frames and
// the prediction follows `pred_present` with a one-pixel offset.
VideoSequence presence_sequence(int frames, const std::vector<int>& present, int x = 2) {
    VideoSequence seq;
    for (int t = 0; t < frames; ++t) {
        LabeledFrame frame(8, 6);
        if (std::find(present.begin(), present.end(), t) != present.end())
            for (int j = 2; j < 4; ++j)
                for (int i = x; i < x + 2; ++i) frame.set(i, j, 1);
        seq.frames.push_back(std::move(frame));
    }
    return seq;
}

}  // namespace

TEST(Region, HandCases) {
    BinaryMask a(4, 4), b(4, 4);
    a.set(0, 0, true);
    a.set(1, 0, true);
    a.set(0, 1, true);
    a.set(1, 1, true);
    EXPECT_DOUBLE_EQ(region_similarity(a, a), 1.0);
    b.set(1, 1, true);
    b.set(2, 1, true);
    EXPECT_DOUBLE_EQ(region_similarity(a, b), 1.0 / 5.0);
    EXPECT_DOUBLE_EQ(region_similarity(a, BinaryMask(4, 4)), 0.0);
    EXPECT_DOUBLE_EQ(region_similarity(BinaryMask(4, 4), b), 0.0);
    EXPECT_DOUBLE_EQ(region_similarity(BinaryMask(4, 4), BinaryMask(4, 4)), 1.0);
    EXPECT_THROW(region_similarity(a, BinaryMask(3, 4)), std::invalid_argument);
}

TEST(Region, MatchesCountingOracle) {
    SplitMix64 rng(11);
    for (int round = 0; round < 300; ++round) {
        const int w = rng.next_int(1, 24), h = rng.next_int(1, 24);
        const BinaryMask gt = random_mask(rng, w, h, 0.3);
        const BinaryMask pred = random_mask(rng, w, h, 0.3);
        EXPECT_EQ(region_similarity(gt, pred), oracle_region(gt, pred));
    }
}

TEST(Boundary, TwoPixelDistance) {
    BinaryMask gt(7, 5), pred(7, 5);
    gt.set(2, 2, true);
    pred.set(4, 2, true);
    EXPECT_DOUBLE_EQ(boundary_accuracy(gt, pred, 2.0), 1.0);
    EXPECT_DOUBLE_EQ(boundary_accuracy(gt, pred, 1.9999), 0.0);  // P+R == 0 convention
    EXPECT_DOUBLE_EQ(boundary_accuracy(gt, gt, 0.0), 1.0);
    EXPECT_DOUBLE_EQ(boundary_accuracy(BinaryMask(7, 5), BinaryMask(7, 5), 1.0), 1.0);
    EXPECT_DOUBLE_EQ(boundary_accuracy(gt, BinaryMask(7, 5), 1.0), 0.0);
    EXPECT_THROW(boundary_accuracy(gt, pred, -1.0), std::invalid_argument);
}

TEST(Boundary, AsymmetricPrecisionRecall) {
    // gt: 1x1; pred: gt pixel plus a far outlier. Precision 0.5, recall 1.
    BinaryMask gt(12, 3), pred(12, 3);
    gt.set(1, 1, true);
    pred.set(1, 1, true);
    pred.set(10, 1, true);
    EXPECT_DOUBLE_EQ(boundary_accuracy(gt, pred, 0.0), 2.0 * 0.5 * 1.0 / 1.5);
}

TEST(Boundary, MatchesPairwiseOracle) {
    SplitMix64 rng(22);
    for (int round = 0; round < 300; ++round) {
        const int w = rng.next_int(1, 24), h = rng.next_int(1, 24);
        const BinaryMask gt = random_mask(rng, w, h, 0.25);
        const BinaryMask pred = random_mask(rng, w, h, 0.25);
        const double tol = rng.next_double() * 4.0;
        EXPECT_NEAR(boundary_accuracy(gt, pred, tol), oracle_boundary_f(gt, pred, tol), 1e-9)
            << "round " << round << " tol " << tol;
    }
}

TEST(Tolerance, DefaultFromDiagonal) {
    EXPECT_EQ(default_tolerance(854, 480), 8);
    EXPECT_EQ(default_tolerance(480, 854), 8);
    EXPECT_EQ(default_tolerance(1, 1), 1);  // clamped up
    EXPECT_EQ(default_tolerance(1920, 1080), 18);
    EXPECT_THROW(default_tolerance(0, 5), std::invalid_argument);
}

TEST(Tolerance, AdaptiveUsesObjectScale) {
    // 20x20 block: area 400, adaptive tolerance round(0.1*20) = 2.
    BinaryMask gt(40, 40), pred(40, 40);
    for (int j = 10; j < 30; ++j)
        for (int i = 10; i < 30; ++i) gt.set(i, j, true);
    for (int j = 10; j < 30; ++j)
        for (int i = 12; i < 32; ++i) pred.set(i, j, true);  // shifted by 2
    EXPECT_DOUBLE_EQ(adaptive_boundary_accuracy(gt, pred),
                     boundary_accuracy(gt, pred, 2.0));
    EXPECT_NE(boundary_accuracy(gt, pred, 1.0), boundary_accuracy(gt, pred, 2.0));
    EXPECT_DOUBLE_EQ(adaptive_boundary_accuracy(BinaryMask(5, 5), BinaryMask(5, 5)), 1.0);
    EXPECT_DOUBLE_EQ(adaptive_boundary_accuracy(gt, BinaryMask(40, 40)), 0.0);
}

TEST(Tolerance, AdaptivePropertyAgainstOracle) {
    SplitMix64 rng(33);
    for (int round = 0; round < 100; ++round) {
        const int w = rng.next_int(2, 20), h = rng.next_int(2, 20);
        const BinaryMask gt = random_mask(rng, w, h, 0.3);
        const BinaryMask pred = random_mask(rng, w, h, 0.3);
        const double k = 0.05 + rng.next_double() * 0.3;
        double expected;
        if (gt.empty_foreground() && pred.empty_foreground())
            expected = 1.0;
        else if (gt.empty_foreground() || pred.empty_foreground())
            expected = 0.0;
        else
            expected = oracle_boundary_f(gt, pred, oracle_adaptive_tol(gt.foreground_area(), k));
        EXPECT_NEAR(adaptive_boundary_accuracy(gt, pred, k), expected, 1e-9);
    }
}

TEST(SequenceScores, StickyReappearance) {
    // Present on frames 0,3,5; absent 1,2,4. Prediction tracks it perfectly.
    const VideoSequence gt = presence_sequence(6, {0, 3, 5});
    const ObjectReport rep = sequence_scores(gt, gt, 1);
    EXPECT_EQ(rep.evaluated_frames, 5);
    EXPECT_EQ(rep.disappear_frames, 3);  // frames 1, 2, 4
    EXPECT_EQ(rep.reappear_frames, 2);   // frames 3 and 5 (absence seen earlier)
    EXPECT_DOUBLE_EQ(rep.j, 1.0);
    ASSERT_TRUE(rep.j_disappear.has_value());
    ASSERT_TRUE(rep.j_reappear.has_value());
    EXPECT_DOUBLE_EQ(*rep.j_disappear, 1.0);
    EXPECT_DOUBLE_EQ(*rep.jf_adaptive_reappear, 1.0);
    EXPECT_TRUE(rep.warnings.empty());
}

TEST(SequenceScores, AlwaysPresentHasNoSubsets) {
    const VideoSequence gt = presence_sequence(4, {0, 1, 2, 3});
    const ObjectReport rep = sequence_scores(gt, gt, 1);
    EXPECT_EQ(rep.disappear_frames, 0);
    EXPECT_EQ(rep.reappear_frames, 0);
    EXPECT_FALSE(rep.jf_adaptive_disappear.has_value());
    EXPECT_FALSE(rep.jf_adaptive_reappear.has_value());
}

TEST(SequenceScores, MissedReappearanceScoresZero) {
    // Object returns on frame 3 but the prediction never picks it back up.
    const VideoSequence gt = presence_sequence(4, {0, 3});
    const VideoSequence pred = presence_sequence(4, {0});
    const ObjectReport rep = sequence_scores(gt, pred, 1);
    EXPECT_EQ(rep.disappear_frames, 2);
    EXPECT_EQ(rep.reappear_frames, 1);
    EXPECT_DOUBLE_EQ(*rep.j_disappear, 1.0);  // absence correctly predicted
    EXPECT_DOUBLE_EQ(*rep.j_reappear, 0.0);
    EXPECT_DOUBLE_EQ(rep.j, 2.0 / 3.0);
}

TEST(SequenceScores, ExcludeRuleDropsAgreedAbsence) {
    const VideoSequence gt = presence_sequence(6, {0, 3, 5});
    MetricConfig config;
    config.empty_empty = EmptyEmptyRule::kExclude;
    const ObjectReport rep = sequence_scores(gt, gt, 1, config);
    EXPECT_EQ(rep.evaluated_frames, 2);  // only frames 3 and 5 survive
    EXPECT_EQ(rep.disappear_frames, 0);
    EXPECT_EQ(rep.reappear_frames, 2);  // absence still arms reappearance
    EXPECT_EQ(rep.frames.size(), 2u);
    EXPECT_DOUBLE_EQ(rep.j, 1.0);

    // A false positive during absence is never excluded.
    const VideoSequence pred = presence_sequence(6, {0, 2, 3, 5});
    const ObjectReport rep2 = sequence_scores(gt, pred, 1, config);
    EXPECT_EQ(rep2.evaluated_frames, 3);
    EXPECT_EQ(rep2.disappear_frames, 1);
    EXPECT_DOUBLE_EQ(*rep2.j_disappear, 0.0);
}

TEST(SequenceScores, FirstFrameAbsenceWarns) {
    const VideoSequence gt = presence_sequence(3, {1, 2});
    const ObjectReport rep = sequence_scores(gt, gt, 1);
    ASSERT_EQ(rep.warnings.size(), 1u);
    EXPECT_NE(rep.warnings[0].find("absent from the first frame"), std::string::npos);
}

TEST(SequenceScores, NoScoredFramesWarns) {
    const VideoSequence gt = presence_sequence(3, {0});
    MetricConfig config;
    config.empty_empty = EmptyEmptyRule::kExclude;
    const ObjectReport rep = sequence_scores(gt, gt, 1, config);
    EXPECT_EQ(rep.evaluated_frames, 0);
    ASSERT_FALSE(rep.warnings.empty());
    EXPECT_NE(rep.warnings.back().find("no scored frames"), std::string::npos);
}

TEST(SequenceScores, InputValidation) {
    const VideoSequence gt = presence_sequence(3, {0, 1});
    VideoSequence short_pred = gt;
    short_pred.frames.pop_back();
    EXPECT_THROW(sequence_scores(gt, short_pred, 1), std::invalid_argument);

    VideoSequence single;
    single.frames.emplace_back(8, 6);
    EXPECT_THROW(sequence_scores(single, single, 1), std::invalid_argument);
    EXPECT_THROW(sequence_scores(gt, gt, 0), std::invalid_argument);

    VideoSequence other = presence_sequence(3, {0, 1}, 3);
    VideoSequence wrong_dims;
    for (int t = 0; t < 3; ++t) wrong_dims.frames.emplace_back(9, 6);
    EXPECT_THROW(sequence_scores(gt, wrong_dims, 1), std::invalid_argument);
    EXPECT_NO_THROW(sequence_scores(gt, other, 1));
}

TEST(SequenceScores, MatchesPerFrameOracle) {
    SplitMix64 rng(44);
    for (int round = 0; round < 12; ++round) {
        const int w = rng.next_int(4, 14), h = rng.next_int(4, 14);
        const int frames = rng.next_int(2, 7);
        const VideoSequence gt = random_sequence(rng, w, h, frames, 3);
        const VideoSequence pred = random_sequence(rng, w, h, frames, 3);
        const double tol_fixed = default_tolerance(w, h);
        for (int id : gt.object_ids()) {
            const ObjectReport rep = sequence_scores(gt, pred, id);
            double j_sum = 0, f_sum = 0, fa_sum = 0;
            double jd_sum = 0, jfad_sum = 0, jr_sum = 0, jfar_sum = 0;
            int n_d = 0, n_r = 0;
            bool seen_absent = false;
            for (int t = 1; t < frames; ++t) {
                const BinaryMask gm = extract_object(gt.frames[t], id);
                const BinaryMask pm = extract_object(pred.frames[t], id);
                const double j = oracle_region(gm, pm);
                double f, fa;
                if (gm.empty_foreground() && pm.empty_foreground()) {
                    f = fa = 1.0;
                } else if (gm.empty_foreground() || pm.empty_foreground()) {
                    f = fa = 0.0;
                } else {
                    f = oracle_boundary_f(gm, pm, tol_fixed);
                    fa = oracle_boundary_f(gm, pm,
                                           oracle_adaptive_tol(gm.foreground_area(), 0.1));
                }
                j_sum += j;
                f_sum += f;
                fa_sum += fa;
                if (gm.empty_foreground()) {
                    ++n_d;
                    jd_sum += j;
                    jfad_sum += (j + fa) / 2.0;
                } else if (seen_absent) {
                    ++n_r;
                    jr_sum += j;
                    jfar_sum += (j + fa) / 2.0;
                }
                if (gm.empty_foreground()) seen_absent = true;
            }
            const int n = frames - 1;
            EXPECT_EQ(rep.evaluated_frames, n);
            EXPECT_NEAR(rep.j, j_sum / n, 1e-9);
            EXPECT_NEAR(rep.f, f_sum / n, 1e-9);
            EXPECT_NEAR(rep.f_adaptive, fa_sum / n, 1e-9);
            EXPECT_EQ(rep.disappear_frames, n_d);
            EXPECT_EQ(rep.reappear_frames, n_r);
            if (n_d > 0) {
                EXPECT_NEAR(*rep.j_disappear, jd_sum / n_d, 1e-9);
                EXPECT_NEAR(*rep.jf_adaptive_disappear, jfad_sum / n_d, 1e-9);
            }
            if (n_r > 0) {
                EXPECT_NEAR(*rep.j_reappear, jr_sum / n_r, 1e-9);
                EXPECT_NEAR(*rep.jf_adaptive_reappear, jfar_sum / n_r, 1e-9);
            }
        }
    }
}

TEST(EvaluateSequence, MatchesPerObjectCalls) {
    SplitMix64 rng(55);
    for (int round = 0; round < 10; ++round) {
        const int w = rng.next_int(4, 16), h = rng.next_int(4, 16);
        const int frames = rng.next_int(2, 6);
        const VideoSequence gt = random_sequence(rng, w, h, frames, 4);
        const VideoSequence pred = random_sequence(rng, w, h, frames, 4);
        const auto fused = evaluate_sequence(gt, pred);
        const auto ids = gt.object_ids();
        ASSERT_EQ(fused.size(), ids.size());
        for (std::size_t s = 0; s < ids.size(); ++s) {
            const ObjectReport solo = sequence_scores(gt, pred, ids[s]);
            EXPECT_EQ(fused[s].object_id, solo.object_id);
            EXPECT_EQ(fused[s].evaluated_frames, solo.evaluated_frames);
            EXPECT_EQ(fused[s].j, solo.j);
            EXPECT_EQ(fused[s].f, solo.f);
            EXPECT_EQ(fused[s].f_adaptive, solo.f_adaptive);
            EXPECT_EQ(fused[s].disappear_frames, solo.disappear_frames);
            EXPECT_EQ(fused[s].reappear_frames, solo.reappear_frames);
            EXPECT_EQ(fused[s].jf_adaptive_disappear, solo.jf_adaptive_disappear);
            EXPECT_EQ(fused[s].jf_adaptive_reappear, solo.jf_adaptive_reappear);
            EXPECT_EQ(fused[s].warnings, solo.warnings);
        }
    }
}

TEST(Aggregate, UnweightedMeansWithPartialSubsets) {
    ObjectReport a;
    a.j = 0.8;
    a.f = 0.9;
    a.f_adaptive = 0.85;
    a.jf_adaptive_disappear = 0.7;
    ObjectReport b;
    b.j = 0.6;
    b.f = 0.5;
    b.f_adaptive = 0.55;
    b.jf_adaptive_reappear = 0.4;
    const AggregateReport agg = dataset_aggregate({a, b});
    EXPECT_EQ(agg.row_count, 2);
    EXPECT_NEAR(agg.j, 0.7, 1e-12);
    EXPECT_NEAR(agg.f, 0.7, 1e-12);
    EXPECT_NEAR(agg.jf(), 0.7, 1e-12);
    ASSERT_TRUE(agg.jf_adaptive_disappear.has_value());
    EXPECT_DOUBLE_EQ(*agg.jf_adaptive_disappear, 0.7);  // only row a defines it
    ASSERT_TRUE(agg.jf_adaptive_reappear.has_value());
    EXPECT_DOUBLE_EQ(*agg.jf_adaptive_reappear, 0.4);
    EXPECT_THROW(dataset_aggregate({}), std::invalid_argument);
}
