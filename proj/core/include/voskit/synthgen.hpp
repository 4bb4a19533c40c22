#ifndef VOSKIT_SYNTHGEN_HPP
#define VOSKIT_SYNTHGEN_HPP

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "voskit/grid.hpp"
#include "voskit/image.hpp"
#include "voskit/kinematic.hpp"
#include "voskit/mask.hpp"

namespace voskit {

// Scripted synthetic scenes: axis-aligned shapes on a flat background, with
// occluder boxes, visibility schedules, and hard background cuts. Everything
// downstream (masks, colors, simulated tracker logits) is a pure function of
// the script plus a seed.

enum class ShapeKind { kRectangle, kEllipse };

struct TrackStep {
    double cx = 0.0;  // center, pixel units (pixel centers at i + 0.5)
    double cy = 0.0;
    double half_w = 0.0;
    double half_h = 0.0;
    bool visible = true;
};

struct ObjectTrack {
    int id = 0;
    ShapeKind shape = ShapeKind::kRectangle;
    std::array<std::uint8_t, 3> color{};
    std::vector<TrackStep> steps;  // one per frame
};

struct OccluderBox {
    int first_frame = 0;
    int last_frame = 0;
    int x0 = 0, y0 = 0, x1 = 0, y1 = 0;  // inclusive pixel box
    std::array<std::uint8_t, 3> color{};
};

struct SceneCut {
    int frame = 0;  // background switches starting at this frame
    std::array<std::uint8_t, 3> background{};
};

struct SceneScript {
    int width = 0;
    int height = 0;
    int frame_count = 0;
    std::array<std::uint8_t, 3> background{};
    std::vector<ObjectTrack> objects;
    std::vector<OccluderBox> occluders;
    std::vector<SceneCut> cuts;
    std::uint64_t seed = 0;
};

struct RenderedScene {
    VideoSequence gt;
    std::vector<ColorFrame> rgb;
};

// Later objects paint over earlier ones; occluders clear labels and paint
// their own color on top. Shapes falling outside the canvas are clipped.
RenderedScene render_script(const SceneScript& script);

// SplitMix64: tiny, well-known, and easy to reimplement bit-for-bit in any
// language, so committed outputs stay reproducible.
struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}
    std::uint64_t next();
    double next_double();           // uniform in [0, 1)
    int next_int(int lo, int hi);   // uniform in [lo, hi], inclusive
};

struct IdentitySwap {
    int frame = 0;  // ids exchanged from this frame onward
    int id_a = 0;
    int id_b = 0;
};

struct PhantomBlob {
    int first_frame = 0;
    int last_frame = 0;
    int object_id = 0;
    double cx = 0.0;
    double cy = 0.0;
    double radius = 0.0;
    double logit = 0.0;  // injected as max(existing, logit) inside the disc
};

struct TrackerNoise {
    double logit_scale = 8.0;  // |base logit| >= 1 everywhere, so amp < 1 never flips a pixel
    double noise_amp = 0.0;
    int jitter_px = 0;
    std::vector<int> dropout_frames;          // whole frame collapses to -logit_scale
    std::vector<IdentitySwap> swaps;
    std::vector<PhantomBlob> phantoms;
};

struct TrackerOutput {
    // per frame: object id -> logit grid / feature vector
    std::vector<std::map<int, LogitGrid>> frames;
    std::vector<std::map<int, std::vector<double>>> features;
};

// Logits are the clamped signed Euclidean distance to the mask boundary
// (positive inside), so thresholding at 0 reproduces the mask exactly and
// additive log-priors shift a meaningful margin.
TrackerOutput simulate_tracker(const VideoSequence& gt, const std::vector<ColorFrame>& rgb,
                               const TrackerNoise& noise, std::uint64_t seed);

// 12-dim appearance/position descriptor of a predicted region: 8 coarse RGB
// bins (one bit per channel) plus 4 canvas-quadrant occupancy bins,
// L1-normalized. Empty region -> all zeros.
std::vector<double> region_feature(const ColorFrame& frame, const BinaryMask& mask);

struct ScenarioBundle {
    std::string name;
    SceneScript script;
    VideoSequence gt;
    std::vector<ColorFrame> rgb;
    std::vector<TrackerNoise> tracker_noises;
    std::vector<TrackerOutput> trackers;
    MpmConfig mpm;
};

SceneScript build_linear_occlusion();
SceneScript build_twin_distractor();
SceneScript build_scene_cut();
SceneScript build_reappear_far();

std::vector<std::string> scenario_names();
ScenarioBundle make_scenario(const std::string& name, std::uint64_t seed);

std::string script_to_json(const SceneScript& script);
SceneScript script_from_json(const std::string& text);
void save_script(const SceneScript& script, const std::string& path);
SceneScript load_script(const std::string& path);

}  // namespace voskit

#endif  // VOSKIT_SYNTHGEN_HPP
