#ifndef VOSKIT_SAMPLING_HPP
#define VOSKIT_SAMPLING_HPP

#include <string>
#include <vector>

namespace voskit {

/// Consecutive clips of c = g*g + 1 frames; each clip's first frame is its
/// key frame and the remaining g*g frames are candidates for grid tiling.
struct ClipPlan {
    int grid_side = 0;  // g
    int clip_size = 0;  // c = g*g + 1
    struct Clip {
        int key_frame = 0;
        std::vector<int> frames;  // clip_size consecutive indices
    };
    std::vector<Clip> clips;
};

/// Splits [0, total_frames) into total_frames / (g*g+1) consecutive clips.
/// Throws when total_frames is not divisible by the clip size.
ClipPlan partition_clips(int total_frames, int grid_side);

struct TileRect {
    int x = 0, y = 0, w = 0, h = 0;
};

/// Placement of a clip's non-key frames onto a (g*W) x (g*H) canvas in
/// row-major order, with the scale factor (1/g per axis) recorded for the
/// final resize back to W x H.
struct TileLayout {
    int canvas_w = 0, canvas_h = 0;
    double scale_x = 0, scale_y = 0;
    struct Placement {
        int source_frame = 0;
        TileRect dest;
    };
    std::vector<Placement> tiles;
};

/// `clip_frames` must hold g*g + 1 indices for some integer g >= 1; frames
/// after the key frame map to grid cells left-to-right, top-to-bottom.
TileLayout kfc_tile_layout(const std::vector<int>& clip_frames, int frame_w, int frame_h);

/// A frame index dual-assigned to two adjacent clips; downstream mask
/// resolution averages the two results for that frame.
struct DualTag {
    int frame = 0;
    int first_clip = 0;
    int second_clip = 0;
};

/// Deterministic frame-selection schedule. `indices` holds the selected
/// original-frame indices sorted ascending (repeats allowed for videos
/// shorter than the target); `clips` groups them clip by clip for the
/// clip-based strategies (a single group otherwise).
struct SamplePlan {
    std::string strategy;
    int t_ori = 0;       // original video length
    int t_target = 0;    // frames selected (= clip_count * clip_size here)
    int clip_count = 0;  // N
    int clip_size = 0;   // c
    std::vector<int> indices;
    std::vector<std::vector<int>> clips;
    std::vector<int> frame_clip;  // ori-clip owning each original frame
    std::vector<DualTag> dual_tags;
};

/// Evenly divides the video into N ori-clips (clip i covers
/// [floor(i*T_ori/N), floor((i+1)*T_ori/N))) and picks c evenly spaced
/// frames per clip: start + floor(k*len/c). Short videos legally repeat
/// indices.
SamplePlan plan_uniform(int t_ori, int clip_count, int clip_size);

/// plan_uniform plus dual tags: when the video is shorter than N*c frames,
/// each interior clip boundary frame floor(i*T_ori/N) is assigned to clips
/// i-1 and i, and its two masks are averaged downstream.
SamplePlan plan_uniform_plus(int t_ori, int clip_count, int clip_size);

/// First t_target frames when the video is long enough, otherwise the
/// multiset {i mod T_ori : i < t_target} sorted ascending.
SamplePlan plan_wraparound(int t_ori, int t_target);

/// Wrap-around for videos shorter than the target, uniform otherwise.
SamplePlan plan_wraparound_plus(int t_ori, int t_target, int clip_count, int clip_size);

/// `head` consecutive frames from the start (most targets appear early),
/// the rest uniformly spaced over the remainder. Collisions move to the
/// nearest unused later index; when every index is taken, repeats stand.
SamplePlan plan_head_hybrid(int t_ori, int t_target, int head);

/// Relevance-ranked selection from an externally computed ranking (most
/// relevant first): the top t_target frames, sorted ascending. The ranking
/// itself must come from outside; this library does not score relevance.
SamplePlan plan_qframe(int t_ori, const std::vector<int>& relevance_ranking, int t_target);

/// Line format: header `strategy T_ori T N c`, then one line per clip with
/// its selected indices; a dual-assigned frame is written as `frame+clip`
/// naming its other clip.
std::string serialize_plan(const SamplePlan& plan);
SamplePlan parse_plan(const std::string& text);

}  // namespace voskit

#endif  // VOSKIT_SAMPLING_HPP
