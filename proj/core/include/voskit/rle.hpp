#ifndef VOSKIT_RLE_HPP
#define VOSKIT_RLE_HPP

#include <filesystem>
#include <string>
#include <vector>

#include "voskit/mask.hpp"

namespace voskit {

/// Run lengths for one object in one frame. Runs alternate background /
/// foreground, always starting with background (a leading 0 means the frame
/// begins with foreground). Runs sum to width*height of the frame.
struct RleFragment {
    int frame = 0;
    int object_id = 0;
    std::vector<long long> runs;
};

/// Whole-sequence run-length manifest: dimensions, object roster, and one
/// fragment per (frame, object) pair in frame-major order.
struct RleManifest {
    int width = 0;
    int height = 0;
    int frame_count = 0;
    std::vector<int> object_ids;
    std::vector<RleFragment> fragments;
};

/// Runs for a single binary mask (background-first convention).
std::vector<long long> encode_rle(const BinaryMask& mask);

/// Rebuilds a mask from runs. Throws if the runs are negative or do not sum
/// to width*height.
BinaryMask decode_rle(const std::vector<long long>& runs, int width, int height);

/// Fragments for every object ID in `ids` for one frame (absent IDs encode as
/// the single all-background run).
std::vector<RleFragment> encode_frame(const LabeledFrame& frame, int frame_idx,
                                      const std::vector<int>& ids);

/// Composes per-object fragments back into a LabeledFrame. Throws (naming the
/// frame and object) on malformed runs or overlapping foreground.
LabeledFrame decode_frame(const std::vector<RleFragment>& fragments, int width, int height);

RleManifest encode_sequence(const VideoSequence& seq);
VideoSequence decode_sequence(const RleManifest& manifest);

/// Text form: header `W H T ids...`, then one line per (frame, object):
/// `frame_idx object_id run run ...`.
std::string write_rle_text(const RleManifest& manifest);
RleManifest parse_rle_text(const std::string& text);

void save_rle(const VideoSequence& seq, const std::filesystem::path& path);
VideoSequence load_rle(const std::filesystem::path& path);

}  // namespace voskit

#endif  // VOSKIT_RLE_HPP
