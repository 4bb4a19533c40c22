#ifndef VOSKIT_FUSION_HPP
#define VOSKIT_FUSION_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "voskit/grid.hpp"
#include "voskit/mask.hpp"

namespace voskit {

/// One model's predictions: per frame, a probability (or logit) grid per
/// object ID. An object missing from a frame counts as all-zero.
struct SourcePrediction {
    std::string source_id;
    double weight = 1.0;
    std::vector<std::map<int, LogitGrid>> frames;
};

struct FusionConfig {
    /// Foreground threshold on the weighted probability sum; unset means
    /// 0.5 * (sum of source weights).
    std::optional<double> pixel_threshold;
};

/// Effective threshold for a source set under a config.
double pixel_threshold_for(const std::vector<SourcePrediction>& sources,
                           const FusionConfig& config);

/// Pixels whose weighted probability sum across sources strictly exceeds the
/// threshold.
BinaryMask confidence_foreground(const std::vector<SourcePrediction>& sources, int object,
                                 int frame, const FusionConfig& config = {});

/// Weighted plurality over (weight, object ID) claims; ties resolve to the
/// lowest object ID. Throws on an empty claim list.
int id_vote(const std::vector<std::pair<double, int>>& claims);

/// Full multi-object resolution of one frame: each pixel goes to the object
/// passing the confidence threshold there; when several pass, each source
/// votes for its highest-probability passing object and the weighted
/// plurality wins. The result is a well-formed labeling (one ID per pixel).
LabeledFrame resolve_frame(const std::vector<SourcePrediction>& sources, int frame,
                           const FusionConfig& config = {});

/// Weighted mask vote: pixel set iff the weighted average strictly exceeds
/// 0.5 (an exact 0.5 stays background). Throws when the weights sum to zero.
BinaryMask selective_average(const std::vector<std::pair<BinaryMask, double>>& masks);

/// Fixed-weight logit ensemble: per-object channels are the weighted sum of
/// the sources' logits, and the background channel is the pointwise negated
/// maximum over the object channels.
struct FusedLogits {
    std::map<int, LogitGrid> object_channels;
    LogitGrid background;
};

/// `source_weights` names the exact expected source set; a missing or extra
/// source is an error.
FusedLogits shallow_fuse(const std::vector<SourcePrediction>& sources, int frame,
                         const std::vector<std::pair<std::string, double>>& source_weights);

/// Test-time augmentation merge: (normal + mirror(flipped)) / 2, where
/// `flipped` was predicted on the horizontally mirrored frame.
LogitGrid flip_average(const LogitGrid& pred_normal, const LogitGrid& pred_flipped);

}  // namespace voskit

#endif  // VOSKIT_FUSION_HPP
