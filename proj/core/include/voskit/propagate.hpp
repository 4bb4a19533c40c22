#ifndef VOSKIT_PROPAGATE_HPP
#define VOSKIT_PROPAGATE_HPP

#include <map>
#include <vector>

#include "voskit/kinematic.hpp"
#include "voskit/mask.hpp"
#include "voskit/synthgen.hpp"

namespace voskit {

/// Propagation of simulated tracker logits through a whole video with the
/// kinematic prior in the loop. Frame 0 adopts the ground-truth labeling
/// (the given first-frame mask); every later frame fuses each object's raw
/// logits with a Gaussian prior centered on the constant-velocity forecast
/// of that object's track, thresholds at zero, and resolves overlaps to the
/// strongest object (ties to the lower ID). Tracks update from the composed
/// output, so the prior stays closed-loop.
struct MpmRunResult {
    VideoSequence prediction;
    /// Per frame, per object: argmax pixel of the prior used at that frame
    /// (frame 0 has no prior and keeps an empty map).
    std::vector<std::map<int, std::pair<int, int>>> prior_peaks;
};

MpmRunResult run_with_prior(const TrackerOutput& tracker, const VideoSequence& gt,
                            const MpmConfig& config);

}  // namespace voskit

#endif  // VOSKIT_PROPAGATE_HPP
