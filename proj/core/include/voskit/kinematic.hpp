#ifndef VOSKIT_KINEMATIC_HPP
#define VOSKIT_KINEMATIC_HPP

#include <limits>

#include "voskit/grid.hpp"
#include "voskit/mask.hpp"

namespace voskit {

/// Per-object kinematic track in resolution-normalized units: center and
/// size live in [0,1] (divided by width/height), velocity is the per-frame
/// center displacement in the same units.
struct KinematicState {
    double cx = 0, cy = 0;  // center
    double w = 0, h = 0;    // bounding-box extent
    double vx = 0, vy = 0;  // velocity
    int last_update_frame = 0;
};

struct MpmConfig {
    /// Smoothing of center/size updates: new = alpha*old + (1-alpha)*observed.
    double alpha = 0.7;
    /// Weight of the spatial prior when fused into logits.
    double beta = 1.0;
    /// Stabilizer inside the prior's log.
    double epsilon = 1e-6;
    /// Gaussian sigma as a fraction of the tracked size.
    double sigma_scale = 0.5;
    /// Apply the prior only when the frame's peak raw logit falls below this;
    /// +infinity means the prior is always applied.
    double confidence_threshold = std::numeric_limits<double>::infinity();

    void validate() const;
};

/// Track state from an object's first observed mask: centroid and bounding
/// box, both normalized, with zero initial velocity. Uses the pixel-center
/// convention ((index + 0.5) / dimension) so a full-frame mask centers at
/// exactly 0.5. Throws on an empty mask.
KinematicState init_state(const BinaryMask& mask, int frame = 0);

/// Advances the track by one observation. A present (non-empty) mask blends
/// center and size with the EMA factor and sets velocity to the raw center
/// displacement (unsmoothed, so sudden motion registers immediately). An
/// absent observation extrapolates the center by the last velocity, clamped
/// to [0,1], and freezes size and velocity. `observed` may be null.
KinematicState update_state(const KinematicState& state, const BinaryMask* observed,
                            const MpmConfig& config, int frame);

/// Spatial prior: G(i,j) = exp(-(i/W - cx)^2 / (2*sx^2) - (j/H - cy)^2 / (2*sy^2))
/// with sx = sigma_scale*w, sy = sigma_scale*h. Values in (0,1], maximal at
/// the pixel nearest the tracked center. Throws when a sigma degenerates to
/// zero.
LogitGrid gaussian_map(const KinematicState& state, int width, int height,
                       const MpmConfig& config);

/// Pointwise fusion of raw logits with the prior: raw + beta * log(G + epsilon).
LogitGrid fuse_logits(const LogitGrid& raw, const LogitGrid& prior, const MpmConfig& config);

}  // namespace voskit

#endif  // VOSKIT_KINEMATIC_HPP
