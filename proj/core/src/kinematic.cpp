#include "voskit/kinematic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace voskit {

void MpmConfig::validate() const {
    if (!(alpha > 0 && alpha < 1))
        throw std::invalid_argument("MpmConfig: alpha must lie in (0,1)");
    if (!(beta >= 0)) throw std::invalid_argument("MpmConfig: beta must be >= 0");
    if (!(epsilon > 0)) throw std::invalid_argument("MpmConfig: epsilon must be > 0");
    if (!(sigma_scale > 0)) throw std::invalid_argument("MpmConfig: sigma_scale must be > 0");
}

namespace {

struct Observation {
    double cx, cy, w, h;
};

Observation observe(const BinaryMask& mask) {
    long long sum_x = 0, sum_y = 0, count = 0;
    int min_x = mask.width, max_x = -1, min_y = mask.height, max_y = -1;
    for (int y = 0; y < mask.height; ++y) {
        for (int x = 0; x < mask.width; ++x) {
            if (!mask.at(x, y)) continue;
            sum_x += x;
            sum_y += y;
            ++count;
            min_x = std::min(min_x, x);
            max_x = std::max(max_x, x);
            min_y = std::min(min_y, y);
            max_y = std::max(max_y, y);
        }
    }
    if (count == 0) throw std::invalid_argument("cannot observe an empty mask");
    Observation o;
    o.cx = (static_cast<double>(sum_x) / count + 0.5) / mask.width;
    o.cy = (static_cast<double>(sum_y) / count + 0.5) / mask.height;
    o.w = static_cast<double>(max_x - min_x + 1) / mask.width;
    o.h = static_cast<double>(max_y - min_y + 1) / mask.height;
    return o;
}

}  // namespace

KinematicState init_state(const BinaryMask& mask, int frame) {
    if (mask.empty_foreground())
        throw std::invalid_argument("cannot initialize from absent object");
    const Observation o = observe(mask);
    KinematicState s;
    s.cx = o.cx;
    s.cy = o.cy;
    s.w = o.w;
    s.h = o.h;
    s.vx = s.vy = 0;
    s.last_update_frame = frame;
    return s;
}

KinematicState update_state(const KinematicState& state, const BinaryMask* observed,
                            const MpmConfig& config, int frame) {
    config.validate();
    if (frame <= state.last_update_frame)
        throw std::invalid_argument("update_state: frame " + std::to_string(frame) +
                                    " does not advance past " +
                                    std::to_string(state.last_update_frame));
    KinematicState next = state;
    next.last_update_frame = frame;
    if (observed == nullptr || observed->empty_foreground()) {
        // Coast on the last velocity; size and velocity stay frozen.
        next.cx = std::clamp(state.cx + state.vx, 0.0, 1.0);
        next.cy = std::clamp(state.cy + state.vy, 0.0, 1.0);
        return next;
    }
    const Observation o = observe(*observed);
    const double a = config.alpha;
    next.cx = a * state.cx + (1 - a) * o.cx;
    next.cy = a * state.cy + (1 - a) * o.cy;
    next.w = a * state.w + (1 - a) * o.w;
    next.h = a * state.h + (1 - a) * o.h;
    next.vx = next.cx - state.cx;
    next.vy = next.cy - state.cy;
    return next;
}

LogitGrid gaussian_map(const KinematicState& state, int width, int height,
                       const MpmConfig& config) {
    config.validate();
    const double sx = config.sigma_scale * state.w;
    const double sy = config.sigma_scale * state.h;
    if (sx <= 0 || sy <= 0)
        throw std::invalid_argument("gaussian_map: degenerate size yields zero sigma");
    LogitGrid grid(width, height);
    const double inv2sx2 = 1.0 / (2.0 * sx * sx);
    const double inv2sy2 = 1.0 / (2.0 * sy * sy);
    // Separable: exponent splits into per-column and per-row terms.
    std::vector<double> col_term(width);
    for (int i = 0; i < width; ++i) {
        const double dx = static_cast<double>(i) / width - state.cx;
        col_term[i] = dx * dx * inv2sx2;
    }
    for (int j = 0; j < height; ++j) {
        const double dy = static_cast<double>(j) / height - state.cy;
        const double row_term = dy * dy * inv2sy2;
        for (int i = 0; i < width; ++i)
            grid.values[static_cast<std::size_t>(j) * width + i] =
                std::exp(-(col_term[i] + row_term));
    }
    return grid;
}

LogitGrid fuse_logits(const LogitGrid& raw, const LogitGrid& prior, const MpmConfig& config) {
    config.validate();
    if (raw.width != prior.width || raw.height != prior.height)
        throw std::invalid_argument("fuse_logits: grid shapes differ: " +
                                    std::to_string(raw.width) + "x" + std::to_string(raw.height) +
                                    " vs " + std::to_string(prior.width) + "x" +
                                    std::to_string(prior.height));
    LogitGrid out = raw;
    if (config.beta == 0) return out;
    for (std::size_t i = 0; i < out.values.size(); ++i)
        out.values[i] += config.beta * std::log(prior.values[i] + config.epsilon);
    return out;
}

}  // namespace voskit
