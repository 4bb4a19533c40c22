#include "voskit/propagate.hpp"

#include <algorithm>
#include <stdexcept>

namespace voskit {

MpmRunResult run_with_prior(const TrackerOutput& tracker, const VideoSequence& gt,
                            const MpmConfig& config) {
    config.validate();
    gt.validate();
    if (gt.frames.empty()) throw std::invalid_argument("run_with_prior: empty sequence");
    if (tracker.frames.size() != gt.frames.size())
        throw std::invalid_argument("run_with_prior: tracker covers " +
                                    std::to_string(tracker.frames.size()) + " frames, gt has " +
                                    std::to_string(gt.frames.size()));

    const int width = gt.frames[0].width;
    const int height = gt.frames[0].height;
    const std::vector<int> ids = gt.object_ids();

    MpmRunResult result;
    result.prediction.frames.push_back(gt.frames[0]);
    result.prior_peaks.emplace_back();

    std::map<int, KinematicState> states;
    for (int id : ids) {
        const BinaryMask first = extract_object(gt.frames[0], id);
        if (!first.empty_foreground()) states.emplace(id, init_state(first, 0));
    }

    for (std::size_t t = 1; t < gt.frames.size(); ++t) {
        result.prior_peaks.emplace_back();
        LabeledFrame composed(width, height);
        std::vector<double> best(composed.labels.size(), 0.0);

        for (int id : ids) {
            const auto raw_it = tracker.frames[t].find(id);
            if (raw_it == tracker.frames[t].end())
                throw std::invalid_argument("run_with_prior: tracker frame " + std::to_string(t) +
                                            " misses object " + std::to_string(id));
            const LogitGrid* logits = &raw_it->second;
            LogitGrid fused;

            const auto state_it = states.find(id);
            if (state_it != states.end()) {
                KinematicState forecast = state_it->second;
                forecast.cx = std::clamp(forecast.cx + forecast.vx, 0.0, 1.0);
                forecast.cy = std::clamp(forecast.cy + forecast.vy, 0.0, 1.0);
                const LogitGrid prior = gaussian_map(forecast, width, height, config);
                result.prior_peaks[t][id] = grid_argmax(prior);
                const double peak_logit =
                    *std::max_element(logits->values.begin(), logits->values.end());
                if (peak_logit < config.confidence_threshold) {
                    fused = fuse_logits(*logits, prior, config);
                    logits = &fused;
                }
            }

            // Strict > keeps the lower ID on exact ties (ids iterate ascending).
            for (std::size_t p = 0; p < best.size(); ++p)
                if (logits->values[p] > 0.0 && logits->values[p] > best[p]) {
                    best[p] = logits->values[p];
                    composed.labels[p] = static_cast<std::uint16_t>(id);
                }
        }

        for (int id : ids) {
            const BinaryMask observed = extract_object(composed, id);
            const auto state_it = states.find(id);
            if (state_it != states.end()) {
                state_it->second = update_state(state_it->second,
                                                observed.empty_foreground() ? nullptr : &observed,
                                                config, static_cast<int>(t));
            } else if (!observed.empty_foreground()) {
                states.emplace(id, init_state(observed, static_cast<int>(t)));
            }
        }

        result.prediction.frames.push_back(std::move(composed));
    }
    return result;
}

}  // namespace voskit
