#include "voskit/fusion.hpp"

#include <algorithm>
#include <limits>
#include <set>
#include <stdexcept>

namespace voskit {

namespace {

struct FrameShape {
    int width = 0;
    int height = 0;
};

// All grids of all sources for a frame must agree on dimensions.
FrameShape frame_shape(const std::vector<SourcePrediction>& sources, int frame) {
    FrameShape shape;
    for (const SourcePrediction& src : sources) {
        if (frame < 0 || frame >= static_cast<int>(src.frames.size()))
            throw std::invalid_argument("source " + src.source_id + " has no frame " +
                                        std::to_string(frame));
        for (const auto& [id, grid] : src.frames[frame]) {
            if (shape.width == 0) {
                shape.width = grid.width;
                shape.height = grid.height;
            } else if (grid.width != shape.width || grid.height != shape.height) {
                throw std::invalid_argument(
                    "source " + src.source_id + " object " + std::to_string(id) +
                    " grid is " + std::to_string(grid.width) + "x" + std::to_string(grid.height) +
                    ", expected " + std::to_string(shape.width) + "x" +
                    std::to_string(shape.height));
            }
        }
    }
    if (shape.width == 0)
        throw std::invalid_argument("no prediction grids present for frame " +
                                    std::to_string(frame));
    return shape;
}

std::vector<int> frame_objects(const std::vector<SourcePrediction>& sources, int frame) {
    std::set<int> ids;
    for (const SourcePrediction& src : sources)
        for (const auto& [id, grid] : src.frames[frame]) ids.insert(id);
    return {ids.begin(), ids.end()};
}

}  // namespace

double pixel_threshold_for(const std::vector<SourcePrediction>& sources,
                           const FusionConfig& config) {
    if (config.pixel_threshold) {
        if (*config.pixel_threshold < 0)
            throw std::invalid_argument("pixel threshold must be >= 0");
        return *config.pixel_threshold;
    }
    double total = 0;
    for (const SourcePrediction& src : sources) total += src.weight;
    return 0.5 * total;
}

BinaryMask confidence_foreground(const std::vector<SourcePrediction>& sources, int object,
                                 int frame, const FusionConfig& config) {
    if (sources.empty()) throw std::invalid_argument("confidence_foreground: no sources");
    const FrameShape shape = frame_shape(sources, frame);
    const double threshold = pixel_threshold_for(sources, config);
    std::vector<double> sum(static_cast<std::size_t>(shape.width) * shape.height, 0.0);
    for (const SourcePrediction& src : sources) {
        const auto it = src.frames[frame].find(object);
        if (it == src.frames[frame].end()) continue;  // absent object: all-zero
        const LogitGrid& grid = it->second;
        for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += src.weight * grid.values[i];
    }
    BinaryMask out(shape.width, shape.height);
    for (std::size_t i = 0; i < sum.size(); ++i) out.data[i] = sum[i] > threshold ? 1 : 0;
    return out;
}

int id_vote(const std::vector<std::pair<double, int>>& claims) {
    if (claims.empty()) throw std::invalid_argument("id_vote: no claims");
    std::map<int, double> tally;
    for (const auto& [weight, id] : claims) tally[id] += weight;
    int best_id = tally.begin()->first;
    double best = tally.begin()->second;
    for (const auto& [id, votes] : tally) {
        if (votes > best) {  // ties keep the lower ID (map iterates ascending)
            best = votes;
            best_id = id;
        }
    }
    return best_id;
}

LabeledFrame resolve_frame(const std::vector<SourcePrediction>& sources, int frame,
                           const FusionConfig& config) {
    if (sources.empty()) throw std::invalid_argument("resolve_frame: no sources");
    const FrameShape shape = frame_shape(sources, frame);
    const double threshold = pixel_threshold_for(sources, config);
    const std::vector<int> ids = frame_objects(sources, frame);
    const std::size_t n = static_cast<std::size_t>(shape.width) * shape.height;

    // Weighted probability sum per object.
    std::vector<std::vector<double>> sums(ids.size(), std::vector<double>(n, 0.0));
    std::vector<std::vector<const LogitGrid*>> grids(sources.size());
    for (std::size_t s = 0; s < sources.size(); ++s) {
        grids[s].assign(ids.size(), nullptr);
        for (std::size_t k = 0; k < ids.size(); ++k) {
            const auto it = sources[s].frames[frame].find(ids[k]);
            if (it == sources[s].frames[frame].end()) continue;
            grids[s][k] = &it->second;
            for (std::size_t i = 0; i < n; ++i)
                sums[k][i] += sources[s].weight * it->second.values[i];
        }
    }

    LabeledFrame out(shape.width, shape.height);
    std::vector<std::size_t> passing;
    std::vector<std::pair<double, int>> claims;
    for (std::size_t i = 0; i < n; ++i) {
        passing.clear();
        for (std::size_t k = 0; k < ids.size(); ++k)
            if (sums[k][i] > threshold) passing.push_back(k);
        if (passing.empty()) continue;
        if (passing.size() == 1) {
            out.labels[i] = static_cast<std::uint16_t>(ids[passing.front()]);
            continue;
        }
        // Contested pixel: each source backs its highest-probability passing
        // object; abstains when it scores them all zero.
        claims.clear();
        for (std::size_t s = 0; s < sources.size(); ++s) {
            double best = 0;
            int claim = -1;
            for (std::size_t k : passing) {
                const double v = grids[s][k] ? grids[s][k]->values[i] : 0.0;
                if (v > best) {
                    best = v;
                    claim = ids[k];
                }
            }
            if (claim >= 0) claims.emplace_back(sources[s].weight, claim);
        }
        if (claims.empty()) {
            out.labels[i] = static_cast<std::uint16_t>(ids[passing.front()]);
        } else {
            out.labels[i] = static_cast<std::uint16_t>(id_vote(claims));
        }
    }
    return out;
}

BinaryMask selective_average(const std::vector<std::pair<BinaryMask, double>>& masks) {
    if (masks.empty()) throw std::invalid_argument("selective_average: no masks");
    const BinaryMask& first = masks.front().first;
    double total_weight = 0;
    for (const auto& [mask, weight] : masks) {
        if (weight < 0) throw std::invalid_argument("selective_average: negative weight");
        if (mask.width != first.width || mask.height != first.height)
            throw std::invalid_argument("selective_average: mask dimensions differ");
        total_weight += weight;
    }
    if (total_weight == 0) throw std::invalid_argument("selective_average: weights sum to zero");
    BinaryMask out(first.width, first.height);
    for (std::size_t i = 0; i < out.data.size(); ++i) {
        double acc = 0;
        for (const auto& [mask, weight] : masks) acc += weight * (mask.data[i] ? 1.0 : 0.0);
        out.data[i] = acc / total_weight > 0.5 ? 1 : 0;  // strictly above one half
    }
    return out;
}

FusedLogits shallow_fuse(const std::vector<SourcePrediction>& sources, int frame,
                         const std::vector<std::pair<std::string, double>>& source_weights) {
    std::set<std::string> expected;
    for (const auto& [name, weight] : source_weights) expected.insert(name);
    std::set<std::string> got;
    for (const SourcePrediction& src : sources) got.insert(src.source_id);
    if (expected != got) {
        std::string msg = "shallow_fuse: source set mismatch; expected {";
        for (const auto& name : expected) msg += " " + name;
        msg += " } got {";
        for (const auto& name : got) msg += " " + name;
        msg += " }";
        throw std::invalid_argument(msg);
    }

    const FrameShape shape = frame_shape(sources, frame);
    const std::vector<int> ids = frame_objects(sources, frame);
    const std::size_t n = static_cast<std::size_t>(shape.width) * shape.height;

    FusedLogits fused;
    for (int id : ids) {
        LogitGrid channel(shape.width, shape.height);
        for (const SourcePrediction& src : sources) {
            double weight = 0;
            for (const auto& [name, w] : source_weights)
                if (name == src.source_id) weight = w;
            const auto it = src.frames[frame].find(id);
            if (it == src.frames[frame].end()) continue;
            for (std::size_t i = 0; i < n; ++i) channel.values[i] += weight * it->second.values[i];
        }
        fused.object_channels.emplace(id, std::move(channel));
    }
    fused.background = LogitGrid(shape.width, shape.height);
    for (std::size_t i = 0; i < n; ++i) {
        double mx = -std::numeric_limits<double>::infinity();
        for (const auto& [id, channel] : fused.object_channels) mx = std::max(mx, channel.values[i]);
        fused.background.values[i] = -mx;
    }
    return fused;
}

LogitGrid flip_average(const LogitGrid& pred_normal, const LogitGrid& pred_flipped) {
    if (pred_normal.width != pred_flipped.width || pred_normal.height != pred_flipped.height)
        throw std::invalid_argument("flip_average: grid dimensions differ");
    const LogitGrid unflipped = mirror_horizontal(pred_flipped);
    LogitGrid out(pred_normal.width, pred_normal.height);
    for (std::size_t i = 0; i < out.values.size(); ++i)
        out.values[i] = (pred_normal.values[i] + unflipped.values[i]) / 2.0;
    return out;
}

}  // namespace voskit
