#include "voskit/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace voskit {

namespace {

bool shape_covers(ShapeKind shape, const TrackStep& step, double x, double y) {
    if (step.half_w <= 0.0 || step.half_h <= 0.0) return false;
    const double dx = x - step.cx;
    const double dy = y - step.cy;
    if (shape == ShapeKind::kRectangle)
        return std::abs(dx) <= step.half_w && std::abs(dy) <= step.half_h;
    const double nx = dx / step.half_w;
    const double ny = dy / step.half_h;
    return nx * nx + ny * ny <= 1.0;
}

void validate_script(const SceneScript& script) {
    if (script.width < 1 || script.height < 1)
        throw std::invalid_argument("render_script: canvas dimensions must be >= 1");
    if (script.frame_count < 1)
        throw std::invalid_argument("render_script: frame count must be >= 1");
    std::set<int> ids;
    for (const ObjectTrack& obj : script.objects) {
        if (obj.id < 1 || obj.id > 65535)
            throw std::invalid_argument("render_script: object id " + std::to_string(obj.id) +
                                        " out of range");
        if (!ids.insert(obj.id).second)
            throw std::invalid_argument("render_script: duplicate object id " +
                                        std::to_string(obj.id));
        if (static_cast<int>(obj.steps.size()) != script.frame_count)
            throw std::invalid_argument("render_script: object " + std::to_string(obj.id) +
                                        " has " + std::to_string(obj.steps.size()) +
                                        " steps for " + std::to_string(script.frame_count) +
                                        " frames");
    }
}

}  // namespace

RenderedScene render_script(const SceneScript& script) {
    validate_script(script);
    RenderedScene out;
    for (int t = 0; t < script.frame_count; ++t) {
        std::array<std::uint8_t, 3> bg = script.background;
        for (const SceneCut& cut : script.cuts)
            if (cut.frame <= t) bg = cut.background;

        LabeledFrame labels(script.width, script.height);
        ColorFrame rgb(script.width, script.height);
        for (int j = 0; j < script.height; ++j)
            for (int i = 0; i < script.width; ++i) rgb.set(i, j, {bg[0], bg[1], bg[2]});

        for (const ObjectTrack& obj : script.objects) {
            const TrackStep& step = obj.steps[t];
            if (!step.visible) continue;
            const int i0 = std::max(0, static_cast<int>(std::floor(step.cx - step.half_w - 1)));
            const int i1 = std::min(script.width - 1,
                                    static_cast<int>(std::ceil(step.cx + step.half_w + 1)));
            const int j0 = std::max(0, static_cast<int>(std::floor(step.cy - step.half_h - 1)));
            const int j1 = std::min(script.height - 1,
                                    static_cast<int>(std::ceil(step.cy + step.half_h + 1)));
            for (int j = j0; j <= j1; ++j)
                for (int i = i0; i <= i1; ++i)
                    if (shape_covers(obj.shape, step, i + 0.5, j + 0.5)) {
                        labels.set(i, j, static_cast<std::uint16_t>(obj.id));
                        rgb.set(i, j, {obj.color[0], obj.color[1], obj.color[2]});
                    }
        }

        for (const OccluderBox& occ : script.occluders) {
            if (t < occ.first_frame || t > occ.last_frame) continue;
            const int i0 = std::max(0, occ.x0);
            const int i1 = std::min(script.width - 1, occ.x1);
            const int j0 = std::max(0, occ.y0);
            const int j1 = std::min(script.height - 1, occ.y1);
            for (int j = j0; j <= j1; ++j)
                for (int i = i0; i <= i1; ++i) {
                    labels.set(i, j, 0);
                    rgb.set(i, j, {occ.color[0], occ.color[1], occ.color[2]});
                }
        }

        out.gt.frames.push_back(std::move(labels));
        out.rgb.push_back(std::move(rgb));
    }
    out.gt.validate();
    return out;
}

std::uint64_t SplitMix64::next() {
    std::uint64_t z = (state += 0x9E3779B97f4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

double SplitMix64::next_double() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

int SplitMix64::next_int(int lo, int hi) {
    if (hi < lo) throw std::invalid_argument("next_int: empty range");
    const std::uint64_t span = static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo) + 1;
    return lo + static_cast<int>(next() % span);
}

namespace {

BinaryMask shift_mask(const BinaryMask& mask, int dx, int dy) {
    BinaryMask out(mask.width, mask.height);
    for (int j = 0; j < mask.height; ++j)
        for (int i = 0; i < mask.width; ++i) {
            const int si = i - dx;
            const int sj = j - dy;
            if (si >= 0 && si < mask.width && sj >= 0 && sj < mask.height && mask.at(si, sj))
                out.set(i, j, 1);
        }
    return out;
}

LogitGrid signed_distance_logits(const BinaryMask& mask, double scale) {
    const std::vector<std::int64_t> to_fg = squared_distance_transform(mask);
    BinaryMask inverted(mask.width, mask.height);
    for (std::size_t p = 0; p < mask.data.size(); ++p)
        inverted.data[p] = mask.data[p] ? 0 : 1;
    const std::vector<std::int64_t> to_bg = squared_distance_transform(inverted);

    LogitGrid grid(mask.width, mask.height);
    for (std::size_t p = 0; p < mask.data.size(); ++p) {
        const std::int64_t d2 = mask.data[p] ? to_bg[p] : to_fg[p];
        const double d = d2 >= kUnreachable ? scale : std::sqrt(static_cast<double>(d2));
        const double sd = mask.data[p] ? d : -d;
        grid.values[p] = std::clamp(sd, -scale, scale);
    }
    return grid;
}

}  // namespace

std::vector<double> region_feature(const ColorFrame& frame, const BinaryMask& mask) {
    if (frame.width != mask.width || frame.height != mask.height)
        throw std::invalid_argument("region_feature: frame and mask dimensions differ");
    std::vector<double> feat(12, 0.0);
    double total = 0.0;
    for (int j = 0; j < mask.height; ++j)
        for (int i = 0; i < mask.width; ++i) {
            if (!mask.at(i, j)) continue;
            const std::array<std::uint8_t, 3> rgb = frame.at(i, j);
            const int color_bin =
                (rgb[0] >= 128 ? 4 : 0) + (rgb[1] >= 128 ? 2 : 0) + (rgb[2] >= 128 ? 1 : 0);
            const int quadrant =
                (i * 2 >= mask.width ? 1 : 0) + (j * 2 >= mask.height ? 2 : 0);
            feat[color_bin] += 1.0;
            feat[8 + quadrant] += 1.0;
            total += 2.0;
        }
    if (total > 0.0)
        for (double& v : feat) v /= total;
    return feat;
}

TrackerOutput simulate_tracker(const VideoSequence& gt, const std::vector<ColorFrame>& rgb,
                               const TrackerNoise& noise, std::uint64_t seed) {
    gt.validate();
    if (rgb.size() != gt.frames.size())
        throw std::invalid_argument("simulate_tracker: rgb and gt frame counts differ");
    if (noise.logit_scale < 1.0)
        throw std::invalid_argument("simulate_tracker: logit scale must be >= 1");

    const std::vector<int> ids = gt.object_ids();
    SplitMix64 rng(seed);
    TrackerOutput out;
    out.frames.resize(gt.frames.size());
    out.features.resize(gt.frames.size());

    for (std::size_t t = 0; t < gt.frames.size(); ++t) {
        const LabeledFrame& frame = gt.frames[t];
        const bool dropped =
            std::find(noise.dropout_frames.begin(), noise.dropout_frames.end(),
                      static_cast<int>(t)) != noise.dropout_frames.end();

        for (int id : ids) {
            LogitGrid grid(frame.width, frame.height);
            if (dropped) {
                std::fill(grid.values.begin(), grid.values.end(), -noise.logit_scale);
            } else {
                BinaryMask mask = extract_object(frame, id);
                if (noise.jitter_px > 0) {
                    const int dx = rng.next_int(-noise.jitter_px, noise.jitter_px);
                    const int dy = rng.next_int(-noise.jitter_px, noise.jitter_px);
                    if (!mask.empty_foreground() && (dx != 0 || dy != 0))
                        mask = shift_mask(mask, dx, dy);
                }
                grid = signed_distance_logits(mask, noise.logit_scale);
                if (noise.noise_amp > 0.0)
                    for (double& v : grid.values)
                        v += noise.noise_amp * (2.0 * rng.next_double() - 1.0);
            }

            for (const PhantomBlob& blob : noise.phantoms) {
                if (blob.object_id != id) continue;
                if (static_cast<int>(t) < blob.first_frame ||
                    static_cast<int>(t) > blob.last_frame)
                    continue;
                const double r2 = blob.radius * blob.radius;
                for (int j = 0; j < grid.height; ++j)
                    for (int i = 0; i < grid.width; ++i) {
                        const double dx = i + 0.5 - blob.cx;
                        const double dy = j + 0.5 - blob.cy;
                        if (dx * dx + dy * dy <= r2)
                            grid.set(i, j, std::max(grid.at(i, j), blob.logit));
                    }
            }

            out.frames[t].emplace(id, std::move(grid));
        }

        for (const IdentitySwap& swap : noise.swaps) {
            if (static_cast<int>(t) < swap.frame) continue;
            auto a = out.frames[t].find(swap.id_a);
            auto b = out.frames[t].find(swap.id_b);
            if (a == out.frames[t].end() || b == out.frames[t].end())
                throw std::invalid_argument("simulate_tracker: swap names unknown object id");
            std::swap(a->second, b->second);
        }

        for (const auto& [id, grid] : out.frames[t])
            out.features[t].emplace(id, region_feature(rgb[t], threshold_grid(grid, 0.0)));
    }
    return out;
}

namespace {

ObjectTrack moving_rect(int id, std::array<std::uint8_t, 3> color, int frames, double cx0,
                        double cx_step, double cy, double half, int hide_first = -1,
                        int hide_last = -2) {
    ObjectTrack obj;
    obj.id = id;
    obj.shape = ShapeKind::kRectangle;
    obj.color = color;
    for (int t = 0; t < frames; ++t) {
        TrackStep step;
        step.cx = cx0 + cx_step * t;
        step.cy = cy;
        step.half_w = half;
        step.half_h = half;
        step.visible = t < hide_first || t > hide_last;
        obj.steps.push_back(step);
    }
    return obj;
}

}  // namespace

SceneScript build_linear_occlusion() {
    SceneScript script;
    script.width = 96;
    script.height = 64;
    script.frame_count = 12;
    script.background = {15, 15, 20};
    script.seed = 42;
    // 12x12 rectangle gliding right at 6 px/frame, hidden behind a pillar on
    // frames 4-6. The pillar never clips the visible object: the shape spans
    // columns 30-41 entering and 54-65 leaving, the pillar covers 42-53.
    script.objects.push_back(
        moving_rect(1, {220, 160, 40}, script.frame_count, 18.0, 6.0, 32.0, 6.0, 4, 6));
    OccluderBox pillar;
    pillar.first_frame = 4;
    pillar.last_frame = 6;
    pillar.x0 = 42;
    pillar.y0 = 0;
    pillar.x1 = 53;
    pillar.y1 = 63;
    pillar.color = {90, 90, 95};
    script.occluders.push_back(pillar);
    return script;
}

SceneScript build_twin_distractor() {
    SceneScript script;
    script.width = 96;
    script.height = 64;
    script.frame_count = 12;
    script.background = {15, 15, 20};
    script.seed = 42;
    // Two identically colored 12x12 rectangles on disjoint row bands, crossing
    // column-wise at frame 5.
    script.objects.push_back(
        moving_rect(1, {40, 200, 80}, script.frame_count, 18.0, 6.0, 24.0, 6.0));
    script.objects.push_back(
        moving_rect(2, {40, 200, 80}, script.frame_count, 78.0, -6.0, 40.0, 6.0));
    return script;
}

SceneScript build_scene_cut() {
    SceneScript script;
    script.width = 64;
    script.height = 48;
    script.frame_count = 12;
    script.background = {30, 60, 220};
    script.seed = 42;
    // Constant-size ellipse drifting at an integer step keeps every per-frame
    // color histogram identical, so only the background cut moves the gate.
    ObjectTrack obj;
    obj.id = 1;
    obj.shape = ShapeKind::kEllipse;
    obj.color = {60, 200, 90};
    for (int t = 0; t < script.frame_count; ++t) {
        TrackStep step;
        step.cx = 16.0 + 2.0 * t;
        step.cy = 24.0;
        step.half_w = 6.0;
        step.half_h = 4.0;
        obj.steps.push_back(step);
    }
    script.objects.push_back(obj);
    SceneCut cut;
    cut.frame = 7;
    cut.background = {220, 50, 40};
    script.cuts.push_back(cut);
    return script;
}

SceneScript build_reappear_far() {
    SceneScript script;
    script.width = 96;
    script.height = 64;
    script.frame_count = 12;
    script.background = {15, 15, 20};
    script.seed = 42;
    // Moves for frames 0-3, gone for 4-6, then re-enters at a fixed spot far
    // from the extrapolated path.
    ObjectTrack obj =
        moving_rect(1, {200, 60, 170}, script.frame_count, 18.0, 6.0, 32.0, 6.0, 4, 6);
    for (int t = 7; t < script.frame_count; ++t) {
        obj.steps[t].cx = 76.0;
        obj.steps[t].cy = 16.0;
    }
    script.objects.push_back(obj);
    return script;
}

std::vector<std::string> scenario_names() {
    return {"linear-occlusion", "twin-distractor", "scene-cut", "reappear-far"};
}

ScenarioBundle make_scenario(const std::string& name, std::uint64_t seed) {
    ScenarioBundle bundle;
    bundle.name = name;
    if (name == "linear-occlusion") {
        bundle.script = build_linear_occlusion();
        TrackerNoise noise;
        noise.logit_scale = 8.0;
        noise.noise_amp = 0.2;
        noise.dropout_frames = {4, 5, 6};
        PhantomBlob blob;
        blob.first_frame = 7;
        blob.last_frame = 11;
        blob.object_id = 1;
        blob.cx = 20.0;
        blob.cy = 12.0;
        blob.radius = 3.0;
        blob.logit = 3.0;
        noise.phantoms.push_back(blob);
        bundle.tracker_noises.push_back(noise);
        bundle.mpm.alpha = 0.05;  // fast EMA so the velocity locks on within 4 frames
    } else if (name == "twin-distractor") {
        bundle.script = build_twin_distractor();
        TrackerNoise clean;
        clean.logit_scale = 8.0;
        clean.noise_amp = 0.2;
        bundle.tracker_noises.push_back(clean);
        bundle.tracker_noises.push_back(clean);
        TrackerNoise swapped = clean;
        IdentitySwap swap;
        swap.frame = 5;
        swap.id_a = 1;
        swap.id_b = 2;
        swapped.swaps.push_back(swap);
        bundle.tracker_noises.push_back(swapped);
    } else if (name == "scene-cut") {
        bundle.script = build_scene_cut();
        TrackerNoise clean;
        clean.logit_scale = 8.0;
        clean.noise_amp = 0.2;
        bundle.tracker_noises.push_back(clean);
    } else if (name == "reappear-far") {
        bundle.script = build_reappear_far();
        TrackerNoise jittery;
        jittery.logit_scale = 8.0;
        jittery.noise_amp = 0.2;
        jittery.jitter_px = 1;
        jittery.dropout_frames = {4, 5, 6};
        bundle.tracker_noises.push_back(jittery);
    } else {
        std::string known;
        for (const std::string& n : scenario_names()) known += " " + n;
        throw std::invalid_argument("unknown scenario \"" + name + "\"; valid names:" + known);
    }
    bundle.script.seed = seed;
    RenderedScene scene = render_script(bundle.script);
    bundle.gt = std::move(scene.gt);
    bundle.rgb = std::move(scene.rgb);
    SplitMix64 root(seed);
    for (const TrackerNoise& noise : bundle.tracker_noises)
        bundle.trackers.push_back(simulate_tracker(bundle.gt, bundle.rgb, noise, root.next()));
    return bundle;
}

namespace {

nlohmann::ordered_json color_json(const std::array<std::uint8_t, 3>& c) {
    return nlohmann::ordered_json::array({c[0], c[1], c[2]});
}

std::array<std::uint8_t, 3> color_from(const nlohmann::json& v) {
    if (!v.is_array() || v.size() != 3)
        throw std::runtime_error("script: color must be a 3-element array");
    std::array<std::uint8_t, 3> c{};
    for (int k = 0; k < 3; ++k) {
        const int ch = v[k].get<int>();
        if (ch < 0 || ch > 255) throw std::runtime_error("script: color channel out of range");
        c[k] = static_cast<std::uint8_t>(ch);
    }
    return c;
}

}  // namespace

std::string script_to_json(const SceneScript& script) {
    nlohmann::ordered_json doc;
    doc["width"] = script.width;
    doc["height"] = script.height;
    doc["frames"] = script.frame_count;
    doc["background"] = color_json(script.background);
    doc["seed"] = script.seed;
    doc["objects"] = nlohmann::ordered_json::array();
    for (const ObjectTrack& obj : script.objects) {
        nlohmann::ordered_json o;
        o["id"] = obj.id;
        o["shape"] = obj.shape == ShapeKind::kRectangle ? "rectangle" : "ellipse";
        o["color"] = color_json(obj.color);
        o["steps"] = nlohmann::ordered_json::array();
        for (const TrackStep& s : obj.steps)
            o["steps"].push_back(nlohmann::ordered_json::array(
                {s.cx, s.cy, s.half_w, s.half_h, s.visible ? 1 : 0}));
        doc["objects"].push_back(std::move(o));
    }
    doc["occluders"] = nlohmann::ordered_json::array();
    for (const OccluderBox& occ : script.occluders) {
        nlohmann::ordered_json o;
        o["first"] = occ.first_frame;
        o["last"] = occ.last_frame;
        o["box"] = nlohmann::ordered_json::array({occ.x0, occ.y0, occ.x1, occ.y1});
        o["color"] = color_json(occ.color);
        doc["occluders"].push_back(std::move(o));
    }
    doc["cuts"] = nlohmann::ordered_json::array();
    for (const SceneCut& cut : script.cuts) {
        nlohmann::ordered_json o;
        o["frame"] = cut.frame;
        o["background"] = color_json(cut.background);
        doc["cuts"].push_back(std::move(o));
    }
    return doc.dump(2) + "\n";
}

SceneScript script_from_json(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::runtime_error(std::string("script: invalid JSON: ") + e.what());
    }
    SceneScript script;
    script.width = doc.at("width").get<int>();
    script.height = doc.at("height").get<int>();
    script.frame_count = doc.at("frames").get<int>();
    script.background = color_from(doc.at("background"));
    script.seed = doc.at("seed").get<std::uint64_t>();
    for (const auto& o : doc.at("objects")) {
        ObjectTrack obj;
        obj.id = o.at("id").get<int>();
        const std::string shape = o.at("shape").get<std::string>();
        if (shape == "rectangle")
            obj.shape = ShapeKind::kRectangle;
        else if (shape == "ellipse")
            obj.shape = ShapeKind::kEllipse;
        else
            throw std::runtime_error("script: unknown shape \"" + shape + "\"");
        obj.color = color_from(o.at("color"));
        for (const auto& s : o.at("steps")) {
            if (!s.is_array() || s.size() != 5)
                throw std::runtime_error("script: step must be [cx, cy, half_w, half_h, visible]");
            TrackStep step;
            step.cx = s[0].get<double>();
            step.cy = s[1].get<double>();
            step.half_w = s[2].get<double>();
            step.half_h = s[3].get<double>();
            step.visible = s[4].get<int>() != 0;
            obj.steps.push_back(step);
        }
        script.objects.push_back(std::move(obj));
    }
    for (const auto& o : doc.at("occluders")) {
        OccluderBox occ;
        occ.first_frame = o.at("first").get<int>();
        occ.last_frame = o.at("last").get<int>();
        const auto& box = o.at("box");
        if (!box.is_array() || box.size() != 4)
            throw std::runtime_error("script: occluder box must be [x0, y0, x1, y1]");
        occ.x0 = box[0].get<int>();
        occ.y0 = box[1].get<int>();
        occ.x1 = box[2].get<int>();
        occ.y1 = box[3].get<int>();
        occ.color = color_from(o.at("color"));
        script.occluders.push_back(occ);
    }
    for (const auto& o : doc.at("cuts")) {
        SceneCut cut;
        cut.frame = o.at("frame").get<int>();
        cut.background = color_from(o.at("background"));
        script.cuts.push_back(cut);
    }
    return script;
}

void save_script(const SceneScript& script, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << script_to_json(script);
    if (!out) throw std::runtime_error("failed writing " + path);
}

SceneScript load_script(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return script_from_json(buf.str());
}

}  // namespace voskit
