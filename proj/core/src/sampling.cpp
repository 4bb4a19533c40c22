#include "voskit/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace voskit {

ClipPlan partition_clips(int total_frames, int grid_side) {
    if (grid_side < 1) throw std::invalid_argument("partition_clips: grid side must be >= 1");
    if (total_frames < 1) throw std::invalid_argument("partition_clips: frame count must be >= 1");
    const int c = grid_side * grid_side + 1;
    if (total_frames % c != 0)
        throw std::invalid_argument("partition_clips: " + std::to_string(total_frames) +
                                    " frames do not divide into clips of " + std::to_string(c));
    ClipPlan plan;
    plan.grid_side = grid_side;
    plan.clip_size = c;
    for (int start = 0; start < total_frames; start += c) {
        ClipPlan::Clip clip;
        clip.key_frame = start;
        for (int f = start; f < start + c; ++f) clip.frames.push_back(f);
        plan.clips.push_back(std::move(clip));
    }
    return plan;
}

TileLayout kfc_tile_layout(const std::vector<int>& clip_frames, int frame_w, int frame_h) {
    if (frame_w < 1 || frame_h < 1)
        throw std::invalid_argument("kfc_tile_layout: frame dimensions must be >= 1");
    const int c = static_cast<int>(clip_frames.size());
    const int g = static_cast<int>(std::lround(std::sqrt(static_cast<double>(c - 1))));
    if (c < 2 || g * g + 1 != c)
        throw std::invalid_argument("kfc_tile_layout: clip of " + std::to_string(c) +
                                    " frames is not g*g+1 for any grid side g");
    TileLayout layout;
    layout.canvas_w = g * frame_w;
    layout.canvas_h = g * frame_h;
    layout.scale_x = 1.0 / g;
    layout.scale_y = 1.0 / g;
    for (int t = 0; t < g * g; ++t) {
        TileLayout::Placement p;
        p.source_frame = clip_frames[t + 1];  // frame 0 of the clip is the key frame
        p.dest = TileRect{(t % g) * frame_w, (t / g) * frame_h, frame_w, frame_h};
        layout.tiles.push_back(p);
    }
    return layout;
}

namespace {

void check_plan_args(int t_ori, int clip_count, int clip_size) {
    if (t_ori < 1) throw std::invalid_argument("sampling: video length must be >= 1");
    if (clip_count < 1) throw std::invalid_argument("sampling: clip count must be >= 1");
    if (clip_size < 1) throw std::invalid_argument("sampling: clip size must be >= 1");
}

long long clip_boundary(int i, int t_ori, int n) {
    return static_cast<long long>(i) * t_ori / n;
}

}  // namespace

SamplePlan plan_uniform(int t_ori, int clip_count, int clip_size) {
    check_plan_args(t_ori, clip_count, clip_size);
    SamplePlan plan;
    plan.strategy = "uniform";
    plan.t_ori = t_ori;
    plan.clip_count = clip_count;
    plan.clip_size = clip_size;
    plan.t_target = clip_count * clip_size;
    plan.frame_clip.assign(t_ori, 0);
    for (int i = 0; i < clip_count; ++i) {
        const int start = static_cast<int>(clip_boundary(i, t_ori, clip_count));
        const int end = static_cast<int>(clip_boundary(i + 1, t_ori, clip_count));
        const int len = end - start;
        std::vector<int> selected;
        for (int k = 0; k < clip_size; ++k) {
            const int idx = len > 0
                                ? start + static_cast<int>(static_cast<long long>(k) * len /
                                                           clip_size)
                                : std::min(start, t_ori - 1);
            selected.push_back(idx);
        }
        for (int f = start; f < end; ++f) plan.frame_clip[f] = i;
        plan.indices.insert(plan.indices.end(), selected.begin(), selected.end());
        plan.clips.push_back(std::move(selected));
    }
    return plan;
}

SamplePlan plan_uniform_plus(int t_ori, int clip_count, int clip_size) {
    SamplePlan plan = plan_uniform(t_ori, clip_count, clip_size);
    plan.strategy = "uniform+";
    if (t_ori < clip_count * clip_size) {
        // Short video: each interior clip-boundary frame answers to both
        // adjacent clips; its two masks get averaged downstream.
        for (int i = 1; i < clip_count; ++i) {
            const int boundary = static_cast<int>(clip_boundary(i, t_ori, clip_count));
            plan.dual_tags.push_back(DualTag{boundary, i - 1, i});
        }
    }
    return plan;
}

SamplePlan plan_wraparound(int t_ori, int t_target) {
    if (t_ori < 1 || t_target < 1)
        throw std::invalid_argument("plan_wraparound: lengths must be >= 1");
    SamplePlan plan;
    plan.strategy = "wraparound";
    plan.t_ori = t_ori;
    plan.t_target = t_target;
    plan.clip_count = 1;
    plan.clip_size = t_target;
    plan.frame_clip.assign(t_ori, 0);
    for (int i = 0; i < t_target; ++i) plan.indices.push_back(t_ori >= t_target ? i : i % t_ori);
    std::sort(plan.indices.begin(), plan.indices.end());
    plan.clips.push_back(plan.indices);
    return plan;
}

SamplePlan plan_wraparound_plus(int t_ori, int t_target, int clip_count, int clip_size) {
    if (clip_count * clip_size != t_target)
        throw std::invalid_argument("plan_wraparound_plus: target length " +
                                    std::to_string(t_target) + " is not clip_count*clip_size");
    SamplePlan plan = t_ori < t_target ? plan_wraparound(t_ori, t_target)
                                       : plan_uniform(t_ori, clip_count, clip_size);
    plan.strategy = "wraparound+";
    return plan;
}

SamplePlan plan_head_hybrid(int t_ori, int t_target, int head) {
    if (t_ori < 1 || t_target < 1)
        throw std::invalid_argument("plan_head_hybrid: lengths must be >= 1");
    if (head < 0 || head > t_target)
        throw std::invalid_argument("plan_head_hybrid: head must lie in [0, target]");
    SamplePlan plan;
    plan.strategy = "head";
    plan.t_ori = t_ori;
    plan.t_target = t_target;
    plan.clip_count = 1;
    plan.clip_size = t_target;
    plan.frame_clip.assign(t_ori, 0);

    std::vector<bool> used(t_ori, false);
    const int h = std::min(head, t_ori);
    for (int i = 0; i < h; ++i) {
        plan.indices.push_back(i);
        used[i] = true;
    }
    const int rest = t_target - h;
    const int len = t_ori - h;
    for (int k = 0; k < rest; ++k) {
        int cand = len > 0
                       ? h + static_cast<int>(static_cast<long long>(k) * len / rest)
                       : t_ori - 1;
        if (used[cand]) {
            int probe = cand + 1;
            while (probe < t_ori && used[probe]) ++probe;
            if (probe < t_ori) cand = probe;  // otherwise the repeat stands
        }
        used[cand] = true;
        plan.indices.push_back(cand);
    }
    std::sort(plan.indices.begin(), plan.indices.end());
    plan.clips.push_back(plan.indices);
    return plan;
}

SamplePlan plan_qframe(int t_ori, const std::vector<int>& relevance_ranking, int t_target) {
    if (t_ori < 1 || t_target < 1)
        throw std::invalid_argument("plan_qframe: lengths must be >= 1");
    if (static_cast<int>(relevance_ranking.size()) < t_target)
        throw std::invalid_argument("plan_qframe: ranking holds " +
                                    std::to_string(relevance_ranking.size()) +
                                    " frames, need " + std::to_string(t_target));
    std::vector<bool> seen(t_ori, false);
    SamplePlan plan;
    plan.strategy = "qframe";
    plan.t_ori = t_ori;
    plan.t_target = t_target;
    plan.clip_count = 1;
    plan.clip_size = t_target;
    plan.frame_clip.assign(t_ori, 0);
    for (int k = 0; k < t_target; ++k) {
        const int f = relevance_ranking[k];
        if (f < 0 || f >= t_ori)
            throw std::invalid_argument("plan_qframe: ranked frame " + std::to_string(f) +
                                        " out of range");
        if (seen[f])
            throw std::invalid_argument("plan_qframe: ranked frame " + std::to_string(f) +
                                        " repeats");
        seen[f] = true;
        plan.indices.push_back(f);
    }
    std::sort(plan.indices.begin(), plan.indices.end());
    plan.clips.push_back(plan.indices);
    return plan;
}

std::string serialize_plan(const SamplePlan& plan) {
    std::ostringstream out;
    out << plan.strategy << ' ' << plan.t_ori << ' ' << plan.t_target << ' ' << plan.clip_count
        << ' ' << plan.clip_size << '\n';
    for (int i = 0; i < static_cast<int>(plan.clips.size()); ++i) {
        bool first = true;
        std::vector<bool> tagged_here;  // mark only the first occurrence per tag
        for (std::size_t pos = 0; pos < plan.clips[i].size(); ++pos) {
            const int f = plan.clips[i][pos];
            if (!first) out << ' ';
            first = false;
            out << f;
            for (std::size_t t = 0; t < plan.dual_tags.size(); ++t) {
                const DualTag& tag = plan.dual_tags[t];
                if (tag.second_clip != i || tag.frame != f) continue;
                if (tagged_here.size() <= t) tagged_here.resize(t + 1, false);
                if (tagged_here[t]) continue;
                tagged_here[t] = true;
                out << '+' << tag.first_clip;
                break;
            }
        }
        out << '\n';
    }
    return out.str();
}

SamplePlan parse_plan(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("plan: empty document");
    std::istringstream header(line);
    SamplePlan plan;
    if (!(header >> plan.strategy >> plan.t_ori >> plan.t_target >> plan.clip_count >>
          plan.clip_size))
        throw std::runtime_error("plan: malformed header: " + line);
    int clip = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::vector<int> frames;
        std::string tok;
        while (row >> tok) {
            const std::size_t plus = tok.find('+');
            const int f = std::stoi(tok.substr(0, plus));
            frames.push_back(f);
            if (plus != std::string::npos)
                plan.dual_tags.push_back(DualTag{f, std::stoi(tok.substr(plus + 1)), clip});
        }
        plan.indices.insert(plan.indices.end(), frames.begin(), frames.end());
        plan.clips.push_back(std::move(frames));
        ++clip;
    }
    std::sort(plan.indices.begin(), plan.indices.end());
    return plan;
}

}  // namespace voskit
