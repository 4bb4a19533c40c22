#include "voskit/memory.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace voskit {

MemoryBank::MemoryBank(int capacity) : capacity_(capacity) {
    if (capacity < 1) throw std::invalid_argument("MemoryBank: capacity must be >= 1");
}

void MemoryBank::admit(MemoryEntry entry) {
    if (entry.pinned) {
        if (pinned_) throw std::invalid_argument("MemoryBank: pinned slot already taken");
        pinned_ = std::move(entry);
        return;
    }
    if (!recent_.empty() && entry.frame <= recent_.back().frame)
        throw std::invalid_argument("MemoryBank: frame " + std::to_string(entry.frame) +
                                    " does not follow frame " +
                                    std::to_string(recent_.back().frame));
    recent_.push_back(std::move(entry));
    if (static_cast<int>(recent_.size()) > capacity_) recent_.pop_front();
}

std::vector<const MemoryEntry*> MemoryBank::window() const {
    std::vector<const MemoryEntry*> out;
    out.reserve(recent_.size() + 1);
    if (pinned_) out.push_back(&*pinned_);
    for (const MemoryEntry& e : recent_) out.push_back(&e);
    return out;
}

CapacityPreset capacity_preset(int sequence_length) {
    if (sequence_length < 1)
        throw std::invalid_argument("capacity_preset: sequence length must be >= 1");
    if (sequence_length > 200) return {45, 40, 50};
    return {15, 14, 40};
}

namespace {

double cosine_similarity(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size())
        throw std::invalid_argument("cosine similarity: feature lengths differ");
    double dot = 0, na = 0, nb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    if (na == 0 || nb == 0)
        throw std::invalid_argument("cosine similarity: zero-norm vector");
    return dot / (std::sqrt(na) * std::sqrt(nb));
}

}  // namespace

double distractor_score(const std::vector<double>& candidate, const MemoryBank& bank) {
    const auto entries = bank.window();
    if (entries.empty()) throw std::invalid_argument("distractor_score: empty bank");
    double best = -1.0;
    for (const MemoryEntry* e : entries)
        best = std::max(best, cosine_similarity(candidate, e->feature));
    return best;
}

bool distractor_suppressed(const std::vector<double>& candidate, const MemoryBank& bank,
                           double threshold) {
    return distractor_score(candidate, bank) < threshold;
}

std::vector<double> uncertainty_weights(const std::vector<MemoryEntry>& entries,
                                        double multiplier) {
    if (entries.empty()) throw std::invalid_argument("uncertainty_weights: no entries");
    // Shift by the smallest sigma before exponentiating; the softmax is
    // invariant to the shift and it keeps the exponents bounded.
    double min_sigma = entries.front().uncertainty;
    for (const MemoryEntry& e : entries) min_sigma = std::min(min_sigma, e.uncertainty);
    std::vector<double> w(entries.size());
    double total = 0;
    for (std::size_t i = 0; i < entries.size(); ++i) {
        w[i] = std::exp(-multiplier * (entries[i].uncertainty - min_sigma));
        total += w[i];
    }
    for (double& v : w) v /= total;
    return w;
}

std::vector<double> uncertainty_aggregate(const std::vector<MemoryEntry>& entries,
                                          double multiplier) {
    const std::vector<double> w = uncertainty_weights(entries, multiplier);
    const std::size_t dim = entries.front().feature.size();
    for (const MemoryEntry& e : entries)
        if (e.feature.size() != dim)
            throw std::invalid_argument("uncertainty_aggregate: feature lengths differ");
    std::vector<double> out(dim, 0.0);
    for (std::size_t i = 0; i < entries.size(); ++i)
        for (std::size_t d = 0; d < dim; ++d) out[d] += w[i] * entries[i].feature[d];
    return out;
}

PathwayTree make_pathway_root(MemoryEntry entry) {
    PathwayTree tree;
    PathwayNode root;
    root.entry = std::move(entry);
    root.cumulative = 0;
    tree.nodes.push_back(std::move(root));
    tree.leaves.push_back(0);
    return tree;
}

namespace {

// Ordering used both for beam pruning and final selection: higher cumulative
// first, then lower entry frame, then lower creation ordinal.
bool pathway_better(const PathwayNode& a, const PathwayNode& b) {
    if (a.cumulative != b.cumulative) return a.cumulative > b.cumulative;
    if (a.entry.frame != b.entry.frame) return a.entry.frame < b.entry.frame;
    return a.ordinal < b.ordinal;
}

}  // namespace

void pathway_step(PathwayTree& tree,
                  const std::vector<std::pair<MemoryEntry, double>>& candidates,
                  int num_pathway, double iou_thre) {
    if (num_pathway < 1) throw std::invalid_argument("pathway_step: num_pathway must be >= 1");
    if (candidates.empty()) throw std::invalid_argument("pathway_step: no candidates");
    if (tree.leaves.empty()) throw std::invalid_argument("pathway_step: tree has no leaves");

    std::vector<int> allowed;
    for (std::size_t c = 0; c < candidates.size(); ++c)
        if (candidates[c].second >= iou_thre) allowed.push_back(static_cast<int>(c));
    if (allowed.empty()) {
        // Extinction guard: keep the single best candidate.
        int best = 0;
        for (std::size_t c = 1; c < candidates.size(); ++c)
            if (candidates[c].second > candidates[best].second) best = static_cast<int>(c);
        allowed.push_back(best);
    }

    std::vector<int> children;
    for (int leaf : tree.leaves) {
        for (int c : allowed) {
            PathwayNode node;
            node.parent = leaf;
            node.entry = candidates[c].first;
            node.candidate_index = c;
            node.step_score = candidates[c].second;
            node.cumulative = tree.nodes[leaf].cumulative + candidates[c].second;
            node.depth = tree.nodes[leaf].depth + 1;
            node.ordinal = static_cast<int>(tree.nodes.size());
            tree.nodes.push_back(std::move(node));
            children.push_back(static_cast<int>(tree.nodes.size()) - 1);
        }
    }
    std::sort(children.begin(), children.end(), [&](int a, int b) {
        return pathway_better(tree.nodes[a], tree.nodes[b]);
    });
    if (static_cast<int>(children.size()) > num_pathway) children.resize(num_pathway);
    tree.leaves = std::move(children);
}

const PathwayNode& pathway_select(const PathwayTree& tree) {
    if (tree.leaves.empty()) throw std::invalid_argument("pathway_select: tree has no leaves");
    int best = tree.leaves.front();
    for (int leaf : tree.leaves)
        if (pathway_better(tree.nodes[leaf], tree.nodes[best])) best = leaf;
    return tree.nodes[best];
}

std::vector<int> pathway_trace(const PathwayTree& tree, int node_index) {
    std::vector<int> trace;
    for (int i = node_index; i >= 0 && tree.nodes[i].parent >= 0; i = tree.nodes[i].parent)
        trace.push_back(tree.nodes[i].candidate_index);
    std::reverse(trace.begin(), trace.end());
    return trace;
}

std::string dump_pathways(const PathwayTree& tree) {
    std::ostringstream out;
    // Depth-first from the root, indenting by depth; mark active leaves.
    std::vector<std::vector<int>> children(tree.nodes.size());
    for (std::size_t i = 1; i < tree.nodes.size(); ++i)
        children[tree.nodes[i].parent].push_back(static_cast<int>(i));
    std::vector<int> stack{0};
    while (!stack.empty()) {
        const int i = stack.back();
        stack.pop_back();
        const PathwayNode& n = tree.nodes[i];
        for (int d = 0; d < n.depth; ++d) out << "  ";
        if (n.parent < 0)
            out << "root frame=" << n.entry.frame;
        else
            out << "cand=" << n.candidate_index << " frame=" << n.entry.frame
                << " step=" << n.step_score << " cum=" << n.cumulative;
        if (std::find(tree.leaves.begin(), tree.leaves.end(), i) != tree.leaves.end())
            out << " [leaf]";
        out << '\n';
        for (auto it = children[i].rbegin(); it != children[i].rend(); ++it) stack.push_back(*it);
    }
    return out.str();
}

std::vector<double> hsv_histogram(const ColorFrame& frame) {
    constexpr int kBins = 32;
    std::vector<double> hist(kBins * kBins, 0.0);
    const std::size_t n = static_cast<std::size_t>(frame.width) * frame.height;
    for (std::size_t i = 0; i < n; ++i) {
        const Hsv hsv = rgb_to_hsv(frame.data[i * 3], frame.data[i * 3 + 1], frame.data[i * 3 + 2]);
        const int hb = std::min(kBins - 1, static_cast<int>(hsv.h / 360.0 * kBins));
        const int sb = std::min(kBins - 1, static_cast<int>(hsv.s * kBins));
        hist[static_cast<std::size_t>(hb) * kBins + sb] += 1.0;
    }
    for (double& v : hist) v /= static_cast<double>(n);
    return hist;
}

double bhattacharyya_distance(const std::vector<double>& p, const std::vector<double>& q) {
    if (p.size() != q.size())
        throw std::invalid_argument("bhattacharyya_distance: histogram sizes differ");
    double coefficient = 0;
    for (std::size_t i = 0; i < p.size(); ++i) coefficient += std::sqrt(p[i] * q[i]);
    return std::sqrt(std::max(0.0, 1.0 - coefficient));
}

bool scene_change(const ColorFrame& prev, const ColorFrame& cur, double threshold) {
    if (prev.width != cur.width || prev.height != cur.height)
        throw std::invalid_argument("scene_change: frame dimensions differ");
    return bhattacharyya_distance(hsv_histogram(prev), hsv_histogram(cur)) > threshold;
}

}  // namespace voskit
