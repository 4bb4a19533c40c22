#ifndef VOSKIT_MEMORY_HPP
#define VOSKIT_MEMORY_HPP

#include <deque>
#include <optional>
#include <string>
#include <vector>

#include "voskit/image.hpp"

namespace voskit {

/// One remembered frame: a generic feature descriptor plus bookkeeping. The
/// policies are feature-agnostic; callers decide what the vector encodes.
struct MemoryEntry {
    int frame = 0;
    std::vector<double> feature;
    int mask_ref = -1;        // opaque handle into caller-owned mask storage
    double uncertainty = 0;   // sigma >= 0
    bool pinned = false;
};

/// Bounded first-in-first-out store of recent entries plus one permanently
/// retained pinned entry (the initialization frame).
class MemoryBank {
  public:
    explicit MemoryBank(int capacity);

    /// Admits an entry. A pinned entry claims the permanent slot (only one is
    /// allowed); unpinned entries must arrive in increasing frame order and
    /// evict the oldest unpinned entry once the bank is full.
    void admit(MemoryEntry entry);

    int capacity() const { return capacity_; }
    int unpinned_count() const { return static_cast<int>(recent_.size()); }
    int size() const { return unpinned_count() + (pinned_ ? 1 : 0); }
    const std::optional<MemoryEntry>& pinned() const { return pinned_; }
    const std::deque<MemoryEntry>& recent() const { return recent_; }

    /// Pinned entry first (when present), then the retained recents oldest to
    /// newest.
    std::vector<const MemoryEntry*> window() const;

  private:
    int capacity_;
    std::optional<MemoryEntry> pinned_;
    std::deque<MemoryEntry> recent_;
};

struct CapacityPreset {
    int max_mem = 0;
    int min_mem = 0;
    int topk = 0;
};

/// Length-adaptive memory sizing: videos longer than 200 frames get the
/// large preset (45, 40, 50), everything else the small one (15, 14, 40).
/// Exactly 200 frames takes the small branch.
CapacityPreset capacity_preset(int sequence_length);

/// Highest cosine similarity between the candidate and any bank entry
/// (pinned included). Throws on an empty bank or any zero-norm vector.
double distractor_score(const std::vector<double>& candidate, const MemoryBank& bank);

/// Suppression decision for a candidate: its best similarity to the bank
/// falls below the threshold (look-alikes score high and are kept).
bool distractor_suppressed(const std::vector<double>& candidate, const MemoryBank& bank,
                           double threshold = 0.5);

/// Softmax weights over negated scaled uncertainties:
/// w_i = exp(-multiplier*sigma_i) / sum_j exp(-multiplier*sigma_j).
std::vector<double> uncertainty_weights(const std::vector<MemoryEntry>& entries,
                                        double multiplier = 1.0);

/// Weighted sum of entry features under uncertainty_weights.
std::vector<double> uncertainty_aggregate(const std::vector<MemoryEntry>& entries,
                                          double multiplier = 1.0);

/// Beam of alternative memory chains. Each node extends its parent with one
/// scored candidate; the cumulative score of a node is its parent's plus its
/// own step score.
struct PathwayNode {
    int parent = -1;  // index into nodes; -1 for the root
    MemoryEntry entry;
    int candidate_index = -1;  // which candidate of its step produced it
    double step_score = 0;
    double cumulative = 0;
    int depth = 0;
    int ordinal = 0;  // creation order, used as the final tie-break
};

struct PathwayTree {
    std::vector<PathwayNode> nodes;
    std::vector<int> leaves;  // active leaf indices, at most num_pathway
};

PathwayTree make_pathway_root(MemoryEntry entry);

/// Extends every active leaf with the candidates scoring at least iou_thre
/// (when none qualify, the single best candidate is kept so the beam cannot
/// go extinct), then retains the top num_pathway children by cumulative
/// score. Ties break toward the lower entry frame, then the lower creation
/// ordinal.
void pathway_step(PathwayTree& tree,
                  const std::vector<std::pair<MemoryEntry, double>>& candidates,
                  int num_pathway, double iou_thre);

/// Active leaf with the highest cumulative score (same tie-break).
const PathwayNode& pathway_select(const PathwayTree& tree);

/// Chain of candidate indices from the root to the given node.
std::vector<int> pathway_trace(const PathwayTree& tree, int node_index);

/// Indented text rendering of the tree for debugging.
std::string dump_pathways(const PathwayTree& tree);

/// Normalized 32x32 joint hue/saturation histogram; value is ignored so
/// brightness-only changes do not register.
std::vector<double> hsv_histogram(const ColorFrame& frame);

/// sqrt(1 - sum_i sqrt(p_i * q_i)) over two same-length distributions.
double bhattacharyya_distance(const std::vector<double>& p, const std::vector<double>& q);

/// True when the histogram distance between consecutive frames exceeds the
/// threshold.
bool scene_change(const ColorFrame& prev, const ColorFrame& cur, double threshold = 0.35);

}  // namespace voskit

#endif  // VOSKIT_MEMORY_HPP
