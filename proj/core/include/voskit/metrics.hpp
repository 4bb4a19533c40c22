#ifndef VOSKIT_METRICS_HPP
#define VOSKIT_METRICS_HPP

#include <optional>
#include <string>
#include <vector>

#include "voskit/mask.hpp"

namespace voskit {

/// What to score when ground truth and prediction are both empty on a frame:
/// reward absence as a perfect frame, or drop the frame from the means.
enum class EmptyEmptyRule { kReward, kExclude };

struct MetricConfig {
    /// Scale factor for the size-adaptive boundary tolerance.
    double k_adapt = 0.1;
    /// Fixed boundary tolerance in pixels; negative means derive it from the
    /// image diagonal (default_tolerance).
    double fixed_tolerance = -1.0;
    EmptyEmptyRule empty_empty = EmptyEmptyRule::kReward;
};

/// Per-frame scores for one object. j is region overlap, f is boundary
/// agreement at the fixed tolerance, f_adaptive at the size-adaptive one.
struct FrameScore {
    int frame = 0;
    double j = 0;
    double f = 0;
    double f_adaptive = 0;
    bool gt_present = false;
    bool pred_present = false;
};

/// Scores for one (sequence, object) row: per-frame detail plus means over
/// the evaluated frames. Frame 0 carries the given annotation and is never
/// evaluated. Subset means are absent ("n/a") when the subset is empty.
struct ObjectReport {
    int object_id = 0;
    int evaluated_frames = 0;
    std::vector<FrameScore> frames;

    double j = 0;
    double f = 0;
    double f_adaptive = 0;
    double jf() const { return (j + f) / 2.0; }
    double jf_adaptive() const { return (j + f_adaptive) / 2.0; }

    int disappear_frames = 0;
    int reappear_frames = 0;
    std::optional<double> jf_adaptive_disappear;
    std::optional<double> jf_adaptive_reappear;
    std::optional<double> j_disappear;
    std::optional<double> j_reappear;

    std::vector<std::string> warnings;
};

/// Unweighted means over a set of (sequence, object) rows; subset metrics
/// average only the rows where they are defined.
struct AggregateReport {
    int row_count = 0;
    double j = 0;
    double f = 0;
    double f_adaptive = 0;
    double jf() const { return (j + f) / 2.0; }
    double jf_adaptive() const { return (j + f_adaptive) / 2.0; }
    std::optional<double> jf_adaptive_disappear;
    std::optional<double> jf_adaptive_reappear;
};

/// Intersection over union. Both masks empty scores 1.0 (correctly predicted
/// absence); exactly one empty scores 0.0.
double region_similarity(const BinaryMask& gt, const BinaryMask& pred);

/// Boundary F-measure at a pixel tolerance: precision is the fraction of
/// prediction boundary pixels within `tolerance` of the ground-truth
/// boundary, recall the converse, and the score their harmonic mean. Empty
/// conventions as region_similarity; precision+recall == 0 scores 0.
double boundary_accuracy(const BinaryMask& gt, const BinaryMask& pred, double tolerance);

/// Fixed tolerance from the image diagonal: round(0.008 * diagonal), at
/// least 1.
int default_tolerance(int width, int height);

/// Boundary F-measure with the tolerance adapted to object scale:
/// max(1, round(k_adapt * sqrt(foreground area))), using the ground-truth
/// area, or the prediction's when ground truth is empty.
double adaptive_boundary_accuracy(const BinaryMask& gt, const BinaryMask& pred,
                                  double k_adapt = 0.1);

/// Scores object `id` across a sequence pair. Frames 1..T-1 are evaluated
/// (frame 0 is the given annotation). Disappearance frames are those where
/// the ground-truth object is absent; reappearance frames are present frames
/// preceded by an absent evaluated frame.
ObjectReport sequence_scores(const VideoSequence& gt, const VideoSequence& pred, int id,
                             const MetricConfig& config = {});

/// All ground-truth objects of a sequence in one fused pass over the frames;
/// equivalent to calling sequence_scores per ID but considerably faster.
std::vector<ObjectReport> evaluate_sequence(const VideoSequence& gt, const VideoSequence& pred,
                                            const MetricConfig& config = {});

AggregateReport dataset_aggregate(const std::vector<ObjectReport>& rows);

}  // namespace voskit

#endif  // VOSKIT_METRICS_HPP
