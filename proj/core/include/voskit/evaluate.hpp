#ifndef VOSKIT_EVALUATE_HPP
#define VOSKIT_EVALUATE_HPP

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "voskit/mask.hpp"
#include "voskit/metrics.hpp"

namespace voskit {

/// Runs fn(i) for i in [0, n) on up to `jobs` workers pulling from a shared
/// counter. Callers index output slots by i, so results are position-stable
/// and independent of scheduling. The first exception thrown by any worker
/// is rethrown after the pool drains.
void parallel_for(int n, int jobs, const std::function<void(int)>& fn);

struct EvaluateOptions {
    MetricConfig metric;
    int jobs = 1;
};

struct SequenceResult {
    std::string name;
    std::vector<ObjectReport> objects;
    std::vector<std::string> warnings;
};

struct EvaluationReport {
    std::vector<SequenceResult> sequences;
    AggregateReport aggregate;
};

/// Scores one named sequence pair and collects its per-object warnings.
SequenceResult evaluate_named(const std::string& name, const VideoSequence& gt,
                              const VideoSequence& pred, const MetricConfig& config);

/// Dataset aggregate over already-scored sequences (order preserved).
EvaluationReport assemble_report(std::vector<SequenceResult> sequences);

/// Scores every sequence subdirectory of `gt_dir` against the same-named
/// subdirectory of `pred_dir`. A sequence missing from `pred_dir` is scored
/// against all-empty predictions and noted in the warnings rather than
/// failing the run. Sequences are processed by a pool of `jobs` workers and
/// merged back in directory-name order, so the report does not depend on the
/// parallelism degree.
EvaluationReport evaluate_directories(const std::filesystem::path& gt_dir,
                                      const std::filesystem::path& pred_dir,
                                      const EvaluateOptions& options = {});

}  // namespace voskit

#endif  // VOSKIT_EVALUATE_HPP
