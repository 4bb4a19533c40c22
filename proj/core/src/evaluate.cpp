#include "voskit/evaluate.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <functional>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "voskit/image.hpp"

namespace voskit {

SequenceResult evaluate_named(const std::string& name, const VideoSequence& gt,
                              const VideoSequence& pred, const MetricConfig& config) {
    SequenceResult result;
    result.name = name;
    result.objects = evaluate_sequence(gt, pred, config);
    for (const ObjectReport& obj : result.objects)
        for (const std::string& w : obj.warnings)
            result.warnings.push_back(name + "/" + std::to_string(obj.object_id) + ": " + w);
    return result;
}

EvaluationReport assemble_report(std::vector<SequenceResult> sequences) {
    EvaluationReport report;
    report.sequences = std::move(sequences);
    std::vector<ObjectReport> rows;
    for (const SequenceResult& seq : report.sequences)
        rows.insert(rows.end(), seq.objects.begin(), seq.objects.end());
    report.aggregate = dataset_aggregate(rows);
    return report;
}

void parallel_for(int n, int jobs, const std::function<void(int)>& fn) {
    if (n <= 0) return;
    jobs = std::clamp(jobs, 1, n);
    if (jobs == 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (;;) {
            const int i = next.fetch_add(1);
            if (i >= n) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    for (int w = 0; w < jobs; ++w) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

EvaluationReport evaluate_directories(const std::filesystem::path& gt_dir,
                                      const std::filesystem::path& pred_dir,
                                      const EvaluateOptions& options) {
    if (!std::filesystem::is_directory(gt_dir))
        throw std::runtime_error("ground-truth directory not found: " + gt_dir.string());
    if (!std::filesystem::is_directory(pred_dir))
        throw std::runtime_error("prediction directory not found: " + pred_dir.string());

    std::vector<std::string> names;
    for (const auto& entry : std::filesystem::directory_iterator(gt_dir))
        if (entry.is_directory()) names.push_back(entry.path().filename().string());
    std::sort(names.begin(), names.end());
    if (names.empty())
        throw std::runtime_error("no sequence subdirectories in " + gt_dir.string());

    std::vector<SequenceResult> results(names.size());
    parallel_for(static_cast<int>(names.size()), options.jobs, [&](int i) {
        const std::string& name = names[i];
        const VideoSequence gt = load_sequence(gt_dir / name);
        VideoSequence pred;
        std::string missing_note;
        if (std::filesystem::is_directory(pred_dir / name)) {
            pred = load_sequence(pred_dir / name);
        } else {
            for (const LabeledFrame& frame : gt.frames)
                pred.frames.emplace_back(frame.width, frame.height);
            missing_note = name + ": prediction missing, scored as all-empty";
        }
        results[i] = evaluate_named(name, gt, pred, options.metric);
        if (!missing_note.empty())
            results[i].warnings.insert(results[i].warnings.begin(), missing_note);
    });

    return assemble_report(std::move(results));
}

}  // namespace voskit
