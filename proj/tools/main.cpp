#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "voskit/evaluate.hpp"
#include "voskit/fusion.hpp"
#include "voskit/image.hpp"
#include "voskit/kinematic.hpp"
#include "voskit/memory.hpp"
#include "voskit/metrics.hpp"
#include "voskit/propagate.hpp"
#include "voskit/report.hpp"
#include "voskit/rle.hpp"
#include "voskit/sampling.hpp"
#include "voskit/synthgen.hpp"

namespace fs = std::filesystem;
using voskit::EmptyEmptyRule;
using voskit::EvaluationReport;
using voskit::MetricConfig;
using voskit::SequenceResult;
using voskit::VideoSequence;

namespace {

// Settings shared by the scoring commands. Precedence, lowest to highest:
// built-in defaults, VOSKIT_JOBS (parallelism only), --config file, flags.
struct RunSettings {
    int jobs = 1;
    std::uint64_t seed = 42;
    MetricConfig metric;
};

struct ConfigFile {
    std::optional<int> jobs;
    std::optional<std::uint64_t> seed;
    std::optional<double> k_adapt;
    std::optional<double> tolerance;
    std::optional<std::string> empty_empty;
};

EmptyEmptyRule parse_empty_rule(const std::string& word) {
    if (word == "reward") return EmptyEmptyRule::kReward;
    if (word == "exclude") return EmptyEmptyRule::kExclude;
    throw std::runtime_error("empty-empty rule must be \"reward\" or \"exclude\", got \"" + word +
                             "\"");
}

ConfigFile load_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::runtime_error("config " + path + ": invalid JSON: " + e.what());
    }
    if (!doc.is_object()) throw std::runtime_error("config " + path + ": must be a JSON object");
    ConfigFile cfg;
    for (const auto& [key, value] : doc.items()) {
        if (key == "jobs")
            cfg.jobs = value.get<int>();
        else if (key == "seed")
            cfg.seed = value.get<std::uint64_t>();
        else if (key == "k_adapt")
            cfg.k_adapt = value.get<double>();
        else if (key == "tolerance")
            cfg.tolerance = value.get<double>();
        else if (key == "empty_empty")
            cfg.empty_empty = value.get<std::string>();
        else
            throw std::runtime_error("config " + path + ": unknown key \"" + key + "\"");
    }
    return cfg;
}

// Flag storage for one subcommand; only values the user actually passed
// (count > 0) override the config file.
struct ScoringFlags {
    std::string config_path;
    int jobs = 0;
    std::uint64_t seed = 0;
    double k_adapt = 0;
    double tolerance = 0;
    std::string empty_empty;
    bool has_seed_flag = false;

    void register_on(CLI::App* cmd, bool with_seed) {
        has_seed_flag = with_seed;
        cmd->add_option("--config", config_path, "JSON settings file (unknown keys rejected)");
        cmd->add_option("--jobs", jobs, "parallel workers (default: VOSKIT_JOBS or 1)");
        if (with_seed) cmd->add_option("--seed", seed, "scenario seed (default 42)");
        cmd->add_option("--k-adapt", k_adapt, "adaptive boundary tolerance scale (default 0.1)");
        cmd->add_option("--tolerance", tolerance,
                        "fixed boundary tolerance in pixels (default: from image diagonal)");
        cmd->add_option("--empty-empty", empty_empty,
                        "scoring when gt and prediction are both absent: reward | exclude")
            ->check(CLI::IsMember({"reward", "exclude"}));
    }

    RunSettings resolve(const CLI::App* cmd) const {
        RunSettings s;
        if (const char* env = std::getenv("VOSKIT_JOBS")) {
            char* end = nullptr;
            const long v = std::strtol(env, &end, 10);
            if (end == env || *end != '\0' || v < 1)
                throw std::runtime_error("VOSKIT_JOBS must be a positive integer, got \"" +
                                         std::string(env) + "\"");
            s.jobs = static_cast<int>(v);
        }
        if (cmd->count("--config")) {
            const ConfigFile cfg = load_config_file(config_path);
            if (cfg.jobs) s.jobs = *cfg.jobs;
            if (cfg.seed) s.seed = *cfg.seed;
            if (cfg.k_adapt) s.metric.k_adapt = *cfg.k_adapt;
            if (cfg.tolerance) s.metric.fixed_tolerance = *cfg.tolerance;
            if (cfg.empty_empty) s.metric.empty_empty = parse_empty_rule(*cfg.empty_empty);
        }
        if (cmd->count("--jobs")) s.jobs = jobs;
        if (has_seed_flag && cmd->count("--seed")) s.seed = seed;
        if (cmd->count("--k-adapt")) s.metric.k_adapt = k_adapt;
        if (cmd->count("--tolerance")) s.metric.fixed_tolerance = tolerance;
        if (cmd->count("--empty-empty")) s.metric.empty_empty = parse_empty_rule(empty_empty);
        if (s.jobs < 1) throw std::runtime_error("--jobs must be >= 1");
        return s;
    }
};

int cmd_evaluate(const std::string& gt, const std::string& pred, const std::string& out,
                 const RunSettings& settings) {
    voskit::EvaluateOptions options;
    options.metric = settings.metric;
    options.jobs = settings.jobs;
    const EvaluationReport report = voskit::evaluate_directories(gt, pred, options);
    voskit::write_report_files(report, out);
    std::cout << voskit::render_table(report);
    return 0;
}

// ---------------------------------------------------------------------------
// fuse

struct FuseManifest {
    std::vector<std::pair<std::string, double>> sources;  // directory, weight
    std::optional<double> pixel_threshold;
    std::optional<std::string> output;
};

FuseManifest load_manifest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open manifest: " + path);
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::runtime_error("manifest " + path + ": invalid JSON: " + e.what());
    }
    FuseManifest manifest;
    for (const auto& [key, value] : doc.items()) {
        if (key == "sources") {
            for (const auto& src : value) {
                std::string dir;
                double weight = 1.0;
                for (const auto& [skey, svalue] : src.items()) {
                    if (skey == "dir")
                        dir = svalue.get<std::string>();
                    else if (skey == "weight")
                        weight = svalue.get<double>();
                    else
                        throw std::runtime_error("manifest " + path + ": unknown source key \"" +
                                                 skey + "\"");
                }
                if (dir.empty())
                    throw std::runtime_error("manifest " + path + ": source without \"dir\"");
                if (weight <= 0.0)
                    throw std::runtime_error("manifest " + path + ": source " + dir +
                                             " has non-positive weight");
                manifest.sources.emplace_back(dir, weight);
            }
        } else if (key == "pixel_threshold") {
            manifest.pixel_threshold = value.get<double>();
        } else if (key == "output") {
            manifest.output = value.get<std::string>();
        } else {
            throw std::runtime_error("manifest " + path + ": unknown key \"" + key + "\"");
        }
    }
    if (manifest.sources.empty())
        throw std::runtime_error("manifest " + path + ": no sources listed");
    return manifest;
}

std::vector<std::string> sequence_names(const fs::path& dir) {
    std::vector<std::string> names;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.is_directory()) names.push_back(entry.path().filename().string());
    std::sort(names.begin(), names.end());
    return names;
}

// One label raster per source -> per-object 0/1 probability grids.
std::map<int, voskit::LogitGrid> label_grids(const voskit::LabeledFrame& frame) {
    std::map<int, voskit::LogitGrid> grids;
    for (int id : frame.object_ids()) {
        voskit::LogitGrid grid(frame.width, frame.height);
        for (std::size_t p = 0; p < frame.labels.size(); ++p)
            if (frame.labels[p] == id) grid.values[p] = 1.0;
        grids.emplace(id, std::move(grid));
    }
    return grids;
}

int cmd_fuse(const std::string& manifest_path, const std::string& out_flag,
             const RunSettings& settings) {
    const FuseManifest manifest = load_manifest(manifest_path);
    std::string out = out_flag;
    if (out.empty() && manifest.output) out = *manifest.output;
    if (out.empty())
        throw std::runtime_error("no output directory: pass --out or set \"output\" in the manifest");

    const std::vector<std::string> names = sequence_names(manifest.sources.front().first);
    if (names.empty())
        throw std::runtime_error("source " + manifest.sources.front().first +
                                 " has no sequence subdirectories");
    for (const auto& [dir, weight] : manifest.sources)
        for (const std::string& name : names)
            if (!fs::is_directory(fs::path(dir) / name))
                throw std::runtime_error("source " + dir + " misses sequence " + name);

    voskit::FusionConfig config;
    config.pixel_threshold = manifest.pixel_threshold;

    voskit::parallel_for(static_cast<int>(names.size()), settings.jobs, [&](int i) {
        const std::string& name = names[i];
        std::vector<voskit::SourcePrediction> sources;
        for (const auto& [dir, weight] : manifest.sources) {
            const VideoSequence seq = voskit::load_sequence(fs::path(dir) / name);
            voskit::SourcePrediction sp;
            sp.source_id = dir;
            sp.weight = weight;
            for (const voskit::LabeledFrame& frame : seq.frames)
                sp.frames.push_back(label_grids(frame));
            if (!sources.empty()) {
                const std::size_t want = sources.front().frames.size();
                if (sp.frames.size() != want)
                    throw std::runtime_error("sequence " + name + ": source " + dir + " has " +
                                             std::to_string(sp.frames.size()) + " frames, " +
                                             sources.front().source_id + " has " +
                                             std::to_string(want));
            }
            sources.push_back(std::move(sp));
        }
        VideoSequence fused;
        for (std::size_t t = 0; t < sources.front().frames.size(); ++t)
            fused.frames.push_back(voskit::resolve_frame(sources, static_cast<int>(t), config));
        voskit::save_sequence(fused, fs::path(out) / name);
    });
    std::cout << "fused " << names.size() << " sequence(s) from " << manifest.sources.size()
              << " source(s) into " << out << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// plan

int cmd_plan(const CLI::App* cmd, const std::string& strategy, int t_ori, int t_target, int clips,
             int clip_size, int head, const std::string& out) {
    voskit::SamplePlan plan;
    const bool has_target = cmd->count("--t-target") > 0;
    const bool has_clips = cmd->count("--clips") > 0 && cmd->count("--clip-size") > 0;
    if (strategy == "uniform" || strategy == "uniform+") {
        if (!has_clips)
            throw std::runtime_error("strategy " + strategy + " needs --clips and --clip-size");
        if (has_target && t_target != clips * clip_size)
            throw std::runtime_error("--t-target " + std::to_string(t_target) +
                                     " contradicts --clips * --clip-size = " +
                                     std::to_string(clips * clip_size));
        plan = strategy == "uniform" ? voskit::plan_uniform(t_ori, clips, clip_size)
                                     : voskit::plan_uniform_plus(t_ori, clips, clip_size);
    } else if (strategy == "wraparound") {
        if (!has_target) throw std::runtime_error("strategy wraparound needs --t-target");
        plan = voskit::plan_wraparound(t_ori, t_target);
    } else if (strategy == "wraparound+") {
        if (!has_target || !has_clips)
            throw std::runtime_error(
                "strategy wraparound+ needs --t-target, --clips and --clip-size");
        plan = voskit::plan_wraparound_plus(t_ori, t_target, clips, clip_size);
    } else if (strategy == "head") {
        if (!has_target || cmd->count("--head") == 0)
            throw std::runtime_error("strategy head needs --t-target and --head");
        plan = voskit::plan_head_hybrid(t_ori, t_target, head);
    } else if (strategy == "qframe") {
        throw std::runtime_error(
            "strategy qframe ranks frames by query relevance, which this tool cannot compute; "
            "inject a precomputed ranking through the library call plan_qframe()");
    } else {
        throw std::runtime_error("unknown strategy \"" + strategy +
                                 "\"; valid: uniform uniform+ wraparound wraparound+ head qframe");
    }
    const std::string text = voskit::serialize_plan(plan);
    if (out.empty()) {
        std::cout << text;
    } else {
        std::ofstream file(out, std::ios::binary);
        if (!file) throw std::runtime_error("cannot open " + out + " for writing");
        file << text;
        if (!file) throw std::runtime_error("failed writing " + out);
    }
    return 0;
}

// ---------------------------------------------------------------------------
// simulate

void write_text_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << text;
    if (!out) throw std::runtime_error("failed writing " + path.string());
}

std::string scene_change_log(const std::vector<voskit::ColorFrame>& rgb, double threshold) {
    std::ostringstream out;
    std::vector<double> prev = voskit::hsv_histogram(rgb.front());
    for (std::size_t t = 1; t < rgb.size(); ++t) {
        const std::vector<double> cur = voskit::hsv_histogram(rgb[t]);
        const double distance = voskit::bhattacharyya_distance(prev, cur);
        char line[96];
        std::snprintf(line, sizeof(line), "frame %zu distance %.6f change %d\n", t, distance,
                      distance > threshold ? 1 : 0);
        out << line;
        prev = cur;
    }
    return out.str();
}

nlohmann::ordered_json mpm_compare_json(const voskit::ScenarioBundle& bundle,
                                        const voskit::MpmRunResult& run_on,
                                        const SequenceResult& row_on,
                                        const SequenceResult& row_off) {
    const auto reappear_percent = [](const SequenceResult& row) -> nlohmann::ordered_json {
        if (row.objects.empty() || !row.objects.front().j_reappear) return nullptr;
        return std::round(*row.objects.front().j_reappear * 10000.0) / 100.0;
    };
    nlohmann::ordered_json doc;
    doc["scenario"] = bundle.name;
    doc["j_reappear_mpm_on"] = reappear_percent(row_on);
    doc["j_reappear_mpm_off"] = reappear_percent(row_off);
    doc["occluded"] = nlohmann::ordered_json::array();
    for (const voskit::ObjectTrack& obj : bundle.script.objects)
        for (std::size_t t = 0; t < obj.steps.size(); ++t) {
            if (obj.steps[t].visible) continue;
            nlohmann::ordered_json entry;
            entry["frame"] = t;
            entry["object"] = obj.id;
            const auto& peaks = run_on.prior_peaks.at(t);
            const auto it = peaks.find(obj.id);
            if (it != peaks.end())
                entry["prior_peak"] = nlohmann::ordered_json::array(
                    {it->second.first, it->second.second});
            else
                entry["prior_peak"] = nullptr;
            entry["script_center"] =
                nlohmann::ordered_json::array({obj.steps[t].cx, obj.steps[t].cy});
            doc["occluded"].push_back(std::move(entry));
        }
    return doc;
}

int cmd_simulate(const std::string& scenario, const std::string& out, const std::string& mpm_mode,
                 const RunSettings& settings) {
    const voskit::ScenarioBundle bundle = voskit::make_scenario(scenario, settings.seed);
    const fs::path root(out);
    fs::create_directories(root);
    voskit::save_script(bundle.script, (root / "script.json").string());
    voskit::save_sequence(bundle.gt, root / "gt" / bundle.name);
    voskit::save_rle(bundle.gt, root / "gt.rle");
    voskit::save_color_sequence(bundle.rgb, root / "rgb");

    std::vector<std::pair<std::string, VideoSequence>> rows;
    voskit::MpmConfig no_prior = bundle.mpm;
    no_prior.beta = 0.0;

    std::optional<nlohmann::ordered_json> compare_doc;
    if (bundle.name == "linear-occlusion") {
        voskit::MpmConfig with_prior = bundle.mpm;
        with_prior.beta = 1.0;
        const voskit::MpmRunResult run_off =
            voskit::run_with_prior(bundle.trackers.front(), bundle.gt, no_prior);
        const voskit::MpmRunResult run_on =
            voskit::run_with_prior(bundle.trackers.front(), bundle.gt, with_prior);
        if (mpm_mode == "off" || mpm_mode == "both")
            rows.emplace_back("mpm_off", run_off.prediction);
        if (mpm_mode == "on" || mpm_mode == "both") rows.emplace_back("mpm_on", run_on.prediction);
        const SequenceResult cmp_off =
            voskit::evaluate_named("mpm_off", bundle.gt, run_off.prediction, settings.metric);
        const SequenceResult cmp_on =
            voskit::evaluate_named("mpm_on", bundle.gt, run_on.prediction, settings.metric);
        compare_doc = mpm_compare_json(bundle, run_on, cmp_on, cmp_off);
    } else {
        for (std::size_t k = 0; k < bundle.trackers.size(); ++k)
            rows.emplace_back(
                "t" + std::to_string(k),
                voskit::run_with_prior(bundle.trackers[k], bundle.gt, no_prior).prediction);
        if (bundle.trackers.size() > 1) {
            std::vector<voskit::SourcePrediction> sources;
            for (std::size_t k = 0; k < bundle.trackers.size(); ++k) {
                voskit::SourcePrediction sp;
                sp.source_id = "t" + std::to_string(k);
                sp.weight = 1.0;
                for (const auto& frame : bundle.trackers[k].frames) {
                    std::map<int, voskit::LogitGrid> grids;
                    for (const auto& [id, logits] : frame) {
                        voskit::LogitGrid grid(logits.width, logits.height);
                        for (std::size_t p = 0; p < logits.values.size(); ++p)
                            grid.values[p] = logits.values[p] > 0.0 ? 1.0 : 0.0;
                        grids.emplace(id, std::move(grid));
                    }
                    sp.frames.push_back(std::move(grids));
                }
                sources.push_back(std::move(sp));
            }
            VideoSequence fused;
            fused.frames.push_back(bundle.gt.frames.front());
            for (std::size_t t = 1; t < bundle.gt.frames.size(); ++t)
                fused.frames.push_back(voskit::resolve_frame(sources, static_cast<int>(t)));
            rows.emplace_back("fused", std::move(fused));
        }
    }

    for (const auto& [name, prediction] : rows)
        voskit::save_sequence(prediction, root / ("pred_" + name) / bundle.name);

    std::vector<SequenceResult> results(rows.size());
    voskit::parallel_for(static_cast<int>(rows.size()), settings.jobs, [&](int i) {
        results[i] =
            voskit::evaluate_named(rows[i].first, bundle.gt, rows[i].second, settings.metric);
    });
    const EvaluationReport report = voskit::assemble_report(std::move(results));
    voskit::write_report_files(report, root);

    if (compare_doc) write_text_file(root / "mpm_compare.json", compare_doc->dump(2) + "\n");
    if (bundle.name == "scene-cut")
        write_text_file(root / "scene_change.log", scene_change_log(bundle.rgb, 0.35));

    std::cout << voskit::render_table(report);
    return 0;
}

// ---------------------------------------------------------------------------
// report

std::optional<double> percent_or_none(const nlohmann::json& v) {
    if (v.is_null()) return std::nullopt;
    return v.get<double>();
}

// Rebuilds the table from the stored percent fields verbatim — no fraction
// roundtrip, so a re-rendered table matches the original byte for byte.
int cmd_report(const std::string& in, const std::string& out) {
    std::ifstream file(in, std::ios::binary);
    if (!file) throw std::runtime_error("cannot open " + in);
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(file);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::runtime_error(in + ": invalid JSON: " + e.what());
    }
    const auto row_scores = [](const nlohmann::json& o) {
        return std::array<std::optional<double>, 7>{
            o.at("j").get<double>(),          o.at("f").get<double>(),
            o.at("jf").get<double>(),         o.at("f_adaptive").get<double>(),
            o.at("jf_adaptive").get<double>(), percent_or_none(o.at("jf_adaptive_disappear")),
            percent_or_none(o.at("jf_adaptive_reappear"))};
    };
    std::vector<voskit::PercentRow> rows;
    std::vector<std::string> warnings;
    for (const auto& s : doc.at("sequences")) {
        const std::string name = s.at("name").get<std::string>();
        for (const auto& o : s.at("objects"))
            rows.push_back(voskit::PercentRow{name, o.at("id").get<int>(), row_scores(o)});
        if (s.contains("warnings"))
            for (const auto& w : s.at("warnings")) warnings.push_back(w.get<std::string>());
    }
    const auto& agg = doc.at("aggregate");
    const voskit::PercentRow total{"aggregate", agg.at("rows").get<int>(), row_scores(agg)};
    const std::string table = voskit::render_percent_table(rows, total, warnings);
    std::cout << table;
    if (!out.empty()) write_text_file(out, table);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"video object segmentation scoring, fusion, sampling and simulation toolkit"};
    app.require_subcommand(1);

    auto* eval = app.add_subcommand("evaluate", "score a prediction directory against ground truth");
    std::string eval_gt, eval_pred, eval_out;
    eval->add_option("--gt", eval_gt, "ground-truth directory (one subdirectory per sequence)")
        ->required();
    eval->add_option("--pred", eval_pred, "prediction directory")->required();
    eval->add_option("--out", eval_out, "output directory for report.json / report.txt")
        ->required();
    ScoringFlags eval_flags;
    eval_flags.register_on(eval, false);

    auto* fuse = app.add_subcommand("fuse", "merge prediction directories by confidence voting");
    std::string fuse_manifest, fuse_out;
    fuse->add_option("--manifest", fuse_manifest, "JSON manifest listing sources and weights")
        ->required();
    fuse->add_option("--out", fuse_out, "output directory (overrides manifest)");
    ScoringFlags fuse_flags;
    fuse_flags.register_on(fuse, false);

    auto* plan = app.add_subcommand("plan", "emit a frame-sampling plan");
    std::string plan_strategy, plan_out;
    int plan_t_ori = 0, plan_t_target = 0, plan_clips = 0, plan_clip_size = 0, plan_head = 0;
    plan->add_option("--strategy", plan_strategy,
                     "uniform | uniform+ | wraparound | wraparound+ | head | qframe")
        ->required();
    plan->add_option("--t-ori", plan_t_ori, "original video length")->required();
    plan->add_option("--t-target", plan_t_target, "target sampled length");
    plan->add_option("--clips", plan_clips, "number of clips");
    plan->add_option("--clip-size", plan_clip_size, "frames per clip");
    plan->add_option("--head", plan_head, "leading frames kept verbatim (head strategy)");
    plan->add_option("--out", plan_out, "output file (default: stdout)");

    auto* sim = app.add_subcommand("simulate", "run a named synthetic scenario end to end");
    std::string sim_scenario, sim_out, sim_mpm = "both";
    sim->add_option("--scenario", sim_scenario,
                    "linear-occlusion | twin-distractor | scene-cut | reappear-far")
        ->required();
    sim->add_option("--out", sim_out, "output directory")->required();
    sim->add_option("--mpm", sim_mpm, "motion-prior variant to emit: on | off | both")
        ->check(CLI::IsMember({"on", "off", "both"}));
    ScoringFlags sim_flags;
    sim_flags.register_on(sim, true);

    auto* rep = app.add_subcommand("report", "render a report.json as an aligned table");
    std::string rep_in, rep_out;
    rep->add_option("--in", rep_in, "report.json path")->required();
    rep->add_option("--out", rep_out, "also write the table to this file");

    CLI11_PARSE(app, argc, argv);

    try {
        if (eval->parsed()) return cmd_evaluate(eval_gt, eval_pred, eval_out, eval_flags.resolve(eval));
        if (fuse->parsed()) return cmd_fuse(fuse_manifest, fuse_out, fuse_flags.resolve(fuse));
        if (plan->parsed())
            return cmd_plan(plan, plan_strategy, plan_t_ori, plan_t_target, plan_clips,
                            plan_clip_size, plan_head, plan_out);
        if (sim->parsed()) return cmd_simulate(sim_scenario, sim_out, sim_mpm, sim_flags.resolve(sim));
        if (rep->parsed()) return cmd_report(rep_in, rep_out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
