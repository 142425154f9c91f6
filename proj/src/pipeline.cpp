#include "metacomb/pipeline.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdio>

#include "metacomb/data_io.hpp"
#include "metacomb/log.hpp"

namespace metacomb {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace {

// Unlinks everything registered unless commit() was reached, so a failing
// multi-file command leaves no partial output set.
class OutputTracker {
public:
    ~OutputTracker() {
        if (committed_) return;
        for (const auto& p : paths_) {
            std::error_code ec;
            fs::remove(p, ec);
        }
    }
    void add(const fs::path& p) { paths_.push_back(p); }
    std::vector<fs::path> commit() {
        committed_ = true;
        return paths_;
    }

private:
    std::vector<fs::path> paths_;
    bool committed_ = false;
};

const std::array<std::string, 3> kSplitNames = {"train", "dev", "test"};

} // namespace

PipelineConfig PipelineConfig::load(const fs::path& config_path) {
    ordered_json j;
    try {
        j = ordered_json::parse(read_text_file(config_path));
    } catch (const nlohmann::json::exception& e) {
        throw DataError("invalid pipeline config " + config_path.string() + ": " + e.what());
    }
    const fs::path base = config_path.parent_path();
    try {
        if (j.at("format_version").get<std::string>() != "1") {
            throw DataError("unsupported pipeline config format_version");
        }
        PipelineConfig cfg;
        cfg.model_ids = j.at("model_ids").get<std::vector<std::string>>();
        for (const auto& [split, files] : j.at("predictions").items()) {
            for (const auto& [model, path] : files.items()) {
                cfg.predictions[split][model] = base / path.get<std::string>();
            }
        }
        for (const auto& [split, path] : j.at("gold").items()) {
            cfg.gold[split] = base / path.get<std::string>();
        }
        cfg.output_dir = base;
        if (j.contains("output_dir")) {
            cfg.output_dir = base / j.at("output_dir").get<std::string>();
        }
        const auto& t = j.at("training");
        cfg.training.learning_rate = t.at("learning_rate").get<double>();
        cfg.training.max_epochs = t.at("max_epochs").get<int>();
        cfg.training.grad_tolerance = t.at("grad_tolerance").get<double>();
        cfg.training.l2_penalty = t.at("l2_penalty").get<double>();
        cfg.training.seed = t.at("seed").get<std::uint64_t>();
        cfg.training.validate();
        const auto& g = j.at("grid");
        cfg.grid.base = g.at("base").get<double>();
        cfg.grid.max = g.at("max").get<double>();
        cfg.grid.step = g.at("step").get<double>();
        cfg.grid.validate();
        const auto& e = j.at("evaluation");
        cfg.evaluation.accuracy_mode = parse_accuracy_mode(e.at("accuracy_mode").get<std::string>());
        cfg.evaluation.fallback_argmax = e.at("fallback_argmax").get<bool>();
        cfg.evaluation.norm_threshold = e.at("norm_threshold").get<double>();
        return cfg;
    } catch (const nlohmann::json::exception& e) {
        throw DataError("invalid pipeline config " + config_path.string() + ": " + e.what());
    }
}

std::vector<PredictionTable> PipelineConfig::load_split_tables(const std::string& split) const {
    const auto it = predictions.find(split);
    if (it == predictions.end()) {
        throw DataError("pipeline config lists no predictions for split '" + split + "'");
    }
    std::vector<PredictionTable> tables;
    for (const auto& id : model_ids) {
        const auto f = it->second.find(id);
        if (f == it->second.end()) {
            throw DataError("pipeline config lists no " + split + " predictions for model '" +
                            id + "'");
        }
        PredictionTable t = load_predictions(f->second);
        t.source_model = id;  // the id in the config is authoritative
        tables.push_back(std::move(t));
    }
    return tables;
}

GoldLabels PipelineConfig::load_split_gold(const std::string& split) const {
    const auto it = gold.find(split);
    if (it == gold.end()) {
        throw DataError("pipeline config lists no gold labels for split '" + split + "'");
    }
    return load_gold(it->second);
}

EvaluationReport evaluate_predictions(const PredictionTable& combined, const GoldLabels& gold,
                                      const ThresholdVector* thresholds,
                                      const EvaluationOptions& opts) {
    combined.validate();
    gold.validate();
    if (combined.sample_ids != gold.sample_ids) {
        throw DataError("combined predictions and gold labels disagree on sample ids");
    }
    const ThresholdVector tv = thresholds
                                   ? *thresholds
                                   : uniform_thresholds(combined.class_names, 0.5);

    const auto groups = std::span<const std::string>(gold.groups);
    if (gold.class_names() == combined.class_names) {
        const LabelMatrix pred = apply_thresholds(combined, tv, opts.fallback_argmax);
        return evaluate_labels(gold.labels, pred, opts.accuracy_mode, groups);
    }

    // Binary complement: a single scored class against a two-class taxonomy.
    if (combined.cols() == 1 && gold.class_names().size() == 2) {
        const std::string& positive = combined.class_names[0];
        const auto& names = gold.class_names();
        if (names[0] == positive || names[1] == positive) {
            const LabelMatrix pos_pred = apply_thresholds(combined, tv, false);
            LabelMatrix pred(names, combined.rows());
            const std::size_t pos_col = names[0] == positive ? 0 : 1;
            for (std::size_t i = 0; i < combined.rows(); ++i) {
                const bool p = pos_pred.at(i, 0) != 0;
                pred.set(i, pos_col, p);
                pred.set(i, 1 - pos_col, !p);
            }
            return evaluate_labels(gold.labels, pred, opts.accuracy_mode, groups);
        }
    }
    throw DataError("gold label classes do not match the combined prediction classes");
}

std::vector<fs::path> cmd_generate(const SyntheticSpec& spec, const fs::path& out_dir) {
    spec.validate();
    fs::create_directories(out_dir);
    const SyntheticData data = generate(spec);

    OutputTracker tracker;

    // Per-split row indices, in sample order.
    std::map<std::string, std::vector<std::size_t>> split_rows;
    for (std::size_t i = 0; i < data.gold.rows(); ++i) {
        split_rows[split_name(data.gold.splits[i])].push_back(i);
    }

    ordered_json pred_json = ordered_json::object();
    ordered_json gold_json = ordered_json::object();
    for (const auto& split : kSplitNames) {
        const auto it = split_rows.find(split);
        if (it == split_rows.end() || it->second.empty()) continue;

        GoldLabels g = data.gold.subset(it->second);
        g.splits.clear();  // the file name carries the split
        const std::string gold_name = "gold_" + split + ".csv";
        const fs::path gold_path = out_dir / gold_name;
        save_gold(g, gold_path);
        tracker.add(gold_path);
        gold_json[split] = gold_name;

        ordered_json files = ordered_json::object();
        for (const auto& table : data.model_tables) {
            const PredictionTable sub = table_subset(table, it->second);
            const std::string name = "model_" + table.source_model + "_" + split + ".csv";
            const fs::path path = out_dir / name;
            save_predictions(sub, path);
            tracker.add(path);
            files[table.source_model] = name;
        }
        pred_json[split] = files;
    }

    const fs::path spec_path = out_dir / "synth_spec.json";
    write_text_file_atomic(spec_path, spec.to_json_string());
    tracker.add(spec_path);

    ordered_json cfg;
    cfg["format_version"] = "1";
    ordered_json ids = ordered_json::array();
    for (const auto& m : spec.models) ids.push_back(m.id);
    cfg["model_ids"] = ids;
    cfg["predictions"] = pred_json;
    cfg["gold"] = gold_json;
    TrainingConfig tc;
    tc.seed = spec.seed;
    cfg["training"] = {{"learning_rate", tc.learning_rate},
                       {"max_epochs", tc.max_epochs},
                       {"grad_tolerance", tc.grad_tolerance},
                       {"l2_penalty", tc.l2_penalty},
                       {"seed", tc.seed}};
    GridSpec grid;
    cfg["grid"] = {{"base", grid.base}, {"max", grid.max}, {"step", grid.step}};
    cfg["evaluation"] = {{"accuracy_mode", "exact"},
                         {"fallback_argmax", false},
                         {"norm_threshold", 0.5}};
    const fs::path cfg_path = out_dir / "config.json";
    write_text_file_atomic(cfg_path, cfg.dump(2) + "\n");
    tracker.add(cfg_path);

    log_info("generated " + std::to_string(spec.n_samples) + " samples into " + out_dir.string());
    return tracker.commit();
}

std::vector<fs::path> cmd_train_combiner(const PipelineConfig& cfg) {
    const auto tables = cfg.load_split_tables("dev");
    GoldLabels gold = cfg.load_split_gold("dev");
    // Gold may carry a wider taxonomy than the scored classes (the binary
    // task scores only the positive class); restrict to the scored columns.
    if (gold.class_names() != tables.front().class_names) {
        gold = gold.select_classes(tables.front().class_names);
    }
    const CombinerModel model = train_br_combiners(tables, gold, cfg.training);

    fs::create_directories(cfg.output_dir);
    OutputTracker tracker;
    write_text_file_atomic(cfg.combiner_path(), model.to_json_string());
    tracker.add(cfg.combiner_path());

    for (std::size_t c = 0; c < model.class_names.size(); ++c) {
        const auto d = weight_diagnostics(model.per_class[c]);
        std::printf("class %s: W=%s sign_homogeneous=%s bias=%s bias_sign_consistent=%s "
                    "epochs=%d grad_norm=%s\n",
                    model.class_names[c].c_str(), format_double(d.weight_sum).c_str(),
                    d.sign_homogeneous ? "yes" : "no",
                    format_double(model.per_class[c].bias).c_str(),
                    d.bias_sign_consistent ? "yes" : "no", model.meta[c].epochs_run,
                    format_double(model.meta[c].final_grad_norm).c_str());
    }
    return tracker.commit();
}

std::vector<fs::path> cmd_train_thresholds(const PipelineConfig& cfg) {
    const CombinerModel model =
        CombinerModel::from_json_string(read_text_file(cfg.combiner_path()));
    const auto tables = cfg.load_split_tables("dev");
    GoldLabels gold = cfg.load_split_gold("dev");
    if (gold.class_names() != model.class_names) {
        gold = gold.select_classes(model.class_names);
    }
    const PredictionTable combined = predict_combined(model, tables);
    const ThresholdVector tv = train_cs_cut(combined, gold, cfg.grid);

    fs::create_directories(cfg.output_dir);
    OutputTracker tracker;
    write_text_file_atomic(cfg.thresholds_path(), tv.to_json_string());
    tracker.add(cfg.thresholds_path());

    for (std::size_t c = 0; c < tv.class_names.size(); ++c) {
        std::printf("class %s: threshold=%s dev_f1=%s\n", tv.class_names[c].c_str(),
                    format_double(tv.thresholds[c]).c_str(),
                    format_double(tv.achieved_f1[c]).c_str());
    }
    return tracker.commit();
}

std::vector<fs::path> cmd_predict(const PipelineConfig& cfg, const std::string& split) {
    const CombinerModel model =
        CombinerModel::from_json_string(read_text_file(cfg.combiner_path()));
    const auto tables = cfg.load_split_tables(split);
    const PredictionTable combined = predict_combined(model, tables);

    fs::create_directories(cfg.output_dir);
    OutputTracker tracker;
    save_predictions(combined, cfg.combined_path(split));
    tracker.add(cfg.combined_path(split));
    std::printf("wrote %zu combined predictions for split %s\n", combined.rows(), split.c_str());
    return tracker.commit();
}

std::vector<fs::path> cmd_evaluate(const PipelineConfig& cfg, bool with_tm,
                                   const std::string& split) {
    const CombinerModel model =
        CombinerModel::from_json_string(read_text_file(cfg.combiner_path()));
    const auto tables = cfg.load_split_tables(split);
    const GoldLabels gold = cfg.load_split_gold(split);
    const PredictionTable combined = predict_combined(model, tables);

    std::optional<ThresholdVector> tv;
    if (with_tm) {
        tv = ThresholdVector::from_json_string(read_text_file(cfg.thresholds_path()));
    }
    const EvaluationReport report =
        evaluate_predictions(combined, gold, tv ? &*tv : nullptr, cfg.evaluation);

    fs::create_directories(cfg.output_dir);
    OutputTracker tracker;
    write_text_file_atomic(cfg.evaluation_path(with_tm), report.to_json_string());
    tracker.add(cfg.evaluation_path(with_tm));

    std::printf("%s on %s: macro_f1=%s accuracy=%s (%s)\n", with_tm ? "mlt+tm" : "mlt",
                split.c_str(), format_double(report.macro_f1).c_str(),
                format_double(report.accuracy).c_str(),
                accuracy_mode_name(report.accuracy_mode));
    return tracker.commit();
}

std::vector<fs::path> cmd_verify_theorem(const PipelineConfig& cfg) {
    const CombinerModel model =
        CombinerModel::from_json_string(read_text_file(cfg.combiner_path()));
    const auto tables = cfg.load_split_tables("dev");
    GoldLabels gold = cfg.load_split_gold("dev");
    if (gold.class_names() != model.class_names) {
        gold = gold.select_classes(model.class_names);
    }
    const VerificationReport report =
        verify_theorem1(model, tables, gold, cfg.evaluation.norm_threshold);

    fs::create_directories(cfg.output_dir);
    OutputTracker tracker;
    write_text_file_atomic(cfg.verification_path(), report.to_json_string());
    tracker.add(cfg.verification_path());

    for (const auto& v : report.per_class) {
        if (v.applicable) {
            std::printf("class %s: W=%s interval=[%s, %s] contained=%s\n", v.class_name.c_str(),
                        format_double(v.weight_sum).c_str(), format_double(v.interval.lo).c_str(),
                        format_double(v.interval.hi).c_str(), v.contained ? "yes" : "no");
        } else {
            std::printf("class %s: W=%s not applicable (%s)\n", v.class_name.c_str(),
                        format_double(v.weight_sum).c_str(), v.skip_reason.c_str());
        }
    }
    return tracker.commit();
}

} // namespace metacomb
