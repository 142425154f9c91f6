#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "metacomb/combiner.hpp"
#include "metacomb/metrics.hpp"
#include "metacomb/synthgen.hpp"
#include "metacomb/theorem.hpp"
#include "metacomb/threshold.hpp"

namespace metacomb {

struct EvaluationOptions {
    AccuracyMode accuracy_mode{AccuracyMode::exact_match};
    bool fallback_argmax{false};
    double norm_threshold{0.5};
};

// File-level pipeline description.  Paths are stored relative to the config
// file and resolved against its directory on load.
struct PipelineConfig {
    std::vector<std::string> model_ids;
    // split -> model id -> CSV path
    std::map<std::string, std::map<std::string, std::filesystem::path>> predictions;
    // split -> gold CSV path
    std::map<std::string, std::filesystem::path> gold;
    std::filesystem::path output_dir;
    TrainingConfig training;
    GridSpec grid;
    EvaluationOptions evaluation;

    static PipelineConfig load(const std::filesystem::path& config_path);

    std::vector<PredictionTable> load_split_tables(const std::string& split) const;
    GoldLabels load_split_gold(const std::string& split) const;

    std::filesystem::path combiner_path() const { return output_dir / "combiner.json"; }
    std::filesystem::path thresholds_path() const { return output_dir / "thresholds.json"; }
    std::filesystem::path combined_path(const std::string& split) const {
        return output_dir / ("combined_" + split + ".csv");
    }
    std::filesystem::path evaluation_path(bool with_tm) const {
        return output_dir / (with_tm ? "evaluation_mlt_tm.json" : "evaluation_mlt.json");
    }
    std::filesystem::path verification_path() const {
        return output_dir / "theorem_verification.json";
    }
};

// Thresholded evaluation of a combined prediction table against gold labels.
// When the table carries a single class and the gold taxonomy is that class
// plus one other, the missing class is scored as the complement (a sample
// below the positive threshold counts as the other class).
EvaluationReport evaluate_predictions(const PredictionTable& combined, const GoldLabels& gold,
                                      const ThresholdVector* thresholds,
                                      const EvaluationOptions& opts);

// Command bodies behind the CLI.  Each returns the list of files it wrote;
// on error nothing is left behind (single files are written atomically and
// multi-file commands unlink earlier outputs before rethrowing).

std::vector<std::filesystem::path> cmd_generate(const SyntheticSpec& spec,
                                                const std::filesystem::path& out_dir);

std::vector<std::filesystem::path> cmd_train_combiner(const PipelineConfig& cfg);

std::vector<std::filesystem::path> cmd_train_thresholds(const PipelineConfig& cfg);

std::vector<std::filesystem::path> cmd_predict(const PipelineConfig& cfg,
                                               const std::string& split);

std::vector<std::filesystem::path> cmd_evaluate(const PipelineConfig& cfg, bool with_tm,
                                                const std::string& split = "test");

std::vector<std::filesystem::path> cmd_verify_theorem(const PipelineConfig& cfg);

} // namespace metacomb
