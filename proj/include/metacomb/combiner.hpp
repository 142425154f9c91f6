#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "metacomb/core_math.hpp"
#include "metacomb/tables.hpp"

namespace metacomb {

struct TrainingConfig {
    double learning_rate{0.1};
    int max_epochs{10000};
    double grad_tolerance{1e-8};
    double l2_penalty{1e-6};
    std::uint64_t seed{0};

    void validate() const;
};

struct TrainingMeta {
    std::vector<double> loss_trace;  // regularized loss, initial value first
    int epochs_run{0};
    double final_grad_norm{0.0};
    std::uint64_t seed{0};
};

struct WeightDiagnostics {
    double weight_sum{0.0};
    bool sign_homogeneous{false};
    // Expected orientation: b < 0 when weights are nonnegative, b > 0 when
    // nonpositive.  Measured, never enforced.
    bool bias_sign_consistent{false};
};

WeightDiagnostics weight_diagnostics(const CombinerParams& params);

// Mean binary cross-entropy of sigma(w.p + b) against gold, plus an L2 term
// 0.5 * l2 * (|w|^2 + b^2).  `columns` holds K model-probability columns of
// equal length.
double combiner_loss(const CombinerParams& params,
                     const std::vector<std::vector<double>>& columns,
                     std::span<const std::uint8_t> gold, double l2_penalty);

// Analytic gradient of combiner_loss; returns (dL/dw_1..dL/dw_K, dL/db).
std::vector<double> combiner_gradient(const CombinerParams& params,
                                      const std::vector<std::vector<double>>& columns,
                                      std::span<const std::uint8_t> gold, double l2_penalty);

// Fits one single-node sigmoid combiner by full-batch gradient descent from
// (w, b) = 0 with a monotone backtracking step.  Deterministic.
CombinerParams train_class_combiner(const std::vector<std::vector<double>>& columns,
                                    std::span<const std::uint8_t> gold,
                                    const TrainingConfig& cfg, TrainingMeta* meta = nullptr);

struct CombinerModel {
    std::vector<std::string> model_ids;    // K base models, ordered
    std::vector<std::string> class_names;  // N classes, ordered
    std::vector<CombinerParams> per_class; // aligned with class_names
    std::vector<TrainingMeta> meta;        // aligned with class_names
    TrainingConfig config;

    const CombinerParams& params_for(const std::string& class_name) const;

    std::string to_json_string() const;
    static CombinerModel from_json_string(const std::string& text);
};

// One independent combiner per class column (binary relevance).  Tables must
// share sample ids (same order) and class columns, and match gold's taxonomy.
CombinerModel train_br_combiners(std::span<const PredictionTable> dev_tables,
                                 const GoldLabels& gold, const TrainingConfig& cfg);

// sigma(sum_i w_i p_i + b) per sample and class.  Tables are matched to the
// model's base-model ids via their source_model field.
PredictionTable predict_combined(const CombinerModel& model,
                                 std::span<const PredictionTable> tables);

// Checks id/sample/class alignment and returns tables ordered as model_ids.
std::vector<const PredictionTable*> align_tables(std::span<const std::string> model_ids,
                                                 std::span<const PredictionTable> tables);

} // namespace metacomb
