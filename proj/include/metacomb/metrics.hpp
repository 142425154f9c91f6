#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "metacomb/label_matrix.hpp"

namespace metacomb {

struct ConfusionCounts {
    std::int64_t tp{0};
    std::int64_t fp{0};
    std::int64_t fn{0};
    std::int64_t tn{0};

    std::int64_t total() const { return tp + fp + fn + tn; }
    bool operator==(const ConfusionCounts&) const = default;
};

struct ClassMetrics {
    double precision{0.0};
    double recall{0.0};
    double f1{0.0};
};

enum class AccuracyMode { exact_match, label_wise };

const char* accuracy_mode_name(AccuracyMode mode);
AccuracyMode parse_accuracy_mode(const std::string& token);

ConfusionCounts confusion(std::span<const std::uint8_t> gold, std::span<const std::uint8_t> pred);

// Any 0/0 denominator yields 0 for that metric.
ClassMetrics f1_from_counts(const ConfusionCounts& c);

// Unweighted mean of per-class F1 values.
double macro_f1(std::span<const ClassMetrics> per_class);
double macro_f1_values(std::span<const double> f1s);

// exact_match: fraction of samples whose predicted label set equals the gold
// set.  label_wise: fraction of (sample, class) cells predicted correctly.
double accuracy(const LabelMatrix& gold, const LabelMatrix& pred, AccuracyMode mode);

// Accuracy within each observed group tag; keys only for observed tags.
std::map<std::string, double> grouped_accuracy(const LabelMatrix& gold, const LabelMatrix& pred,
                                               std::span<const std::string> groups,
                                               AccuracyMode mode);

struct ClassReport {
    ConfusionCounts counts;
    ClassMetrics metrics;
};

struct EvaluationReport {
    std::vector<std::string> class_names;     // configured order
    std::vector<ClassReport> per_class;       // aligned with class_names
    double macro_f1{0.0};
    double accuracy{0.0};
    AccuracyMode accuracy_mode{AccuracyMode::exact_match};
    std::map<std::string, double> per_group;  // empty when no group tags

    // Stable key ordering: classes in configured order, groups lexicographic.
    std::string to_json_string() const;
};

EvaluationReport evaluate_labels(const LabelMatrix& gold, const LabelMatrix& pred,
                                 AccuracyMode mode,
                                 std::span<const std::string> groups = {});

} // namespace metacomb
