#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "metacomb/label_matrix.hpp"

namespace metacomb {

enum class Split { train, dev, test };

const char* split_name(Split s);
Split parse_split(const std::string& token);

// Per-sample, per-class probability scores from one base model (or the
// combiner).  Scores are dense row-major, all in [0,1], finite.
struct PredictionTable {
    std::vector<std::string> sample_ids;
    std::vector<std::string> class_names;
    std::vector<double> scores;  // rows() x cols(), row-major
    std::string source_model;

    std::size_t rows() const { return sample_ids.size(); }
    std::size_t cols() const { return class_names.size(); }

    double at(std::size_t sample, std::size_t cls) const {
        return scores[sample * class_names.size() + cls];
    }
    void set(std::size_t sample, std::size_t cls, double v) {
        scores[sample * class_names.size() + cls] = v;
    }

    std::vector<double> column(std::size_t cls) const;
    std::size_t class_index(const std::string& name) const;

    // Enforces unique ids, finite scores in [0,1], matching matrix size.
    void validate() const;

    bool operator==(const PredictionTable&) const = default;
};

// Gold labels: binary indicator per class, with optional per-sample group tag
// and split assignment.
struct GoldLabels {
    std::vector<std::string> sample_ids;
    LabelMatrix labels;
    std::vector<std::string> groups;  // empty, or one tag per sample
    std::vector<Split> splits;        // empty, or one split per sample

    std::size_t rows() const { return sample_ids.size(); }
    const std::vector<std::string>& class_names() const { return labels.class_names; }

    bool has_groups() const { return !groups.empty(); }
    bool has_splits() const { return !splits.empty(); }

    // Mean number of gold labels per sample.
    double label_cardinality() const;

    // Fraction of samples with the given class set.
    std::vector<double> class_prevalence() const;

    GoldLabels subset(std::span<const std::size_t> indices) const;
    GoldLabels filter_split(Split s) const;

    // Restriction to the named classes, in the given order.
    GoldLabels select_classes(std::span<const std::string> names) const;

    void validate() const;

    bool operator==(const GoldLabels&) const = default;
};

PredictionTable table_subset(const PredictionTable& table, std::span<const std::size_t> indices);

} // namespace metacomb
