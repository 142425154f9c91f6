#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "metacomb/metrics.hpp"
#include "metacomb/tables.hpp"

namespace metacomb {

// Threshold search grid: points are base + m*step for m = 0..size()-1, in
// double arithmetic, covering [base, max].
struct GridSpec {
    double base{0.01};
    double max{0.99};
    double step{0.01};

    void validate() const;
    std::size_t size() const;
    double point(std::size_t m) const { return base + static_cast<double>(m) * step; }

    bool operator==(const GridSpec&) const = default;
};

struct ThresholdSearchResult {
    double threshold{0.0};
    double f1{0.0};

    bool operator==(const ThresholdSearchResult&) const = default;
};

// Grid search for the threshold maximizing F1 on the positive class; ties
// resolve to the smallest maximizing threshold.  Uses sorted suffix counts,
// O((n + G) log n).
ThresholdSearchResult train_threshold(std::span<const double> scores,
                                      std::span<const std::uint8_t> gold, const GridSpec& grid);

// Reference implementation: recomputes confusion counts by a full scan at
// every grid point.  Kept deliberately naive to cross-check train_threshold.
ThresholdSearchResult brute_force_threshold_oracle(std::span<const double> scores,
                                                   std::span<const std::uint8_t> gold,
                                                   const GridSpec& grid);

struct ThresholdVector {
    std::vector<std::string> class_names;
    std::vector<double> thresholds;    // aligned with class_names
    std::vector<double> achieved_f1;   // dev-set F1 at each threshold
    GridSpec grid;

    double threshold_for(const std::string& class_name) const;

    std::string to_json_string() const;
    static ThresholdVector from_json_string(const std::string& text);
};

// One independent threshold per class column (CS-Cut via binary relevance).
ThresholdVector train_cs_cut(const PredictionTable& combined, const GoldLabels& gold,
                             const GridSpec& grid);

// Label set per sample: {c : score_c >= t_c}.  Empty sets are permitted; with
// fallback_argmax the highest-scoring class is assigned instead (first class
// wins score ties).
LabelMatrix apply_thresholds(const PredictionTable& combined, const ThresholdVector& tv,
                             bool fallback_argmax = false);

// Uniform threshold for every class (the t = 0.5 default path).
ThresholdVector uniform_thresholds(std::span<const std::string> class_names, double t);

} // namespace metacomb
