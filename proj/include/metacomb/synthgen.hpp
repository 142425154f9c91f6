#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "metacomb/tables.hpp"

namespace metacomb {

struct BetaShape {
    double alpha{1.0};
    double beta{1.0};

    bool operator==(const BetaShape&) const = default;
};

// Score model for one base model on one scored class: Beta(pos) when the
// gold label is set, Beta(neg) otherwise.
struct ClassShapes {
    BetaShape pos;
    BetaShape neg;

    bool operator==(const ClassShapes&) const = default;
};

struct SyntheticModelSpec {
    std::string id;
    std::vector<ClassShapes> shapes;  // aligned with SyntheticSpec::scored_classes

    bool operator==(const SyntheticModelSpec&) const = default;
};

enum class LabelMode {
    independent,  // one Bernoulli draw per class (multi-label)
    categorical   // one class per sample, priors sum to 1
};

struct SyntheticSpec {
    std::size_t n_samples{0};
    LabelMode label_mode{LabelMode::categorical};
    std::vector<std::string> class_names;
    std::vector<double> priors;               // aligned with class_names
    std::vector<std::string> scored_classes;  // score columns; subset of class_names
    std::vector<SyntheticModelSpec> models;
    std::uint64_t seed{0};
    std::array<double, 3> split_fractions{0.6, 0.2, 0.2};  // train, dev, test
    std::vector<std::string> group_names;  // optional; one uniform tag per sample

    void validate() const;

    std::string to_json_string() const;
    static SyntheticSpec from_json_string(const std::string& text);

    bool operator==(const SyntheticSpec&) const = default;
};

struct SyntheticData {
    std::vector<PredictionTable> model_tables;  // one per model, all samples
    GoldLabels gold;                            // carries split and group columns
};

// Draw order per sample: labels, then split, then group; afterwards scores by
// model (outer), sample, scored class.  Bit-reproducible for a fixed seed.
SyntheticData generate(const SyntheticSpec& spec);

// Exchanges the two priors of a binary categorical spec (an involution), or
// installs the explicit target priors when given.  Model shapes are kept.
SyntheticSpec flip_distribution(const SyntheticSpec& spec,
                                std::optional<std::array<double, 2>> target_priors = {});

// Ready-made scenarios: a majority-negative (20/80) binary task scored by
// five base models of mixed quality, its opposite-skew (68.8/31.2)
// counterpart, and a five-category multi-label task.
SyntheticSpec binary_preset(std::uint64_t seed, std::size_t n_samples = 4000);
SyntheticSpec binary_flipped_preset(std::uint64_t seed, std::size_t n_samples = 3000);
SyntheticSpec multilabel_preset(std::uint64_t seed, std::size_t n_samples = 5000);

// Near-balanced binary task with weakly informative models; the regime where
// combiner weight sums land near 1 and the weight-sum bounds are tight.
SyntheticSpec balanced_binary_spec(std::uint64_t seed, std::size_t n_samples, std::size_t k_models,
                                   double strength, double positive_prior);

} // namespace metacomb
