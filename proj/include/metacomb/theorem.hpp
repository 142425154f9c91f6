#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "metacomb/combiner.hpp"

namespace metacomb {

// sqrt(count of ones); the class-restricted norm of a 0/1 assignment vector.
double class_norm(std::span<const std::uint8_t> assignments);

// sqrt(count of disagreements) between two 0/1 assignment vectors.
double class_diff_norm(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b);

// Interpolation scores y/|W| per sample, given the K per-model probability
// columns for one class.  Undefined when W == 0.
std::vector<double> interpolation_scores(const CombinerParams& params,
                                         const std::vector<std::vector<double>>& columns);

enum class SignCase { positive, negative };

struct ClassNorms {
    double u_norm{0.0};        // |u|
    double err_combined{0.0};  // |u - sigma_b(y)|
    double err_interp{0.0};    // |u - sigma_b(y/|W|)|
    double threshold{0.5};     // t used for the assignments
};

struct BoundInterval {
    double lo{0.0};
    double hi{0.0};
    SignCase sign_case{SignCase::positive};
    // False when the upper-bound denominator |u| - err_interp is <= 0.
    bool valid{false};
};

// Weight-sum bracket around +1 (positive case) or -1 (negative case):
//   positive: lo = (u - e_y) / (u + e_yh), hi = (u + e_y) / (u - e_yh)
//   negative: the mirrored interval with endpoints negated and swapped.
BoundInterval bound_interval(const ClassNorms& norms, SignCase sign_case);

struct ClassVerification {
    std::string class_name;
    double weight_sum{0.0};
    ClassNorms norms;
    BoundInterval interval;
    bool applicable{false};  // sign-homogeneous weights, W != 0, valid interval
    bool contained{false};   // lo <= W <= hi, meaningful only when applicable
    std::string skip_reason; // empty when applicable
};

struct VerificationReport {
    std::vector<ClassVerification> per_class;
    double threshold{0.5};

    std::string to_json_string() const;
};

// Evaluates the weight-sum bounds for each class of a trained combiner on the
// given tables/gold at threshold t.
VerificationReport verify_theorem1(const CombinerModel& model,
                                   std::span<const PredictionTable> tables,
                                   const GoldLabels& gold, double t = 0.5);

} // namespace metacomb
