#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "metacomb/errors.hpp"

namespace metacomb {

// Numerically stable logistic function; for x < 0 evaluated as e^x / (1 + e^x).
double sigmoid(double x);

// Per-class combiner parameters: one weight per base model plus a shared bias.
struct CombinerParams {
    std::vector<double> weights;
    double bias{0.0};

    double weight_sum() const;

    // True iff all weights are >= 0 or all are <= 0.
    bool sign_homogeneous() const;
};

// Weighted sum of per-model probabilities, y = sum_i w_i * p_i.  Bias is not
// applied here; it enters through biased_sigmoid.
double combine_scores(const CombinerParams& params, std::span<const double> probs);

// sigma(y + b).
double biased_sigmoid(const CombinerParams& params, double y);

// Threshold test: positive iff score >= t.  The boundary is inclusive and the
// same rule is used during threshold training and at inference.
bool assign_class(double score, double t);

} // namespace metacomb
