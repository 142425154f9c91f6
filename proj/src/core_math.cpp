#include "metacomb/core_math.hpp"

#include <cmath>
#include <string>

namespace metacomb {

double sigmoid(double x) {
    if (x >= 0.0) {
        return 1.0 / (1.0 + std::exp(-x));
    }
    const double e = std::exp(x);
    return e / (1.0 + e);
}

double CombinerParams::weight_sum() const {
    double s = 0.0;
    for (double w : weights) s += w;
    return s;
}

bool CombinerParams::sign_homogeneous() const {
    bool any_pos = false;
    bool any_neg = false;
    for (double w : weights) {
        if (w > 0.0) any_pos = true;
        if (w < 0.0) any_neg = true;
    }
    return !(any_pos && any_neg);
}

double combine_scores(const CombinerParams& params, std::span<const double> probs) {
    if (params.weights.size() != probs.size()) {
        throw DimensionError("combine_scores: " + std::to_string(params.weights.size()) +
                             " weights vs " + std::to_string(probs.size()) + " probabilities");
    }
    double y = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        y += params.weights[i] * probs[i];
    }
    return y;
}

double biased_sigmoid(const CombinerParams& params, double y) {
    return sigmoid(y + params.bias);
}

bool assign_class(double score, double t) {
    if (!(t > 0.0 && t < 1.0)) {
        throw ParameterError("assign_class: threshold must lie in (0,1), got " + std::to_string(t));
    }
    return score >= t;
}

} // namespace metacomb
