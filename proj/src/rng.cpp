#include "metacomb/rng.hpp"

#include <cmath>

#include "metacomb/errors.hpp"

namespace metacomb {

double Rng::gamma(double shape) {
    if (!(shape > 0.0)) throw ParameterError("gamma shape must be > 0");
    if (shape < 1.0) {
        // Boost: Gamma(a) = Gamma(a+1) * U^(1/a).
        const double g = gamma(shape + 1.0);
        return g * std::pow(uniform_pos(), 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x;
        double v;
        do {
            x = normal();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = uniform_pos();
        const double x2 = x * x;
        if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
        if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
    }
}

double Rng::beta(double a, double b) {
    const double x = gamma(a);
    const double y = gamma(b);
    const double s = x + y;
    double r = s > 0.0 ? x / s : 0.5;  // underflow fallback for extreme shapes
    constexpr double kEdge = 1e-12;
    if (r < kEdge) r = kEdge;
    if (r > 1.0 - kEdge) r = 1.0 - kEdge;
    return r;
}

std::size_t Rng::categorical(std::span<const double> probs) {
    if (probs.empty()) throw ParameterError("categorical draw needs at least one probability");
    const double u = uniform();
    double acc = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        acc += probs[i];
        if (u < acc) return i;
    }
    return probs.size() - 1;  // rounding slack lands on the last class
}

} // namespace metacomb
