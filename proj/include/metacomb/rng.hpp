#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace metacomb {

// Seeded draws on top of std::mt19937_64.  The engine's output sequence is
// fixed by the standard, and every distribution here is hand-rolled, so a
// given seed yields the same stream on every platform.  std::*_distribution
// adapters are never used.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next_u64() { return eng_(); }

    // Uniform on [0, 1), 53-bit resolution.
    double uniform() {
        return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
    }

    // Uniform on (0, 1].
    double uniform_pos() { return 1.0 - uniform(); }

    bool bernoulli(double p) { return uniform() < p; }

    // Box-Muller, cosine branch only; consumes exactly two engine draws.
    double normal() {
        const double u1 = uniform_pos();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
    }

    // Marsaglia-Tsang squeeze for shape >= 1, boosted below 1.  Unit scale.
    double gamma(double shape);

    // Gamma ratio; result clamped into the open interval (0, 1).
    double beta(double a, double b);

    // Index draw from unnormalized nonnegative probabilities summing to ~1.
    std::size_t categorical(std::span<const double> probs);

private:
    std::mt19937_64 eng_;
};

} // namespace metacomb
