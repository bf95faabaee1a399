#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>

namespace linconts {

/// Seeded random source with a pinned generator (std::mt19937_64, whose
/// output sequence is fixed by the standard) and explicit sampling recipes,
/// so that traces reproduce across platforms:
///   uniform: top 53 bits of one 64-bit draw
///   normal:  Box-Muller from two uniforms
///   gamma:   Marsaglia-Tsang squeeze (shape >= 1), boosted by u^(1/shape)
///            for shape < 1
///   beta:    X / (X + Y) with X ~ Gamma(a), Y ~ Gamma(b)
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    /// Uniform on [0, 1).
    double uniform() {
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    /// Standard normal.
    double normal() {
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) *
               std::cos(2.0 * 3.14159265358979323846 * u2);
    }

    double gamma(double shape) {
        if (!(shape > 0.0)) throw std::invalid_argument("gamma shape must be > 0");
        if (shape < 1.0) {
            const double g = gamma(shape + 1.0);
            double u = uniform();
            while (u <= 0.0) u = uniform();
            return g * std::pow(u, 1.0 / shape);
        }
        const double d = shape - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double x, v;
            do {
                x = normal();
                v = 1.0 + c * x;
            } while (v <= 0.0);
            v = v * v * v;
            const double u = uniform();
            if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
            if (u > 0.0 && std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v)))
                return d * v;
        }
    }

    double beta(double a, double b) {
        const double x = gamma(a);
        const double y = gamma(b);
        return x / (x + y);
    }

    int bernoulli(double p) { return uniform() < p ? 1 : 0; }

    /// Inverse-CDF draw from a probability vector using one uniform.
    int categorical(std::span<const double> probs) {
        const double u = uniform();
        double cum = 0.0;
        for (std::size_t i = 0; i < probs.size(); ++i) {
            cum += probs[i];
            if (u < cum) return static_cast<int>(i);
        }
        return static_cast<int>(probs.size()) - 1;
    }

private:
    std::mt19937_64 gen_;
};

}  // namespace linconts
