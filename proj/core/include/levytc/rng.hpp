#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace ltc {

/// splitmix64 finalizer; used to derive per-path seeds from a master seed.
inline std::uint64_t mix_seed(std::uint64_t master, std::uint64_t index) {
    std::uint64_t z = master + index * 0x9E3779B97F4A7C15ULL + 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Deterministic RNG: mt19937_64 core (bit-exact per the standard) with
/// hand-rolled distributions so sequences are identical across platforms.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    /// Uniform on (0, 1); never returns 0 or 1.
    double uniform() {
        // 53-bit mantissa, shifted into the open interval
        return (static_cast<double>(eng_() >> 11) + 0.5) * 0x1p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Standard normal via Box-Muller (both values used).
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        double u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double th = 2.0 * M_PI * u2;
        spare_ = r * std::sin(th);
        have_spare_ = true;
        return r * std::cos(th);
    }

    double exponential() { return -std::log(uniform()); }

    /// Poisson count; multiplication method (means here are O(rate*dt), small),
    /// with a normal approximation guard for large means.
    std::uint64_t poisson(double mean) {
        if (mean <= 0.0) return 0;
        if (mean > 64.0) {
            double v = mean + std::sqrt(mean) * normal();
            return v <= 0.0 ? 0 : static_cast<std::uint64_t>(v + 0.5);
        }
        double limit = std::exp(-mean);
        double prod = uniform();
        std::uint64_t n = 0;
        while (prod > limit) {
            prod *= uniform();
            ++n;
        }
        return n;
    }

    /// Standard symmetric alpha-stable increment, E exp(iuS) = exp(-|u|^alpha),
    /// by the Chambers-Mallows-Stuck transformation.
    double stable(double alpha) {
        double v = M_PI * (uniform() - 0.5);
        double w = exponential();
        if (std::abs(alpha - 1.0) < 1e-12) {
            return std::tan(v);  // Cauchy
        }
        double t = std::sin(alpha * v) / std::pow(std::cos(v), 1.0 / alpha);
        double s = std::pow(std::cos((1.0 - alpha) * v) / w, (1.0 - alpha) / alpha);
        return t * s;
    }

private:
    std::mt19937_64 eng_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace ltc
