#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "levytc/ivp.hpp"
#include "levytc/simulate.hpp"
#include "levytc/symbol.hpp"

namespace ltc {

/// Bounded nonnegative multiplier g with its declared growth data.
struct GFunction {
    std::function<double(const Vec&)> f;
    double bound = 1.0;  // ||g||_inf over the domain of interest
    std::vector<Vec> declared_zeros;
    double growth_exponent = 1.0;  // lambda
    std::optional<double> growth_constant;  // C_g, may be fitted

    double operator()(const Vec& x) const { return f(x); }
    double zero_threshold() const { return 1e-12 * std::max(bound, 1e-12); }
};

struct RegularAtZeroResult {
    bool pass = true;
    std::optional<Vec> witness;
};

struct GrowthResult {
    bool pass = true;
    bool vacuous = false;        // no declared zeros
    bool degenerate_fit = false;  // g locally identically zero around a zero
    double fitted_exponent = 0.0;
    double fitted_constant = 0.0;
    double index_gap = 0.0;  // lambda - beta_infinity
};

struct HolderResult {
    enum class Verdict { pass, fail, vacuous, inconclusive };
    Verdict verdict = Verdict::vacuous;
    double fitted_c = 0.0;  // max of sup-increment / h^{1/lambda}
    double delta = 0.0;     // largest h examined
};

struct DivergenceResult {
    bool certified = false;
    double fitted_p = 0.0;
    bool tau0_found = false;
    double tau0 = kInf;
};

/// Aggregated sufficient-condition report; the checks are advisory, the
/// solver always returns.
struct ConditionReport {
    RegularAtZeroResult regular_at_zero;
    GrowthResult growth_a1;
    double index_gap = 0.0;
    HolderResult holder_a2;
    DivergenceResult divergence;

    bool theorem_applies() const {
        return regular_at_zero.pass && growth_a1.pass && index_gap > 0.0;
    }
};

struct TceSolution {
    SamplePath z;                 // Z(t) = X(alpha1(t)) on the z grid
    std::vector<double> alpha1;   // minimal time change (the canonical one)
    std::vector<double> alpha2;   // maximal, reported so non-uniqueness is visible
    bool unique = false;
    IvpSolution ivp;
    ConditionReport report;
};

/// Discrete regularity-at-zero surrogate on a probe grid: every probe x with
/// g(x) above the activity threshold must dominate g(x)/2 on its probe
/// neighbourhood. The threshold defaults to bound/4; the probe spacing must
/// resolve it (spacing < threshold / (2 Lip g)) for continuous g to pass.
RegularAtZeroResult check_regular_at_zero(const GFunction& g, const std::vector<Vec>& probe,
                                          double neighborhood_radius,
                                          std::optional<double> threshold = std::nullopt);

/// Log-log shell fit of g around each declared zero; passes iff the fitted
/// exponent supports the declared lambda and lambda > beta_infinity.
GrowthResult check_growth_at_zeros(const GFunction& g, double beta_infinity,
                                   double r_min = 1e-3, double r_max = 0.3, int shells = 24);

/// Empirical surrogate of the h^{1/lambda} modulus after tau0.
HolderResult check_holder_after_tau(const SamplePath& path, const GFunction& g, double lambda);

/// Power-law divergence certificate for int 1/g(X(tau0+s)) ds at s=0.
DivergenceResult divergence_at_tau0(const SamplePath& path, const GFunction& g,
                                    const IvpConfig& cfg = {});

struct TceOptions {
    double z_horizon = 0.0;  // <= 0: ensemble horizon / ||g||_inf
    std::optional<double> beta_infinity;  // enables the growth / gap checks
    IvpConfig ivp;
};

/// Pathwise TCE solve: per path build Y = g(X), solve the extremal IVP and
/// compose Z(t) = X(alpha1(t)). Requires ensemble horizon >= ||g||_inf * z_horizon.
std::vector<TceSolution> solve_tce(const Ensemble& ensemble, const GFunction& g,
                                   const TceOptions& options = {});

/// Human-readable report (one document per run).
std::string format_condition_report(const ConditionReport& r);

}  // namespace ltc
