#pragma once

#include <limits>
#include <vector>

#include "levytc/errors.hpp"

namespace ltc {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Nonnegative time profile Y sampled on a grid, left-point step semantics.
struct TimeProfile {
    std::vector<double> times;
    std::vector<double> values;
    double sup_bound = 0.0;
    /// Discrete surrogate of right-regularity at zero: set when an isolated
    /// single-sample dip to (near) zero sits between positive neighbours.
    bool regularity_warning = false;

    static TimeProfile from_samples(std::vector<double> times, std::vector<double> values);

    double horizon() const { return times.empty() ? 0.0 : times.back(); }
    /// value at the greatest grid time <= t
    double at(double t) const;
    /// values below this are treated as exact zeros (floating-point dust)
    double zero_threshold() const { return 1e-14 * sup_bound; }
};

/// Local power-law fit Y(s) ~ K (s - tau)^p on one side of a zero of Y.
struct PowerFit {
    double p = 0.0;
    double k = 0.0;
    bool valid = false;  // enough samples for a fit
};

/// Analysis of one maximal run of zero samples.
struct ZeroRun {
    std::size_t first = 0;  // grid indices of the run
    std::size_t last = 0;
    double time = 0.0;  // times[first]
    PowerFit left;      // approach from below (absent when the run starts the grid)
    PowerFit right;     // exit above (absent when the run ends the grid)
    bool plateau = false;     // run spans more than one sample
    bool divergent = false;   // reciprocal integral certified divergent here
    bool certified = false;   // a certificate (fit or plateau) was available
};

/// Divergence-fit margin: a side certifies divergence iff its fitted p >= 1 - p_margin.
struct IvpConfig {
    double p_margin = 0.05;
    int max_fit_samples = 64;
};

/// Profile analysis shared by the ivp operations: cumulative reciprocal
/// integral on the grid (+inf past a certified-divergent zero) and per-zero
/// certificates.
struct ProfileAnalysis {
    std::vector<double> cumulative;  // I(times[k]); kInf once divergent
    std::vector<ZeroRun> zeros;
    double tau = kInf;   // first zero time
    double eta = kInf;   // first certified blow-up time of I
};

ProfileAnalysis analyze_profile(const TimeProfile& y, const IvpConfig& cfg = {});

/// I(t) = int_0^t ds / Y(s) by step quadrature with a power-law tail
/// correction at zeros; +inf once divergence is certified.
double integrate_reciprocal(const TimeProfile& y, double t, const IvpConfig& cfg = {});

/// tau: first grid time with Y <= zero threshold; +inf if none.
double first_zero(const TimeProfile& y);

/// eta: smallest t at which I is certified +inf; +inf otherwise.
double blowup_time(const TimeProfile& y, const IvpConfig& cfg = {});

/// Extremal solutions of y(t) = int_0^t Y(y(s)) ds on the profile's grid.
struct IvpSolution {
    std::vector<double> times;
    std::vector<double> alpha1;  // minimal
    std::vector<double> alpha2;  // maximal
    double tau = kInf;
    double eta = kInf;
    double gamma = kInf;  // sup of I below eta (grid surrogate)
    bool unique = false;  // eta <= tau
    double divergence_power = std::numeric_limits<double>::quiet_NaN();

    double alpha1_at(double t) const;
    double alpha2_at(double t) const;
};

/// Construction: invert I by monotone piecewise-linear interpolation to get
/// g; alpha1 = min(g, tau) then tau, alpha2 = g then eta. Past the grid's
/// I-range the profile is extended by its last value (cadlag convention).
IvpSolution solve_ivp_extremal(const TimeProfile& y, const IvpConfig& cfg = {});

/// sup_t |alpha(t) - int_0^t Y(alpha(s)) ds| under left-point quadrature;
/// alpha is sampled on the profile's grid.
double residual(const TimeProfile& y, const std::vector<double>& alpha);

}  // namespace ltc
