#pragma once

#include <functional>
#include <vector>

#include "levytc/ivp.hpp"
#include "levytc/simulate.hpp"
#include "levytc/symbol.hpp"
#include "levytc/tce.hpp"

namespace ltc {

struct MartingaleTestResult {
    Vec u;
    double s = 0.0;
    double t = 0.0;
    Complex estimate{0.0, 0.0};
    double stderr_ = 0.0;
    std::size_t n = 0;
    bool pass = false;  // |estimate| <= 3 stderr
};

using CandidateSymbol = std::function<Complex(const Vec&, const Vec&)>;
using WeightFunction = std::function<Complex(const Vec&)>;

/// Monte Carlo estimate of E[ w(X(s)) (M_u(t) - M_u(s)) ] with M_u built from
/// the candidate symbol by left-point quadrature on the simulation grid.
/// Zero in expectation iff the candidate is the symbol (up to O(dt) bias).
MartingaleTestResult martingale_defect(const std::vector<SamplePath>& paths,
                                       const CandidateSymbol& q_candidate, const Vec& u, double s,
                                       double t, const WeightFunction& weight = {});
MartingaleTestResult martingale_defect(const Ensemble& ensemble, const SymbolSpec& q_candidate,
                                       const Vec& u, double s, double t,
                                       const WeightFunction& weight = {});

struct SmallTimeSymbolResult {
    Complex estimate{0.0, 0.0};  // extrapolated t -> 0
    double stderr_ = 0.0;
    bool degenerate_fit = false;
    std::vector<double> t_grid;
    std::vector<Complex> per_t;
};

/// (E_x e^{i<u, X(t)-x>} - 1) / t on t_grid, extrapolated to t=0 by a
/// linear fit; the limit is q(x, u).
SmallTimeSymbolResult small_time_symbol(const Ensemble& ensemble, const Vec& u,
                                        const std::vector<double>& t_grid);

struct TimeChangedSymbolResult {
    std::vector<MartingaleTestResult> per_u;
    double pass_fraction = 0.0;
    bool aggregate_pass = false;  // >= 95% of the u grid passes at 3 sigma
};

/// Tests that the time-changed paths have symbol g(x) q(x,u).
TimeChangedSymbolResult check_time_changed_symbol(const std::vector<TceSolution>& solutions,
                                                  const GFunction& g, const SymbolSpec& q,
                                                  const std::vector<Vec>& u_grid, double s,
                                                  double t);

struct MaximalIneqResult {
    double R = 0.0;
    std::vector<double> h_grid;
    std::vector<double> empirical_probs;  // P(|X - X(0)|*_h >= R)
    std::vector<double> ratios;           // empirical / (h H(R))
    double fitted_cd = 0.0;               // max ratio
    bool vacuous = false;                 // zero exceedances at every h
};

/// Exceedance probabilities against the h H(R) bound; H(R) from h_global.
MaximalIneqResult maximal_inequality_check(const Ensemble& ensemble, double R,
                                           const std::vector<double>& h_grid, double h_of_r);

using StoppingTime = std::function<double(const SamplePath&)>;
inline StoppingTime fixed_time(double t) {
    return [t](const SamplePath&) { return t; };
}

struct HolderIndexSummary {
    std::vector<bool> vanishing;  // per path
    double vanishing_fraction = 0.0;
};

/// Per path: r(h) = h^{-1/lambda} sup-increment after tau; vanishing iff r
/// decreases over the three finest h values (h_grid decreasing).
HolderIndexSummary holder_index_check(const Ensemble& ensemble, double lambda,
                                      const StoppingTime& tau, const std::vector<double>& h_grid);

struct OccupationResult {
    double t = 0.0;
    std::vector<double> refinement_dts;
    std::vector<double> partial_integrals;  // int_0^t ds / g(X(s)) per level
    enum class Verdict { diverging, finite, inconclusive };
    Verdict verdict = Verdict::inconclusive;
};

/// Reciprocal-g occupation integral under grid refinement; the path is
/// re-simulated with the same seed at each dt level. Exact zeros of g(X) are
/// handled by the power-law certificate, plateaus diverge immediately.
OccupationResult occupation_divergence(const MarkovTriplet& triplet, const Vec& x0,
                                       const SimConfig& base_config, std::uint64_t seed,
                                       const GFunction& g, double t,
                                       const std::vector<double>& refinement_dts);

}  // namespace ltc
