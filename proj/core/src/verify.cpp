#include "levytc/verify.hpp"

#include <algorithm>
#include <cmath>

namespace ltc {

namespace {

Complex cis(double x) { return {std::cos(x), std::sin(x)}; }

}  // namespace

MartingaleTestResult martingale_defect(const std::vector<SamplePath>& paths,
                                       const CandidateSymbol& q_candidate, const Vec& u, double s,
                                       double t, const WeightFunction& weight) {
    if (paths.size() < 2) throw StatisticsError("martingale_defect: need >= 2 paths");
    if (!(0.0 <= s && s < t)) throw RangeError("martingale_defect: need 0 <= s < t");
    if (t > paths.front().horizon() * (1.0 + 1e-9))
        throw RangeError("martingale_defect: t beyond horizon");

    MartingaleTestResult res;
    res.u = u;
    res.s = s;
    res.t = t;
    res.n = paths.size();

    Complex sum{0.0, 0.0};
    double sum_re2 = 0.0, sum_im2 = 0.0;
    for (const SamplePath& p : paths) {
        const std::size_t is = p.index_at(s);
        const std::size_t it = p.index_at(t);
        Complex incr = cis(dot(u, p.values[it])) - cis(dot(u, p.values[is]));
        for (std::size_t k = is; k < it; ++k) {
            const double w = p.times[k + 1] - p.times[k];
            // one-step compensator e^{q w} - 1 = q w + O(w^2): same quadrature to
            // leading order, but an exact discrete martingale for the
            // frozen-coefficient scheme (matters when paths are noise-free)
            incr -= cis(dot(u, p.values[k])) * (std::exp(q_candidate(p.values[k], u) * w) - 1.0);
        }
        if (weight) incr *= weight(p.values[is]);
        sum += incr;
        sum_re2 += incr.real() * incr.real();
        sum_im2 += incr.imag() * incr.imag();
    }
    const double n = static_cast<double>(res.n);
    res.estimate = sum / n;
    double var_re = (sum_re2 - n * res.estimate.real() * res.estimate.real()) / (n - 1.0);
    double var_im = (sum_im2 - n * res.estimate.imag() * res.estimate.imag()) / (n - 1.0);
    res.stderr_ = std::sqrt(std::max(var_re + var_im, 0.0) / n);
    // absolute floor covers noise-free (deterministic) ensembles where the
    // sample standard error is exactly zero but the sum carries fp round-off
    res.pass = std::abs(res.estimate) <= 3.0 * res.stderr_ + 1e-9;
    return res;
}

MartingaleTestResult martingale_defect(const Ensemble& ensemble, const SymbolSpec& q_candidate,
                                       const Vec& u, double s, double t,
                                       const WeightFunction& weight) {
    return martingale_defect(
        ensemble.paths,
        [&q_candidate](const Vec& x, const Vec& uu) { return q_candidate.eval(x, uu); }, u, s, t,
        weight);
}

SmallTimeSymbolResult small_time_symbol(const Ensemble& ensemble, const Vec& u,
                                        const std::vector<double>& t_grid) {
    if (ensemble.paths.size() < 2) throw StatisticsError("small_time_symbol: need >= 2 paths");
    SmallTimeSymbolResult res;
    res.t_grid = t_grid;

    std::vector<double> re, im, se;
    for (double t : t_grid) {
        if (t <= 0.0 || t > ensemble.horizon() * (1.0 + 1e-9))
            throw RangeError("small_time_symbol: t outside (0, horizon]");
        Complex sum{0.0, 0.0};
        double sum2 = 0.0;
        for (const SamplePath& p : ensemble.paths) {
            Complex v = cis(dot(u, p.at(t) - ensemble.start)) - 1.0;
            sum += v;
            sum2 += std::norm(v);
        }
        const double n = static_cast<double>(ensemble.paths.size());
        Complex mean = sum / n;
        Complex est = mean / t;
        res.per_t.push_back(est);
        re.push_back(est.real());
        im.push_back(est.imag());
        double var = std::max(sum2 / n - std::norm(mean), 0.0);
        se.push_back(std::sqrt(var / n) / t);
    }

    if (t_grid.size() < 2) {
        res.degenerate_fit = true;
        res.estimate = res.per_t.empty() ? Complex{0, 0} : res.per_t.front();
        res.stderr_ = se.empty() ? 0.0 : se.front();
        return res;
    }
    std::vector<double> tt(t_grid.begin(), t_grid.end());
    LineFit fr = fit_line(tt, re);
    LineFit fi = fit_line(tt, im);
    if (fr.n < 2) {
        res.degenerate_fit = true;
        return res;
    }
    res.estimate = {fr.intercept, fi.intercept};
    // dominated by the statistical error at the finest t plus fit scatter
    res.stderr_ = se.back() + std::hypot(fr.residual, fi.residual);
    return res;
}

TimeChangedSymbolResult check_time_changed_symbol(const std::vector<TceSolution>& solutions,
                                                  const GFunction& g, const SymbolSpec& q,
                                                  const std::vector<Vec>& u_grid, double s,
                                                  double t) {
    std::vector<SamplePath> zpaths;
    zpaths.reserve(solutions.size());
    for (const TceSolution& sol : solutions) zpaths.push_back(sol.z);

    CandidateSymbol tilde_q = [&g, &q](const Vec& x, const Vec& u) { return g(x) * q.eval(x, u); };

    TimeChangedSymbolResult res;
    std::size_t passed = 0;
    for (const Vec& u : u_grid) {
        MartingaleTestResult r = martingale_defect(zpaths, tilde_q, u, s, t);
        if (r.pass) ++passed;
        res.per_u.push_back(r);
    }
    res.pass_fraction = u_grid.empty() ? 1.0 : static_cast<double>(passed) / u_grid.size();
    res.aggregate_pass = res.pass_fraction >= 0.95;
    return res;
}

MaximalIneqResult maximal_inequality_check(const Ensemble& ensemble, double R,
                                           const std::vector<double>& h_grid, double h_of_r) {
    MaximalIneqResult res;
    res.R = R;
    res.h_grid = h_grid;
    bool any_exceed = false;
    for (double h : h_grid) {
        if (h > ensemble.horizon() * (1.0 + 1e-9))
            throw RangeError("maximal_inequality_check: h beyond horizon");
        std::size_t count = 0;
        for (const SamplePath& p : ensemble.paths)
            if (path_sup_increment(p, 0.0, h) >= R) ++count;
        double prob = static_cast<double>(count) / ensemble.size();
        if (count > 0) any_exceed = true;
        res.empirical_probs.push_back(prob);
        res.ratios.push_back(prob / (h * h_of_r));
    }
    res.vacuous = !any_exceed;
    res.fitted_cd =
        res.ratios.empty() ? 0.0 : *std::max_element(res.ratios.begin(), res.ratios.end());
    return res;
}

HolderIndexSummary holder_index_check(const Ensemble& ensemble, double lambda,
                                      const StoppingTime& tau, const std::vector<double>& h_grid) {
    if (!(lambda > 0.0)) throw ValidationError("holder_index_check: lambda must be positive");
    if (h_grid.size() < 3)
        throw ValidationError("holder_index_check: need >= 3 h values");
    for (std::size_t i = 1; i < h_grid.size(); ++i)
        if (!(h_grid[i] < h_grid[i - 1]))
            throw ValidationError("holder_index_check: h_grid must be decreasing");

    HolderIndexSummary sum;
    std::size_t vanish = 0;
    for (const SamplePath& p : ensemble.paths) {
        double t0 = tau(p);
        if (t0 + h_grid.front() > p.horizon() * (1.0 + 1e-9))
            throw RangeError("holder_index_check: tau + max h beyond horizon");
        // slope of log r vs log h: positive means r(h) -> 0 as h -> 0.
        // A regression over the grid is far less noise-sensitive than asking
        // for a stepwise-monotone sequence of the r values themselves.
        std::vector<double> lh, lr;
        for (double h : h_grid) {
            double r = path_sup_increment(p, t0, h) / std::pow(h, 1.0 / lambda);
            if (r <= 0.0) continue;  // flat window (e.g. absorbed path)
            lh.push_back(std::log(h));
            lr.push_back(std::log(r));
        }
        bool v = lh.size() >= 2 && fit_line(lh, lr).slope > 0.0;
        sum.vanishing.push_back(v);
        if (v) ++vanish;
    }
    sum.vanishing_fraction = static_cast<double>(vanish) / ensemble.size();
    return sum;
}

OccupationResult occupation_divergence(const MarkovTriplet& triplet, const Vec& x0,
                                       const SimConfig& base_config, std::uint64_t seed,
                                       const GFunction& g, double t,
                                       const std::vector<double>& refinement_dts) {
    if (refinement_dts.size() < 2)
        throw ValidationError("occupation_divergence: need >= 2 refinement levels");
    for (std::size_t i = 1; i < refinement_dts.size(); ++i)
        if (!(refinement_dts[i] < refinement_dts[i - 1]))
            throw ValidationError("occupation_divergence: refinement dts must be decreasing");

    OccupationResult res;
    res.t = t;
    res.refinement_dts = refinement_dts;
    const double zthr = g.zero_threshold();

    bool any_inf = false;
    for (double dt : refinement_dts) {
        SimConfig cfg = base_config;
        cfg.dt = dt;
        cfg.horizon = std::max(base_config.horizon, t);
        SamplePath p = simulate_path(triplet, x0, cfg, seed);
        std::vector<double> values(p.values.size());
        for (std::size_t k = 0; k < p.values.size(); ++k) {
            double v = g(p.values[k]);
            values[k] = v <= zthr ? 0.0 : v;
        }
        TimeProfile prof = TimeProfile::from_samples(p.times, std::move(values));
        double integral = integrate_reciprocal(prof, t);
        res.partial_integrals.push_back(integral);
        if (std::isinf(integral)) any_inf = true;
    }

    if (any_inf) {
        res.verdict = OccupationResult::Verdict::diverging;
        return res;
    }
    const double first = res.partial_integrals.front();
    const double last = res.partial_integrals.back();
    bool growing = true;
    for (std::size_t i = 1; i < res.partial_integrals.size(); ++i)
        if (res.partial_integrals[i] <= res.partial_integrals[i - 1] * 1.2) growing = false;
    if (growing && last > 2.0 * first) {
        res.verdict = OccupationResult::Verdict::diverging;
    } else if (std::abs(last - res.partial_integrals[res.partial_integrals.size() - 2]) <=
               0.2 * std::max(std::abs(last), 1e-12)) {
        res.verdict = OccupationResult::Verdict::finite;
    } else {
        res.verdict = OccupationResult::Verdict::inconclusive;
    }
    return res;
}

}  // namespace ltc
