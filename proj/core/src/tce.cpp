#include "levytc/tce.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ltc {

RegularAtZeroResult check_regular_at_zero(const GFunction& g, const std::vector<Vec>& probe,
                                          double neighborhood_radius,
                                          std::optional<double> threshold) {
    if (probe.empty()) throw DomainError("check_regular_at_zero: empty probe grid");
    const double thr = threshold.value_or(0.25 * g.bound);
    std::vector<double> vals(probe.size());
    for (std::size_t i = 0; i < probe.size(); ++i) vals[i] = g(probe[i]);

    RegularAtZeroResult res;
    for (std::size_t i = 0; i < probe.size(); ++i) {
        if (vals[i] <= thr) continue;
        double nb_min = vals[i];
        for (std::size_t j = 0; j < probe.size(); ++j) {
            if ((probe[j] - probe[i]).norm() <= neighborhood_radius)
                nb_min = std::min(nb_min, vals[j]);
        }
        if (!(nb_min > 0.5 * vals[i])) {
            res.pass = false;
            res.witness = probe[i];
            return res;
        }
    }
    return res;
}

GrowthResult check_growth_at_zeros(const GFunction& g, double beta_infinity, double r_min,
                                   double r_max, int shells) {
    GrowthResult res;
    const double lambda = g.growth_exponent;
    res.index_gap = lambda - beta_infinity;
    if (g.declared_zeros.empty()) {
        res.vacuous = true;
        res.pass = true;
        return res;
    }

    const double zthr = g.zero_threshold();
    double worst_exponent = kInf;
    double worst_constant = 0.0;
    bool any_fit = false;

    for (const Vec& z : g.declared_zeros) {
        const int d = z.dim;
        std::vector<double> lx, ly;
        for (int s = 0; s < shells; ++s) {
            double r = r_max * std::pow(r_min / r_max, static_cast<double>(s) / (shells - 1));
            double shell_max = 0.0;
            for (int i = 0; i < d; ++i)
                for (int sign : {-1, 1}) {
                    Vec y = z;
                    y[i] += sign * r;
                    shell_max = std::max(shell_max, g(y));
                }
            if (shell_max <= zthr) continue;
            lx.push_back(std::log(r));
            ly.push_back(std::log(shell_max));
        }
        if (lx.size() < 3) {
            res.degenerate_fit = true;  // g locally ~ 0: absorbing region
            continue;
        }
        any_fit = true;
        LineFit f = fit_line(lx, ly);
        if (f.slope < worst_exponent) {
            worst_exponent = f.slope;
            worst_constant = std::exp(f.intercept);
        }
    }

    if (!any_fit) {
        res.pass = true;  // every zero sits in a flat absorbing region
        return res;
    }
    res.fitted_exponent = worst_exponent;
    res.fitted_constant = worst_constant;
    // declared lambda must be supported by the fit and beat the index
    res.pass = worst_exponent >= lambda - 0.05 && lambda > beta_infinity;
    return res;
}

namespace {

std::optional<double> locate_tau0(const SamplePath& path, const GFunction& g) {
    const double zthr = g.zero_threshold();
    for (std::size_t k = 0; k < path.times.size(); ++k)
        if (g(path.values[k]) <= zthr) return path.times[k];
    return std::nullopt;
}

}  // namespace

HolderResult check_holder_after_tau(const SamplePath& path, const GFunction& g, double lambda) {
    HolderResult res;
    auto tau0 = locate_tau0(path, g);
    if (!tau0) {
        res.verdict = HolderResult::Verdict::vacuous;
        return res;
    }
    const double dt = path.times[1] - path.times[0];
    const double room = path.horizon() - *tau0;
    std::vector<double> hs;
    for (double h = room; h >= 4.0 * dt && hs.size() < 6; h /= 4.0) hs.push_back(h);
    if (hs.size() < 3) {
        res.verdict = HolderResult::Verdict::inconclusive;
        return res;
    }
    // same slope rule as holder_index_check: r(h) vanishes as h -> 0 iff the
    // log-log regression of r against h has positive slope
    std::vector<double> ratios, lh, lr;
    for (double h : hs) {
        double r = path_sup_increment(path, *tau0, h) / std::pow(h, 1.0 / lambda);
        ratios.push_back(r);
        if (r > 0.0) {
            lh.push_back(std::log(h));
            lr.push_back(std::log(r));
        }
    }
    res.fitted_c = *std::max_element(ratios.begin(), ratios.end());
    res.delta = hs.front();
    if (lh.size() < 2) {
        res.verdict = HolderResult::Verdict::inconclusive;
        return res;
    }
    bool vanishing = fit_line(lh, lr).slope > 0.0;
    res.verdict = vanishing ? HolderResult::Verdict::pass : HolderResult::Verdict::fail;
    return res;
}

DivergenceResult divergence_at_tau0(const SamplePath& path, const GFunction& g,
                                    const IvpConfig& cfg) {
    DivergenceResult res;
    auto tau0 = locate_tau0(path, g);
    if (!tau0) return res;
    res.tau0_found = true;
    res.tau0 = *tau0;

    const std::size_t i0 = path.index_at(*tau0);
    if (i0 + 2 > path.times.size()) return res;  // no room after tau0
    std::vector<double> times, values;
    const double zthr = g.zero_threshold();
    for (std::size_t k = i0; k < path.times.size(); ++k) {
        times.push_back(path.times[k] - *tau0);
        double v = g(path.values[k]);
        values.push_back(v <= zthr ? 0.0 : v);
    }
    TimeProfile prof = TimeProfile::from_samples(std::move(times), std::move(values));
    ProfileAnalysis a = analyze_profile(prof, cfg);
    if (a.zeros.empty() || a.zeros.front().first != 0) return res;
    const ZeroRun& r = a.zeros.front();
    res.certified = r.divergent;
    res.fitted_p = r.right.valid ? r.right.p : 0.0;
    return res;
}

std::vector<TceSolution> solve_tce(const Ensemble& ensemble, const GFunction& g,
                                   const TceOptions& options) {
    if (ensemble.paths.empty()) throw ValidationError("solve_tce: empty ensemble");
    const double bound = g.bound;
    double z_horizon = options.z_horizon;
    if (z_horizon <= 0.0) z_horizon = bound > 0.0 ? ensemble.horizon() / bound : ensemble.horizon();
    if (bound * z_horizon > ensemble.horizon() * (1.0 + 1e-9))
        throw RangeError("solve_tce: ensemble horizon below ||g||_inf * z_horizon");

    // shared condition checks
    ConditionReport shared;
    {
        // probe grid over the box of visited states, padded by one unit
        const int d = ensemble.start.dim;
        Vec lo = ensemble.start, hi = ensemble.start;
        for (const SamplePath& p : ensemble.paths)
            for (const Vec& v : p.values)
                for (int i = 0; i < d; ++i) {
                    lo[i] = std::min(lo[i], v[i]);
                    hi[i] = std::max(hi[i], v[i]);
                }
        for (int i = 0; i < d; ++i) {
            lo[i] -= 1.0;
            hi[i] += 1.0;
        }
        const int per_axis = d == 1 ? 201 : 21;
        std::vector<Vec> probe;
        std::vector<int> idx(d, 0);
        double spacing = 0.0;
        for (int i = 0; i < d; ++i) spacing = std::max(spacing, (hi[i] - lo[i]) / (per_axis - 1));
        while (true) {
            Vec p = Vec::zero(d);
            for (int i = 0; i < d; ++i) p[i] = lo[i] + (hi[i] - lo[i]) * idx[i] / (per_axis - 1);
            probe.push_back(p);
            int i = 0;
            for (; i < d; ++i) {
                if (++idx[i] < per_axis) break;
                idx[i] = 0;
            }
            if (i == d) break;
        }
        shared.regular_at_zero = check_regular_at_zero(g, probe, 1.5 * spacing);
        if (options.beta_infinity) {
            shared.growth_a1 = check_growth_at_zeros(g, *options.beta_infinity);
            shared.index_gap = shared.growth_a1.index_gap;
        } else {
            shared.growth_a1.vacuous = true;
            shared.index_gap = std::numeric_limits<double>::quiet_NaN();
        }
    }

    const double dt = ensemble.config.dt;
    const std::size_t nz = static_cast<std::size_t>(std::floor(z_horizon / dt + 1e-9)) + 1;

    std::vector<TceSolution> out;
    out.reserve(ensemble.size());
    for (const SamplePath& x : ensemble.paths) {
        std::vector<double> yv(x.values.size());
        const double zthr = g.zero_threshold();
        for (std::size_t k = 0; k < x.values.size(); ++k) {
            double v = g(x.values[k]);
            yv[k] = v <= zthr ? 0.0 : v;
        }
        TimeProfile prof = TimeProfile::from_samples(x.times, std::move(yv));

        TceSolution sol;
        sol.ivp = solve_ivp_extremal(prof, options.ivp);
        sol.unique = sol.ivp.unique;
        sol.alpha1.resize(nz);
        sol.alpha2.resize(nz);
        sol.z.seed = x.seed;
        sol.z.times.resize(nz);
        sol.z.values.resize(nz);
        for (std::size_t k = 0; k < nz; ++k) {
            double t = std::min(k * dt, z_horizon);
            sol.z.times[k] = t;
            sol.alpha1[k] = sol.ivp.alpha1_at(t);
            sol.alpha2[k] = sol.ivp.alpha2_at(t);
            sol.z.values[k] = x.at(sol.alpha1[k]);
        }
        sol.report = shared;
        sol.report.holder_a2 = check_holder_after_tau(x, g, g.growth_exponent);
        sol.report.divergence = divergence_at_tau0(x, g, options.ivp);
        out.push_back(std::move(sol));
    }
    return out;
}

std::string format_condition_report(const ConditionReport& r) {
    std::ostringstream os;
    os << "regular_at_zero: " << (r.regular_at_zero.pass ? "pass" : "FAIL");
    if (r.regular_at_zero.witness) {
        os << " (witness x=" << (*r.regular_at_zero.witness)[0] << ")";
    }
    os << "\n";
    os << "growth_A1: "
       << (r.growth_a1.vacuous ? "vacuous pass" : r.growth_a1.pass ? "pass" : "FAIL");
    if (!r.growth_a1.vacuous)
        os << " (fitted exponent=" << r.growth_a1.fitted_exponent
           << ", C_g=" << r.growth_a1.fitted_constant << ")";
    os << "\n";
    os << "index_gap: " << r.index_gap << "\n";
    os << "holder_A2: ";
    switch (r.holder_a2.verdict) {
        case HolderResult::Verdict::pass: os << "pass"; break;
        case HolderResult::Verdict::fail: os << "FAIL"; break;
        case HolderResult::Verdict::vacuous: os << "vacuous (no tau0)"; break;
        case HolderResult::Verdict::inconclusive: os << "inconclusive"; break;
    }
    os << " (C=" << r.holder_a2.fitted_c << ", delta=" << r.holder_a2.delta << ")\n";
    os << "divergence_at_tau0: "
       << (r.divergence.certified ? "certified" : "uncertified")
       << " (p=" << r.divergence.fitted_p << ")\n";
    os << "theorem_applies: " << (r.theorem_applies() ? "yes" : "no") << "\n";
    return os.str();
}

}  // namespace ltc
