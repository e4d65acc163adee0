#include "levytc/ivp.hpp"

#include <algorithm>
#include <cmath>

#include "levytc/symbol.hpp"  // fit_line

namespace ltc {

TimeProfile TimeProfile::from_samples(std::vector<double> times, std::vector<double> values) {
    if (times.size() != values.size() || times.size() < 2)
        throw ValidationError("TimeProfile: need matching times/values with >= 2 samples");
    if (std::abs(times.front()) > 1e-12) throw ValidationError("TimeProfile: grid must start at 0");
    for (std::size_t k = 1; k < times.size(); ++k)
        if (!(times[k] > times[k - 1]))
            throw ValidationError("TimeProfile: times must be strictly increasing");

    TimeProfile y;
    y.times = std::move(times);
    y.values = std::move(values);
    y.times.front() = 0.0;
    double sup = 0.0;
    for (double& v : y.values) {
        if (!(v >= -1e-12) || !std::isfinite(v))
            throw ValidationError("TimeProfile: values must be nonnegative and finite");
        v = std::max(v, 0.0);
        sup = std::max(sup, v);
    }
    y.sup_bound = sup;

    // discrete right-regularity surrogate: isolated one-sample dips to zero
    const double zthr = y.zero_threshold();
    const double pos = 1e-3 * sup;
    for (std::size_t k = 1; k + 1 < y.values.size(); ++k)
        if (y.values[k] <= zthr && y.values[k - 1] > pos && y.values[k + 1] > pos)
            y.regularity_warning = true;
    return y;
}

double TimeProfile::at(double t) const {
    auto it = std::upper_bound(times.begin(), times.end(), t);
    std::size_t i = it == times.begin() ? 0 : static_cast<std::size_t>(it - times.begin()) - 1;
    return values[i];
}

namespace {

// Power-law fit on one side of a zero at time tau. Candidate samples are
// (distance, value) pairs ordered by increasing distance; only the decade
// nearest the zero enters the fit.
PowerFit fit_side(const std::vector<std::pair<double, double>>& samples, int max_samples) {
    PowerFit f;
    if (samples.size() < 3) return f;
    const double d_min = samples.front().first;
    std::vector<double> lx, ly;
    for (const auto& [d, v] : samples) {
        if (d > 10.0 * d_min && lx.size() >= 3) break;
        lx.push_back(std::log(d));
        ly.push_back(std::log(v));
        if (static_cast<int>(lx.size()) >= max_samples) break;
    }
    if (lx.size() < 3) return f;
    LineFit lf = fit_line(lx, ly);
    f.p = lf.slope;
    f.k = std::exp(lf.intercept);
    f.valid = true;
    return f;
}

}  // namespace

ProfileAnalysis analyze_profile(const TimeProfile& y, const IvpConfig& cfg) {
    const std::size_t n = y.times.size();
    const double zthr = y.zero_threshold();
    auto is_zero = [&](std::size_t k) { return y.values[k] <= zthr; };

    ProfileAnalysis a;

    // locate maximal zero runs and fit their sides
    for (std::size_t k = 0; k < n;) {
        if (!is_zero(k)) {
            ++k;
            continue;
        }
        ZeroRun run;
        run.first = k;
        while (k + 1 < n && is_zero(k + 1)) ++k;
        run.last = k;
        run.time = y.times[run.first];
        run.plateau = run.last > run.first;

        if (run.first > 0) {
            std::vector<std::pair<double, double>> s;
            for (std::size_t j = run.first; j-- > 0 && !is_zero(j);)
                s.emplace_back(y.times[run.first] - y.times[j], y.values[j]);
            run.left = fit_side(s, cfg.max_fit_samples);
        }
        if (run.last + 1 < n) {
            std::vector<std::pair<double, double>> s;
            for (std::size_t j = run.last + 1; j < n && !is_zero(j); ++j)
                s.emplace_back(y.times[j] - y.times[run.last], y.values[j]);
            run.right = fit_side(s, cfg.max_fit_samples);
        }

        const double p_cut = 1.0 - cfg.p_margin;
        run.certified = run.plateau || run.left.valid || run.right.valid;
        run.divergent = run.plateau || (run.left.valid && run.left.p >= p_cut) ||
                        (run.right.valid && run.right.p >= p_cut);
        a.zeros.push_back(run);
        ++k;
    }

    if (!a.zeros.empty()) a.tau = a.zeros.front().time;
    for (const ZeroRun& r : a.zeros)
        if (r.divergent) {
            a.eta = r.time;
            break;
        }

    // cumulative reciprocal integral
    a.cumulative.assign(n, 0.0);
    const double p_cut = 1.0 - cfg.p_margin;
    auto run_of = [&](std::size_t k) -> const ZeroRun* {
        for (const ZeroRun& r : a.zeros)
            if (k >= r.first && k <= r.last) return &r;
        return nullptr;
    };
    bool inf_tail = false;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (inf_tail) {
            a.cumulative[k + 1] = kInf;
            continue;
        }
        const double w = y.times[k + 1] - y.times[k];
        double inc = 0.0;
        if (!is_zero(k)) {
            // trapezoid between positive samples; left-point when falling into a zero
            inc = !is_zero(k + 1) ? 0.5 * w * (1.0 / y.values[k] + 1.0 / y.values[k + 1])
                                  : w / y.values[k];
        } else {
            const ZeroRun* r = run_of(k);
            if (r->left.valid && r->left.p >= p_cut && k == r->first) {
                // integral already diverges approaching the run from below
                a.cumulative[r->first] = kInf;
            }
            if (r->divergent) {
                inf_tail = true;
                a.cumulative[k + 1] = kInf;
                continue;
            }
            if (r->right.valid && r->right.p < 1.0) {
                // analytic tail of the fitted power law across the zero sample
                double d1 = y.times[k + 1] - y.times[r->last];
                double d0 = y.times[k] > y.times[r->last] ? y.times[k] - y.times[r->last] : 0.0;
                inc = (std::pow(d1, 1.0 - r->right.p) - std::pow(d0, 1.0 - r->right.p)) /
                      (r->right.k * (1.0 - r->right.p));
            } else if (r->last + 1 < n) {
                inc = w / y.values[r->last + 1];  // uncertified fallback
            }
        }
        if (std::isinf(a.cumulative[k])) {
            inf_tail = true;
            a.cumulative[k + 1] = kInf;
        } else {
            a.cumulative[k + 1] = a.cumulative[k] + inc;
        }
    }
    return a;
}

double integrate_reciprocal(const TimeProfile& y, double t, const IvpConfig& cfg) {
    if (!(t >= 0.0)) throw RangeError("integrate_reciprocal: t must be >= 0");
    ProfileAnalysis a = analyze_profile(y, cfg);
    auto it = std::upper_bound(y.times.begin(), y.times.end(), t);
    std::size_t k = it == y.times.begin() ? 0 : static_cast<std::size_t>(it - y.times.begin()) - 1;
    double base = a.cumulative[k];
    if (std::isinf(base)) return kInf;
    double part = t - y.times[k];
    if (part <= 0.0) return base;
    if (y.values[k] > y.zero_threshold()) return base + part / y.values[k];
    for (const ZeroRun& r : a.zeros) {
        if (k < r.first || k > r.last) continue;
        if (r.divergent) return kInf;
        if (r.right.valid && r.right.p < 1.0) {
            double d1 = t - y.times[r.last];
            double d0 = y.times[k] > y.times[r.last] ? y.times[k] - y.times[r.last] : 0.0;
            if (d1 <= 0.0) return base;
            return base + (std::pow(d1, 1.0 - r.right.p) - std::pow(d0, 1.0 - r.right.p)) /
                              (r.right.k * (1.0 - r.right.p));
        }
        return base;
    }
    return base;
}

double first_zero(const TimeProfile& y) {
    const double zthr = y.zero_threshold();
    for (std::size_t k = 0; k < y.values.size(); ++k)
        if (y.values[k] <= zthr) return y.times[k];
    return kInf;
}

double blowup_time(const TimeProfile& y, const IvpConfig& cfg) {
    return analyze_profile(y, cfg).eta;
}

namespace {

double interp_at(const std::vector<double>& xs, const std::vector<double>& ys, double x) {
    auto it = std::upper_bound(xs.begin(), xs.end(), x);
    if (it == xs.begin()) return ys.front();
    if (it == xs.end()) return ys.back();
    std::size_t i = static_cast<std::size_t>(it - xs.begin());
    double w = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
    return ys[i - 1] + w * (ys[i] - ys[i - 1]);
}

}  // namespace

IvpSolution solve_ivp_extremal(const TimeProfile& y, const IvpConfig& cfg) {
    ProfileAnalysis a = analyze_profile(y, cfg);
    const std::size_t n = y.times.size();

    IvpSolution sol;
    sol.times = y.times;
    sol.tau = a.tau;
    sol.eta = a.eta;
    sol.unique = a.eta <= a.tau;
    if (!a.zeros.empty()) {
        const ZeroRun& r = a.zeros.front();
        sol.divergence_power = r.right.valid ? r.right.p
                               : r.left.valid ? r.left.p
                                              : std::numeric_limits<double>::quiet_NaN();
    }

    // monotone inversion knots (I_k, t_k) over the finite, increasing range of I
    std::vector<double> ik, tk;
    for (std::size_t k = 0; k < n; ++k) {
        if (std::isinf(a.cumulative[k])) break;
        if (!ik.empty() && !(a.cumulative[k] > ik.back())) continue;
        ik.push_back(a.cumulative[k]);
        tk.push_back(y.times[k]);
    }
    sol.gamma = ik.empty() ? 0.0 : ik.back();
    if (std::isinf(a.eta) && ik.size() == n) {
        // I stays finite on the whole grid; gamma is only horizon-limited
    }

    const double tail_value = y.values.back() > y.zero_threshold() ? y.values.back() : 0.0;
    sol.alpha1.resize(n);
    sol.alpha2.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double t = y.times[k];
        double g;
        if (ik.empty()) {
            g = 0.0;
        } else if (t <= sol.gamma) {
            g = interp_at(ik, tk, t);
        } else if (!std::isinf(a.eta)) {
            g = kInf;  // past gamma with a certified blow-up
        } else {
            // cadlag extension of the profile by its last value
            g = tk.back() + (t - ik.back()) * tail_value;
        }
        sol.alpha2[k] = std::isinf(g) ? a.eta : g;
        sol.alpha1[k] = std::isinf(g) ? std::min(a.tau, a.eta) : std::min(g, a.tau);
    }
    // enforce monotonicity and ordering against interpolation round-off
    for (std::size_t k = 1; k < n; ++k) {
        sol.alpha1[k] = std::max(sol.alpha1[k], sol.alpha1[k - 1]);
        sol.alpha2[k] = std::max(sol.alpha2[k], sol.alpha2[k - 1]);
    }
    for (std::size_t k = 0; k < n; ++k) sol.alpha1[k] = std::min(sol.alpha1[k], sol.alpha2[k]);
    return sol;
}

double IvpSolution::alpha1_at(double t) const { return interp_at(times, alpha1, t); }
double IvpSolution::alpha2_at(double t) const { return interp_at(times, alpha2, t); }

double residual(const TimeProfile& y, const std::vector<double>& alpha) {
    if (alpha.size() != y.times.size())
        throw ValidationError("residual: alpha must be sampled on the profile grid");
    double acc = 0.0;
    double sup = 0.0;
    for (std::size_t k = 0; k < alpha.size(); ++k) {
        sup = std::max(sup, std::abs(alpha[k] - acc));
        if (k + 1 < alpha.size()) acc += y.at(alpha[k]) * (y.times[k + 1] - y.times[k]);
    }
    return sup;
}

}  // namespace ltc
