#include "levytc/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <thread>

#include "levytc/errors.hpp"
#include "levytc/rng.hpp"

namespace ltc {

void SimConfig::validate() const {
    if (!(dt > 0.0)) throw ValidationError("SimConfig: dt must be positive");
    if (!(horizon > 0.0)) throw ValidationError("SimConfig: horizon must be positive");
    if (dt > horizon) throw ValidationError("SimConfig: dt must not exceed horizon");
    if (n_paths < 1) throw ValidationError("SimConfig: n_paths must be >= 1");
    if (!(small_jump_cutoff > 0.0)) throw ValidationError("SimConfig: small_jump_cutoff must be positive");
}

std::size_t SamplePath::index_at(double t) const {
    auto it = std::upper_bound(times.begin(), times.end(), t);
    if (it == times.begin()) return 0;
    return static_cast<std::size_t>(it - times.begin()) - 1;
}

namespace {

// E[chi(Y)] for the jump law at state x; matches the quadrature used in the
// symbol so scheme and symbol compensate identically.
Vec law_mean_chi(const JumpLaw& law, const Vec& x) {
    if (law.kind == JumpLaw::Kind::point_mass) return truncate(law.point(x));
    double m = law.mean(x), s = law.stddev(x);
    if (s <= 0.0) {
        Vec v = Vec::zero(x.dim);
        v[0] = std::clamp(m, -1.0, 1.0);
        return v;
    }
    const int n = 200;
    const double lo = m - 8.0 * s, hi = m + 8.0 * s;
    const double h = (hi - lo) / n;
    double sum = 0.0;
    for (int k = 0; k <= n; ++k) {
        double y = lo + k * h;
        double z = (y - m) / s;
        double f = std::clamp(y, -1.0, 1.0) * std::exp(-0.5 * z * z);
        double w = (k == 0 || k == n) ? 1.0 : (k % 2 ? 4.0 : 2.0);
        sum += w * f;
    }
    Vec v = Vec::zero(x.dim);
    v[0] = sum * h / (3.0 * s * std::sqrt(2.0 * M_PI));
    return v;
}

Vec sample_jump(const JumpLaw& law, const Vec& x, Rng& rng) {
    if (law.kind == JumpLaw::Kind::point_mass) return law.point(x);
    Vec v = Vec::zero(x.dim);
    v[0] = law.mean(x) + law.stddev(x) * rng.normal();
    return v;
}

// Levy density constant for -scale|u|^alpha: nu(dy) = c |y|^{-1-alpha} dy.
double stable_levy_constant(double alpha, double scale) {
    return scale * std::tgamma(1.0 + alpha) * std::sin(0.5 * M_PI * alpha) / M_PI;
}

}  // namespace

SamplePath simulate_path(const MarkovTriplet& triplet, const Vec& x0, const SimConfig& config,
                         std::uint64_t seed) {
    config.validate();
    if (!triplet.state_space.contains(x0)) throw DomainError("simulate_path: x0 outside state space");
    const int d = triplet.state_space.dim;
    if (triplet.jumps.kind == JumpFamily::Kind::stable_like && d != 1)
        throw NumericError("stable-like simulation supported in d=1 only");

    const double dt = config.dt;
    const std::size_t n_steps =
        static_cast<std::size_t>(std::ceil(config.horizon / dt - 1e-9));

    SamplePath path;
    path.seed = seed;
    path.times.resize(n_steps + 1);
    path.values.resize(n_steps + 1);
    for (std::size_t k = 0; k <= n_steps; ++k) path.times[k] = k * dt;
    path.times[n_steps] = config.horizon;

    Rng rng(seed);
    Vec x = x0;
    path.values[0] = x;
    bool absorbed = false;

    const bool has_cpp = triplet.jumps.kind == JumpFamily::Kind::compound_poisson;
    const bool has_stable = triplet.jumps.kind == JumpFamily::Kind::stable_like;

    // compensator E[chi(Y)] is state-independent for most laws; hoist it
    Vec fixed_mean_chi{};
    bool mean_chi_fixed = false;
    if (has_cpp && !triplet.jumps.law.state_dependent) {
        fixed_mean_chi = law_mean_chi(triplet.jumps.law, x0);
        mean_chi_fixed = true;
    }

    for (std::size_t k = 0; k < n_steps; ++k) {
        if (absorbed) {
            path.values[k + 1] = x;
            continue;
        }
        const double step = path.times[k + 1] - path.times[k];
        Vec next = x + step * triplet.drift(x);

        Mat c = triplet.diffusion(x);
        bool diffusive = false;
        for (int i = 0; i < d && !diffusive; ++i)
            for (int j = 0; j < d; ++j)
                if (c(i, j) != 0.0) { diffusive = true; break; }
        if (diffusive) {
            Mat l;
            if (!cholesky(c, l)) throw NumericError("simulate_path: diffusion matrix not PSD");
            Vec z = Vec::zero(d);
            for (int i = 0; i < d; ++i) z[i] = rng.normal();
            next += std::sqrt(step) * l.apply(z);
        }

        if (has_cpp) {
            double rate = triplet.jumps.intensity(x);
            Vec mchi = mean_chi_fixed ? fixed_mean_chi : law_mean_chi(triplet.jumps.law, x);
            next -= (step * rate) * mchi;
            std::uint64_t m = rng.poisson(rate * step);
            for (std::uint64_t j = 0; j < m; ++j) next += sample_jump(triplet.jumps.law, x, rng);
            if (m > 0) path.jump_times.push_back(path.times[k + 1]);
        } else if (has_stable) {
            double alpha = triplet.jumps.index(x);
            double scale = triplet.jumps.scale(x);
            if (!config.stable_decomposition) {
                next[0] += std::pow(scale * step, 1.0 / alpha) * rng.stable(alpha);
            } else {
                double cnu = stable_levy_constant(alpha, scale);
                double delta = config.small_jump_cutoff;
                double big_rate = 2.0 * cnu * std::pow(delta, -alpha) / alpha;
                double small_var = 2.0 * cnu * std::pow(delta, 2.0 - alpha) / (2.0 - alpha);
                next[0] += std::sqrt(small_var * step) * rng.normal();
                std::uint64_t m = rng.poisson(big_rate * step);
                for (std::uint64_t j = 0; j < m; ++j) {
                    double mag = delta * std::pow(rng.uniform(), -1.0 / alpha);
                    next[0] += rng.uniform() < 0.5 ? mag : -mag;
                }
                if (m > 0) path.jump_times.push_back(path.times[k + 1]);
            }
        }

        if (!triplet.state_space.contains(next)) {
            if (!config.absorb_outside)
                throw DomainError("simulate_path: state left E and absorb_outside is false");
            absorbed = true;  // frozen at the last in-E value
            path.values[k + 1] = x;
            continue;
        }
        x = next;
        path.values[k + 1] = x;
    }
    return path;
}

Ensemble simulate_ensemble(const MarkovTriplet& triplet, const Vec& x0, const SimConfig& config,
                           std::uint64_t master_seed, int workers) {
    config.validate();
    Ensemble e;
    e.start = x0;
    e.config = config;
    e.master_seed = master_seed;
    const std::size_t n = static_cast<std::size_t>(config.n_paths);
    e.paths.resize(n);
    auto run_range = [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i)
            e.paths[i] = simulate_path(triplet, x0, config, mix_seed(master_seed, i));
    };
    if (workers <= 1 || n < 2) {
        run_range(0, n);
        return e;
    }
    const std::size_t w = std::min<std::size_t>(static_cast<std::size_t>(workers), n);
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errs(w);
    for (std::size_t t = 0; t < w; ++t) {
        std::size_t lo = n * t / w, hi = n * (t + 1) / w;
        pool.emplace_back([&, t, lo, hi] {
            try {
                run_range(lo, hi);
            } catch (...) {
                errs[t] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& ep : errs)
        if (ep) std::rethrow_exception(ep);
    return e;
}

double path_sup_increment(const SamplePath& path, double t0, double h) {
    if (!(h >= 0.0)) throw RangeError("path_sup_increment: h must be >= 0");
    if (t0 >= path.horizon()) throw RangeError("path_sup_increment: t0 beyond horizon");
    const std::size_t i0 = path.index_at(t0);
    const Vec& base = path.values[i0];
    const double t_end = t0 + h + 1e-12 * std::max(1.0, t0 + h);
    double sup = 0.0;
    for (std::size_t i = i0; i < path.times.size() && path.times[i] <= t_end; ++i)
        sup = std::max(sup, (path.values[i] - base).norm());
    return sup;
}

}  // namespace ltc
