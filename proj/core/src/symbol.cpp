#include "levytc/symbol.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ltc {

bool cholesky(const Mat& c, Mat& lower) {
    const int d = c.dim;
    lower = Mat{};
    lower.dim = d;
    double scale = 0.0;
    for (int i = 0; i < d; ++i) scale = std::max(scale, std::abs(c(i, i)));
    const double tol = 1e-12 * std::max(scale, 1.0);
    for (int j = 0; j < d; ++j) {
        double diag = c(j, j);
        for (int k = 0; k < j; ++k) diag -= lower(j, k) * lower(j, k);
        if (diag < -tol) return false;
        diag = std::max(diag, 0.0);
        lower(j, j) = std::sqrt(diag);
        for (int i = j + 1; i < d; ++i) {
            double v = c(i, j);
            for (int k = 0; k < j; ++k) v -= lower(i, k) * lower(j, k);
            lower(i, j) = lower(j, j) > tol ? v / lower(j, j) : 0.0;
        }
    }
    return true;
}

Vec truncate(const Vec& y) {
    double n = y.norm();
    if (n <= 1.0) return y;
    return (1.0 / n) * y;
}

StateSpace StateSpace::full(int d) {
    StateSpace s;
    s.dim = d;
    s.whole_space = true;
    return s;
}

StateSpace StateSpace::box(const Vec& lo, const Vec& hi) {
    StateSpace s;
    s.dim = lo.dim;
    s.whole_space = false;
    s.lo = lo;
    s.hi = hi;
    for (int i = 0; i < s.dim; ++i) {
        if (!(std::isfinite(lo[i]) && std::isfinite(hi[i]) && lo[i] < hi[i]))
            throw ValidationError("StateSpace box bounds must be finite and ordered");
    }
    return s;
}

bool StateSpace::contains(const Vec& x) const {
    if (whole_space) return true;
    for (int i = 0; i < dim; ++i)
        if (x[i] < lo[i] || x[i] > hi[i]) return false;
    return true;
}

void StateSpace::probe_bounds(double probe_radius, Vec& lo_out, Vec& hi_out) const {
    lo_out = Vec::zero(dim);
    hi_out = Vec::zero(dim);
    for (int i = 0; i < dim; ++i) {
        lo_out[i] = whole_space ? -probe_radius : lo[i];
        hi_out[i] = whole_space ? probe_radius : hi[i];
    }
}

JumpFamily JumpFamily::none_() { return JumpFamily{}; }

JumpFamily JumpFamily::compound_poisson(std::function<double(const Vec&)> intensity, JumpLaw law) {
    JumpFamily f;
    f.kind = Kind::compound_poisson;
    f.intensity = std::move(intensity);
    f.law = std::move(law);
    return f;
}

JumpFamily JumpFamily::stable_like(std::function<double(const Vec&)> index,
                                   std::function<double(const Vec&)> scale) {
    JumpFamily f;
    f.kind = Kind::stable_like;
    f.index = std::move(index);
    f.scale = std::move(scale);
    return f;
}

namespace {

// E[chi(Y)] for a 1d Gaussian jump law, Simpson on [m-8s, m+8s].
double gaussian_mean_chi(double m, double s) {
    if (s <= 0.0) return std::clamp(m, -1.0, 1.0);
    const int n = 200;  // even
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
    return sum * h / (3.0 * s * std::sqrt(2.0 * M_PI));
}

Complex jump_symbol(const JumpFamily& jumps, const Vec& x, const Vec& u) {
    const Complex I(0.0, 1.0);
    switch (jumps.kind) {
        case JumpFamily::Kind::none:
            return {0.0, 0.0};
        case JumpFamily::Kind::compound_poisson: {
            double rate = jumps.intensity(x);
            if (jumps.law.kind == JumpLaw::Kind::point_mass) {
                Vec y0 = jumps.law.point(x);
                double uy = dot(u, y0);
                double uchi = dot(u, truncate(y0));
                return rate * (std::exp(I * uy) - 1.0 - I * uchi);
            }
            // gaussian, d = 1
            if (u.dim != 1)
                throw NumericError("gaussian jump law supported in d=1 only");
            double m = jumps.law.mean(x);
            double s = jumps.law.stddev(x);
            double uu = u[0];
            Complex cf = std::exp(I * (uu * m) - 0.5 * uu * uu * s * s);
            double mchi = gaussian_mean_chi(m, s);
            return rate * (cf - 1.0 - I * (uu * mchi));
        }
        case JumpFamily::Kind::stable_like: {
            double a = jumps.index(x);
            double s = jumps.scale(x);
            return {-s * std::pow(u.norm(), a), 0.0};
        }
    }
    return {0.0, 0.0};
}

std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> v(n);
    if (n == 1) {
        v[0] = 0.5 * (lo + hi);
        return v;
    }
    for (int i = 0; i < n; ++i) v[i] = lo + (hi - lo) * i / (n - 1);
    return v;
}

// Visit the tensor grid of `axes` (per-dimension sample lists).
template <typename F>
void for_each_grid_point(const std::vector<std::vector<double>>& axes, F&& f) {
    const int d = static_cast<int>(axes.size());
    std::array<int, kMaxDim> idx{};
    Vec p = Vec::zero(d);
    while (true) {
        for (int i = 0; i < d; ++i) p[i] = axes[i][idx[i]];
        f(p);
        int i = 0;
        for (; i < d; ++i) {
            if (++idx[i] < static_cast<int>(axes[i].size())) break;
            idx[i] = 0;
        }
        if (i == d) return;
    }
}

}  // namespace

void MarkovTriplet::validate(int probe_points, double probe_radius) const {
    Vec lo, hi;
    state_space.probe_bounds(probe_radius, lo, hi);
    std::vector<std::vector<double>> axes;
    for (int i = 0; i < state_space.dim; ++i)
        axes.push_back(linspace(lo[i], hi[i], probe_points));

    for_each_grid_point(axes, [&](const Vec& x) {
        Vec b = drift(x);
        for (int i = 0; i < x.dim; ++i)
            if (!std::isfinite(b[i])) throw ValidationError("drift unbounded on probe grid");
        Mat c = diffusion(x);
        for (int i = 0; i < x.dim; ++i)
            for (int j = 0; j < x.dim; ++j) {
                if (!std::isfinite(c(i, j)))
                    throw ValidationError("diffusion unbounded on probe grid");
                if (std::abs(c(i, j) - c(j, i)) > 1e-9)
                    throw ValidationError("diffusion matrix not symmetric");
            }
        Mat l;
        if (!cholesky(c, l)) throw ValidationError("diffusion matrix not PSD on probe grid");
        switch (jumps.kind) {
            case JumpFamily::Kind::none:
                break;
            case JumpFamily::Kind::compound_poisson: {
                double r = jumps.intensity(x);
                if (!(std::isfinite(r) && r >= 0.0))
                    throw ValidationError("compound-Poisson intensity must be finite and >= 0");
                break;
            }
            case JumpFamily::Kind::stable_like: {
                double a = jumps.index(x);
                double s = jumps.scale(x);
                if (!(a > 0.0 && a < 2.0))
                    throw ValidationError("stable-like index must lie in (0,2)");
                if (!(std::isfinite(s) && s > 0.0))
                    throw ValidationError("stable-like scale must be positive");
                break;
            }
        }
    });
}

SymbolSpec SymbolSpec::closed_form(int dim, std::function<Complex(const Vec&, const Vec&)> q,
                                   StateSpace space) {
    SymbolSpec s;
    space.dim = dim;
    s.space_ = space;
    s.q_ = std::move(q);
    return s;
}

SymbolSpec SymbolSpec::from_triplet(MarkovTriplet triplet) {
    SymbolSpec s;
    s.space_ = triplet.state_space;
    s.triplet_ = std::move(triplet);
    return s;
}

Complex SymbolSpec::eval(const Vec& x, const Vec& u) const {
    if (!space_.contains(x)) throw DomainError("eval_symbol: x outside state space");
    if (u.norm2() == 0.0) return {0.0, 0.0};  // all three terms vanish
    if (triplet_) {
        const Complex I(0.0, 1.0);
        const MarkovTriplet& t = *triplet_;
        Complex q = I * dot(u, t.drift(x));
        q -= 0.5 * t.diffusion(x).quad(u);
        q += jump_symbol(t.jumps, x, u);
        return q;
    }
    return q_(x, u);
}

SupGridConfig SupGridConfig::for_dim(int d) {
    SupGridConfig g;
    switch (d) {
        case 1: g.eps_points_per_axis = 64; g.y_points_per_axis = 128; break;
        case 2: g.eps_points_per_axis = 16; g.y_points_per_axis = 24; break;
        default: g.eps_points_per_axis = 8; g.y_points_per_axis = 12; break;
    }
    return g;
}

namespace {

SupGridConfig resolve_grid(const SupGridConfig& g, int d) {
    SupGridConfig r = g;
    SupGridConfig def = SupGridConfig::for_dim(d);
    if (r.eps_points_per_axis <= 0) r.eps_points_per_axis = def.eps_points_per_axis;
    if (r.y_points_per_axis <= 0) r.y_points_per_axis = def.y_points_per_axis;
    return r;
}

// sup over the eps grid (unit ball) of |q(y, eps/R)|
double sup_over_eps(const SymbolSpec& spec, const Vec& y, double R, int eps_points) {
    const int d = spec.dim();
    std::vector<std::vector<double>> axes(d, linspace(-1.0, 1.0, eps_points));
    double best = 0.0;
    for_each_grid_point(axes, [&](const Vec& eps) {
        if (eps.norm2() > 1.0) return;
        best = std::max(best, std::abs(spec.eval(y, (1.0 / R) * eps)));
    });
    return best;
}

}  // namespace

double h_local(const SymbolSpec& spec, const Vec& x, double R, const SupGridConfig& grid) {
    if (!(R > 0.0)) throw RangeError("h_local: R must be positive");
    SupGridConfig g = resolve_grid(grid, spec.dim());
    const int d = spec.dim();
    std::vector<std::vector<double>> axes;
    for (int i = 0; i < d; ++i) axes.push_back(linspace(x[i] - 2.0 * R, x[i] + 2.0 * R, g.y_points_per_axis));
    double best = 0.0;
    bool any = false;
    for_each_grid_point(axes, [&](const Vec& y) {
        if ((y - x).norm() > 2.0 * R) return;
        if (!spec.state_space().contains(y)) return;
        any = true;
        best = std::max(best, sup_over_eps(spec, y, R, g.eps_points_per_axis));
    });
    if (!any) throw DomainError("h_local: ball around x misses the state space");
    return best;
}

double h_global(const SymbolSpec& spec, double R, const SupGridConfig& grid) {
    if (!(R > 0.0)) throw RangeError("h_global: R must be positive");
    SupGridConfig g = resolve_grid(grid, spec.dim());
    Vec lo, hi;
    spec.state_space().probe_bounds(g.probe_radius, lo, hi);
    std::vector<std::vector<double>> axes;
    for (int i = 0; i < spec.dim(); ++i) axes.push_back(linspace(lo[i], hi[i], g.y_points_per_axis));
    double best = 0.0;
    for_each_grid_point(axes, [&](const Vec& y) {
        if (!spec.state_space().contains(y)) return;
        best = std::max(best, sup_over_eps(spec, y, R, g.eps_points_per_axis));
    });
    return best;
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    LineFit f;
    f.n = static_cast<int>(x.size());
    if (f.n < 2) return f;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = 0; i < f.n; ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    double det = f.n * sxx - sx * sx;
    if (std::abs(det) < 1e-300) return f;
    f.slope = (f.n * sxy - sx * sy) / det;
    f.intercept = (sy - f.slope * sx) / f.n;
    double ss = 0.0;
    for (int i = 0; i < f.n; ++i) {
        double r = y[i] - (f.intercept + f.slope * x[i]);
        ss += r * r;
    }
    f.residual = std::sqrt(ss / f.n);
    return f;
}

std::vector<double> default_r_grid(double r_max, double r_min, int n) {
    std::vector<double> r(n);
    for (int i = 0; i < n; ++i)
        r[i] = r_max * std::pow(r_min / r_max, static_cast<double>(i) / (n - 1));
    return r;
}

IndexEstimate estimate_uniform_index(const SymbolSpec& spec, const std::vector<double>& r_grid,
                                     const SupGridConfig& grid) {
    if (r_grid.size() < 4) throw ValidationError("estimate_uniform_index: need >= 4 grid points");
    for (std::size_t i = 1; i < r_grid.size(); ++i)
        if (!(r_grid[i] < r_grid[i - 1]))
            throw ValidationError("estimate_uniform_index: r_grid must be strictly decreasing");
    if (!(r_grid.front() / r_grid.back() >= 99.0))
        throw ValidationError("estimate_uniform_index: r_grid must span >= 2 decades");

    IndexEstimate est;
    est.r_grid = r_grid;
    est.h_values.reserve(r_grid.size());
    for (double r : r_grid) est.h_values.push_back(h_global(spec, r, grid));

    // regression over the finest half of the grid
    std::vector<double> lx, ly;
    for (std::size_t i = r_grid.size() / 2; i < r_grid.size(); ++i) {
        if (est.h_values[i] <= 1e-300) continue;
        lx.push_back(std::log(1.0 / r_grid[i]));
        ly.push_back(std::log(est.h_values[i]));
    }
    if (lx.size() < 2) {
        est.degenerate_fit = true;
        est.beta_infinity = 0.0;
        return est;
    }
    LineFit f = fit_line(lx, ly);
    est.fit_slope = f.slope;
    est.fit_residual = f.residual;
    est.beta_infinity = std::clamp(f.slope, 0.0, 2.0);
    return est;
}

SymbolSpec make_preset(const std::string& name, int dim) {
    auto args_of = [&](const std::string& head) -> std::optional<std::vector<double>> {
        if (name.rfind(head + "(", 0) != 0 || name.back() != ')') return std::nullopt;
        std::string inner = name.substr(head.size() + 1, name.size() - head.size() - 2);
        std::vector<double> out;
        std::stringstream ss(inner);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            try {
                out.push_back(std::stod(tok));
            } catch (...) {
                throw ParseError("preset argument not numeric: " + tok);
            }
        }
        return out;
    };

    MarkovTriplet t;
    t.state_space = StateSpace::full(dim);
    t.drift = [dim](const Vec&) { return Vec::zero(dim); };
    t.diffusion = [dim](const Vec&) { return Mat::scalar(dim, 0.0); };
    t.jumps = JumpFamily::none_();

    if (name == "brownian") {
        t.diffusion = [dim](const Vec&) { return Mat::identity(dim); };
        return SymbolSpec::from_triplet(std::move(t));
    }
    if (name == "cauchy") {
        t.jumps = JumpFamily::stable_like([](const Vec&) { return 1.0; },
                                          [](const Vec&) { return 1.0; });
        return SymbolSpec::from_triplet(std::move(t));
    }
    if (auto a = args_of("stable")) {
        if (a->size() != 1 || !((*a)[0] > 0.0 && (*a)[0] <= 2.0))
            throw ParseError("stable(alpha) needs alpha in (0,2]");
        double alpha = (*a)[0];
        if (alpha == 2.0) {
            // boundary case: Gaussian with matching symbol -|u|^2
            t.diffusion = [dim](const Vec&) { return Mat::scalar(dim, 2.0); };
        } else {
            t.jumps = JumpFamily::stable_like([alpha](const Vec&) { return alpha; },
                                              [](const Vec&) { return 1.0; });
        }
        return SymbolSpec::from_triplet(std::move(t));
    }
    if (auto a = args_of("drift")) {
        if (a->size() != 1) throw ParseError("drift(b) needs one argument");
        double b = (*a)[0];
        t.drift = [dim, b](const Vec&) {
            Vec v = Vec::zero(dim);
            for (int i = 0; i < dim; ++i) v[i] = b;
            return v;
        };
        return SymbolSpec::from_triplet(std::move(t));
    }
    if (auto a = args_of("cpp")) {
        if (a->size() != 2) throw ParseError("cpp(rate, jump) needs two arguments");
        double rate = (*a)[0], jump = (*a)[1];
        if (!(rate >= 0.0)) throw ParseError("cpp rate must be >= 0");
        JumpLaw law;
        law.kind = JumpLaw::Kind::point_mass;
        law.point = [dim, jump](const Vec&) {
            Vec v = Vec::zero(dim);
            v[0] = jump;
            return v;
        };
        t.jumps = JumpFamily::compound_poisson([rate](const Vec&) { return rate; }, law);
        return SymbolSpec::from_triplet(std::move(t));
    }
    throw ParseError("unknown preset: " + name);
}

}  // namespace ltc
