#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "levytc/errors.hpp"
#include "levytc/vec.hpp"

namespace ltc {

using Complex = std::complex<double>;

/// Canonical truncation function: identity inside the unit ball,
/// radial projection onto it outside.
Vec truncate(const Vec& y);

/// State space E: all of R^d or an axis-aligned box.
struct StateSpace {
    int dim = 1;
    bool whole_space = true;
    Vec lo{};  // used when whole_space == false
    Vec hi{};

    static StateSpace full(int d);
    static StateSpace box(const Vec& lo, const Vec& hi);

    bool contains(const Vec& x) const;
    /// Region the sup/probe grids cover: the box itself, or
    /// [-probe_radius, probe_radius]^d for the whole space.
    void probe_bounds(double probe_radius, Vec& lo_out, Vec& hi_out) const;
};

/// Jump size law for the compound-Poisson family.
struct JumpLaw {
    enum class Kind { point_mass, gaussian };
    Kind kind = Kind::point_mass;

    // point mass: jump is exactly point(x)
    std::function<Vec(const Vec&)> point;
    // gaussian (d = 1 only): N(mean(x), stddev(x)^2)
    std::function<double(const Vec&)> mean;
    std::function<double(const Vec&)> stddev;
    bool state_dependent = false;
};

/// Parametric jump kernels: none, compound Poisson, or stable-like.
struct JumpFamily {
    enum class Kind { none, compound_poisson, stable_like };
    Kind kind = Kind::none;

    // compound Poisson
    std::function<double(const Vec&)> intensity;
    JumpLaw law;

    // stable-like: F(x,.) has symbol contribution -scale(x)|u|^index(x)
    std::function<double(const Vec&)> index;  // in (0,2)
    std::function<double(const Vec&)> scale;  // > 0

    static JumpFamily none_();
    static JumpFamily compound_poisson(std::function<double(const Vec&)> intensity, JumpLaw law);
    static JumpFamily stable_like(std::function<double(const Vec&)> index,
                                  std::function<double(const Vec&)> scale);
};

/// State-dependent generator data (b, c, F).
struct MarkovTriplet {
    std::function<Vec(const Vec&)> drift;
    std::function<Mat(const Vec&)> diffusion;
    JumpFamily jumps;
    StateSpace state_space;

    /// Probe-grid sanity: c(x) symmetric PSD, b/c bounded, jump integral finite.
    /// Throws ValidationError on failure.
    void validate(int probe_points = 33, double probe_radius = 10.0) const;
};

/// Grid resolution for the sup approximations H(x,R), H(R).
/// Grid sup <= true sup: the approximation errs low.
/// Zero point counts mean "auto": 64 eps / 128 y per axis in d=1,
/// scaled down for d=2,3.
struct SupGridConfig {
    int eps_points_per_axis = 0;
    int y_points_per_axis = 0;
    double probe_radius = 10.0;

    static SupGridConfig for_dim(int d);
};

/// Evaluable symbol q(x,u): closed form or derived from a triplet.
class SymbolSpec {
public:
    static SymbolSpec closed_form(int dim, std::function<Complex(const Vec&, const Vec&)> q,
                                  StateSpace space = StateSpace::full(1));
    static SymbolSpec from_triplet(MarkovTriplet triplet);

    /// q(x,u). Throws DomainError when x is outside E.
    Complex eval(const Vec& x, const Vec& u) const;

    int dim() const { return space_.dim; }
    const StateSpace& state_space() const { return space_; }
    const MarkovTriplet* triplet() const { return triplet_ ? &*triplet_ : nullptr; }

private:
    SymbolSpec() = default;
    std::function<Complex(const Vec&, const Vec&)> q_;
    std::optional<MarkovTriplet> triplet_;
    StateSpace space_ = StateSpace::full(1);
};

/// H(x,R): sup over |y-x| <= 2R (intersected with E) and |eps| <= 1
/// of |q(y, eps/R)|, approximated on tensor grids.
double h_local(const SymbolSpec& spec, const Vec& x, double R, const SupGridConfig& grid = {});

/// H(R): same with the y-sup over the probe region covering E.
double h_global(const SymbolSpec& spec, double R, const SupGridConfig& grid = {});

struct IndexEstimate {
    double beta_infinity = 0.0;  // clipped to [0, 2]
    std::vector<double> r_grid;
    std::vector<double> h_values;
    double fit_slope = 0.0;
    double fit_residual = 0.0;
    bool degenerate_fit = false;
};

/// Uniform index beta_infinity as the log-log slope of H(R) vs 1/R over the
/// finest half of r_grid (numerical surrogate for the limsup definition).
/// r_grid must be strictly decreasing, >= 4 points spanning >= 2 decades.
IndexEstimate estimate_uniform_index(const SymbolSpec& spec, const std::vector<double>& r_grid,
                                     const SupGridConfig& grid = {});

/// Default grid for index estimation: n points log-spaced from r_max to r_min.
std::vector<double> default_r_grid(double r_max = 1.0, double r_min = 1e-3, int n = 16);

/// Named closed-form presets: "brownian", "cauchy", "stable(alpha)",
/// "drift(b)", "cpp(rate, jump)". Throws ParseError on unknown names.
/// Presets come with the matching triplet so they can also be simulated.
SymbolSpec make_preset(const std::string& name, int dim = 1);

/// Least-squares line fit of y against x; returns {slope, intercept, rms residual}.
struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double residual = 0.0;
    int n = 0;
};
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace ltc
