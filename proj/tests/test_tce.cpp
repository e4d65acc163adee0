#include <doctest.h>

#include <cmath>

#include "levytc/expr.hpp"
#include "levytc/tce.hpp"

using namespace ltc;

namespace {

MarkovTriplet drift_triplet(double b) {
    MarkovTriplet t;
    t.state_space = StateSpace::full(1);
    t.drift = [b](const Vec&) { return Vec(b); };
    t.diffusion = [](const Vec&) { return Mat::scalar(1, 0.0); };
    t.jumps = JumpFamily::none_();
    return t;
}

MarkovTriplet brownian_triplet() {
    MarkovTriplet t = drift_triplet(0.0);
    t.diffusion = [](const Vec&) { return Mat::scalar(1, 1.0); };
    return t;
}

std::vector<Vec> probe_grid(double lo, double hi, int n) {
    std::vector<Vec> g;
    for (int i = 0; i < n; ++i) g.emplace_back(lo + (hi - lo) * i / (n - 1));
    return g;
}

GFunction make_g(std::function<double(const Vec&)> f, double bound,
                 std::vector<Vec> zeros = {}, double lambda = 1.0) {
    GFunction g;
    g.f = std::move(f);
    g.bound = bound;
    g.declared_zeros = std::move(zeros);
    g.growth_exponent = lambda;
    return g;
}

}  // namespace

TEST_CASE("regular-at-zero surrogate") {
    std::vector<Vec> probe = probe_grid(-2.0, 2.0, 401);
    SUBCASE("continuous g passes") {
        GFunction g = make_g([](const Vec& x) { return std::min(std::abs(x[0]), 1.0); }, 1.0);
        RegularAtZeroResult r = check_regular_at_zero(g, probe, 0.05);
        CHECK(r.pass);
    }
    SUBCASE("a cliff next to an active point fails and names a witness") {
        GFunction g = make_g([](const Vec& x) { return x[0] < 0.0 ? 1.0 : 0.0; }, 1.0);
        RegularAtZeroResult r = check_regular_at_zero(g, probe, 0.05);
        CHECK_FALSE(r.pass);
        CHECK(r.witness.has_value());
    }
}

TEST_CASE("growth condition shell fit") {
    SUBCASE("matching exponent with a positive index gap passes") {
        GFunction g = make_g([](const Vec& x) { return std::min(std::pow(std::abs(x[0]), 1.5), 1.0); },
                             1.0, {Vec(0.0)}, 1.5);
        GrowthResult r = check_growth_at_zeros(g, 1.0);
        CHECK(r.pass);
        CHECK(r.fitted_exponent == doctest::Approx(1.5).epsilon(0.05));
        CHECK(r.index_gap == doctest::Approx(0.5));
    }
    SUBCASE("declared lambda below the index fails") {
        GFunction g = make_g([](const Vec& x) { return std::min(std::sqrt(std::abs(x[0])), 1.0); },
                             1.0, {Vec(0.0)}, 0.5);
        GrowthResult r = check_growth_at_zeros(g, 1.0);
        CHECK_FALSE(r.pass);
        CHECK(r.index_gap == doctest::Approx(-0.5));
    }
    SUBCASE("optimistic declaration is caught by the fit") {
        GFunction g = make_g([](const Vec& x) { return std::min(std::abs(x[0]), 1.0); }, 1.0,
                             {Vec(0.0)}, 2.0);
        GrowthResult r = check_growth_at_zeros(g, 1.0);
        CHECK_FALSE(r.pass);  // fitted exponent ~1 cannot support lambda = 2
    }
    SUBCASE("no zeros is vacuous") {
        GFunction g = make_g([](const Vec&) { return 1.0; }, 1.0, {}, 2.0);
        GrowthResult r = check_growth_at_zeros(g, 1.0);
        CHECK(r.pass);
        CHECK(r.vacuous);
    }
}

TEST_CASE("divergence certificate at the first zero of g(X)") {
    // deterministic path X(t) = 1 - t on a fine grid
    SamplePath p;
    const double dt = 1e-4;
    for (std::size_t k = 0; k <= 20000; ++k) {
        double t = static_cast<double>(k) * dt;
        p.times.push_back(t);
        p.values.push_back(Vec(k == 10000 ? 0.0 : 1.0 - t));
    }
    SUBCASE("linear approach (p = 1) is certified divergent") {
        GFunction g = make_g([](const Vec& x) { return std::min(std::abs(x[0]), 1.0); }, 1.0,
                             {Vec(0.0)});
        DivergenceResult r = divergence_at_tau0(p, g);
        CHECK(r.tau0_found);
        CHECK(r.tau0 == doctest::Approx(1.0).epsilon(1e-3));
        CHECK(r.certified);
        CHECK(r.fitted_p == doctest::Approx(1.0).epsilon(0.05));
    }
    SUBCASE("square-root approach (p = 1/2) is not certified") {
        GFunction g = make_g([](const Vec& x) { return std::min(std::sqrt(std::abs(x[0])), 1.0); },
                             1.0, {Vec(0.0)});
        DivergenceResult r = divergence_at_tau0(p, g);
        CHECK(r.tau0_found);
        CHECK_FALSE(r.certified);
        CHECK(r.fitted_p == doctest::Approx(0.5).epsilon(0.05));
    }
    SUBCASE("no zero crossing reports tau0 absent") {
        GFunction g = make_g([](const Vec&) { return 1.0; }, 1.0);
        DivergenceResult r = divergence_at_tau0(p, g);
        CHECK_FALSE(r.tau0_found);
    }
}

TEST_CASE("g == 1 time change is the identity") {
    SimConfig cfg;
    cfg.dt = 1e-3;
    cfg.horizon = 1.0;
    cfg.n_paths = 3;
    Ensemble e = simulate_ensemble(brownian_triplet(), Vec(0.0), cfg, 9);
    GFunction g = make_g([](const Vec&) { return 1.0; }, 1.0);
    TceOptions opt;
    opt.z_horizon = 1.0;
    std::vector<TceSolution> sols = solve_tce(e, g, opt);
    REQUIRE(sols.size() == 3);
    for (std::size_t i = 0; i < sols.size(); ++i) {
        const TceSolution& s = sols[i];
        CHECK(s.unique);
        for (std::size_t k = 0; k < s.z.times.size(); ++k) {
            CHECK(std::abs(s.alpha1[k] - s.z.times[k]) < 1e-9);
            CHECK(s.z.values[k][0] == doctest::Approx(e.paths[i].at(s.z.times[k])[0]));
        }
    }
}

TEST_CASE("constant g rescales time linearly") {
    SimConfig cfg;
    cfg.dt = 1e-3;
    cfg.horizon = 2.0;
    cfg.n_paths = 2;
    Ensemble e = simulate_ensemble(drift_triplet(1.0), Vec(0.0), cfg, 4);
    GFunction g = make_g([](const Vec&) { return 2.0; }, 2.0);
    TceOptions opt;
    opt.z_horizon = 1.0;
    std::vector<TceSolution> sols = solve_tce(e, g, opt);
    // Z(t) = X(2t) = 2t for the unit drift
    for (const TceSolution& s : sols)
        for (std::size_t k = 0; k < s.z.times.size(); ++k)
            CHECK(std::abs(s.z.values[k][0] - 2.0 * s.z.times[k]) < 1e-2);
}

TEST_CASE("horizon budget is enforced") {
    SimConfig cfg;
    cfg.dt = 1e-2;
    cfg.horizon = 0.5;
    cfg.n_paths = 1;
    Ensemble e = simulate_ensemble(drift_triplet(1.0), Vec(0.0), cfg, 4);
    GFunction g = make_g([](const Vec&) { return 2.0; }, 2.0);
    TceOptions opt;
    opt.z_horizon = 1.0;  // needs ensemble horizon >= 2.0
    CHECK_THROWS_AS(solve_tce(e, g, opt), RangeError);
}

TEST_CASE("condition report formatting names every check") {
    ConditionReport r;
    std::string s = format_condition_report(r);
    CHECK(s.find("regular_at_zero") != std::string::npos);
    CHECK(s.find("growth_A1") != std::string::npos);
    CHECK(s.find("holder_A2") != std::string::npos);
    CHECK(s.find("divergence_at_tau0") != std::string::npos);
    CHECK(s.find("theorem_applies") != std::string::npos);
}

TEST_CASE("absorbing zero freezes the time-changed path") {
    // drift -1 from 1: X hits 0 at t=1; g(x)=min(|x|,1) has a divergent zero there
    SimConfig cfg;
    cfg.dt = 1e-3;
    cfg.horizon = 4.0;
    cfg.n_paths = 1;
    Ensemble e = simulate_ensemble(drift_triplet(-1.0), Vec(1.0), cfg, 4);
    GFunction g = make_g([](const Vec& x) { return std::min(std::abs(x[0]), 1.0); }, 1.0,
                         {Vec(0.0)}, 1.0);
    TceOptions opt;
    opt.z_horizon = 4.0;
    std::vector<TceSolution> sols = solve_tce(e, g, opt);
    const TceSolution& s = sols[0];
    CHECK(s.unique);
    // alpha' = g(X(alpha)) = 1 - alpha while below 1: alpha(t) = 1 - e^{-t}
    CHECK(s.ivp.tau == doctest::Approx(1.0).epsilon(1e-2));
    double z_end = s.z.values.back()[0];
    CHECK(z_end > 0.0);           // never reaches the zero in finite time
    CHECK(z_end < 0.05);          // but approaches it
}
