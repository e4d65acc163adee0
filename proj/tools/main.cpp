// levytc: config-driven experiment runner for symbol estimation, path
// simulation, time change equation solving and statistical verification.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "levytc/expr.hpp"
#include "levytc/io.hpp"
#include "levytc/ivp.hpp"
#include "levytc/simulate.hpp"
#include "levytc/symbol.hpp"
#include "levytc/tce.hpp"
#include "levytc/verify.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "0.1.0";

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitParse = 2;
constexpr int kExitValidation = 3;
constexpr int kExitNumeric = 4;

struct RunContext {
    json config;
    fs::path out_dir;
    std::uint64_t master_seed = 0;
    std::vector<std::pair<std::string, std::string>> files;  // name -> checksum
    int workers = 1;
};

void emit(RunContext& ctx, const std::string& name, const std::string& contents) {
    fs::path p = ctx.out_dir / name;
    ltc::write_file(p.string(), contents);
    ctx.files.emplace_back(name, ltc::checksum_file(p.string()));
}

void write_manifest(RunContext& ctx) {
    json m;
    m["version"] = kVersion;
    m["config"] = ctx.config;
    m["master_seed"] = ctx.master_seed;
    json files = json::object();
    for (const auto& [name, sum] : ctx.files) files[name] = sum;
    m["files"] = files;
    ltc::write_file((ctx.out_dir / "manifest.json").string(), m.dump(2) + "\n");
}

ltc::MarkovTriplet triplet_from_config(const json& cfg) {
    if (cfg.contains("preset")) {
        ltc::SymbolSpec spec = ltc::make_preset(cfg["preset"].get<std::string>());
        if (!spec.triplet()) throw ltc::ValidationError("preset has no simulatable triplet");
        return *spec.triplet();
    }
    if (!cfg.contains("triplet")) throw ltc::ValidationError("config needs 'preset' or 'triplet'");
    const json& t = cfg["triplet"];

    ltc::MarkovTriplet trip;
    trip.state_space = ltc::StateSpace::full(1);

    auto scalar_field = [](const json& v, const char* what) {
        if (v.is_number()) {
            double c = v.get<double>();
            return std::function<double(const ltc::Vec&)>([c](const ltc::Vec&) { return c; });
        }
        if (v.is_string()) {
            ltc::Expr e = ltc::Expr::parse(v.get<std::string>(), {"x"});
            return std::function<double(const ltc::Vec&)>(
                [e](const ltc::Vec& x) { return e.eval({x[0]}); });
        }
        throw ltc::ValidationError(std::string(what) + " must be a number or expression string");
    };

    auto b = t.contains("drift") ? scalar_field(t["drift"], "drift")
                                 : std::function<double(const ltc::Vec&)>([](const ltc::Vec&) { return 0.0; });
    trip.drift = [b](const ltc::Vec& x) { return ltc::Vec(b(x)); };
    auto c = t.contains("diffusion") ? scalar_field(t["diffusion"], "diffusion")
                                     : std::function<double(const ltc::Vec&)>([](const ltc::Vec&) { return 0.0; });
    trip.diffusion = [c](const ltc::Vec& x) { return ltc::Mat::scalar(1, c(x)); };

    trip.jumps = ltc::JumpFamily::none_();
    if (t.contains("jumps")) {
        const json& j = t["jumps"];
        std::string kind = j.value("kind", "none");
        if (kind == "cpp") {
            double rate = j.at("rate").get<double>();
            double jump = j.at("jump").get<double>();
            ltc::JumpLaw law;
            law.kind = ltc::JumpLaw::Kind::point_mass;
            law.point = [jump](const ltc::Vec&) { return ltc::Vec(jump); };
            trip.jumps = ltc::JumpFamily::compound_poisson([rate](const ltc::Vec&) { return rate; },
                                                           law);
        } else if (kind == "stable") {
            double alpha = j.at("alpha").get<double>();
            double scale = j.value("scale", 1.0);
            trip.jumps = ltc::JumpFamily::stable_like([alpha](const ltc::Vec&) { return alpha; },
                                                      [scale](const ltc::Vec&) { return scale; });
        } else if (kind != "none") {
            throw ltc::ValidationError("unknown jump kind: " + kind);
        }
    }
    trip.validate();
    return trip;
}

ltc::SymbolSpec symbol_from_config(const json& cfg) {
    if (cfg.contains("preset")) return ltc::make_preset(cfg["preset"].get<std::string>());
    return ltc::SymbolSpec::from_triplet(triplet_from_config(cfg));
}

ltc::SimConfig sim_from_config(const json& cfg) {
    ltc::SimConfig c;
    if (cfg.contains("sim")) {
        const json& s = cfg["sim"];
        c.dt = s.value("dt", c.dt);
        c.horizon = s.value("horizon", c.horizon);
        c.n_paths = s.value("n_paths", c.n_paths);
        c.small_jump_cutoff = s.value("small_jump_cutoff", c.small_jump_cutoff);
        c.absorb_outside = s.value("absorb_outside", c.absorb_outside);
        c.stable_decomposition = s.value("stable_decomposition", c.stable_decomposition);
    }
    c.validate();
    return c;
}

std::uint64_t seed_from_config(const json& cfg, std::optional<std::uint64_t> override_seed) {
    if (override_seed) return *override_seed;
    if (!cfg.contains("sim") || !cfg["sim"].contains("master_seed"))
        throw ltc::ValidationError("sim.master_seed is mandatory (no wall-clock seeding)");
    return cfg["sim"]["master_seed"].get<std::uint64_t>();
}

ltc::Vec x0_from_config(const json& cfg) {
    if (!cfg.contains("x0")) return ltc::Vec(0.0);
    const json& x = cfg["x0"];
    if (x.is_number()) return ltc::Vec(x.get<double>());
    throw ltc::ValidationError("x0 must be a number");
}

// ---- tasks -----------------------------------------------------------------

int task_index(RunContext& ctx) {
    ltc::SymbolSpec spec = symbol_from_config(ctx.config);
    double r_max = ctx.config.value("r_max", 1.0);
    double r_min = ctx.config.value("r_min", 1e-3);
    int points = ctx.config.value("r_points", 16);
    ltc::IndexEstimate est =
        ltc::estimate_uniform_index(spec, ltc::default_r_grid(r_max, r_min, points));

    std::string csv = "key,value\n";
    csv += "beta_infinity," + ltc::format_double(est.beta_infinity) + "\n";
    csv += "fit_slope," + ltc::format_double(est.fit_slope) + "\n";
    csv += "fit_residual," + ltc::format_double(est.fit_residual) + "\n";
    csv += std::string("degenerate_fit,") + (est.degenerate_fit ? "1" : "0") + "\n";
    emit(ctx, "index.csv", csv);

    std::string grid = "R,H\n";
    for (std::size_t i = 0; i < est.r_grid.size(); ++i)
        grid += ltc::format_double(est.r_grid[i]) + "," + ltc::format_double(est.h_values[i]) + "\n";
    emit(ctx, "hgrid.csv", grid);
    return kExitOk;
}

int task_simulate(RunContext& ctx) {
    ltc::MarkovTriplet trip = triplet_from_config(ctx.config);
    ltc::SimConfig sim = sim_from_config(ctx.config);
    ltc::Ensemble e =
        ltc::simulate_ensemble(trip, x0_from_config(ctx.config), sim, ctx.master_seed, ctx.workers);
    emit(ctx, "paths.csv", ltc::ensemble_csv(e));
    return kExitOk;
}

int task_ivp_demo(RunContext& ctx) {
    std::string profile = ctx.config.value("profile", std::string("1"));
    ltc::Expr e = ltc::Expr::parse(profile, {"t"});
    ltc::SimConfig sim = sim_from_config(ctx.config);
    std::size_t n = static_cast<std::size_t>(std::ceil(sim.horizon / sim.dt - 1e-9));
    std::vector<double> times(n + 1), values(n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
        times[k] = std::min(k * sim.dt, sim.horizon);
        values[k] = e.eval({times[k]});
    }
    ltc::TimeProfile prof = ltc::TimeProfile::from_samples(times, values);
    ltc::IvpSolution sol = ltc::solve_ivp_extremal(prof);

    std::string csv = "t,profile,alpha1,alpha2\n";
    for (std::size_t k = 0; k < prof.times.size(); ++k)
        csv += ltc::format_double(prof.times[k]) + "," + ltc::format_double(prof.values[k]) + "," +
               ltc::format_double(sol.alpha1[k]) + "," + ltc::format_double(sol.alpha2[k]) + "\n";
    emit(ctx, "ivp.csv", csv);

    std::string sum;
    sum += "tau," + ltc::format_double(sol.tau) + "\n";
    sum += "eta," + ltc::format_double(sol.eta) + "\n";
    sum += "gamma," + ltc::format_double(sol.gamma) + "\n";
    sum += std::string("unique,") + (sol.unique ? "1" : "0") + "\n";
    sum += "divergence_power," + ltc::format_double(sol.divergence_power) + "\n";
    emit(ctx, "ivp_summary.csv", sum);
    return kExitOk;
}

ltc::GFunction g_from_config(const json& cfg) {
    if (!cfg.contains("g")) throw ltc::ValidationError("config needs a 'g' expression");
    ltc::GParseOptions opt;
    opt.growth_exponent = cfg.value("g_lambda", 1.0);
    return ltc::parse_g(cfg["g"].get<std::string>(), 1, opt);
}

int task_tce(RunContext& ctx) {
    ltc::MarkovTriplet trip = triplet_from_config(ctx.config);
    ltc::SymbolSpec spec = symbol_from_config(ctx.config);
    ltc::SimConfig sim = sim_from_config(ctx.config);
    ltc::GFunction g = g_from_config(ctx.config);

    ltc::Ensemble e =
        ltc::simulate_ensemble(trip, x0_from_config(ctx.config), sim, ctx.master_seed, ctx.workers);
    ltc::TceOptions opt;
    opt.z_horizon = ctx.config.value("z_horizon", 0.0);
    opt.beta_infinity = ltc::estimate_uniform_index(spec, ltc::default_r_grid()).beta_infinity;
    std::vector<ltc::TceSolution> sols = ltc::solve_tce(e, g, opt);

    emit(ctx, "tce.csv", ltc::tce_csv(sols, e.start.dim));

    std::size_t n_unique = 0;
    for (const auto& s : sols)
        if (s.unique) ++n_unique;
    std::string report = ltc::format_condition_report(sols.front().report);
    report += "paths: " + std::to_string(sols.size()) + "\n";
    report += "unique_paths: " + std::to_string(n_unique) + "\n";
    emit(ctx, "report.txt", report);
    return kExitOk;
}

int task_verify(RunContext& ctx) {
    ltc::MarkovTriplet trip = triplet_from_config(ctx.config);
    ltc::SymbolSpec spec = symbol_from_config(ctx.config);
    ltc::SimConfig sim = sim_from_config(ctx.config);
    ltc::Vec x0 = x0_from_config(ctx.config);
    ltc::Ensemble e = ltc::simulate_ensemble(trip, x0, sim, ctx.master_seed, ctx.workers);

    std::vector<ltc::VerifyRow> rows;
    std::size_t failures = 0;

    // martingale self-test design: u x (s, t) pairs against the own symbol
    std::vector<double> us = ctx.config.value("u_grid", std::vector<double>{-2, -1, 0.5, 1, 2});
    const double T = sim.horizon;
    std::vector<std::pair<double, double>> st = {
        {0.0, T}, {0.2 * T, 0.6 * T}, {0.5 * T, T}, {0.1 * T, 0.9 * T}};
    for (double u : us)
        for (auto [s, t] : st) {
            ltc::MartingaleTestResult r = ltc::martingale_defect(e, spec, ltc::Vec(u), s, t);
            ltc::VerifyRow row;
            row.test = "martingale_defect";
            row.params = "u=" + ltc::format_double(u) + ";s=" + ltc::format_double(s) +
                         ";t=" + ltc::format_double(t);
            row.estimate = r.estimate;
            row.stderr_ = r.stderr_;
            row.pass = r.pass;
            rows.push_back(row);
            if (!r.pass) ++failures;
        }

    // small-time symbol limit at x0
    for (double u : us) {
        std::vector<double> tg;
        for (double t = 16 * sim.dt; t >= 2 * sim.dt; t /= 2) tg.push_back(t);
        ltc::SmallTimeSymbolResult r = ltc::small_time_symbol(e, ltc::Vec(u), tg);
        ltc::Complex truth = spec.eval(x0, ltc::Vec(u));
        bool pass = std::abs(r.estimate - truth) <= 3.0 * r.stderr_ + 10.0 * sim.dt;
        ltc::VerifyRow row;
        row.test = "small_time_symbol";
        row.params = "u=" + ltc::format_double(u);
        row.estimate = r.estimate;
        row.stderr_ = r.stderr_;
        row.pass = pass;
        rows.push_back(row);
        if (!pass) ++failures;
    }

    emit(ctx, "verify.csv", ltc::verify_csv(rows));

    double pass_fraction = 1.0 - static_cast<double>(failures) / rows.size();
    bool aggregate = pass_fraction >= 0.95;
    std::string sum;
    sum += "tests," + std::to_string(rows.size()) + "\n";
    sum += "failures," + std::to_string(failures) + "\n";
    sum += "pass_fraction," + ltc::format_double(pass_fraction) + "\n";
    sum += std::string("aggregate,") + (aggregate ? "pass" : "fail") + "\n";
    sum += "master_seed," + std::to_string(ctx.master_seed) + "\n";
    emit(ctx, "verify_summary.csv", sum);
    return aggregate ? kExitOk : kExitVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"levytc: Levy-type process simulation, time change equations, verification"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::optional<std::uint64_t> seed_override;

    auto add_task = [&](const std::string& name, const std::string& desc) {
        CLI::App* sub = app.add_subcommand(name, desc);
        sub->add_option("config", config_path, "config file (JSON)")->required();
        sub->add_option("--out", out_dir, "output directory (default: config 'out' or '.')");
        sub->add_option("--seed", seed_override, "master seed override");
        return sub;
    };
    add_task("index", "estimate the uniform index beta_infinity");
    add_task("simulate", "simulate a path ensemble");
    add_task("ivp-demo", "solve the extremal IVP for a deterministic profile");
    add_task("tce", "solve the time change equation pathwise");
    add_task("verify", "statistical verification against the symbol");

    CLI11_PARSE(app, argc, argv);
    const std::string task = app.get_subcommands().front()->get_name();

    try {
        RunContext ctx;
        try {
            ctx.config = json::parse(ltc::read_file(config_path));
        } catch (const json::parse_error& e) {
            std::cerr << "config parse error: " << e.what() << "\n";
            return kExitParse;
        }
        ctx.config["task"] = task;
        if (!out_dir.empty()) ctx.config["out"] = out_dir;
        ctx.out_dir = ctx.config.value("out", std::string("."));
        ctx.master_seed = seed_from_config(ctx.config, seed_override);
        ctx.config["sim"]["master_seed"] = ctx.master_seed;
        if (const char* w = std::getenv("LEVYTC_WORKERS")) ctx.workers = std::max(1, std::atoi(w));
        fs::create_directories(ctx.out_dir);

        int rc;
        if (task == "index") rc = task_index(ctx);
        else if (task == "simulate") rc = task_simulate(ctx);
        else if (task == "ivp-demo") rc = task_ivp_demo(ctx);
        else if (task == "tce") rc = task_tce(ctx);
        else rc = task_verify(ctx);

        write_manifest(ctx);
        return rc;
    } catch (const ltc::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitParse;
    } catch (const ltc::ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const json::exception& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumeric;
    }
}
