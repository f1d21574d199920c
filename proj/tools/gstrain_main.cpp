// Command line front end: orchestrates the solvers and emits plot-ready
// CSV/JSON artifacts. See README.md for the config schema.

#include <filesystem>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "gstrain/config.hpp"
#include "gstrain/discount.hpp"
#include "gstrain/effective.hpp"
#include "gstrain/frontsim.hpp"
#include "gstrain/io.hpp"
#include "gstrain/strain.hpp"
#include "gstrain/util.hpp"
#include "gstrain/validate.hpp"

namespace {

using namespace gstrain;

ExperimentConfig resolve_config(const std::string& path) {
    if (path.empty()) return ExperimentConfig::golden();
    return load_config(path);
}

void ensure_dir(const std::string& dir) { std::filesystem::create_directories(dir); }

int cmd_dump_field(const ExperimentConfig& cfg, double x1, int samples) {
    ensure_dir(cfg.output_dir);
    const FieldRealization r = sample_field(cfg.field);
    write_text_file(cfg.output_dir + "/field.csv", field_csv(r, 0.0, x1, samples));
    std::cout << "wrote " << cfg.output_dir << "/field.csv\n";
    return 0;
}

int cmd_effective(const ExperimentConfig& cfg, double c, bool dump_surface) {
    ensure_dir(cfg.output_dir);
    const auto field = std::make_shared<FieldRealization>(cfg.field);
    const double window = cfg.window > 0 ? cfg.window : field->default_window();
    const auto bounds = field_bounds(*field, cfg.m, window);
    const StrainHamiltonian h(field, cfg.m, c, bounds);
    EffectiveParams prm;
    prm.L = window;
    prm.eps_gap = cfg.eps_gap;
    prm.mu_range = cfg.mu_range;
    prm.table_points = cfg.table_points;
    const auto eff = EffectiveHamiltonian::build(h, prm);
    write_text_file(cfg.output_dir + "/ptables.csv", ptables_csv(eff));
    std::vector<std::pair<double, double>> ph;
    for (int i = 0; i < cfg.p_steps; ++i) {
        const double p =
            cfg.p_min + (cfg.p_max - cfg.p_min) * i / double(std::max(1, cfg.p_steps - 1));
        ph.emplace_back(p, eff(p));
    }
    write_text_file(cfg.output_dir + "/effective.csv", effective_csv(ph));
    if (dump_surface)
        write_text_file(cfg.output_dir + "/h_surface.csv",
                        hsurface_csv(h, cfg.p_min, cfg.p_max, 101, 0.0, 2.0, 81));
    std::cout << "flat level " << format_double(eff.flat_level()) << ", flat piece ["
              << format_double(eff.p_bar_minus()) << ", " << format_double(eff.p_bar_plus())
              << "]\n";
    return 0;
}

int cmd_strain_curve(const ExperimentConfig& cfg) {
    ensure_dir(cfg.output_dir);
    const auto field = std::make_shared<FieldRealization>(cfg.field);
    ShearProblem prob(field, cfg.m, cfg.n, cfg.window, cfg.eps_gap);
    const StrainCurve curve = strain_curve(prob, cfg.c_values);
    write_text_file(cfg.output_dir + "/strain_curve.csv", curve_csv(curve));

    nlohmann::ordered_json verdicts;
    const double ratio = lipschitz_ratio(curve);
    verdicts["lipschitz"] = {{"max_ratio", ratio}, {"pass", ratio <= 1.05}};
    bool monotone = true;
    for (std::size_t i = 1; i < curve.points.size(); ++i)
        monotone = monotone && curve.points[i].h <= curve.points[i - 1].h + 1e-3;
    verdicts["monotone"] = {{"pass", monotone}};
    const auto rep = main_theorem_check(prob, cfg.c_values);
    verdicts["sandwich"] = {{"pass", rep.sandwich_ok},
                            {"worst_defect", rep.worst_sandwich_defect}};
    verdicts["strict_reduction"] = {{"pass", rep.strict_reduction_ok},
                                    {"min_gap", rep.min_strict_gap}};
    try {
        const double c_bar = quench_threshold(prob.stats, cfg.m, cfg.n);
        const auto q = quench_check(prob, 1.1 * c_bar);
        verdicts["quench"] = {{"c_bar", c_bar}, {"h", q.h}, {"pass", q.pass}};
    } catch (const HypothesisNotMetError& e) {
        verdicts["quench"] = {{"skip", e.what()}};
    }
    write_text_file(cfg.output_dir + "/strain_verdicts.json", verdicts.dump(2) + "\n");
    std::cout << "wrote " << cfg.output_dir << "/strain_curve.csv and strain_verdicts.json\n";
    return 0;
}

int cmd_discount(const ExperimentConfig& cfg, std::optional<double> p_opt) {
    ensure_dir(cfg.output_dir);
    const auto field = std::make_shared<FieldRealization>(cfg.field);
    const double window = cfg.window > 0 ? cfg.window : field->default_window();
    const auto bounds = field_bounds(*field, cfg.m, window);
    const double c = cfg.c_values.back();
    const StrainHamiltonian h(field, cfg.m, c, bounds);
    const double p = p_opt.value_or(cfg.n);
    const auto est =
        vanishing_discount_estimate(h, p, cfg.delta_list, cfg.discount.dx,
                                    cfg.discount.domain_mult, cfg.discount.theta_override);
    write_text_file(cfg.output_dir + "/discount.csv", discount_csv(est));
    std::cout << "extrapolated estimate " << format_double(est.extrapolated) << "\n";
    return 0;
}

int cmd_simulate(const ExperimentConfig& cfg, double c) {
    ensure_dir(cfg.output_dir);
    const FieldRealization field = sample_field(cfg.field);
    FrontState st = make_front_state(cfg.sim.grid, cfg.sim.grid, cfg.m, cfg.n, cfg.sim.cfl,
                                     cfg.sim.perturb);
    const auto est = evolve(st, field, c, cfg.sim.T);
    write_text_file(cfg.output_dir + "/speed_series.csv", speed_series_csv(est));
    write_front_grid(cfg.output_dir + "/front_final", st);
    std::cout << "front speed " << format_double(est.speed) << " (fit "
              << format_double(est.speed_extrapolated) << ")"
              << (est.stabilized ? "" : " [not stabilized]") << "\n";
    return 0;
}

int cmd_validate(const ExperimentConfig& cfg) {
    const RunManifest man = run_validate(cfg);
    write_validate_artifacts(man, cfg, cfg.output_dir);
    for (const auto& c : man.checks)
        std::cout << c.status << " " << c.name << (c.detail.empty() ? "" : ": " + c.detail)
                  << "\n";
    std::cout << man.passed() << " passed, " << man.failed() << " failed, " << man.skipped()
              << " skipped\n";
    return man.failed() == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Effective Hamiltonians of the strain G-equation under shear flows"};
    app.require_subcommand(1);

    std::string config_path;
    app.add_option("--config", config_path, "experiment config (JSON)");

    auto* sc_field = app.add_subcommand("dump-field", "sample the flow profile to CSV");
    double dump_x1 = 10.0;
    int dump_samples = 1001;
    sc_field->add_option("--x1", dump_x1, "sample up to x1");
    sc_field->add_option("--samples", dump_samples, "sample count");

    auto* sc_eff = app.add_subcommand("effective", "branch tables and the map p -> H");
    double eff_c = -1;
    bool dump_surface = false;
    sc_eff->add_option("--c", eff_c, "Markstein number (default: last config c)");
    sc_eff->add_flag("--dump-h-surface", dump_surface, "also dump H(p, x) samples");

    auto* sc_curve = app.add_subcommand("strain-curve", "h(c) curve and theorem verdicts");
    double cv_m = 0, cv_n = 0, cv_cmin = -1, cv_cmax = -1, cv_window = -1;
    int cv_steps = 0;
    sc_curve->add_option("--m", cv_m, "horizontal slope component");
    sc_curve->add_option("--n", cv_n, "vertical slope component");
    sc_curve->add_option("--c-min", cv_cmin, "first Markstein number");
    sc_curve->add_option("--c-max", cv_cmax, "last Markstein number");
    sc_curve->add_option("--c-steps", cv_steps, "grid size");
    sc_curve->add_option("--window", cv_window, "averaging window");

    auto* sc_disc = app.add_subcommand("discount", "vanishing-discount estimates");
    std::vector<double> deltas;
    double disc_dx = -1, disc_domain = -1, disc_p = std::nan("");
    std::optional<double> theta_override;
    double theta_val = std::nan("");
    sc_disc->add_option("--delta", deltas, "discount rates (decreasing)");
    sc_disc->add_option("--grid-step", disc_dx, "grid step");
    sc_disc->add_option("--domain", disc_domain, "domain multiplier (times theta/delta)");
    sc_disc->add_option("--theta-override", theta_val, "dissipation bound override");
    sc_disc->add_option("--p", disc_p, "slope (default: config n)");

    auto* sc_sim = app.add_subcommand("simulate", "direct 2-d front evolution");
    int sim_grid = 0;
    double sim_T = -1, sim_c = -1, sim_m = 0, sim_n = 0;
    sc_sim->add_option("--grid", sim_grid, "cells per side");
    sc_sim->add_option("--T", sim_T, "final time");
    sc_sim->add_option("--c", sim_c, "Markstein number");
    sc_sim->add_option("--m", sim_m, "horizontal slope component");
    sc_sim->add_option("--n", sim_n, "vertical slope component");

    app.add_subcommand("validate", "run the invariant suite, write the manifest");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;  // usage problems are config errors
    }

    try {
        ExperimentConfig cfg = resolve_config(config_path);
        if (sc_curve->parsed()) {
            if (sc_curve->count("--m")) cfg.m = cv_m;
            if (sc_curve->count("--n")) cfg.n = cv_n;
            if (cv_window > 0) cfg.window = cv_window;
            if (sc_curve->count("--c-min") || sc_curve->count("--c-max") ||
                sc_curve->count("--c-steps")) {
                if (!(cv_steps >= 1 && cv_cmax >= cv_cmin && cv_cmin >= 0))
                    throw ConfigError("strain-curve: bad c grid flags");
                cfg.c_values.clear();
                for (int i = 0; i < cv_steps; ++i)
                    cfg.c_values.push_back(
                        cv_steps == 1 ? cv_cmin
                                      : cv_cmin + (cv_cmax - cv_cmin) * i / double(cv_steps - 1));
            }
            cfg.finalize();
            return cmd_strain_curve(cfg);
        }
        if (sc_disc->parsed()) {
            if (!deltas.empty()) cfg.delta_list = deltas;
            if (disc_dx > 0) cfg.discount.dx = disc_dx;
            if (disc_domain > 0) cfg.discount.domain_mult = disc_domain;
            if (sc_disc->count("--theta-override")) theta_override = theta_val;
            if (theta_override) cfg.discount.theta_override = theta_override;
            cfg.finalize();
            return cmd_discount(cfg, std::isnan(disc_p) ? std::nullopt
                                                        : std::optional<double>(disc_p));
        }
        if (sc_sim->parsed()) {
            if (sim_grid > 0) cfg.sim.grid = sim_grid;
            if (sim_T > 0) cfg.sim.T = sim_T;
            if (sc_sim->count("--m")) cfg.m = sim_m;
            if (sc_sim->count("--n")) cfg.n = sim_n;
            cfg.finalize();
            return cmd_simulate(cfg, sim_c >= 0 ? sim_c : cfg.c_values.back());
        }
        if (sc_eff->parsed()) {
            cfg.finalize();
            return cmd_effective(cfg, eff_c >= 0 ? eff_c : cfg.c_values.back(), dump_surface);
        }
        if (sc_field->parsed()) {
            cfg.finalize();
            return cmd_dump_field(cfg, dump_x1, dump_samples);
        }
        cfg.finalize();
        return cmd_validate(cfg);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
