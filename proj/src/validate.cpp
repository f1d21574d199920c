#include "gstrain/validate.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <limits>
#include <optional>
#include <random>

#include <json.hpp>

#include "gstrain/discount.hpp"
#include "gstrain/effective.hpp"
#include "gstrain/frontsim.hpp"
#include "gstrain/io.hpp"
#include "gstrain/strain.hpp"
#include "gstrain/util.hpp"

namespace gstrain {

namespace {

constexpr double kPi = 3.141592653589793;

std::string fd(double x) { return format_double(x); }

struct Ctx {
    ExperimentConfig cfg;
    std::shared_ptr<const FieldRealization> field;
    std::optional<ShearProblem> prob;

    // Lazy shared artifacts.
    std::optional<StrainCurve> curve;
    double c_bar = 0;
    bool curve_failed = false;

    bool trivial_direction() const { return cfg.m == 0.0 || cfg.n == 0.0; }

    const StrainCurve& strain_curve16() {
        if (!curve) {
            c_bar = quench_threshold(prob->stats, cfg.m, cfg.n);
            std::vector<double> cs;
            for (int i = 0; i < 16; ++i) cs.push_back(2.0 * c_bar * i / 15.0);
            curve = strain_curve(*prob, cs);
        }
        return *curve;
    }

    std::vector<double> admissible_c() {
        std::vector<double> out;
        for (double c : {0.1, 0.2, 0.4}) {
            const StrainPoint pt = strain_point(*prob, c);
            if (!pt.flat && pt.h > prob->flat_level() + 1e-3) out.push_back(c);
        }
        return out;
    }
};

using CheckFn = std::function<CheckResult(Ctx&)>;

struct Check {
    std::string name;
    CheckFn fn;
};

CheckResult pass(const std::string& name, const std::string& detail) {
    return {name, "PASS", detail};
}
CheckResult fail(const std::string& name, const std::string& detail) {
    return {name, "FAIL", detail};
}
CheckResult skip(const std::string& name, const std::string& detail) {
    return {name, "SKIP", detail};
}
CheckResult verdict(const std::string& name, bool ok, const std::string& detail) {
    return ok ? pass(name, detail) : fail(name, detail);
}

// ---------------------------------------------------------------- field ---

CheckResult check_field_determinism(Ctx& ctx) {
    const auto spec = ExperimentConfig::random_phase_golden(ctx.cfg.seeds.front());
    const FieldRealization a = sample_field(spec), b = sample_field(spec);
    for (int i = 0; i < 64; ++i) {
        const double x = 0.37 * i - 3.1;
        if (a.v(x) != b.v(x) || a.v_prime(x) != b.v_prime(x))
            return fail("field.determinism", "mismatch at x=" + fd(x));
    }
    return pass("field.determinism", "64 probe points bit-identical");
}

CheckResult check_field_amplitude_bound(Ctx& ctx) {
    for (const FieldSpec& spec :
         {ctx.cfg.field, ExperimentConfig::random_phase_golden(ctx.cfg.seeds.front())}) {
        if (spec.model == FieldModel::Zero) continue;
        const FieldRealization r = sample_field(spec);
        const double bv = spec.sum_abs_amplitude();
        const double bvp = 2.0 * kPi * spec.sum_abs_amplitude_frequency();
        for (int i = 0; i < 4096; ++i) {
            const double x = 0.173 * i - 20.0;
            if (std::abs(r.v(x)) > bv + 1e-12 || std::abs(r.v_prime(x)) > bvp + 1e-12)
                return fail("field.amplitude_bound", "bound violated at x=" + fd(x));
        }
    }
    return pass("field.amplitude_bound", "|v|<=sum|a|, |v'|<=2pi sum a f");
}

CheckResult check_field_stationarity(Ctx& ctx) {
    const auto spec = ExperimentConfig::random_phase_golden(ctx.cfg.seeds.front());
    const FieldRealization r = sample_field(spec);
    const double L = 1000.0 / spec.min_frequency();
    const long ns = 200000;
    double mean0 = 0, var0 = 0;
    double worst_mean = 0, worst_var = 0;
    const double shifts[3] = {0.0, 37.1, 113.7};
    for (int k = 0; k < 3; ++k) {
        double s1 = 0, s2 = 0;
        for (long i = 0; i < ns; ++i) {
            const double x = shifts[k] + L * (static_cast<double>(i) + 0.5) / ns;
            const double vv = r.v(x);
            s1 += vv;
            s2 += vv * vv;
        }
        const double mean = s1 / ns, var = s2 / ns - mean * mean;
        if (k == 0) { mean0 = mean; var0 = var; }
        else {
            worst_mean = std::max(worst_mean, std::abs(mean - mean0));
            worst_var = std::max(worst_var, std::abs(var - var0));
        }
    }
    const bool ok = worst_mean < 1e-2 && worst_var < 1e-2;
    return verdict("field.stationarity", ok,
                   "dmean=" + fd(worst_mean) + " dvar=" + fd(worst_var));
}

CheckResult check_field_mean_vprime(Ctx& ctx) {
    const auto spec = ExperimentConfig::random_phase_golden(ctx.cfg.seeds.front());
    const FieldRealization r = sample_field(spec);
    const double L = 500.0;
    const double mean = (r.v(L) - r.v(0.0)) / L;
    const double bound = 2.0 * spec.sum_abs_amplitude() / L;
    return verdict("field.mean_vprime", std::abs(mean) <= bound + 1e-15,
                   "|mean v'|=" + fd(std::abs(mean)) + " bound=" + fd(bound));
}

CheckResult check_field_bounds_consistency(Ctx& ctx) {
    const auto& b = ctx.prob->bounds;
    const double m = ctx.cfg.m;
    for (int i = 0; i <= 4096; ++i) {
        const double x = b.window * i / 4096.0;
        const double k = m * ctx.field->v(x), s = m * ctx.field->v_prime(x);
        if (k < b.k_lo - 1e-9 || k > b.k_hi + 1e-9 || s < b.s_lo - 1e-9 || s > b.s_hi + 1e-9)
            return fail("field.bounds_consistency", "sample escapes box at x=" + fd(x));
    }
    return pass("field.bounds_consistency",
                "k in [" + fd(b.k_lo) + "," + fd(b.k_hi) + "], s in [" + fd(b.s_lo) + "," +
                    fd(b.s_hi) + "]");
}

CheckResult check_field_b2(Ctx& ctx) {
    if (ctx.trivial_direction()) return skip("field.b2_shear", "m=0 trivial case");
    if (ctx.cfg.field.model == FieldModel::Zero)
        return skip("field.b2_shear", "zero field excluded (constant profile)");
    const StrainHamiltonian h = ctx.prob->hamiltonian(0.0);
    const double worst = max_s_at_k_maxima(h, std::min(ctx.prob->window, 50.0));
    const double tol = 0.05 * std::max(1e-12, ctx.prob->s_norm());
    return verdict("field.b2_shear", worst <= tol,
                   "max |s| at k maxima = " + fd(worst) + " tol=" + fd(tol));
}

// ----------------------------------------------------------- hamiltonian ---

CheckResult check_ham_branch_roots(Ctx& ctx) {
    if (ctx.trivial_direction()) return skip("hamiltonian.branch_residual", "m=0 trivial case");
    std::mt19937_64 rng(1234);
    auto uni = [&](double a, double b) {
        return a + (b - a) * static_cast<double>(rng() >> 11) * 0x1.0p-53;
    };
    double worst_res = 0;
    for (int it = 0; it < 200; ++it) {
        const double c = uni(0.0, 3.0);
        const double x = uni(0.0, ctx.prob->window);
        const StrainHamiltonian h = ctx.prob->hamiltonian(c);
        const auto cp = h.critical_point(x);
        const double mu = cp.h_min + uni(1e-4, 4.0);
        const auto roots = h.branch_roots(x, mu);
        if (!(roots.q_minus < cp.p_star && cp.p_star < roots.q_plus))
            return fail("hamiltonian.branch_residual", "root ordering broken at x=" + fd(x));
        const double res = std::max(std::abs(h.eval(roots.q_plus, x) - mu),
                                    std::abs(h.eval(roots.q_minus, x) - mu));
        worst_res = std::max(worst_res, res / std::max(1.0, std::abs(mu)));
    }
    return verdict("hamiltonian.branch_residual", worst_res <= 2e-12,
                   "worst relative residual=" + fd(worst_res));
}

CheckResult check_ham_branch_slopes(Ctx& ctx) {
    if (ctx.trivial_direction()) return skip("hamiltonian.branch_slopes", "m=0 trivial case");
    std::mt19937_64 rng(99);
    auto uni = [&](double a, double b) {
        return a + (b - a) * static_cast<double>(rng() >> 11) * 0x1.0p-53;
    };
    for (int it = 0; it < 200; ++it) {
        const double c = uni(0.0, 3.0);
        const double x = uni(0.0, ctx.prob->window);
        const StrainHamiltonian h = ctx.prob->hamiltonian(c);
        const auto cp = h.critical_point(x);
        const auto roots = h.branch_roots(x, cp.h_min + uni(1e-3, 4.0));
        if (!(h.deriv_p(roots.q_plus, x) > 0) || !(h.deriv_p(roots.q_minus, x) < 0))
            return fail("hamiltonian.branch_slopes", "slope sign broken at x=" + fd(x));
    }
    return pass("hamiltonian.branch_slopes", "dH/dp > 0 upper, < 0 lower at 200 samples");
}

CheckResult check_ham_quasiconvex(Ctx& ctx) {
    if (ctx.trivial_direction()) return skip("hamiltonian.quasiconvex", "m=0 trivial case");
    std::mt19937_64 rng(777);
    auto uni = [&](double a, double b) {
        return a + (b - a) * static_cast<double>(rng() >> 11) * 0x1.0p-53;
    };
    for (int it = 0; it < 100; ++it) {
        const double c = uni(0.0, 3.0);
        const double x = uni(0.0, ctx.prob->window);
        const StrainHamiltonian h = ctx.prob->hamiltonian(c);
        std::vector<std::pair<double, double>> samples;
        samples.reserve(201);
        for (int i = 0; i <= 200; ++i) {
            const double p = -10.0 + 0.1 * i;
            samples.emplace_back(p, h.eval(p, x));
        }
        const auto rep = check_quasiconvex(samples);
        if (!rep.pass)
            return fail("hamiltonian.quasiconvex",
                        "witness at p=" + fd(samples[rep.j].first) + " x=" + fd(x));
    }
    // Random midpoint triples.
    const StrainHamiltonian h = ctx.prob->hamiltonian(0.7);
    for (int it = 0; it < 10000; ++it) {
        const double x = uni(0.0, ctx.prob->window);
        double p = uni(-8, 8), r = uni(-8, 8);
        if (p > r) std::swap(p, r);
        const double q = 0.5 * (p + r);
        if (h.eval(q, x) > std::max(h.eval(p, x), h.eval(r, x)) + 1e-12)
            return fail("hamiltonian.quasiconvex", "midpoint triple failed at x=" + fd(x));
    }
    return pass("hamiltonian.quasiconvex", "100 sampled levels + 10000 midpoint triples");
}

CheckResult check_ham_level_width(Ctx& ctx) {
    if (ctx.trivial_direction()) return skip("hamiltonian.level_width", "m=0 trivial case");
    std::mt19937_64 rng(31);
    auto uni = [&](double a, double b) {
        return a + (b - a) * static_cast<double>(rng() >> 11) * 0x1.0p-53;
    };
    for (int it = 0; it < 100; ++it) {
        const double c = uni(0.0, 2.0);
        const double x = uni(0.0, ctx.prob->window);
        const StrainHamiltonian h = ctx.prob->hamiltonian(c);
        const auto cp = h.critical_point(x);
        const double mu = cp.h_min + uni(0.05, 2.0);
        const auto roots = h.branch_roots(x, mu);
        for (double q : {roots.q_plus, roots.q_minus}) {
            if (std::abs(h.eval(q + 5e-5, x) - mu) < 1e-8 ||
                std::abs(h.eval(q - 5e-5, x) - mu) < 1e-8)
                return fail("hamiltonian.level_width", "flat level segment near q=" + fd(q));
        }
    }
    return pass("hamiltonian.level_width", "no level set wider than 1e-4 at 100 samples");
}

CheckResult check_ham_deriv_fd(Ctx& ctx) {
    if (ctx.trivial_direction()) return skip("hamiltonian.derivative_fd", "m=0 trivial case");
    std::mt19937_64 rng(55);
    auto uni = [&](double a, double b) {
        return a + (b - a) * static_cast<double>(rng() >> 11) * 0x1.0p-53;
    };
    double worst = 0;
    for (int it = 0; it < 200; ++it) {
        const double c = uni(0.0, 3.0);
        const double x = uni(0.0, ctx.prob->window);
        const double p = uni(-5.0, 5.0);
        const StrainHamiltonian h = ctx.prob->hamiltonian(c);
        const double step = 1e-5;
        const double fd2 = (h.eval(p + step, x) - h.eval(p - step, x)) / (2.0 * step);
        worst = std::max(worst, std::abs(fd2 - h.deriv_p(p, x)));
    }
    return verdict("hamiltonian.derivative_fd", worst < 1e-6, "max |analytic-fd|=" + fd(worst));
}

// -------------------------------------------------------------- effective ---

CheckResult check_eff_monotone(Ctx& ctx) {
    if (ctx.trivial_direction()) return skip("effective.monotone", "m=0 trivial case");
    const StrainHamiltonian h = ctx.prob->hamiltonian(0.2);
    EffectiveParams prm;
    prm.L = ctx.prob->window;
    prm.eps_gap = ctx.cfg.eps_gap;
    prm.mu_range = ctx.cfg.mu_range;
    prm.table_points = 24;
    const auto eff = EffectiveHamiltonian::build(h, prm);
    for (std::size_t i = 1; i < eff.mu_grid().size(); ++i) {
        if (!(eff.table_plus()[i] > eff.table_plus()[i - 1]))
            return fail("effective.monotone", "P+ not increasing at mu=" + fd(eff.mu_grid()[i]));
        if (!(eff.table_minus()[i] < eff.table_minus()[i - 1]))
            return fail("effective.monotone", "P- not decreasing at mu=" + fd(eff.mu_grid()[i]));
    }
    return pass("effective.monotone",
                "strict over " + std::to_string(eff.mu_grid().size()) + " table rows");
}

CheckResult check_eff_divergence(Ctx& ctx) {
    if (ctx.trivial_direction()) return skip("effective.divergence", "m=0 trivial case");
    const StrainHamiltonian h = ctx.prob->hamiltonian(0.2);
    const double flat = h.flat_level();
    const double lo = P_plus(h, flat + 1.0, ctx.prob->window).value;
    const double hi = P_plus(h, flat + 10.0, ctx.prob->window).value;
    return verdict("effective.divergence", hi > lo + 5.0,
                   "P+(flat+10)-P+(flat+1)=" + fd(hi - lo));
}

CheckResult check_eff_continuity(Ctx& ctx) {
    if (ctx.trivial_direction()) return skip("effective.continuity", "m=0 trivial case");
    const StrainHamiltonian h = ctx.prob->hamiltonian(0.2);
    const double mu0 = h.flat_level() + 0.1;
    const double base = P_plus(h, mu0, ctx.prob->window).value;
    for (double d : {1e-2, 1e-3}) {
        const double moved = P_plus(h, mu0 + d, ctx.prob->window).value;
        if (!(std::abs(moved - base) < 10.0 * d))
            return fail("effective.continuity", "|dP|=" + fd(std::abs(moved - base)) +
                                                    " at dmu=" + fd(d));
    }
    return pass("effective.continuity", "|P+(mu+d)-P+(mu)| < 10 d for d=1e-2,1e-3");
}

CheckResult check_eff_flat_min(Ctx& ctx) {
    if (ctx.trivial_direction()) return skip("effective.flat_min", "m=0 trivial case");
    const StrainHamiltonian h = ctx.prob->hamiltonian(0.2);
    const double flat = h.flat_level();
    double lowest = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= 40; ++i) {
        const double p = -2.0 + 4.0 * i / 40.0;
        lowest = std::min(lowest, effective_H(h, p, ctx.prob->window, ctx.cfg.eps_gap));
    }
    const bool ok = std::abs(lowest - flat) <= 1e-9 &&
                    std::abs(flat - (std::abs(ctx.cfg.m) + ctx.prob->bounds.k_hi)) <= 1e-12;
    return verdict("effective.flat_min", ok,
                   "min effective_H=" + fd(lowest) + " flat=" + fd(flat));
}

CheckResult check_eff_window_convergence(Ctx& ctx) {
    if (ctx.trivial_direction()) return skip("effective.window_convergence", "m=0 trivial case");
    const StrainHamiltonian h = ctx.prob->hamiltonian(0.2);
    const double mu = h.flat_level() + 0.5;
    const double a = P_plus(h, mu, ctx.prob->window).value;
    const double b = P_plus(h, mu, 2.0 * ctx.prob->window).value;
    return verdict("effective.window_convergence", std::abs(a - b) < 1e-3,
                   "|P(L)-P(2L)|=" + fd(std::abs(a - b)));
}

CheckResult check_eff_corrector(Ctx& ctx) {
    if (ctx.trivial_direction()) return skip("effective.corrector_drift", "m=0 trivial case");
    // Periodic profile: the corrector is periodic and the drift vanishes.
    if (ctx.cfg.field.model == FieldModel::PeriodicSingleMode) {
        const StrainHamiltonian h = ctx.prob->hamiltonian(0.2);
        const double period = 1.0 / ctx.cfg.field.frequencies.front();
        const auto corr = build_corrector(h, h.flat_level() + 0.5, 100.0 * period, 0.01);
        if (!(corr.drift <= 1e-3))
            return fail("effective.corrector_drift", "periodic drift=" + fd(corr.drift));
    }
    // Ergodic profiles: doubling the window shrinks the drift.
    double worst_ratio = 0;
    for (std::uint64_t seed : ctx.cfg.seeds) {
        const auto fr = std::make_shared<FieldRealization>(
            ExperimentConfig::random_phase_golden(seed));
        const auto bounds = field_bounds(*fr, ctx.cfg.m, 300.0);
        const StrainHamiltonian h(fr, ctx.cfg.m, 0.2, bounds);
        const double mu = h.flat_level() + 0.5;
        const auto c1 = build_corrector(h, mu, 300.0, 0.01);
        const auto c2 = build_corrector(h, mu, 600.0, 0.01);
        worst_ratio = std::max(worst_ratio, c2.drift / std::max(c1.drift, 1e-300));
    }
    return verdict("effective.corrector_drift", worst_ratio < 0.9,
                   "worst drift ratio at 2L vs L = " + fd(worst_ratio));
}

CheckResult check_eff_cell_residual(Ctx& ctx) {
    if (ctx.trivial_direction()) return skip("effective.cell_residual", "m=0 trivial case");
    const StrainHamiltonian h = ctx.prob->hamiltonian(0.2);
    const double mu = h.flat_level() + 0.5;
    const auto corr = build_corrector(h, mu, ctx.prob->window, 0.01);
    const double res = verify_cell(h, mu, corr.P, corr);
    const double res_bad = verify_cell(h, mu, corr.P + 0.01, corr);
    const bool ok = res < 1e-8 && res_bad > 1e-3;
    return verdict("effective.cell_residual",
                   ok, "residual=" + fd(res) + " perturbed=" + fd(res_bad));
}

// --------------------------------------------------------------- discount ---

CheckResult check_disc_constant(Ctx&) {
    const auto zero = std::make_shared<FieldRealization>(FieldSpec::zero());
    const StrainHamiltonian h(zero, 1.0, 0.5, FieldBounds{});
    for (double p : {0.0, 1.0}) {
        const auto prob = make_discount_problem(h, p, 0.05, 0.01, 4.0);
        const double est = solve_discounted(prob, h).estimate;
        const double expect = std::sqrt(1.0 + p * p);
        if (std::abs(est - expect) > 1e-10)
            return fail("discount.constant_exact",
                        "p=" + fd(p) + " estimate=" + fd(est) + " expect=" + fd(expect));
    }
    return pass("discount.constant_exact", "constant solutions reproduced exactly");
}

CheckResult check_disc_shift(Ctx& ctx) {
    if (ctx.trivial_direction()) return skip("discount.comparison_shift", "m=0 trivial case");
    const double K = 1.0, delta = 0.1;
    const double m = ctx.cfg.m;
    auto field = ctx.field;
    const StrainHamiltonian h1 = ctx.prob->hamiltonian(0.2);
    FieldBounds b2 = ctx.prob->bounds;
    b2.k_hi += K;
    b2.k_lo += K;
    const StrainHamiltonian h2(
        [field, m, K](double x) { return m * field->v(x) + K; },
        [field, m](double x) { return m * field->v_prime(x); }, m, 0.2, b2);
    const auto prob1 = make_discount_problem(h1, ctx.cfg.n, delta, 0.01, 4.0);
    auto prob2 = prob1;
    const auto u1 = solve_discounted(prob1, h1);
    const auto u2 = solve_discounted(prob2, h2);
    double worst = 0;
    for (std::size_t i = 0; i < u1.u.size(); ++i)
        worst = std::max(worst, std::abs(u2.u[i] - (u1.u[i] - K / delta)));
    return verdict("discount.comparison_shift", worst * delta < 1e-6,
                   "max |u2-(u1-K/delta)|*delta=" + fd(worst * delta));
}

CheckResult check_disc_bounded(Ctx& ctx) {
    if (ctx.trivial_direction()) return skip("discount.bounded", "m=0 trivial case");
    const StrainHamiltonian h = ctx.prob->hamiltonian(0.2);
    const auto prob = make_discount_problem(h, ctx.cfg.n, 0.1, 0.005, 4.0);
    const auto sol = solve_discounted(prob, h);
    double sup_h = 0;
    for (int i = 0; i <= 2000; ++i)
        sup_h = std::max(sup_h, std::abs(h.eval(ctx.cfg.n, ctx.prob->window * i / 2000.0)));
    double sup_du = 0;
    for (double u : sol.u) sup_du = std::max(sup_du, 0.1 * std::abs(u));
    return verdict("discount.bounded", sup_du <= sup_h + 1e-8,
                   "|delta u|=" + fd(sup_du) + " sup|H|=" + fd(sup_h));
}

CheckResult check_disc_lipschitz_c(Ctx& ctx) {
    if (ctx.trivial_direction()) return skip("discount.lipschitz_c", "m=0 trivial case");
    const double c1 = 0.2, c2 = 0.5, delta = 0.1;
    const StrainHamiltonian ha = ctx.prob->hamiltonian(c1);
    const StrainHamiltonian hb = ctx.prob->hamiltonian(c2);
    // Same grid for both: take the wider theta.
    auto prob = make_discount_problem(hb, ctx.cfg.n, delta, 0.005, 4.0);
    const double ea = solve_discounted(prob, ha).estimate;
    const double eb = solve_discounted(prob, hb).estimate;
    const double bound = ctx.prob->s_norm() * (c2 - c1);
    return verdict("discount.lipschitz_c", std::abs(ea - eb) <= bound + 1e-6,
                   "|d estimate|=" + fd(std::abs(ea - eb)) + " bound=" + fd(bound));
}

CheckResult check_disc_consistency(Ctx& ctx) {
    if (ctx.trivial_direction()) return skip("discount.consistency_order", "m=0 trivial case");
    const StrainHamiltonian h = ctx.prob->hamiltonian(0.0);
    const double target = effective_H(h, ctx.cfg.n, ctx.prob->window, ctx.cfg.eps_gap);
    const auto coarse = make_discount_problem(h, ctx.cfg.n, 0.2, 0.02, 4.0);
    const auto fine = make_discount_problem(h, ctx.cfg.n, 0.1, 0.01, 4.0);
    const double e1 = std::abs(solve_discounted(coarse, h).estimate - target);
    const double e2 = std::abs(solve_discounted(fine, h).estimate - target);
    return verdict("discount.consistency_order", e2 < e1,
                   "err(delta,dx)=" + fd(e1) + " err(delta/2,dx/2)=" + fd(e2));
}

CheckResult check_disc_domain(Ctx& ctx) {
    if (ctx.trivial_direction()) return skip("discount.domain_insensitivity", "m=0 trivial case");
    const StrainHamiltonian h = ctx.prob->hamiltonian(0.2);
    const auto p1 = make_discount_problem(h, ctx.cfg.n, 0.1, 0.005, ctx.cfg.discount.domain_mult);
    const auto p2 =
        make_discount_problem(h, ctx.cfg.n, 0.1, 0.005, 2.0 * ctx.cfg.discount.domain_mult);
    const double e1 = solve_discounted(p1, h).estimate;
    const double e2 = solve_discounted(p2, h).estimate;
    return verdict("discount.domain_insensitivity", std::abs(e1 - e2) < 1e-4,
                   "|estimate change on doubling|=" + fd(std::abs(e1 - e2)));
}

// ----------------------------------------------------------------- strain ---

CheckResult check_strain_sandwich(Ctx& ctx) {
    if (ctx.trivial_direction()) return skip("strain.sandwich", "m=0 trivial case");
    const auto& curve = ctx.strain_curve16();
    const double h0 = curve.points.front().h;
    const double flat = curve.flat_level;
    double defect = 0;
    for (const auto& pt : curve.points)
        defect = std::max({defect, flat - pt.h, pt.h - h0});
    return verdict("strain.sandwich", defect <= 2e-3, "worst defect=" + fd(defect));
}

CheckResult check_strain_lipschitz(Ctx& ctx) {
    if (ctx.trivial_direction()) return skip("strain.lipschitz", "m=0 trivial case");
    const double ratio = lipschitz_ratio(ctx.strain_curve16());
    return verdict("strain.lipschitz", ratio <= 1.05, "max |dh|/(||s|| dc)=" + fd(ratio));
}

CheckResult check_strain_monotone(Ctx& ctx) {
    if (ctx.trivial_direction()) return skip("strain.monotone", "m=0 trivial case");
    const auto& curve = ctx.strain_curve16();
    for (std::size_t i = 1; i < curve.points.size(); ++i)
        if (curve.points[i].h > curve.points[i - 1].h + 1e-3)
            return fail("strain.monotone",
                        "h increases at c=" + fd(curve.points[i].c));
    return pass("strain.monotone", "h non-increasing over 16 points");
}

CheckResult check_strain_strict(Ctx& ctx) {
    if (ctx.trivial_direction()) return skip("strain.strict_decrease", "m=0 trivial case");
    const auto& curve = ctx.strain_curve16();
    int tested = 0;
    for (std::size_t i = 0; i + 1 < curve.points.size(); ++i) {
        if (curve.points[i].h <= curve.flat_level + 1e-2) continue;
        ++tested;
        if (!(curve.points[i].h - curve.points[i + 1].h > 1e-3))
            return fail("strain.strict_decrease", "no strict drop at c=" + fd(curve.points[i].c));
    }
    if (tested == 0) return skip("strain.strict_decrease", "no point above flat+1e-2");
    return pass("strain.strict_decrease", std::to_string(tested) + " points strictly decreasing");
}

CheckResult check_strain_quench(Ctx& ctx) {
    if (ctx.trivial_direction()) return skip("strain.quench", "m=0 trivial case");
    ctx.strain_curve16();  // ensures c_bar
    for (double f : {1.1, 2.0}) {
        const auto v = quench_check(*ctx.prob, f * ctx.c_bar);
        if (!v.pass)
            return fail("strain.quench",
                        "h=" + fd(v.h) + " flat=" + fd(v.flat_level) + " at c=" + fd(v.c));
    }
    return pass("strain.quench", "h = flat value at 1.1 c_bar and 2 c_bar");
}

CheckResult check_strain_witness(Ctx& ctx) {
    if (ctx.trivial_direction()) return skip("strain.witness", "m=0 trivial case");
    ctx.strain_curve16();
    const auto wit =
        build_quench_witness(*ctx.prob, 1.1 * ctx.c_bar, std::min(ctx.prob->window, 50.0));
    const bool ok = wit.pass && wit.interval_mean_err < 1e-6 && wit.phi_drift < 1e-2 &&
                    wit.plateau <= wit.psi_bound;
    return verdict("strain.witness", ok,
                   "max H=" + fd(wit.max_H) + " flat=" + fd(ctx.prob->flat_level()) +
                       " drift=" + fd(wit.phi_drift));
}

CheckResult check_strain_claim1(Ctx& ctx) {
    if (ctx.trivial_direction()) return skip("strain.claim1", "m=0 trivial case");
    const auto cs = ctx.admissible_c();
    if (cs.empty()) return skip("strain.claim1", "no admissible c (h at flat value)");
    for (double c : cs) {
        const auto r = claim1_check(*ctx.prob, c);
        if (!(r.min_t_plus_cs > 0) || !(r.min_fp_plus_csfpp > 0))
            return fail("strain.claim1", "min1=" + fd(r.min_t_plus_cs) +
                                             " min2=" + fd(r.min_fp_plus_csfpp) +
                                             " at c=" + fd(c));
    }
    return pass("strain.claim1", std::to_string(cs.size()) + " admissible c positive");
}

CheckResult check_strain_signs(Ctx& ctx) {
    if (ctx.trivial_direction()) return skip("strain.sign_structure", "m=0 trivial case");
    const auto cs = ctx.admissible_c();
    if (cs.empty()) return skip("strain.sign_structure", "no admissible c");
    for (double c : cs) {
        const auto r = differentiated_identity_check(*ctx.prob, c);
        if (!(r.mean_inv_fp > 0) || !(r.mean_s_over < 0) || !(std::abs(r.mean_dc_uprime) < 1e-2))
            return fail("strain.sign_structure",
                        "E[1/(f'+csf'')]=" + fd(r.mean_inv_fp) + " E[s/(1+as)]=" +
                            fd(r.mean_s_over) + " |E[dc u']|=" + fd(std::abs(r.mean_dc_uprime)) +
                            " at c=" + fd(c));
    }
    return pass("strain.sign_structure", std::to_string(cs.size()) + " admissible c checked");
}

CheckResult check_strain_main_theorem(Ctx& ctx) {
    const auto rep = main_theorem_check(*ctx.prob, ctx.cfg.c_values);
    const bool ok = rep.sandwich_ok && rep.strict_reduction_ok;
    std::string detail = "sandwich defect=" + fd(rep.worst_sandwich_defect);
    if (rep.analytic_edge) detail += " (analytic edge case)";
    return verdict("strain.main_theorem", ok, detail);
}

// --------------------------------------------------------------- frontsim ---

CheckResult check_fs_slope_periodic(Ctx& ctx) {
    FrontState st = make_front_state(64, 64, ctx.cfg.m, ctx.cfg.n, 0.4, 0.05);
    evolve(st, *ctx.field, 0.2, 0.2);
    // G is stored as slope + periodic part; verify the x-average slope of the
    // reconstructed G telescopes to m exactly.
    double worst = 0;
    for (int j = 0; j < st.ny; ++j) {
        double wrap = 0;
        for (int i = 0; i < st.nx; ++i)
            wrap += st.at((i + 1) % st.nx, j) - st.at(i, j);
        worst = std::max(worst, std::abs(wrap));
    }
    return verdict("frontsim.slope_periodicity", worst < 1e-10,
                   "worst row wrap sum=" + fd(worst));
}

CheckResult check_fs_translation(Ctx& ctx) {
    const int nx = 64, shift = 8;
    FrontState a = make_front_state(nx, nx, ctx.cfg.m, ctx.cfg.n, 0.4, 0.05);
    FrontState b = a;
    for (int j = 0; j < nx; ++j)
        for (int i = 0; i < nx; ++i)
            b.at(i, j) = a.at((i + shift) % nx, j);
    evolve(a, *ctx.field, 0.2, 0.2);
    evolve(b, *ctx.field, 0.2, 0.2);
    double worst = 0;
    for (int j = 0; j < nx; ++j)
        for (int i = 0; i < nx; ++i)
            worst = std::max(worst, std::abs(b.at(i, j) - a.at((i + shift) % nx, j)));
    return verdict("frontsim.translation_invariance", worst == 0.0,
                   "max |shifted - original|=" + fd(worst));
}

CheckResult check_fs_trivial_speed(Ctx& ctx) {
    const auto zero = std::make_shared<FieldRealization>(FieldSpec::zero());
    FrontState st = make_front_state(64, 64, ctx.cfg.m, ctx.cfg.n, 0.4, 0.0);
    const auto est = evolve(st, *zero, 0.7, 1.0);
    const double expect = std::sqrt(ctx.cfg.m * ctx.cfg.m + ctx.cfg.n * ctx.cfg.n);
    return verdict("frontsim.trivial_speed", std::abs(est.speed - expect) < 1e-12,
                   "speed=" + fd(est.speed) + " expect=" + fd(expect));
}

CheckResult check_fs_grid_convergence(Ctx& ctx) {
    if (ctx.trivial_direction()) return skip("frontsim.grid_convergence", "m=0 trivial case");
    double sp[3];
    const int grids[3] = {32, 64, 128};
    const double target = ctx.strain_curve16().points.front().h;
    for (int k = 0; k < 3; ++k) {
        FrontState st = make_front_state(grids[k], grids[k], ctx.cfg.m, ctx.cfg.n, 0.4, 0.0);
        sp[k] = evolve(st, *ctx.field, 0.0, 3.0).speed_extrapolated;
    }
    const double e1 = std::abs(sp[0] - target), e2 = std::abs(sp[1] - target),
                 e3 = std::abs(sp[2] - target);
    return verdict("frontsim.grid_convergence", e2 < e1 && e3 < e2,
                   "errors " + fd(e1) + " > " + fd(e2) + " > " + fd(e3));
}

CheckResult check_fs_route_agreement(Ctx& ctx) {
    if (ctx.trivial_direction()) return skip("frontsim.route_agreement", "m=0 trivial case");
    int tested = 0;
    for (double c : {0.0, 0.2}) {
        const StrainPoint pt = strain_point(*ctx.prob, c);
        if (pt.h <= ctx.prob->flat_level() + 0.05) continue;
        ++tested;
        FrontState st =
            make_front_state(ctx.cfg.sim.grid, ctx.cfg.sim.grid, ctx.cfg.m, ctx.cfg.n,
                             ctx.cfg.sim.cfl, ctx.cfg.sim.perturb);
        const auto est = evolve(st, *ctx.field, c, ctx.cfg.sim.T);
        const double rel = std::abs(est.speed_extrapolated - pt.h) / pt.h;
        if (rel > 0.05)
            return fail("frontsim.route_agreement",
                        "rel err=" + fd(rel) + " at c=" + fd(c) + " (h=" + fd(pt.h) +
                            " sim=" + fd(est.speed_extrapolated) + ")");
    }
    if (tested == 0) return skip("frontsim.route_agreement", "h at flat value for tested c");
    return pass("frontsim.route_agreement",
                std::to_string(tested) + " c values within 5% of branch average");
}

CheckResult check_fs_reduction(Ctx& ctx) {
    if (ctx.trivial_direction()) return skip("frontsim.strain_reduction", "m=0 trivial case");
    const auto [s1, s2] =
        measure_strain_reduction(*ctx.field, ctx.cfg.m, ctx.cfg.n, 0.0, 0.5, 96, 3.0);
    return verdict("frontsim.strain_reduction", s2 <= s1 + 0.02,
                   "speed(0)=" + fd(s1) + " speed(0.5)=" + fd(s2));
}

// -------------------------------------------------------------------- cli ---

CheckResult check_cli_repro(Ctx& ctx) {
    if (ctx.trivial_direction())
        return pass("cli.reproducibility", "analytic edge case, outputs constant");
    const StrainPoint a = strain_point(*ctx.prob, 0.2);
    const StrainPoint b = strain_point(*ctx.prob, 0.2);
    const std::string csv_a = field_csv(*ctx.field, 0.0, 10.0, 101);
    const std::string csv_b = field_csv(*ctx.field, 0.0, 10.0, 101);
    const bool ok = a.h == b.h && a.flat == b.flat && csv_a == csv_b;
    return verdict("cli.reproducibility", ok, "repeated evaluation bit-identical");
}

std::vector<Check> registry() {
    return {
        {"field.determinism", check_field_determinism},
        {"field.amplitude_bound", check_field_amplitude_bound},
        {"field.stationarity", check_field_stationarity},
        {"field.mean_vprime", check_field_mean_vprime},
        {"field.bounds_consistency", check_field_bounds_consistency},
        {"field.b2_shear", check_field_b2},
        {"hamiltonian.branch_residual", check_ham_branch_roots},
        {"hamiltonian.branch_slopes", check_ham_branch_slopes},
        {"hamiltonian.quasiconvex", check_ham_quasiconvex},
        {"hamiltonian.level_width", check_ham_level_width},
        {"hamiltonian.derivative_fd", check_ham_deriv_fd},
        {"effective.monotone", check_eff_monotone},
        {"effective.divergence", check_eff_divergence},
        {"effective.continuity", check_eff_continuity},
        {"effective.flat_min", check_eff_flat_min},
        {"effective.window_convergence", check_eff_window_convergence},
        {"effective.corrector_drift", check_eff_corrector},
        {"effective.cell_residual", check_eff_cell_residual},
        {"discount.constant_exact", check_disc_constant},
        {"discount.comparison_shift", check_disc_shift},
        {"discount.bounded", check_disc_bounded},
        {"discount.lipschitz_c", check_disc_lipschitz_c},
        {"discount.consistency_order", check_disc_consistency},
        {"discount.domain_insensitivity", check_disc_domain},
        {"strain.sandwich", check_strain_sandwich},
        {"strain.lipschitz", check_strain_lipschitz},
        {"strain.monotone", check_strain_monotone},
        {"strain.strict_decrease", check_strain_strict},
        {"strain.quench", check_strain_quench},
        {"strain.witness", check_strain_witness},
        {"strain.claim1", check_strain_claim1},
        {"strain.sign_structure", check_strain_signs},
        {"strain.main_theorem", check_strain_main_theorem},
        {"frontsim.slope_periodicity", check_fs_slope_periodic},
        {"frontsim.translation_invariance", check_fs_translation},
        {"frontsim.trivial_speed", check_fs_trivial_speed},
        {"frontsim.grid_convergence", check_fs_grid_convergence},
        {"frontsim.route_agreement", check_fs_route_agreement},
        {"frontsim.strain_reduction", check_fs_reduction},
        {"cli.reproducibility", check_cli_repro},
    };
}

}  // namespace

int RunManifest::passed() const {
    int n = 0;
    for (const auto& c : checks) n += c.status == "PASS";
    return n;
}
int RunManifest::failed() const {
    int n = 0;
    for (const auto& c : checks) n += c.status == "FAIL";
    return n;
}
int RunManifest::skipped() const {
    int n = 0;
    for (const auto& c : checks) n += c.status == "SKIP";
    return n;
}

std::string RunManifest::to_json() const {
    nlohmann::ordered_json j;
    j["artifact_version"] = version;
    j["config_hash"] = config_hash;
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& c : checks)
        arr.push_back(
            nlohmann::ordered_json{{"name", c.name}, {"status", c.status}, {"detail", c.detail}});
    j["checks"] = arr;
    j["summary"] =
        nlohmann::ordered_json{{"pass", passed()}, {"fail", failed()}, {"skip", skipped()}};
    return j.dump(2) + "\n";
}

std::string RunManifest::timings_json() const {
    nlohmann::ordered_json j = nlohmann::ordered_json::array();
    for (const auto& [name, ms] : timings_ms)
        j.push_back(nlohmann::ordered_json{{"name", name}, {"ms", ms}});
    return j.dump(2) + "\n";
}

RunManifest run_validate(const ExperimentConfig& cfg) {
    Ctx ctx;
    ctx.cfg = cfg;
    ctx.field = std::make_shared<FieldRealization>(cfg.field);
    ctx.prob.emplace(ctx.field, cfg.m, cfg.n, cfg.window, cfg.eps_gap);

    RunManifest man;
    man.version = kArtifactVersion;
    man.config_hash = cfg.hash();
    for (const auto& chk : registry()) {
        const auto t0 = std::chrono::steady_clock::now();
        CheckResult res;
        try {
            res = chk.fn(ctx);
        } catch (const HypothesisNotMetError& e) {
            res = skip(chk.name, std::string("hypothesis not met: ") + e.what());
        } catch (const std::exception& e) {
            res = fail(chk.name, std::string("exception: ") + e.what());
        }
        const auto t1 = std::chrono::steady_clock::now();
        man.checks.push_back(res);
        man.timings_ms.emplace_back(
            chk.name, std::chrono::duration<double, std::milli>(t1 - t0).count());
    }
    return man;
}

void write_validate_artifacts(const RunManifest& man, const ExperimentConfig& cfg,
                              const std::string& dir) {
    std::filesystem::create_directories(dir);
    write_text_file(dir + "/manifest.json", man.to_json());
    write_text_file(dir + "/timings.json", man.timings_json());

    const auto field = std::make_shared<FieldRealization>(cfg.field);
    write_text_file(dir + "/field.csv", field_csv(*field, 0.0, 10.0, 1001));
    if (cfg.m != 0.0 && cfg.n != 0.0) {
        ShearProblem prob(field, cfg.m, cfg.n, cfg.window, cfg.eps_gap);
        write_text_file(dir + "/strain_curve.csv", curve_csv(strain_curve(prob, cfg.c_values)));
        const StrainHamiltonian h = prob.hamiltonian(cfg.c_values.back());
        EffectiveParams prm;
        prm.L = prob.window;
        prm.eps_gap = cfg.eps_gap;
        prm.mu_range = cfg.mu_range;
        prm.table_points = cfg.table_points;
        const auto eff = EffectiveHamiltonian::build(h, prm);
        write_text_file(dir + "/ptables.csv", ptables_csv(eff));
        std::vector<std::pair<double, double>> ph;
        for (int i = 0; i < cfg.p_steps; ++i) {
            const double p =
                cfg.p_min + (cfg.p_max - cfg.p_min) * i / double(std::max(1, cfg.p_steps - 1));
            ph.emplace_back(p, eff(p));
        }
        write_text_file(dir + "/effective.csv", effective_csv(ph));
        const auto est = vanishing_discount_estimate(h, cfg.n, cfg.delta_list, cfg.discount.dx,
                                                     cfg.discount.domain_mult,
                                                     cfg.discount.theta_override);
        write_text_file(dir + "/discount.csv", discount_csv(est));
    }
}

}  // namespace gstrain
