#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <memory>
#include <random>

#include "gstrain/hamiltonian.hpp"
#include "oracle_helpers.hpp"

using namespace gstrain;

namespace {

StrainHamiltonian const_ks(double k, double s, double m, double c) {
    FieldBounds b;
    b.k_lo = b.k_hi = k;
    b.s_lo = b.s_hi = s;
    b.window = 1.0;
    return StrainHamiltonian([k](double) { return k; }, [s](double) { return s; }, m, c, b);
}

StrainHamiltonian zero_shear(double m, double c) {
    auto field = std::make_shared<FieldRealization>(FieldSpec::zero());
    FieldBounds b;
    b.window = 1.0;
    return StrainHamiltonian(field, m, c, b);
}

StrainHamiltonian cosine_shear(double m, double c, double window = 10.0) {
    auto field = std::make_shared<FieldRealization>(FieldSpec::periodic_single_mode(0.5, 1.0));
    return StrainHamiltonian(field, m, c, field_bounds(*field, m, window));
}

double uni(std::mt19937_64& rng, double a, double b) {
    return a + (b - a) * static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

TEST_CASE("direct evaluation matches hand substitution") {
    CHECK(zero_shear(1.0, 0.7).eval(0.0, 0.3) == doctest::Approx(1.0).epsilon(1e-15));
    const StrainHamiltonian h = const_ks(0.0, 1.0, 1.0, 1.0);
    CHECK(h.eval(1.0, 0.0) ==
          doctest::Approx(std::sqrt(2.0) + 1.0 / std::sqrt(2.0)).epsilon(1e-15));
    CHECK(h.eval(-1.0, 0.0) ==
          doctest::Approx(std::sqrt(2.0) - 1.0 / std::sqrt(2.0)).epsilon(1e-15));
}

TEST_CASE("m = 0 is rejected") {
    CHECK_THROWS_AS(const_ks(0.0, 0.0, 0.0, 1.0), std::invalid_argument);
}

TEST_CASE("p-derivative: value at zero, asymptotes, finite differences") {
    const double c = 0.8, s = 1.3;
    const StrainHamiltonian h = const_ks(0.2, s, 1.0, c);
    CHECK(h.deriv_p(0.0, 0.0) == doctest::Approx(c * s).epsilon(1e-14));

    const StrainHamiltonian flat = const_ks(0.0, 0.0, 1.0, 1.0);
    CHECK(flat.deriv_p(1e8, 0.0) == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(flat.deriv_p(-1e8, 0.0) == doctest::Approx(-1.0).epsilon(1e-8));

    std::mt19937_64 rng(17);
    const StrainHamiltonian g = cosine_shear(0.7, 0.9);
    for (int it = 0; it < 10; ++it) {
        const double p = uni(rng, -6, 6), x = uni(rng, 0, 10);
        const double fd = (g.eval(p + 1e-5, x) - g.eval(p - 1e-5, x)) / 2e-5;
        CHECK(g.deriv_p(p, x) == doctest::Approx(fd).epsilon(1e-6));
    }
}

TEST_CASE("critical point: odd cubic, oracle root, sign structure") {
    const StrainHamiltonian flat = const_ks(0.4, 0.0, 1.0, 2.0);
    const auto cp = flat.critical_point(0.0);
    CHECK(cp.p_star == 0.0);
    CHECK(cp.h_min == doctest::Approx(1.4).epsilon(1e-15));

    // c s = 1, m = 1: root of p^3 + p + 1 from an independent bisection.
    const double root = oracle::bisect([](double p) { return p * p * p + p + 1.0; }, -2.0, 0.0);
    const auto cp2 = const_ks(0.0, 1.0, 1.0, 1.0).critical_point(0.0);
    CHECK(cp2.p_star == doctest::Approx(root).epsilon(1e-12));

    std::mt19937_64 rng(5);
    for (int it = 0; it < 100; ++it) {
        const double s = uni(rng, -3, 3), c = uni(rng, 0, 4), m = uni(rng, 0.2, 2);
        const double k = uni(rng, -1, 1);
        const auto cp3 = const_ks(k, s, m, c).critical_point(0.0);
        if (c * s != 0.0) CHECK(cp3.p_star * (c * s) < 0.0);
        CHECK(cp3.h_min <= std::abs(m) + k + 1e-12);
    }
}

TEST_CASE("branch roots: explicit values, residuals, slope signs, no-root error") {
    const StrainHamiltonian flat = zero_shear(1.0, 0.3);
    const auto roots = flat.branch_roots(0.0, std::sqrt(2.0));
    CHECK(roots.q_plus == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(roots.q_minus == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK_THROWS_AS(flat.branch_roots(0.0, 1.0), NoRootError);
    CHECK_THROWS_AS(flat.branch_roots(0.0, 0.5), NoRootError);

    // Inverts the substitution example: H(1) = sqrt(2) + 1/sqrt(2).
    const StrainHamiltonian h = const_ks(0.0, 1.0, 1.0, 1.0);
    const auto r2 = h.branch_roots(0.0, std::sqrt(2.0) + 1.0 / std::sqrt(2.0));
    CHECK(r2.q_plus == doctest::Approx(1.0).epsilon(1e-9));

    std::mt19937_64 rng(23);
    const StrainHamiltonian g = cosine_shear(0.8, 1.1);
    for (int it = 0; it < 300; ++it) {
        const double x = uni(rng, 0, 10);
        const auto cp = g.critical_point(x);
        const double mu = cp.h_min + uni(rng, 1e-5, 5.0);
        const auto br = g.branch_roots(x, mu);
        CHECK(br.q_minus < cp.p_star);
        CHECK(cp.p_star < br.q_plus);
        CHECK(std::abs(g.eval(br.q_plus, x) - mu) <= 1e-12 * std::max(1.0, std::abs(mu)));
        CHECK(std::abs(g.eval(br.q_minus, x) - mu) <= 1e-12 * std::max(1.0, std::abs(mu)));
        CHECK(g.deriv_p(br.q_plus, x) > 0.0);
        CHECK(g.deriv_p(br.q_minus, x) < 0.0);
    }
}

TEST_CASE("large strain levels stay solvable") {
    const StrainHamiltonian g = cosine_shear(0.6, 300.0, 10.0);
    for (double x : {0.05, 0.31, 0.66, 0.94}) {
        const double mu = g.flat_level() + 1e-3;
        const auto br = g.branch_roots(x, mu);
        CHECK(std::abs(g.eval(br.q_plus, x) - mu) <= 1e-11 * std::max(1.0, std::abs(mu)));
        CHECK(std::abs(g.eval(br.q_minus, x) - mu) <= 1e-11 * std::max(1.0, std::abs(mu)));
    }
}

TEST_CASE("sublevel boundary at the flat level") {
    const StrainHamiltonian flat = zero_shear(1.0, 0.4);
    const auto [pm, pp] = flat.p_plus_minus(0.0);  // degenerate touch
    CHECK(pm == 0.0);
    CHECK(pp == 0.0);

    const StrainHamiltonian g = cosine_shear(1.0, 0.0);
    CHECK(g.flat_level() == doctest::Approx(1.5).epsilon(1e-10));
    const auto [lo, hi] = g.p_plus_minus(0.25);  // k = 0 there
    CHECK(hi == doctest::Approx(std::sqrt(1.25)).epsilon(1e-9));
    CHECK(lo == doctest::Approx(-std::sqrt(1.25)).epsilon(1e-9));
    for (double x : {0.1, 0.4, 0.77}) {
        const auto [a, b] = g.p_plus_minus(x);
        CHECK(g.eval(b + 0.01, x) > g.flat_level());
        CHECK(g.eval(a - 0.01, x) > g.flat_level());
    }

    // Underestimated sup k: the touch test must flag it.
    auto field = std::make_shared<FieldRealization>(FieldSpec::periodic_single_mode(0.5, 1.0));
    FieldBounds bad = field_bounds(*field, 1.0, 10.0);
    bad.k_hi = 0.4;
    const StrainHamiltonian h_bad(field, 1.0, 0.0, bad);
    CHECK_THROWS_AS(h_bad.p_plus_minus(0.0), InconsistentBoundsError);
}

TEST_CASE("quasiconvexity checker: counterexample witness and clean passes") {
    std::vector<std::pair<double, double>> samples;
    for (double p : {0.0, 1.0, 2.0})
        samples.emplace_back(p, oracle::perturbed_kinked_profile(p, 0.1));
    const auto rep = check_quasiconvex(samples);
    CHECK_FALSE(rep.pass);
    CHECK(rep.i == 0);
    CHECK(rep.j == 1);
    CHECK(rep.k == 2);
    CHECK(rep.value_i == doctest::Approx(0.0));
    CHECK(rep.value_j == doctest::Approx(0.1));
    CHECK(rep.value_k == doctest::Approx(-0.6));

    std::mt19937_64 rng(41);
    const StrainHamiltonian g = cosine_shear(0.7, 1.3);
    for (int rep_it = 0; rep_it < 5; ++rep_it) {
        const double x = uni(rng, 0, 10);
        std::vector<std::pair<double, double>> line;
        for (int i = 0; i <= 2000; ++i) {
            const double p = -10.0 + 0.01 * i;
            line.emplace_back(p, g.eval(p, x));
        }
        CHECK(check_quasiconvex(line).pass);
    }

    std::vector<std::pair<double, double>> mono;
    for (int i = 0; i < 10; ++i) mono.emplace_back(i, 2.0 * i);
    CHECK(check_quasiconvex(mono).pass);
}

TEST_CASE("quasiconvexity property on random triples") {
    std::mt19937_64 rng(4242);
    const StrainHamiltonian g = cosine_shear(0.6, 0.0, 10.0);
    for (int it = 0; it < 10000; ++it) {
        const double x = uni(rng, 0, 10), c = uni(rng, 0, 3);
        const StrainHamiltonian h = g.with_c(c);
        double p = uni(rng, -8, 8), r = uni(rng, -8, 8);
        if (p > r) std::swap(p, r);
        const double mid = 0.5 * (p + r);
        CHECK(h.eval(mid, x) <= std::max(h.eval(p, x), h.eval(r, x)) + 1e-12);
    }
}

TEST_CASE("level sets have no flat segments near the roots") {
    std::mt19937_64 rng(7);
    const StrainHamiltonian g = cosine_shear(0.9, 0.8);
    for (int it = 0; it < 200; ++it) {
        const double x = uni(rng, 0, 10);
        const auto cp = g.critical_point(x);
        const double mu = cp.h_min + uni(rng, 0.05, 2.0);
        const auto br = g.branch_roots(x, mu);
        for (double q : {br.q_plus, br.q_minus}) {
            CHECK(std::abs(g.eval(q + 5e-5, x) - mu) > 1e-8);
            CHECK(std::abs(g.eval(q - 5e-5, x) - mu) > 1e-8);
        }
    }
}

TEST_CASE("shear profiles satisfy the zero-strain-at-maxima assumption") {
    const StrainHamiltonian g = cosine_shear(0.7, 0.5);
    CHECK(max_s_at_k_maxima(g, 10.0) < 0.05 * g.s_norm() + 1e-12);

    // A deliberately violating pair: strain does not vanish at the k maxima.
    FieldBounds b;
    b.k_lo = -1;
    b.k_hi = 1;
    b.s_lo = b.s_hi = 1.0;
    b.window = 10.0;
    const StrainHamiltonian bad(
        [](double x) { return std::cos(x); }, [](double) { return 1.0; }, 1.0, 0.5, b);
    CHECK(max_s_at_k_maxima(bad, 10.0) > 0.5);
}
