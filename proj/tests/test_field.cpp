#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "gstrain/field.hpp"

using namespace gstrain;

namespace {
constexpr double kPi = std::numbers::pi;

FieldSpec rp_spec(std::uint64_t seed = 7) {
    return FieldSpec::random_phase({0.2, 0.15, 0.1}, {1.0, std::sqrt(2.0), std::sqrt(3.0)},
                                   seed);
}
}  // namespace

TEST_CASE("zero model evaluates to zero everywhere") {
    const FieldRealization r = sample_field(FieldSpec::zero());
    for (double x : {-3.7, 0.0, 11.25}) {
        CHECK(r.v(x) == 0.0);
        CHECK(r.v_prime(x) == 0.0);
    }
}

TEST_CASE("single mode matches the closed form") {
    const FieldRealization r = sample_field(FieldSpec::periodic_single_mode(0.5, 1.0));
    CHECK(r.v(0.0) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(r.v_prime(0.0) == doctest::Approx(0.0).epsilon(1e-14));
    const auto [v, vp] = r.eval_pair(0.25);
    CHECK(std::abs(v) < 1e-14);
    CHECK(vp == doctest::Approx(-kPi).epsilon(1e-14));
    for (double x : {0.13, 0.72, 5.41}) {
        CHECK(r.v(x) == doctest::Approx(0.5 * std::cos(2 * kPi * x)).epsilon(1e-14));
        CHECK(r.v_prime(x) == doctest::Approx(-kPi * std::sin(2 * kPi * x)).epsilon(1e-14));
    }
}

TEST_CASE("random-phase sampling is deterministic per seed") {
    const FieldRealization a = sample_field(rp_spec());
    const FieldRealization b = sample_field(rp_spec());
    CHECK(a.phases() == b.phases());
    for (int i = 0; i < 50; ++i) {
        const double x = 1.7 + 0.31 * i;
        CHECK(a.v(x) == b.v(x));
        CHECK(a.v_prime(x) == b.v_prime(x));
    }
    const FieldRealization c = sample_field(rp_spec(8));
    CHECK(a.v(1.7) != c.v(1.7));
}

TEST_CASE("malformed specs are rejected") {
    CHECK_THROWS_AS(FieldSpec::random_phase({}, {}, 1), std::invalid_argument);
    CHECK_THROWS_AS(FieldSpec::random_phase({0.5}, {1.0, 2.0}, 1), std::invalid_argument);
    CHECK_THROWS_AS(FieldSpec::periodic_single_mode(0.5, -1.0), std::invalid_argument);
    FieldSpec bad;
    bad.model = FieldModel::RandomPhase;
    bad.amplitudes = {std::nan("")};
    bad.frequencies = {1.0};
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("amplitude bounds hold pointwise") {
    const FieldSpec spec = rp_spec();
    const FieldRealization r = sample_field(spec);
    const double bv = spec.sum_abs_amplitude();
    const double bvp = 2 * kPi * spec.sum_abs_amplitude_frequency();
    for (int i = 0; i < 20000; ++i) {
        const double x = -40.0 + 0.004 * i;
        CHECK(std::abs(r.v(x)) <= bv + 1e-12);
        CHECK(std::abs(r.v_prime(x)) <= bvp + 1e-12);
    }
}

TEST_CASE("field_bounds finds single-mode extrema and stays monotone in the window") {
    const FieldRealization zero = sample_field(FieldSpec::zero());
    const FieldBounds bz = field_bounds(zero, 1.0, 5.0);
    CHECK(bz.k_lo == 0.0);
    CHECK(bz.k_hi == 0.0);
    CHECK(bz.s_lo == 0.0);
    CHECK(bz.s_hi == 0.0);

    const FieldRealization r = sample_field(FieldSpec::periodic_single_mode(0.5, 1.0));
    const FieldBounds b = field_bounds(r, 1.0, 2.0);
    CHECK(b.k_lo == doctest::Approx(-0.5).epsilon(1e-10));
    CHECK(b.k_hi == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(b.s_lo == doctest::Approx(-kPi).epsilon(1e-10));
    CHECK(b.s_hi == doctest::Approx(kPi).epsilon(1e-10));

    // m scales and flips.
    const FieldBounds bm = field_bounds(r, -2.0, 2.0);
    CHECK(bm.k_hi == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(bm.s_lo == doctest::Approx(-2 * kPi).epsilon(1e-10));

    const FieldRealization rp = sample_field(rp_spec());
    const FieldBounds narrow = field_bounds(rp, 1.0, 5.0);
    const FieldBounds wide = field_bounds(rp, 1.0, 40.0);
    CHECK(wide.k_hi >= narrow.k_hi - 1e-12);
    CHECK(wide.k_lo <= narrow.k_lo + 1e-12);
    CHECK(wide.k_hi <= rp_spec().sum_abs_amplitude() + 1e-12);
}

TEST_CASE("every sample stays inside the reported bounds box") {
    const FieldRealization r = sample_field(rp_spec(3));
    const double m = 0.6, window = 30.0;
    const FieldBounds b = field_bounds(r, m, window);
    for (int i = 0; i <= 6000; ++i) {
        const double x = window * i / 6000.0;
        CHECK(m * r.v(x) >= b.k_lo - 1e-9);
        CHECK(m * r.v(x) <= b.k_hi + 1e-9);
        CHECK(m * r.v_prime(x) >= b.s_lo - 1e-9);
        CHECK(m * r.v_prime(x) <= b.s_hi + 1e-9);
    }
}

TEST_CASE("level_fraction reproduces the analytic one-third measure") {
    // s = -pi sin(2 pi x); {s < -pi/2} = {sin > 1/2}, one third of each period.
    const FieldRealization r = sample_field(FieldSpec::periodic_single_mode(0.5, 1.0));
    const double frac = level_fraction(r, 1.0, -kPi / 2.0, 25.0);
    CHECK(frac == doctest::Approx(1.0 / 3.0).epsilon(1e-4));

    const FieldRealization zero = sample_field(FieldSpec::zero());
    CHECK(level_fraction(zero, 1.0, -0.1, 5.0) == 0.0);
    CHECK(level_fraction(zero, 1.0, 0.1, 5.0) == 1.0);
}

TEST_CASE("field_stats ingredients of the quench bound") {
    const FieldRealization r = sample_field(FieldSpec::periodic_single_mode(0.5, 1.0));
    const FieldBounds b = field_bounds(r, 1.0, 25.0);
    const FieldStats st = field_stats(r, 1.0, b, 25.0);
    CHECK(st.tau == doctest::Approx(kPi).epsilon(1e-10));
    CHECK(st.alpha == doctest::Approx(1.0 / 3.0).epsilon(1e-3));
    CHECK(st.alpha > 0.0);
    CHECK(st.alpha < 1.0);
}

TEST_CASE("stationarity surrogate: windowed moments are shift-stable") {
    const FieldSpec spec = rp_spec();
    const FieldRealization r = sample_field(spec);
    const double L = 1000.0 / spec.min_frequency();
    const long ns = 250000;
    double mean0 = 0, var0 = 0;
    for (int k = 0; k < 3; ++k) {
        const double x0 = 61.3 * k;
        double s1 = 0, s2 = 0;
        for (long i = 0; i < ns; ++i) {
            const double x = x0 + L * (static_cast<double>(i) + 0.5) / ns;
            s1 += r.v(x);
            s2 += r.v(x) * r.v(x);
        }
        const double mean = s1 / ns, var = s2 / ns - mean * mean;
        if (k == 0) { mean0 = mean; var0 = var; }
        else {
            CHECK(std::abs(mean - mean0) < 1e-2);
            CHECK(std::abs(var - var0) < 1e-2);
        }
    }
}

TEST_CASE("mean of v' over [0,L] obeys the exact telescoping bound") {
    const FieldSpec spec = rp_spec(11);
    const FieldRealization r = sample_field(spec);
    for (double L : {50.0, 200.0, 800.0}) {
        const double mean = (r.v(L) - r.v(0.0)) / L;
        CHECK(std::abs(mean) <= 2.0 * spec.sum_abs_amplitude() / L + 1e-15);
    }
}
