#include "gstrain/field.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace gstrain {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Golden-section extremum refinement of fn on [a,b] (fn assumed unimodal
// there; we only call it on a bracket around a scanned best sample).
template <typename Fn>
double refine_max(const Fn& fn, double a, double b) {
    constexpr double inv_phi = 0.6180339887498949;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = fn(c), fd = fn(d);
    for (int it = 0; it < 80 && (b - a) > 1e-14 * (1.0 + std::abs(a)); ++it) {
        if (fc > fd) {
            b = d; d = c; fd = fc;
            c = b - inv_phi * (b - a);
            fc = fn(c);
        } else {
            a = c; c = d; fc = fd;
            d = a + inv_phi * (b - a);
            fd = fn(d);
        }
    }
    return std::max(fc, fd);
}
}  // namespace

std::string to_string(FieldModel m) {
    switch (m) {
        case FieldModel::Zero: return "zero";
        case FieldModel::PeriodicSingleMode: return "periodic";
        case FieldModel::RandomPhase: return "random-phase";
    }
    return "?";
}

FieldModel field_model_from_string(const std::string& s) {
    if (s == "zero") return FieldModel::Zero;
    if (s == "periodic" || s == "periodic-single-mode") return FieldModel::PeriodicSingleMode;
    if (s == "random-phase") return FieldModel::RandomPhase;
    throw std::invalid_argument("unknown field model: " + s);
}

FieldSpec FieldSpec::zero() { return FieldSpec{}; }

FieldSpec FieldSpec::periodic_single_mode(double amplitude, double frequency) {
    FieldSpec s;
    s.model = FieldModel::PeriodicSingleMode;
    s.amplitudes = {amplitude};
    s.frequencies = {frequency};
    s.validate();
    return s;
}

FieldSpec FieldSpec::random_phase(std::vector<double> amplitudes,
                                  std::vector<double> frequencies, std::uint64_t seed) {
    FieldSpec s;
    s.model = FieldModel::RandomPhase;
    s.amplitudes = std::move(amplitudes);
    s.frequencies = std::move(frequencies);
    s.seed = seed;
    s.validate();
    return s;
}

void FieldSpec::validate() const {
    if (model == FieldModel::Zero) {
        if (!amplitudes.empty() || !frequencies.empty())
            throw std::invalid_argument("zero field takes no modes");
        return;
    }
    if (amplitudes.empty())
        throw std::invalid_argument("field spec needs at least one mode");
    if (amplitudes.size() != frequencies.size())
        throw std::invalid_argument("amplitudes/frequencies size mismatch");
    if (model == FieldModel::PeriodicSingleMode && amplitudes.size() != 1)
        throw std::invalid_argument("periodic-single-mode takes exactly one mode");
    for (double a : amplitudes)
        if (!std::isfinite(a)) throw std::invalid_argument("non-finite amplitude");
    for (double f : frequencies)
        if (!(f > 0.0) || !std::isfinite(f))
            throw std::invalid_argument("frequencies must be positive and finite");
}

double FieldSpec::min_frequency() const {
    if (frequencies.empty()) return 1.0;
    return *std::min_element(frequencies.begin(), frequencies.end());
}

double FieldSpec::max_frequency() const {
    if (frequencies.empty()) return 1.0;
    return *std::max_element(frequencies.begin(), frequencies.end());
}

double FieldSpec::sum_abs_amplitude() const {
    double s = 0;
    for (double a : amplitudes) s += std::abs(a);
    return s;
}

double FieldSpec::sum_abs_amplitude_frequency() const {
    double s = 0;
    for (std::size_t j = 0; j < amplitudes.size(); ++j)
        s += std::abs(amplitudes[j]) * frequencies[j];
    return s;
}

FieldRealization::FieldRealization(FieldSpec spec) : spec_(std::move(spec)) {
    spec_.validate();
    const std::size_t n = spec_.amplitudes.size();
    phases_.assign(n, 0.0);
    omegas_.resize(n);
    for (std::size_t j = 0; j < n; ++j) omegas_[j] = kTwoPi * spec_.frequencies[j];
    if (spec_.model == FieldModel::RandomPhase) {
        // mt19937_64 output mapped to [0, 2pi) by hand: bit-identical phases
        // for equal seeds on every platform.
        std::mt19937_64 rng(spec_.seed);
        for (std::size_t j = 0; j < n; ++j) {
            const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
            phases_[j] = kTwoPi * u;
        }
    }
}

double FieldRealization::v(double x) const {
    double s = 0;
    for (std::size_t j = 0; j < phases_.size(); ++j)
        s += spec_.amplitudes[j] * std::cos(omegas_[j] * x + phases_[j]);
    return s;
}

double FieldRealization::v_prime(double x) const {
    double s = 0;
    for (std::size_t j = 0; j < phases_.size(); ++j)
        s -= spec_.amplitudes[j] * omegas_[j] * std::sin(omegas_[j] * x + phases_[j]);
    return s;
}

double FieldRealization::default_window() const {
    if (spec_.model == FieldModel::Zero) return 1.0;
    return 2000.0 / spec_.min_frequency();
}

FieldRealization sample_field(const FieldSpec& spec) { return FieldRealization(spec); }

FieldBounds field_bounds(const FieldRealization& r, double m, double window,
                         int samples_per_unit) {
    if (!(window > 0)) throw std::invalid_argument("field_bounds: window must be positive");
    FieldBounds b;
    b.window = window;
    if (r.spec().model == FieldModel::Zero) return b;

    const auto k = [&](double x) { return m * r.v(x); };
    const auto s = [&](double x) { return m * r.v_prime(x); };

    // Scan step resolving the fastest mode.
    const long per_unit = std::max<long>(samples_per_unit,
                                         static_cast<long>(32 * r.spec().max_frequency()));
    const long n = std::max<long>(64, static_cast<long>(window * static_cast<double>(per_unit)));
    const double h = window / static_cast<double>(n);

    double k_lo = k(0), k_hi = k_lo, s_lo = s(0), s_hi = s_lo;
    long ik_lo = 0, ik_hi = 0, is_lo = 0, is_hi = 0;
    for (long i = 1; i <= n; ++i) {
        const double x = h * static_cast<double>(i);
        const double kv = k(x), sv = s(x);
        if (kv < k_lo) { k_lo = kv; ik_lo = i; }
        if (kv > k_hi) { k_hi = kv; ik_hi = i; }
        if (sv < s_lo) { s_lo = sv; is_lo = i; }
        if (sv > s_hi) { s_hi = sv; is_hi = i; }
    }
    const auto bracket = [&](long i) {
        const double lo = std::max(0.0, h * static_cast<double>(i - 1));
        const double hi = std::min(window, h * static_cast<double>(i + 1));
        return std::pair<double, double>{lo, hi};
    };
    auto [a0, b0] = bracket(ik_hi);
    k_hi = std::max(k_hi, refine_max(k, a0, b0));
    auto [a1, b1] = bracket(ik_lo);
    k_lo = std::min(k_lo, -refine_max([&](double x) { return -k(x); }, a1, b1));
    auto [a2, b2] = bracket(is_hi);
    s_hi = std::max(s_hi, refine_max(s, a2, b2));
    auto [a3, b3] = bracket(is_lo);
    s_lo = std::min(s_lo, -refine_max([&](double x) { return -s(x); }, a3, b3));

    b.k_lo = k_lo;
    b.k_hi = k_hi;
    b.s_lo = s_lo;
    b.s_hi = s_hi;
    return b;
}

double level_fraction(const FieldRealization& r, double m, double threshold,
                      double window, long samples) {
    if (!(window > 0)) throw std::invalid_argument("level_fraction: window must be positive");
    samples = std::max<long>(samples, 1000);
    const double h = 2.0 * window / static_cast<double>(samples);
    long hits = 0;
    for (long i = 0; i < samples; ++i) {
        const double x = -window + (static_cast<double>(i) + 0.5) * h;
        if (m * r.v_prime(x) < threshold) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(samples);
}

FieldStats field_stats(const FieldRealization& r, double m, const FieldBounds& bounds,
                       double window) {
    FieldStats st;
    st.tau = -bounds.s_lo;
    st.window = window;
    if (st.tau > 0) st.alpha = level_fraction(r, m, -0.5 * st.tau, window);
    return st;
}

}  // namespace gstrain
