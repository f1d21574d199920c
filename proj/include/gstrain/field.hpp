#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace gstrain {

enum class FieldModel { Zero, PeriodicSingleMode, RandomPhase };

std::string to_string(FieldModel m);
FieldModel field_model_from_string(const std::string& s);

/// Recipe for a trigonometric-polynomial flow profile
///   v(x) = sum_j a_j cos(2 pi f_j x + theta_j).
/// Random-phase model: theta_j iid uniform on [0, 2pi) from the seed, which
/// gives a stationary profile; pairwise rationally independent frequencies
/// make it ergodic. Periodic single mode: one term, theta = 0.
struct FieldSpec {
    FieldModel model = FieldModel::Zero;
    std::vector<double> amplitudes;
    std::vector<double> frequencies;
    std::uint64_t seed = 0;

    static FieldSpec zero();
    static FieldSpec periodic_single_mode(double amplitude, double frequency);
    static FieldSpec random_phase(std::vector<double> amplitudes,
                                  std::vector<double> frequencies, std::uint64_t seed);

    /// Throws std::invalid_argument on malformed specs (empty random-phase
    /// amplitude list, non-finite or non-positive entries, size mismatch).
    void validate() const;

    double min_frequency() const;
    double max_frequency() const;
    double sum_abs_amplitude() const;          // bound on |v|
    double sum_abs_amplitude_frequency() const;  // bound on |v'| / (2 pi)

    bool operator==(const FieldSpec&) const = default;
};

/// One sampled profile: phases resolved, closed-form evaluators for v, v'.
/// Immutable after construction; concurrent read-only use is safe.
class FieldRealization {
  public:
    explicit FieldRealization(FieldSpec spec);

    const FieldSpec& spec() const { return spec_; }
    const std::vector<double>& phases() const { return phases_; }

    double v(double x) const;
    double v_prime(double x) const;
    std::pair<double, double> eval_pair(double x) const { return {v(x), v_prime(x)}; }

    double default_window() const;  // 2000 / min frequency (1 for zero model)

  private:
    FieldSpec spec_;
    std::vector<double> phases_;
    std::vector<double> omegas_;  // 2 pi f_j
};

FieldRealization sample_field(const FieldSpec& spec);

/// Extrema of k = m v and s = m v' over [0, window], from a dense scan plus
/// golden-section refinement around the best samples. Approximate: the true
/// essential sup over the whole line can exceed the windowed value.
struct FieldBounds {
    double k_lo = 0, k_hi = 0;
    double s_lo = 0, s_hi = 0;
    double window = 0;

    double s_sup_abs() const { return std::max(-s_lo, s_hi); }
};

FieldBounds field_bounds(const FieldRealization& r, double m, double window,
                         int samples_per_unit = 512);

/// Fraction of [-window, window] where s = m v' lies below `threshold`,
/// by fine uniform sampling.
double level_fraction(const FieldRealization& r, double m, double threshold,
                      double window, long samples = 2'000'000);

/// tau = |inf s| and alpha = fraction of {s < -tau/2}, the ingredients of the
/// quenching threshold.
struct FieldStats {
    double tau = 0;
    double alpha = 0;
    double window = 0;
};

FieldStats field_stats(const FieldRealization& r, double m, const FieldBounds& bounds,
                       double window);

}  // namespace gstrain
