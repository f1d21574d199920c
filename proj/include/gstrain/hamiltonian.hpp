#pragma once

#include <functional>
#include <memory>
#include <span>
#include <stdexcept>
#include <utility>

#include "gstrain/field.hpp"

namespace gstrain {

struct NoRootError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InconsistentBoundsError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Scalar kernels for H(p) = sqrt(m^2+p^2) + c s p / sqrt(m^2+p^2) + k at a
/// frozen coefficient pair (k, s). Everything downstream (branch averages,
/// discount solver, front scheme) reduces to these.
namespace hj {

double H(double p, double m, double c, double k, double s);
double dHdp(double p, double m, double c, double s);

/// Unique real root of p^3 + m^2 p + c s m^2 = 0 (the derivative's numerator;
/// strictly increasing cubic), via safeguarded Newton on an analytic bracket.
double p_star(double m, double c, double s);

/// Root of H(p) = mu on the increasing branch p > p_star. Requires
/// mu > H(p_star); relative residual <= 1e-12.
double upper_root(double m, double c, double k, double s, double mu);

/// Root on the decreasing branch p < p_star, by the sign symmetry
/// H(-p; s) = H(p; -s).
double lower_root(double m, double c, double k, double s, double mu);

}  // namespace hj

struct CriticalPoint {
    double p_star;
    double h_min;
};

struct BranchRoots {
    double q_minus;
    double q_plus;
    double mu;
    double x;
};

/// The 1-d strain Hamiltonian bound to one realization and parameters (m, c).
/// Shear mode takes k = m v, s = m v'; general mode takes explicit (k, s)
/// evaluators. Pure and immutable: safe to share across workers.
class StrainHamiltonian {
  public:
    StrainHamiltonian(std::shared_ptr<const FieldRealization> field, double m, double c,
                      FieldBounds bounds);
    StrainHamiltonian(std::function<double(double)> k, std::function<double(double)> s,
                      double m, double c, FieldBounds bounds);

    double m() const { return m_; }
    double c() const { return c_; }
    const FieldBounds& bounds() const { return bounds_; }
    double flat_level() const;               // |m| + sup k
    double s_norm() const { return bounds_.s_sup_abs(); }
    bool is_shear() const { return field_ != nullptr; }
    const std::shared_ptr<const FieldRealization>& field() const { return field_; }

    std::pair<double, double> ks(double x) const;

    double eval(double p, double x) const;
    double deriv_p(double p, double x) const;
    CriticalPoint critical_point(double x) const;

    /// Both roots of H(., x) = mu. Throws NoRootError if mu <= H_min(x).
    BranchRoots branch_roots(double x, double mu) const;

    /// Roots of H(., x) = flat_level(), bracketing the sublevel set; the
    /// degenerate touch H_min(x) = flat_level() collapses both to p_star.
    /// Throws InconsistentBoundsError if H_min(x) exceeds the flat level
    /// (the cached sup of k was an underestimate).
    std::pair<double, double> p_plus_minus(double x) const;

    StrainHamiltonian with_c(double c2) const;

  private:
    std::shared_ptr<const FieldRealization> field_;  // shear mode
    std::function<double(double)> k_fn_, s_fn_;      // general mode
    double m_;
    double c_;
    FieldBounds bounds_;
};

/// Check that s vanishes at strict local maxima of k (detected by a sign
/// change of the scanned slope). Returns the worst |s| seen at a maximum.
double max_s_at_k_maxima(const StrainHamiltonian& h, double window, int samples_per_unit = 512);

struct QuasiconvexReport {
    bool pass = true;
    // Witness triple (indices into the sample list) when pass is false.
    std::size_t i = 0, j = 0, k = 0;
    double value_i = 0, value_j = 0, value_k = 0;
};

/// Scan sorted (p, value) samples for a midpoint rising above both sides by
/// more than tol. Requires at least 3 samples sorted by p.
QuasiconvexReport check_quasiconvex(std::span<const std::pair<double, double>> samples,
                                    double tol = 1e-12);

}  // namespace gstrain
