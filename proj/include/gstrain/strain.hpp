#pragma once

#include <memory>
#include <stdexcept>
#include <vector>

#include "gstrain/effective.hpp"
#include "gstrain/field.hpp"
#include "gstrain/hamiltonian.hpp"

namespace gstrain {

struct HypothesisNotMetError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InsufficientWindowError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// One shear configuration: realization, unit direction (m, n), averaging
/// window, and the scanned field bounds/stats every check shares.
struct ShearProblem {
    std::shared_ptr<const FieldRealization> field;
    double m = 0, n = 0;
    double window = 0;
    double eps_gap = 1e-3;
    FieldBounds bounds;
    FieldStats stats;

    ShearProblem(std::shared_ptr<const FieldRealization> f, double m_, double n_,
                 double window_ = 0, double eps_gap_ = 1e-3);

    StrainHamiltonian hamiltonian(double c) const;
    double flat_level() const { return std::abs(m) + bounds.k_hi; }
    double s_norm() const { return bounds.s_sup_abs(); }
};

struct StrainPoint {
    double c = 0;
    double h = 0;
    bool flat = false;  // slope n sits on the flat piece at this c
};

/// h(c) at one Markstein number: branch inverse of the averaged roots at
/// slope n, or the flat value when n falls inside [edge-, edge+].
StrainPoint strain_point(const ShearProblem& prob, double c);

struct StrainCurve {
    double m = 0, n = 0;
    double flat_level = 0;
    double s_norm = 0;
    std::vector<StrainPoint> points;
};

StrainCurve strain_curve(const ShearProblem& prob, const std::vector<double>& c_values);

/// Max over adjacent pairs of |dh| / (||s|| dc); at most 1 up to averaging
/// noise.
double lipschitz_ratio(const StrainCurve& curve);

/// Explicit quench bound  (2 / (tau m^2)) [ (2n/alpha)^3 + m^2 (2n/alpha) ].
/// Throws HypothesisNotMetError when tau = 0 (constant strain profile).
double quench_threshold(const FieldStats& stats, double m, double n);

struct QuenchVerdict {
    double c = 0;
    double h = 0;
    double flat_level = 0;
    bool pass = false;
};

/// Assert h(c) equals the flat value within tol for c above the threshold.
QuenchVerdict quench_check(const ShearProblem& prob, double c, double tol = 1e-3);

/// The quenching construction: intervals of A = {s < -tau/2} on [0, window],
/// a smooth plateau bump psi per interval with exact mean and sup bounds,
/// phi' = psi - n, and the max of H(n + phi', x, c) over the window.
struct QuenchWitness {
    std::vector<std::pair<double, double>> intervals;  // kept intervals of A
    double tau = 0;
    double alpha_stat = 0;   // scan estimate used by the threshold formula
    double alpha_used = 0;   // kept-interval fraction on this window
    double c = 0, c_bar = 0;
    double psi_bound = 0;    // 2 n / alpha_stat
    double plateau = 0;      // per-interval plateau height
    double interval_mean_target = 0;  // n / alpha_used
    double interval_mean_err = 0;     // worst per-interval mean deviation
    double max_H = 0;        // max_x H(n + phi', x, c)
    double phi_drift = 0;    // |phi(window)| / window from the sampled psi
    double dx = 0;
    std::vector<double> psi;  // samples at x = i dx
    bool pass = false;       // max_H <= flat level + tolerance
};

QuenchWitness build_quench_witness(const ShearProblem& prob, double c, double window,
                                   double dx = 1e-3, double tol = 1e-6);

struct Claim1Result {
    double c = 0;
    double mu = 0;  // h(c)
    double min_t_plus_cs = 0;      // min over the window of (n + u') + c s
    double min_fp_plus_csfpp = 0;  // min of f' + c s f'' at t = n + u'
};

/// Positivity quantities from the strict-decrease proof, evaluated on the
/// cell-problem gradient n + u' = branch root at level h(c). Requires
/// h(c) above the flat value.
Claim1Result claim1_check(const ShearProblem& prob, double c, int samples_per_unit = 1024);

struct IdentityResult {
    double c = 0, dc = 0;
    double h_prime = 0;          // central difference of h
    double max_residual = 0;     // pointwise defect of the differentiated identity
    double mean_inv_fp = 0;      // spatial mean of 1 / (f' + c s f'')   (> 0)
    double mean_s_over = 0;      // spatial mean of s / (1 + a s)        (< 0)
    double mean_dc_uprime = 0;   // spatial mean of d(u')/dc             (~ 0)
};

IdentityResult differentiated_identity_check(const ShearProblem& prob, double c,
                                             double dc = 1e-3, int samples_per_unit = 512);

struct TheoremReport {
    double flat_level = 0;
    double velocity_bound = 0;  // |m| + sup m v
    StrainCurve curve;
    bool sandwich_ok = false;        // bound <= h(c) <= h(0) everywhere
    bool strict_reduction_ok = false;  // h(c) < h(0) at admissible c > 0
    double worst_sandwich_defect = 0;
    double min_strict_gap = 0;
    bool analytic_edge = false;  // m = 0 or n = 0 handled in closed form
};

TheoremReport main_theorem_check(const ShearProblem& prob, const std::vector<double>& c_values,
                                 double tol = 2e-3);

}  // namespace gstrain
