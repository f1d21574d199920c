#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "gstrain/hamiltonian.hpp"

namespace gstrain {

struct FlatPieceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Spatial branch average together with a window-halving stability estimate
/// (|value over [0,L] - value over [0,L/2]|).
struct PAverage {
    double value = 0;
    double half_window_diff = 0;
};

/// (1/L) integral over [0,L] of the upper branch root of H(., x) = mu.
/// Requires mu strictly above the flat level |m| + sup k.
PAverage P_plus(const StrainHamiltonian& h, double mu, double L);
/// Lower-branch mirror; strictly decreasing in mu.
PAverage P_minus(const StrainHamiltonian& h, double mu, double L);

enum class BranchSide { Upper, Lower };

/// Invert the branch average: the level mu with P_side(mu) = p, found by
/// bracketed root refinement on the monotone map (|P(mu) - p| <= 1e-8).
/// Throws FlatPieceError when p falls inside the flat piece at the eps_gap
/// table edge.
double mu_branch(const StrainHamiltonian& h, double p, BranchSide side, double L,
                 double eps_gap = 1e-3);

/// Piecewise effective Hamiltonian at one slope: branch inverse off the flat
/// piece, |m| + sup k on it.
double effective_H(const StrainHamiltonian& h, double p, double L, double eps_gap = 1e-3);

struct EffectiveParams {
    double L = 0;             // averaging window (0: field default)
    double eps_gap = 1e-3;    // table starts at flat + eps_gap
    double mu_range = 5.0;    // table covers (flat, flat + mu_range]
    int table_points = 48;
    double refine_dp = 0.25;  // insert midpoints where a P step exceeds this
};

/// Assembled map p -> effective H: flat value, monotone branch tables, flat
/// endpoints from a 3-point geometric extrapolation of the table edge.
class EffectiveHamiltonian {
  public:
    static EffectiveHamiltonian build(const StrainHamiltonian& h, const EffectiveParams& prm);

    double flat_level() const { return flat_; }
    double p_bar_plus() const { return p_bar_plus_; }
    double p_bar_minus() const { return p_bar_minus_; }
    /// Branch-average values at the table edge mu = flat + eps_gap; slopes in
    /// (p_bar, edge) are classified as flat (error at most eps_gap in value).
    double edge_plus() const { return edge_plus_; }
    double edge_minus() const { return edge_minus_; }
    const std::vector<double>& mu_grid() const { return mu_; }
    const std::vector<double>& table_plus() const { return p_plus_; }
    const std::vector<double>& table_minus() const { return p_minus_; }

    double operator()(double p) const;

  private:
    EffectiveHamiltonian() = default;
    const StrainHamiltonian* h_ = nullptr;
    EffectiveParams prm_;
    double flat_ = 0, p_bar_plus_ = 0, p_bar_minus_ = 0, edge_plus_ = 0, edge_minus_ = 0;
    std::vector<double> mu_, p_plus_, p_minus_;
};

/// Sampled sub-linear corrector gamma with gamma' = q_plus(mu, .) - P on a
/// uniform grid of [0, L]; drift = sup over [L/2, L] of |gamma(x)| / x.
struct Corrector {
    double mu = 0;
    double P = 0;
    double dx = 0;
    std::vector<double> gamma;        // gamma[i] at x = i dx, gamma[0] = 0
    std::vector<double> gamma_prime;  // at the same nodes
    double drift = 0;
};

Corrector build_corrector(const StrainHamiltonian& h, double mu, double L, double dx);

/// Max over the corrector grid of |H(P + gamma'(x), x) - mu|.
double verify_cell(const StrainHamiltonian& h, double mu, double P, const Corrector& corr);

}  // namespace gstrain
