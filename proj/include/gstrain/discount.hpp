#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "gstrain/hamiltonian.hpp"

namespace gstrain {

struct DivergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Truncated discounted problem  delta u + H(p + u', x) = 0  on
/// [-domain, domain], Dirichlet data from the frozen-coefficient profile
/// -H(p, x)/delta. theta is the Lax-Friedrichs dissipation bound
/// (>= sup |dH/dp| = 1 + c ||s|| / |m|).
struct DiscountProblem {
    double delta = 0.1;
    double p = 0.0;
    double domain = 0.0;
    double dx = 0.004;
    double theta = 0.0;
    double damping = 0.5;
    long max_sweeps = 400000;
    double tol_factor = 1e-8;  // residual target: tol_factor * max(1, flat level)
};

/// Fill problem geometry from the Hamiltonian: theta from the analytic
/// gradient bound, domain = domain_mult * theta / delta (>= 3 theta/delta).
DiscountProblem make_discount_problem(const StrainHamiltonian& h, double p, double delta,
                                      double dx = 0.004, double domain_mult = 8.0,
                                      std::optional<double> theta_override = std::nullopt);

struct DiscountSolution {
    std::vector<double> u;
    double dx = 0;
    double x0 = 0;  // coordinate of u[0]
    long sweeps = 0;
    double residual = 0;
    double estimate = 0;  // -delta u(0)
};

/// Damped Gauss-Seidel iteration (alternating sweep direction) of the
/// monotone Lax-Friedrichs fixed point. Throws DivergenceError on hitting
/// the sweep cap.
DiscountSolution solve_discounted(const DiscountProblem& prob, const StrainHamiltonian& h);

struct DiscountEstimates {
    std::vector<std::pair<double, double>> per_delta;  // (delta, -delta u(0))
    double extrapolated = 0;  // Richardson limit from the two smallest deltas
};

DiscountEstimates vanishing_discount_estimate(const StrainHamiltonian& h, double p,
                                              const std::vector<double>& deltas,
                                              double dx = 0.004, double domain_mult = 8.0,
                                              std::optional<double> theta_override = std::nullopt);

}  // namespace gstrain
