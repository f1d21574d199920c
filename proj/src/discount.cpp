#include "gstrain/discount.hpp"

#include <algorithm>
#include <cmath>

namespace gstrain {

DiscountProblem make_discount_problem(const StrainHamiltonian& h, double p, double delta,
                                      double dx, double domain_mult,
                                      std::optional<double> theta_override) {
    if (!(delta > 0)) throw std::invalid_argument("discount: delta must be positive");
    DiscountProblem prob;
    prob.delta = delta;
    prob.p = p;
    prob.dx = dx;
    prob.theta = theta_override.value_or(1.0 + h.c() * h.s_norm() / std::abs(h.m()));
    prob.domain = std::max(3.0, domain_mult) * prob.theta / delta;
    return prob;
}

DiscountSolution solve_discounted(const DiscountProblem& prob, const StrainHamiltonian& h) {
    if (!(prob.delta > 0) || !(prob.dx > 0))
        throw std::invalid_argument("discount: delta and dx must be positive");
    if (prob.domain < 3.0 * prob.theta / prob.delta)
        throw std::invalid_argument("discount: domain shorter than 3 theta / delta");

    const double delta = prob.delta, dx = prob.dx, theta = prob.theta, p = prob.p;
    const long n = std::max<long>(8, static_cast<long>(std::llround(2.0 * prob.domain / dx)));
    const long i0 = n / 2;  // grid index of x = 0
    const double x_left = -0.5 * dx * static_cast<double>(n);

    // Coefficients frozen per node; only u changes between sweeps.
    std::vector<double> kx(n + 1), sx(n + 1);
    for (long i = 0; i <= n; ++i) {
        const auto [k, s] = h.ks(x_left + dx * static_cast<double>(i));
        kx[i] = k;
        sx[i] = s;
    }
    const double m = h.m(), c = h.c();

    DiscountSolution sol;
    sol.dx = dx;
    sol.x0 = x_left;
    sol.u.resize(n + 1);
    for (long i = 0; i <= n; ++i) sol.u[i] = -hj::H(p, m, c, kx[i], sx[i]) / delta;

    const double tol = prob.tol_factor * std::max(1.0, std::abs(h.flat_level()));
    const double diag = delta + theta / dx;
    auto& u = sol.u;

    // u_i <- [theta (u_{i+1} + u_{i-1}) / (2 dx) - H(p + central grad)] / diag
    // is monotone in the neighbours whenever theta dominates |dH/dp|, so the
    // damped in-place sweep is a contraction toward the unique fixed point.
    const auto update = [&](long i) {
        const double grad = (u[i + 1] - u[i - 1]) / (2.0 * dx);
        const double g = (theta * (u[i + 1] + u[i - 1]) / (2.0 * dx) -
                          hj::H(p + grad, m, c, kx[i], sx[i])) / diag;
        const double r = (g - u[i]) * diag;  // equals minus the LF residual
        u[i] += prob.damping * (g - u[i]);
        return std::abs(r);
    };

    double res = 0;
    for (long sweep = 0; sweep < prob.max_sweeps; ++sweep) {
        res = 0;
        if (sweep % 2 == 0) {
            for (long i = 1; i < n; ++i) res = std::max(res, update(i));
        } else {
            for (long i = n - 1; i >= 1; --i) res = std::max(res, update(i));
        }
        sol.sweeps = sweep + 1;
        if (res < tol) {
            sol.residual = res;
            sol.estimate = -delta * u[i0];
            return sol;
        }
        if (!std::isfinite(res))
            throw DivergenceError("discount: iteration diverged (theta too small?)");
    }
    throw DivergenceError("discount: no convergence within sweep cap");
}

DiscountEstimates vanishing_discount_estimate(const StrainHamiltonian& h, double p,
                                              const std::vector<double>& deltas, double dx,
                                              double domain_mult,
                                              std::optional<double> theta_override) {
    if (deltas.empty()) throw std::invalid_argument("discount: empty delta list");
    for (std::size_t i = 1; i < deltas.size(); ++i)
        if (!(deltas[i] < deltas[i - 1]))
            throw std::invalid_argument("discount: delta list must decrease");
    DiscountEstimates out;
    for (double d : deltas) {
        const auto prob = make_discount_problem(h, p, d, dx, domain_mult, theta_override);
        out.per_delta.emplace_back(d, solve_discounted(prob, h).estimate);
    }
    const std::size_t k = out.per_delta.size();
    if (k >= 2) {
        const auto [d1, e1] = out.per_delta[k - 2];
        const auto [d2, e2] = out.per_delta[k - 1];
        out.extrapolated = e2 + (e2 - e1) * d2 / (d1 - d2);
    } else {
        out.extrapolated = out.per_delta.back().second;
    }
    return out;
}

}  // namespace gstrain
