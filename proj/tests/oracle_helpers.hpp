#pragma once

// Test-only oracles, independent of the library's quadrature and root
// finding: closed-form integrands + periodic trapezoid sums (spectrally
// accurate for analytic periodic integrands) and a plain bisection solver.

#include <cmath>
#include <functional>

namespace oracle {

// (1/T) integral over one period of an analytic periodic function.
inline double periodic_average(const std::function<double(double)>& f, double period,
                               long n = 1 << 16) {
    double s = 0;
    for (long i = 0; i < n; ++i) s += f(period * (static_cast<double>(i) + 0.5) / n);
    return s / static_cast<double>(n);
}

// Upper branch root of sqrt(m^2 + p^2) + k = mu in closed form (c = 0).
inline double upper_root_c0(double mu, double k, double m) {
    const double r = mu - k;
    return std::sqrt(std::max(0.0, r * r - m * m));
}

inline double bisect(const std::function<double(double)>& f, double lo, double hi,
                     int iters = 200) {
    double flo = f(lo);
    for (int i = 0; i < iters; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if ((fm > 0) == (flo > 0)) { lo = mid; flo = fm; }
        else hi = mid;
    }
    return 0.5 * (lo + hi);
}

// Piecewise level-set-convex profile whose small quadratic perturbation
// breaks midpoint quasiconvexity; used as the checker's negative fixture.
inline double kinked_profile(double p) {
    if (p <= 0.0) return -p;
    if (p <= 1.0) return 0.0;
    if (p <= 2.0) return -p + 1.0;
    return p - 3.0;
}

inline double perturbed_kinked_profile(double p, double eps) {
    return eps * p * p + kinked_profile(p);
}

}  // namespace oracle
