#include "gstrain/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace gstrain {

namespace hj {

double H(double p, double m, double c, double k, double s) {
    const double r = std::sqrt(m * m + p * p);
    return r + c * s * p / r + k;
}

double dHdp(double p, double m, double c, double s) {
    const double m2 = m * m;
    const double r2 = m2 + p * p;
    return (p * (r2) + c * s * m2) / (r2 * std::sqrt(r2));
}

double p_star(double m, double c, double s) {
    const double m2 = m * m;
    const double q = c * s * m2;  // cubic: g(p) = p^3 + m2 p + q
    if (q == 0.0) return 0.0;
    // g is strictly increasing, g(0) = q, and the root lies between
    // -sign(q) * min(|q|/m2, |q|^(1/3)) ... 0 widened a touch for safety.
    const double scale = std::min(std::abs(q) / m2, std::cbrt(std::abs(q)));
    double lo, hi;
    if (q > 0) { lo = -scale * 1.0000001 - 1e-300; hi = 0.0; }
    else       { lo = 0.0; hi = scale * 1.0000001 + 1e-300; }
    auto g = [&](double p) { return (p * p + m2) * p + q; };
    // Safeguarded Newton: keep iterates inside [lo, hi], bisect on escape.
    double p = -q / m2;  // linear-term guess, exact for small |q|
    if (p < lo || p > hi) p = 0.5 * (lo + hi);
    for (int it = 0; it < 100; ++it) {
        const double gp = g(p);
        if (gp > 0) hi = p; else lo = p;
        const double dp = gp / (3.0 * p * p + m2);
        double next = p - dp;
        if (!(next > lo) || !(next < hi)) next = 0.5 * (lo + hi);
        if (std::abs(next - p) <= 1e-16 * (1.0 + std::abs(p))) return next;
        p = next;
    }
    return p;
}

namespace {

double branch_root_newton(double m, double c, double k, double s, double mu,
                          double lo, double hi) {
    // H is strictly increasing on [lo, hi] with H(lo) < mu <= H(hi).
    auto f = [&](double p) { return H(p, m, c, k, s) - mu; };
    const double tol = 1e-12 * std::max(1.0, std::abs(mu));
    double p = hi;
    for (int it = 0; it < 200; ++it) {
        const double fp = f(p);
        if (std::abs(fp) <= tol) return p;
        if (fp > 0) hi = p; else lo = p;
        const double d = dHdp(p, m, c, s);
        double next = (d > 0) ? p - fp / d : 0.5 * (lo + hi);
        if (!(next > lo) || !(next < hi)) next = 0.5 * (lo + hi);
        if (next == p) return p;
        p = next;
    }
    return p;
}

}  // namespace

double upper_root(double m, double c, double k, double s, double mu) {
    const double ps = p_star(m, c, s);
    const double hmin = H(ps, m, c, k, s);
    if (!(mu > hmin))
        throw NoRootError("upper_root: level does not exceed the local minimum of H");
    // Coercivity bracket: H(p) >= sqrt(m^2+p^2) - c|s| + k.
    const double reach = std::max(std::abs(m), mu - k + c * std::abs(s)) + 1.0;
    double hi = std::sqrt(std::max(0.0, reach * reach - m * m)) + 1.0;
    while (H(hi, m, c, k, s) < mu) hi *= 2.0;  // safeguard, normally never taken
    return branch_root_newton(m, c, k, s, mu, ps, hi);
}

double lower_root(double m, double c, double k, double s, double mu) {
    return -upper_root(m, c, k, -s, mu);
}

}  // namespace hj

StrainHamiltonian::StrainHamiltonian(std::shared_ptr<const FieldRealization> field, double m,
                                     double c, FieldBounds bounds)
    : field_(std::move(field)), m_(m), c_(c), bounds_(bounds) {
    if (m_ == 0.0) throw std::invalid_argument("StrainHamiltonian: m must be nonzero");
    if (c_ < 0.0) throw std::invalid_argument("StrainHamiltonian: c must be >= 0");
}

StrainHamiltonian::StrainHamiltonian(std::function<double(double)> k,
                                     std::function<double(double)> s, double m, double c,
                                     FieldBounds bounds)
    : k_fn_(std::move(k)), s_fn_(std::move(s)), m_(m), c_(c), bounds_(bounds) {
    if (m_ == 0.0) throw std::invalid_argument("StrainHamiltonian: m must be nonzero");
    if (c_ < 0.0) throw std::invalid_argument("StrainHamiltonian: c must be >= 0");
}

double StrainHamiltonian::flat_level() const { return std::abs(m_) + bounds_.k_hi; }

std::pair<double, double> StrainHamiltonian::ks(double x) const {
    if (field_) return {m_ * field_->v(x), m_ * field_->v_prime(x)};
    return {k_fn_(x), s_fn_(x)};
}

double StrainHamiltonian::eval(double p, double x) const {
    const auto [k, s] = ks(x);
    return hj::H(p, m_, c_, k, s);
}

double StrainHamiltonian::deriv_p(double p, double x) const {
    const auto [k, s] = ks(x);
    (void)k;
    return hj::dHdp(p, m_, c_, s);
}

CriticalPoint StrainHamiltonian::critical_point(double x) const {
    const auto [k, s] = ks(x);
    const double ps = hj::p_star(m_, c_, s);
    return {ps, hj::H(ps, m_, c_, k, s)};
}

BranchRoots StrainHamiltonian::branch_roots(double x, double mu) const {
    const auto [k, s] = ks(x);
    BranchRoots out;
    out.mu = mu;
    out.x = x;
    out.q_plus = hj::upper_root(m_, c_, k, s, mu);
    out.q_minus = hj::lower_root(m_, c_, k, s, mu);
    return out;
}

std::pair<double, double> StrainHamiltonian::p_plus_minus(double x) const {
    const auto [k, s] = ks(x);
    const double level = flat_level();
    const double ps = hj::p_star(m_, c_, s);
    const double hmin = hj::H(ps, m_, c_, k, s);
    const double touch_tol = 1e-9 * std::max(1.0, std::abs(level));
    if (hmin > level + touch_tol)
        throw InconsistentBoundsError(
            "p_plus_minus: H_min above the flat level (sup k underestimated)");
    if (hmin >= level - touch_tol) return {ps, ps};  // degenerate touch
    return {hj::lower_root(m_, c_, k, s, level), hj::upper_root(m_, c_, k, s, level)};
}

StrainHamiltonian StrainHamiltonian::with_c(double c2) const {
    if (field_) return StrainHamiltonian(field_, m_, c2, bounds_);
    return StrainHamiltonian(k_fn_, s_fn_, m_, c2, bounds_);
}

double max_s_at_k_maxima(const StrainHamiltonian& h, double window, int samples_per_unit) {
    const long n = std::max<long>(256, static_cast<long>(window * samples_per_unit));
    const double dx = window / static_cast<double>(n);
    double worst = 0.0;
    double k_prev = h.ks(0.0).first;
    double k_cur = h.ks(dx).first;
    for (long i = 2; i <= n; ++i) {
        const double x = dx * static_cast<double>(i);
        const double k_next = h.ks(x).first;
        if (k_cur > k_prev && k_cur > k_next) {  // strict local max near x - dx
            const double s_here = h.ks(x - dx).second;
            worst = std::max(worst, std::abs(s_here));
        }
        k_prev = k_cur;
        k_cur = k_next;
    }
    return worst;
}

QuasiconvexReport check_quasiconvex(std::span<const std::pair<double, double>> samples,
                                    double tol) {
    QuasiconvexReport rep;
    const std::size_t n = samples.size();
    if (n < 3) throw std::invalid_argument("check_quasiconvex: need at least 3 samples");
    // Prefix/suffix minima; a witness at j exists iff value(j) exceeds both.
    std::vector<std::size_t> pre(n), suf(n);
    pre[0] = 0;
    for (std::size_t i = 1; i < n; ++i)
        pre[i] = samples[i].second < samples[pre[i - 1]].second ? i : pre[i - 1];
    suf[n - 1] = n - 1;
    for (std::size_t i = n - 1; i-- > 0;)
        suf[i] = samples[i].second < samples[suf[i + 1]].second ? i : suf[i + 1];
    for (std::size_t j = 1; j + 1 < n; ++j) {
        const std::size_t i = pre[j - 1], k = suf[j + 1];
        const double cap = std::max(samples[i].second, samples[k].second);
        if (samples[j].second > cap + tol) {
            rep.pass = false;
            rep.i = i;
            rep.j = j;
            rep.k = k;
            rep.value_i = samples[i].second;
            rep.value_j = samples[j].second;
            rep.value_k = samples[k].second;
            return rep;
        }
    }
    return rep;
}

}  // namespace gstrain
