#include "gstrain/effective.hpp"

#include <algorithm>
#include <cmath>

#include "gstrain/quadrature.hpp"

namespace gstrain {

namespace {

double panel_width(const StrainHamiltonian& h) {
    if (h.is_shear()) return 0.25 / h.field()->spec().max_frequency();
    return 0.25;
}

PAverage branch_average(const StrainHamiltonian& h, double mu, double L, bool upper) {
    if (!(L > 0)) throw std::invalid_argument("branch average: window must be positive");
    if (!(mu > h.flat_level()))
        throw NoRootError("branch average: level must exceed the flat value |m| + sup k");
    const double m = h.m(), c = h.c();
    auto q = [&](double x) {
        const auto [k, s] = h.ks(x);
        return upper ? hj::upper_root(m, c, k, s, mu) : hj::lower_root(m, c, k, s, mu);
    };
    const double w = panel_width(h);
    const double tol = 1e-9 * L;
    const double s1 = integrate(q, 0.0, 0.5 * L, w, 0.5 * tol);
    const double s2 = integrate(q, 0.5 * L, L, w, 0.5 * tol);
    PAverage out;
    out.value = (s1 + s2) / L;
    out.half_window_diff = std::abs(out.value - s1 / (0.5 * L));
    return out;
}

// Bracketed Illinois (false position with stale-side halving) refinement of
// P_side(mu) = p on [mu_lo, mu_hi]. The bracket never widens, so table
// monotonicity is preserved; interpolation only speeds up the bisection.
double invert_branch(const StrainHamiltonian& h, double p, bool upper, double L,
                     double mu_lo, double f_lo, double mu_hi, double f_hi) {
    auto f = [&](double mu) {
        return (upper ? P_plus(h, mu, L).value : P_minus(h, mu, L).value) - p;
    };
    double a = mu_lo, fa = f_lo, b = mu_hi, fb = f_hi;
    double best = 0.5 * (a + b);
    for (int it = 0; it < 200; ++it) {
        double mid;
        if (fb != fa) {
            mid = (a * fb - b * fa) / (fb - fa);
            const double margin = 1e-3 * (b - a);
            if (!(mid > a + margin) || !(mid < b - margin)) mid = 0.5 * (a + b);
        } else {
            mid = 0.5 * (a + b);
        }
        const double fm = f(mid);
        best = mid;
        if (std::abs(fm) < 1e-8) return mid;
        if ((fm > 0) == (fa > 0)) {
            a = mid; fa = fm;
            fb *= 0.5;
        } else {
            b = mid; fb = fm;
            fa *= 0.5;
        }
        if (std::abs(b - a) < 1e-14 * std::max(1.0, std::abs(b))) return best;
    }
    return best;
}

// 3-point geometric extrapolation of the table edge toward mu = flat: fit
// P(flat + g) = p_bar + C g^beta through gaps (g, 2g, 4g). Exact for the
// sqrt edge of constant fields, and a small upper-bound correction for the
// generic g log g edge.
double extrapolate_edge(double p1, double p2, double p4, bool upper) {
    const double d1 = p2 - p1, d2 = p4 - p2;
    double p_bar = p1;
    if ((upper && d1 > 0 && d2 > 0) || (!upper && d1 < 0 && d2 < 0)) {
        const double ratio = d2 / d1;  // = 2^beta
        if (ratio > 1.0 + 1e-9) p_bar = p1 - d1 / (ratio - 1.0);
    }
    // The flat endpoint can never exceed the nearest table value.
    return upper ? std::min(p_bar, p1) : std::max(p_bar, p1);
}

}  // namespace

PAverage P_plus(const StrainHamiltonian& h, double mu, double L) {
    return branch_average(h, mu, L, true);
}

PAverage P_minus(const StrainHamiltonian& h, double mu, double L) {
    return branch_average(h, mu, L, false);
}

double mu_branch(const StrainHamiltonian& h, double p, BranchSide side, double L,
                 double eps_gap) {
    const bool upper = side == BranchSide::Upper;
    const double flat = h.flat_level();
    double mu_lo = flat + eps_gap;
    const double edge = upper ? P_plus(h, mu_lo, L).value : P_minus(h, mu_lo, L).value;
    if (upper ? (p <= edge) : (p >= edge))
        throw FlatPieceError("mu_branch: slope lies inside the flat piece");
    double f_lo = edge - p;
    // March the upper bracket outward until the branch average passes p.
    double gap = std::max(1.0, 2.0 * eps_gap);
    double mu_hi = flat + gap, f_hi = 0;
    bool bracketed = false;
    for (int it = 0; it < 70; ++it) {
        f_hi = (upper ? P_plus(h, mu_hi, L).value : P_minus(h, mu_hi, L).value) - p;
        if ((upper && f_hi >= 0) || (!upper && f_hi <= 0)) { bracketed = true; break; }
        mu_lo = mu_hi; f_lo = f_hi;
        gap *= 2.0;
        mu_hi = flat + gap;
    }
    if (!bracketed) throw std::runtime_error("mu_branch: failed to bracket the level");
    return invert_branch(h, p, upper, L, mu_lo, f_lo, mu_hi, f_hi);
}

double effective_H(const StrainHamiltonian& h, double p, double L, double eps_gap) {
    const double flat = h.flat_level();
    const double mu_edge = flat + eps_gap;
    const double e_plus = P_plus(h, mu_edge, L).value;
    if (p > e_plus) return mu_branch(h, p, BranchSide::Upper, L, eps_gap);
    const double e_minus = P_minus(h, mu_edge, L).value;
    if (p < e_minus) return mu_branch(h, p, BranchSide::Lower, L, eps_gap);
    return flat;
}

EffectiveHamiltonian EffectiveHamiltonian::build(const StrainHamiltonian& h,
                                                 const EffectiveParams& prm_in) {
    EffectiveHamiltonian eff;
    eff.prm_ = prm_in;
    if (eff.prm_.L <= 0 && h.is_shear()) eff.prm_.L = h.field()->default_window();
    if (eff.prm_.L <= 0) throw std::invalid_argument("EffectiveHamiltonian: window not set");
    eff.h_ = &h;
    eff.flat_ = h.flat_level();

    const double g0 = eff.prm_.eps_gap;
    const int n = std::max(8, eff.prm_.table_points);
    const double ratio = std::pow(eff.prm_.mu_range / g0, 1.0 / (n - 1));
    std::vector<double> mu(n);
    for (int i = 0; i < n; ++i) mu[i] = eff.flat_ + g0 * std::pow(ratio, i);
    // Make sure the 3-point extrapolation stencil (g0, 2 g0, 4 g0) exists.
    mu.push_back(eff.flat_ + 2.0 * g0);
    mu.push_back(eff.flat_ + 4.0 * g0);
    std::sort(mu.begin(), mu.end());
    mu.erase(std::unique(mu.begin(), mu.end()), mu.end());

    auto fill = [&](const std::vector<double>& grid, std::vector<double>& plus,
                    std::vector<double>& minus) {
        plus.resize(grid.size());
        minus.resize(grid.size());
        parallel_for(grid.size(), [&](std::size_t i) {
            plus[i] = P_plus(h, grid[i], eff.prm_.L).value;
            minus[i] = P_minus(h, grid[i], eff.prm_.L).value;
        });
    };
    std::vector<double> pp, pm;
    fill(mu, pp, pm);

    // Refine where a table step moves P too far (steep branch inverse).
    for (int pass = 0; pass < 2; ++pass) {
        std::vector<double> extra;
        for (std::size_t i = 0; i + 1 < mu.size(); ++i) {
            if (std::abs(pp[i + 1] - pp[i]) > eff.prm_.refine_dp ||
                std::abs(pm[i + 1] - pm[i]) > eff.prm_.refine_dp) {
                const double gl = mu[i] - eff.flat_, gr = mu[i + 1] - eff.flat_;
                extra.push_back(eff.flat_ + std::sqrt(gl * gr));
            }
        }
        if (extra.empty()) break;
        std::vector<double> ep, em;
        fill(extra, ep, em);
        mu.insert(mu.end(), extra.begin(), extra.end());
        pp.insert(pp.end(), ep.begin(), ep.end());
        pm.insert(pm.end(), em.begin(), em.end());
        std::vector<std::size_t> order(mu.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return mu[a] < mu[b]; });
        std::vector<double> mu2, pp2, pm2;
        for (std::size_t idx : order) {
            mu2.push_back(mu[idx]);
            pp2.push_back(pp[idx]);
            pm2.push_back(pm[idx]);
        }
        mu.swap(mu2); pp.swap(pp2); pm.swap(pm2);
    }

    eff.mu_ = std::move(mu);
    eff.p_plus_ = std::move(pp);
    eff.p_minus_ = std::move(pm);
    eff.edge_plus_ = eff.p_plus_.front();
    eff.edge_minus_ = eff.p_minus_.front();

    // Flat endpoints: stencil values at gaps g0, 2 g0, 4 g0.
    auto at_gap = [&](double g, const std::vector<double>& tb) {
        const double target = eff.flat_ + g;
        for (std::size_t i = 0; i < eff.mu_.size(); ++i)
            if (std::abs(eff.mu_[i] - target) < 1e-12 * std::max(1.0, target)) return tb[i];
        return tb.front();
    };
    eff.p_bar_plus_ = extrapolate_edge(at_gap(g0, eff.p_plus_), at_gap(2 * g0, eff.p_plus_),
                                       at_gap(4 * g0, eff.p_plus_), true);
    eff.p_bar_minus_ = extrapolate_edge(at_gap(g0, eff.p_minus_), at_gap(2 * g0, eff.p_minus_),
                                        at_gap(4 * g0, eff.p_minus_), false);
    return eff;
}

double EffectiveHamiltonian::operator()(double p) const {
    if (p > edge_plus_) return mu_branch(*h_, p, BranchSide::Upper, prm_.L, prm_.eps_gap);
    if (p < edge_minus_) return mu_branch(*h_, p, BranchSide::Lower, prm_.L, prm_.eps_gap);
    return flat_;
}

Corrector build_corrector(const StrainHamiltonian& h, double mu, double L, double dx) {
    if (!(mu > h.flat_level()))
        throw NoRootError("build_corrector: level must exceed the flat value");
    Corrector corr;
    corr.mu = mu;
    corr.P = P_plus(h, mu, L).value;
    const long n = std::max<long>(8, static_cast<long>(std::llround(L / dx)));
    corr.dx = L / static_cast<double>(n);
    const double m = h.m(), c = h.c();
    auto q = [&](double x) {
        const auto [k, s] = h.ks(x);
        return hj::upper_root(m, c, k, s, mu);
    };
    // One Simpson pass; midpoints evaluated on the fly.
    corr.gamma.resize(n + 1);
    corr.gamma_prime.resize(n + 1);
    corr.gamma[0] = 0.0;
    corr.gamma_prime[0] = q(0.0) - corr.P;
    double left = corr.gamma_prime[0];
    for (long i = 0; i < n; ++i) {
        const double xm = (static_cast<double>(i) + 0.5) * corr.dx;
        const double xr = static_cast<double>(i + 1) * corr.dx;
        const double qm = q(xm) - corr.P;
        const double qr = q(xr) - corr.P;
        corr.gamma[i + 1] = corr.gamma[i] + corr.dx / 6.0 * (left + 4.0 * qm + qr);
        corr.gamma_prime[i + 1] = qr;
        left = qr;
    }
    corr.drift = 0.0;
    for (long i = (n + 1) / 2; i <= n; ++i) {
        const double x = static_cast<double>(i) * corr.dx;
        if (x > 0) corr.drift = std::max(corr.drift, std::abs(corr.gamma[i]) / x);
    }
    return corr;
}

double verify_cell(const StrainHamiltonian& h, double mu, double P, const Corrector& corr) {
    double worst = 0.0;
    for (std::size_t i = 0; i < corr.gamma_prime.size(); ++i) {
        const double x = static_cast<double>(i) * corr.dx;
        worst = std::max(worst, std::abs(h.eval(P + corr.gamma_prime[i], x) - mu));
    }
    return worst;
}

}  // namespace gstrain
