#include "gstrain/strain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gstrain/quadrature.hpp"

namespace gstrain {

namespace {

double smoothstep(double t) {
    t = std::clamp(t, 0.0, 1.0);
    return t * t * (3.0 - 2.0 * t);
}

// Plateau bump on (l, r): smoothstep ramps over 10% of the interval at each
// end, height chosen so the interval mean is exactly `mean` (each ramp
// integrates to half its width).
struct Bump {
    double l, r, w, height;
    double operator()(double x) const {
        if (x <= l || x >= r) return 0.0;
        return height * smoothstep((x - l) / w) * smoothstep((r - x) / w);
    }
};

Bump make_bump(double l, double r, double mean) {
    const double w = 0.1 * (r - l);
    return Bump{l, r, w, mean / 0.9};
}

}  // namespace

ShearProblem::ShearProblem(std::shared_ptr<const FieldRealization> f, double m_, double n_,
                           double window_, double eps_gap_)
    : field(std::move(f)), m(m_), n(n_), eps_gap(eps_gap_) {
    if (!field) throw std::invalid_argument("ShearProblem: null field");
    window = window_ > 0 ? window_ : field->default_window();
    bounds = field_bounds(*field, m, window);
    stats = field_stats(*field, m, bounds, window);
}

StrainHamiltonian ShearProblem::hamiltonian(double c) const {
    return StrainHamiltonian(field, m, c, bounds);
}

StrainPoint strain_point(const ShearProblem& prob, double c) {
    StrainPoint pt;
    pt.c = c;
    const StrainHamiltonian h = prob.hamiltonian(c);
    const double flat = h.flat_level();
    const double mu_edge = flat + prob.eps_gap;
    const double e_plus = P_plus(h, mu_edge, prob.window).value;
    if (prob.n > e_plus) {
        pt.h = mu_branch(h, prob.n, BranchSide::Upper, prob.window, prob.eps_gap);
        return pt;
    }
    const double e_minus = P_minus(h, mu_edge, prob.window).value;
    if (prob.n < e_minus) {
        pt.h = mu_branch(h, prob.n, BranchSide::Lower, prob.window, prob.eps_gap);
        return pt;
    }
    pt.h = flat;
    pt.flat = true;
    return pt;
}

StrainCurve strain_curve(const ShearProblem& prob, const std::vector<double>& c_values) {
    if (prob.m == 0.0 || prob.n == 0.0)
        throw std::invalid_argument("strain_curve: needs m n != 0");
    if (!std::is_sorted(c_values.begin(), c_values.end()) ||
        (!c_values.empty() && c_values.front() < 0))
        throw std::invalid_argument("strain_curve: c grid must be sorted and nonnegative");
    StrainCurve curve;
    curve.m = prob.m;
    curve.n = prob.n;
    curve.flat_level = prob.flat_level();
    curve.s_norm = prob.s_norm();
    curve.points.reserve(c_values.size());
    for (double c : c_values) curve.points.push_back(strain_point(prob, c));
    return curve;
}

double lipschitz_ratio(const StrainCurve& curve) {
    if (curve.points.size() < 2)
        throw std::invalid_argument("lipschitz_ratio: need at least 2 points");
    if (curve.s_norm == 0.0) return 0.0;
    double worst = 0.0;
    for (std::size_t i = 1; i < curve.points.size(); ++i) {
        const double dc = curve.points[i].c - curve.points[i - 1].c;
        if (dc <= 0) continue;
        const double dh = std::abs(curve.points[i].h - curve.points[i - 1].h);
        worst = std::max(worst, dh / (curve.s_norm * dc));
    }
    return worst;
}

double quench_threshold(const FieldStats& stats, double m, double n) {
    if (!(stats.tau > 0))
        throw HypothesisNotMetError("quench_threshold: tau = 0 (constant strain profile)");
    if (!(stats.alpha > 0) || !(stats.alpha < 1))
        throw HypothesisNotMetError("quench_threshold: alpha outside (0,1)");
    if (m == 0.0) throw std::invalid_argument("quench_threshold: m must be nonzero");
    const double b = 2.0 * std::abs(n) / stats.alpha;
    return 2.0 / (stats.tau * m * m) * (b * b * b + m * m * b);
}

QuenchVerdict quench_check(const ShearProblem& prob, double c, double tol) {
    QuenchVerdict v;
    v.c = c;
    v.flat_level = prob.flat_level();
    v.h = strain_point(prob, c).h;
    v.pass = std::abs(v.h - v.flat_level) <= tol;
    return v;
}

QuenchWitness build_quench_witness(const ShearProblem& prob, double c, double window,
                                   double dx, double tol) {
    if (!(window > 0)) throw std::invalid_argument("quench witness: window must be positive");
    // n < 0 maps onto the mirrored problem (n, s) -> (-n, -s); the witness
    // bound is invariant under the flip.
    const double n_eff = std::abs(prob.n);
    const double s_sign = prob.n >= 0 ? 1.0 : -1.0;
    const double m = prob.m;
    auto s_at = [&](double x) { return s_sign * m * prob.field->v_prime(x); };
    auto k_at = [&](double x) { return m * prob.field->v(x); };

    QuenchWitness wit;
    wit.c = c;
    wit.tau = prob.stats.tau;
    wit.alpha_stat = prob.stats.alpha;
    wit.c_bar = quench_threshold(prob.stats, m, n_eff);
    wit.dx = dx;
    if (!(c > wit.c_bar))
        throw HypothesisNotMetError("quench witness: c must exceed the threshold");

    // Intervals of A = {s < -tau/2} on [0, window], crossings refined by
    // bisection on s + tau/2.
    const double thr = -0.5 * wit.tau;
    const double scan_dx =
        0.02 / std::max(1.0, prob.field->spec().max_frequency());
    auto below = [&](double x) { return s_at(x) < thr; };
    auto refine_crossing = [&](double a, double b) {
        for (int it = 0; it < 60; ++it) {
            const double mid = 0.5 * (a + b);
            if (below(mid) == below(a)) a = mid; else b = mid;
        }
        return 0.5 * (a + b);
    };
    std::vector<std::pair<double, double>> raw;
    bool in = below(0.0);
    double start = 0.0;
    double x_prev = 0.0;
    for (double x = scan_dx; x <= window + 0.5 * scan_dx; x += scan_dx) {
        const double xc = std::min(x, window);
        if (below(xc) != in) {
            const double cross = refine_crossing(x_prev, xc);
            if (in) raw.emplace_back(start, cross);
            else start = cross;
            in = !in;
        }
        x_prev = xc;
    }
    if (in) raw.emplace_back(start, window);
    if (raw.empty())
        throw InsufficientWindowError("quench witness: window contains no interval of A");

    // Drop intervals the grid cannot resolve, then rescale the target mean so
    // the window average of psi stays n.
    double kept_len = 0.0;
    for (const auto& [l, r] : raw)
        if (r - l >= 4.0 * dx) {
            wit.intervals.emplace_back(l, r);
            kept_len += r - l;
        }
    if (wit.intervals.empty())
        throw InsufficientWindowError("quench witness: all intervals below grid resolution");
    wit.alpha_used = kept_len / window;
    wit.interval_mean_target = n_eff / wit.alpha_used;
    wit.psi_bound = 2.0 * n_eff / wit.alpha_stat;
    wit.plateau = wit.interval_mean_target / 0.9;
    if (wit.plateau > wit.psi_bound)
        throw InsufficientWindowError(
            "quench witness: dropped intervals push the plateau past 2n/alpha");

    std::vector<Bump> bumps;
    bumps.reserve(wit.intervals.size());
    for (const auto& [l, r] : wit.intervals)
        bumps.push_back(make_bump(l, r, wit.interval_mean_target));
    auto psi_at = [&](double x) {
        // Intervals are sorted and disjoint; binary search for the candidate.
        auto it = std::upper_bound(wit.intervals.begin(), wit.intervals.end(),
                                   std::make_pair(x, std::numeric_limits<double>::max()));
        if (it == wit.intervals.begin()) return 0.0;
        const std::size_t idx = static_cast<std::size_t>(it - wit.intervals.begin()) - 1;
        return bumps[idx](x);
    };

    // Verify the per-interval means with independent quadrature.
    for (std::size_t i = 0; i < wit.intervals.size(); ++i) {
        const auto& [l, r] = wit.intervals[i];
        const double mean =
            integrate([&](double x) { return bumps[i](x); }, l, r, 0.05 * (r - l), 1e-12) /
            (r - l);
        wit.interval_mean_err =
            std::max(wit.interval_mean_err, std::abs(mean - wit.interval_mean_target));
    }

    // Sample psi, the drift of phi(x) = int (psi - n), and the H bound.
    const long ng = std::max<long>(16, static_cast<long>(std::llround(window / dx)));
    wit.psi.resize(ng + 1);
    double phi = 0.0, prev = 0.0, max_h = -std::numeric_limits<double>::infinity();
    const double flat = prob.flat_level();
    for (long i = 0; i <= ng; ++i) {
        const double x = window * static_cast<double>(i) / static_cast<double>(ng);
        const double psi = psi_at(x);
        wit.psi[i] = psi;
        const double integrand = psi - n_eff;
        if (i > 0) phi += 0.5 * (prev + integrand) * (window / static_cast<double>(ng));
        prev = integrand;
        // H(n + phi', x, c) with n + phi' = psi; the flip (n, s) -> (-n, -s)
        // leaves this value unchanged.
        max_h = std::max(max_h, hj::H(psi, m, c, k_at(x), s_at(x)));
    }
    wit.phi_drift = std::abs(phi) / window;
    wit.max_H = max_h;
    wit.pass = max_h <= flat + tol;
    return wit;
}

namespace {

// Which branch the slope n sits on (requires h(c) > flat level).
BranchSide branch_of(const ShearProblem& prob, const StrainHamiltonian& h) {
    const double e_plus = P_plus(h, h.flat_level() + prob.eps_gap, prob.window).value;
    return prob.n > e_plus ? BranchSide::Upper : BranchSide::Lower;
}

double branch_root_at(const StrainHamiltonian& h, BranchSide side, double mu, double x) {
    const auto [k, s] = h.ks(x);
    return side == BranchSide::Upper ? hj::upper_root(h.m(), h.c(), k, s, mu)
                                     : hj::lower_root(h.m(), h.c(), k, s, mu);
}

}  // namespace

Claim1Result claim1_check(const ShearProblem& prob, double c, int samples_per_unit) {
    const StrainPoint pt = strain_point(prob, c);
    if (pt.flat)
        throw HypothesisNotMetError("claim1_check: h(c) equals the flat value");
    Claim1Result res;
    res.c = c;
    res.mu = pt.h;
    const StrainHamiltonian h = prob.hamiltonian(c);
    const BranchSide side = branch_of(prob, h);
    const long ns = std::max<long>(1024, static_cast<long>(prob.window * samples_per_unit));
    const double dx = prob.window / static_cast<double>(ns);
    double min1 = std::numeric_limits<double>::infinity();
    double min2 = min1;
    for (long i = 0; i < ns; ++i) {
        const double x = (static_cast<double>(i) + 0.5) * dx;
        const auto [k, s] = h.ks(x);
        (void)k;
        const double t = branch_root_at(h, side, pt.h, x);
        min1 = std::min(min1, t + c * s);
        min2 = std::min(min2, hj::dHdp(t, prob.m, c, s));
    }
    res.min_t_plus_cs = min1;
    res.min_fp_plus_csfpp = min2;
    return res;
}

IdentityResult differentiated_identity_check(const ShearProblem& prob, double c, double dc,
                                             int samples_per_unit) {
    if (!(dc > 0) || !(c - dc >= 0))
        throw std::invalid_argument("identity check: need 0 <= c - dc and dc > 0");
    const StrainPoint p0 = strain_point(prob, c);
    const StrainPoint pp = strain_point(prob, c + dc);
    const StrainPoint pm = strain_point(prob, c - dc);
    if (p0.flat || pp.flat || pm.flat)
        throw HypothesisNotMetError("identity check: h reaches the flat value near c");

    IdentityResult res;
    res.c = c;
    res.dc = dc;
    res.h_prime = (pp.h - pm.h) / (2.0 * dc);

    const StrainHamiltonian h0 = prob.hamiltonian(c);
    const StrainHamiltonian hp = prob.hamiltonian(c + dc);
    const StrainHamiltonian hm = prob.hamiltonian(c - dc);
    const BranchSide side = branch_of(prob, h0);

    const double m = prob.m;
    const long ns = std::max<long>(512, static_cast<long>(prob.window * samples_per_unit));
    const double dx = prob.window / static_cast<double>(ns);
    double sum_inv = 0, sum_s = 0, sum_dcu = 0, worst = 0;
    for (long i = 0; i < ns; ++i) {
        const double x = (static_cast<double>(i) + 0.5) * dx;
        const auto [k, s] = h0.ks(x);
        (void)k;
        const double t = branch_root_at(h0, side, p0.h, x);
        const double tp = branch_root_at(hp, side, pp.h, x);
        const double tm = branch_root_at(hm, side, pm.h, x);
        const double dcu = (tp - tm) / (2.0 * dc);
        const double denom = hj::dHdp(t, m, c, s);       // f' + c s f''
        const double a = c * m * m / (t * (m * m + t * t));  // c f'' / f'
        const double lhs = res.h_prime / denom;
        const double rhs = s / (1.0 + a * s) + dcu;
        worst = std::max(worst, std::abs(lhs - rhs));
        sum_inv += 1.0 / denom;
        sum_s += s / (1.0 + a * s);
        sum_dcu += dcu;
    }
    res.max_residual = worst;
    res.mean_inv_fp = sum_inv / static_cast<double>(ns);
    res.mean_s_over = sum_s / static_cast<double>(ns);
    res.mean_dc_uprime = sum_dcu / static_cast<double>(ns);
    return res;
}

TheoremReport main_theorem_check(const ShearProblem& prob, const std::vector<double>& c_values,
                                 double tol) {
    TheoremReport rep;
    rep.flat_level = prob.flat_level();
    rep.velocity_bound = std::abs(prob.m) + prob.bounds.k_hi;

    std::vector<double> cs = c_values;
    std::sort(cs.begin(), cs.end());
    if (cs.empty() || cs.front() > 0.0) cs.insert(cs.begin(), 0.0);

    if (prob.m == 0.0 || prob.n == 0.0) {
        // Closed-form edges: m = 0 gives |n|; n = 0 pins the flat value.
        rep.analytic_edge = true;
        const double value = prob.m == 0.0 ? std::abs(prob.n) : rep.flat_level;
        rep.curve.m = prob.m;
        rep.curve.n = prob.n;
        rep.curve.flat_level = rep.flat_level;
        rep.curve.s_norm = prob.s_norm();
        for (double c : cs) rep.curve.points.push_back({c, value, prob.n == 0.0});
        rep.sandwich_ok = true;
        rep.strict_reduction_ok = true;
        return rep;
    }

    rep.curve = strain_curve(prob, cs);
    const double h0 = rep.curve.points.front().h;
    double defect = 0.0;
    double min_gap = std::numeric_limits<double>::infinity();
    for (const auto& pt : rep.curve.points) {
        defect = std::max(defect, rep.velocity_bound - pt.h);
        defect = std::max(defect, pt.h - h0);
        if (pt.c > 0.0) min_gap = std::min(min_gap, h0 - pt.h);
    }
    rep.worst_sandwich_defect = defect;
    rep.sandwich_ok = defect <= tol;
    if (h0 > rep.flat_level + 1e-3) {
        rep.min_strict_gap = min_gap;
        rep.strict_reduction_ok = min_gap > 1e-3;
    } else {
        // h(0) already sits on the flat piece: nothing to reduce.
        rep.min_strict_gap = 0.0;
        rep.strict_reduction_ok = true;
    }
    return rep;
}

}  // namespace gstrain
