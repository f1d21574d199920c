#include "gstrain/frontsim.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "gstrain/util.hpp"

namespace gstrain {

double strain_term(double gx, double gy, double v_prime, double c, double eps_grad) {
    const double norm = std::sqrt(gx * gx + gy * gy);
    if (norm < eps_grad) return 0.0;
    return c * v_prime * gx * gy / norm;
}

double FrontState::mean_w() const {
    double s = 0;
    for (double x : w) s += x;
    return s / static_cast<double>(w.size());
}

FrontState make_front_state(int nx, int ny, double m, double n, double cfl,
                            double perturb_amp) {
    if (nx < 4 || ny < 4) throw std::invalid_argument("front state: grid too small");
    FrontState st;
    st.nx = nx;
    st.ny = ny;
    st.dx = 1.0 / nx;
    st.dy = 1.0 / ny;
    st.m = m;
    st.n = n;
    st.cfl = cfl;
    st.w.assign(static_cast<std::size_t>(nx) * ny, 0.0);
    if (perturb_amp != 0.0) {
        constexpr double two_pi = 2.0 * std::numbers::pi;
        for (int j = 0; j < ny; ++j)
            for (int i = 0; i < nx; ++i)
                st.at(i, j) = perturb_amp * std::sin(two_pi * i * st.dx) *
                              std::sin(two_pi * j * st.dy);
    }
    return st;
}

SpeedEstimate evolve(FrontState& st, const FieldRealization& field, double c, double T) {
    if (!(st.cfl > 0) || st.cfl > 0.4)
        throw CflError("evolve: CFL number must lie in (0, 0.4]");
    if (!(T > 0)) throw std::invalid_argument("evolve: T must be positive");

    const int nx = st.nx, ny = st.ny;
    const double dx = st.dx, dy = st.dy, m = st.m, n = st.n;

    // Row caches: the flow depends on y only.
    std::vector<double> vr(ny), vpr(ny), ax(ny), ay(ny);
    double ax_max = 0, ay_max = 0;
    for (int j = 0; j < ny; ++j) {
        const double y = j * dy;
        vr[j] = field.v(y);
        vpr[j] = field.v_prime(y);
        ax[j] = std::abs(vr[j]) + 1.0 + c * std::abs(vpr[j]);
        ay[j] = 1.0 + c * std::abs(vpr[j]);
        ax_max = std::max(ax_max, ax[j]);
        ay_max = std::max(ay_max, ay[j]);
    }
    const double dt_cfl = st.cfl / (ax_max / dx + ay_max / dy);
    const long steps = std::max<long>(1, static_cast<long>(std::ceil(T / dt_cfl)));
    const double dt = T / static_cast<double>(steps);

    std::vector<int> ip(nx), im(nx), jp(ny), jm(ny);
    for (int i = 0; i < nx; ++i) { ip[i] = (i + 1) % nx; im[i] = (i + nx - 1) % nx; }
    for (int j = 0; j < ny; ++j) { jp[j] = (j + 1) % ny; jm[j] = (j + ny - 1) % ny; }

    SpeedEstimate est;
    const long record_every = std::max<long>(1, steps / 256);
    std::vector<double> wn(st.w.size());

    for (long step = 0; step < steps; ++step) {
        const double* w = st.w.data();
        double* out = wn.data();
        parallel_for(static_cast<std::size_t>(ny), [&](std::size_t js) {
            const int j = static_cast<int>(js);
            const double* row = w + static_cast<std::size_t>(j) * nx;
            const double* row_up = w + static_cast<std::size_t>(jp[j]) * nx;
            const double* row_dn = w + static_cast<std::size_t>(jm[j]) * nx;
            double* orow = out + static_cast<std::size_t>(j) * nx;
            const double v = vr[j], vp = vpr[j], axj = ax[j], ayj = ay[j];
            for (int i = 0; i < nx; ++i) {
                const double qxm = m + (row[i] - row[im[i]]) / dx;
                const double qxp = m + (row[ip[i]] - row[i]) / dx;
                const double qym = n + (row[i] - row_dn[i]) / dy;
                const double qyp = n + (row_up[i] - row[i]) / dy;
                const double gx = 0.5 * (qxm + qxp);
                const double gy = 0.5 * (qym + qyp);
                const double flux = v * gx + std::sqrt(gx * gx + gy * gy) +
                                    strain_term(gx, gy, vp, c) -
                                    0.5 * axj * (qxp - qxm) - 0.5 * ayj * (qyp - qym);
                orow[i] = row[i] - dt * flux;
            }
        });
        st.w.swap(wn);
        st.t += dt;
        if ((step + 1) % record_every == 0 || step + 1 == steps) {
            const double t = st.t;
            est.series.emplace_back(t, -st.mean_w() / t);
        }
    }

    est.speed = est.series.back().second;

    // Least-squares slope of -<W> against t over the second half: kills the
    // O(1/T) offset from the transient.
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    long cnt = 0;
    for (const auto& [t, sp] : est.series) {
        if (t < 0.5 * st.t) continue;
        const double y = sp * t;  // -<W>(t)
        sx += t; sy += y; sxx += t * t; sxy += t * y;
        ++cnt;
    }
    est.speed_extrapolated =
        cnt >= 2 ? (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx) : est.speed;

    double lo = est.series.back().second, hi = lo;
    for (const auto& [t, sp] : est.series) {
        if (t < st.t * 2.0 / 3.0) continue;
        lo = std::min(lo, sp);
        hi = std::max(hi, sp);
    }
    est.stabilized = (hi - lo) <= 0.01 * std::max(1e-12, std::abs(est.speed));
    return est;
}

std::pair<double, double> measure_strain_reduction(const FieldRealization& field, double m,
                                                   double n, double c1, double c2, int grid,
                                                   double T, double cfl) {
    if (!(c1 < c2) && c1 != c2)
        throw std::invalid_argument("measure_strain_reduction: need c1 <= c2");
    FrontState a = make_front_state(grid, grid, m, n, cfl);
    FrontState b = make_front_state(grid, grid, m, n, cfl);
    const double s1 = evolve(a, field, c1, T).speed_extrapolated;
    const double s2 = evolve(b, field, c2, T).speed_extrapolated;
    return {s1, s2};
}

}  // namespace gstrain
