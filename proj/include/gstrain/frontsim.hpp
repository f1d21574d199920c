#pragma once

#include <stdexcept>
#include <vector>

#include "gstrain/field.hpp"

namespace gstrain {

struct CflError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Flame-stretch flux c v' gx gy / |Dg| for the shear flow V = (v(y), 0);
/// degenerate gradients fall back to 0 (level-set convention).
double strain_term(double gx, double gy, double v_prime, double c, double eps_grad = 1e-8);

/// Level-set state G = m x + n y + W on [0,1]^2 with W doubly periodic, so
/// slope periodicity of G holds exactly at every step.
struct FrontState {
    int nx = 0, ny = 0;
    double dx = 0, dy = 0;
    double m = 0, n = 0;
    double cfl = 0.4;
    double t = 0;
    std::vector<double> w;  // row-major, w[j * nx + i]

    double& at(int i, int j) { return w[static_cast<std::size_t>(j) * nx + i]; }
    double at(int i, int j) const { return w[static_cast<std::size_t>(j) * nx + i]; }
    double g(int i, int j) const {
        return m * (dx * i) + n * (dy * j) + at(i, j);
    }
    double mean_w() const;
};

/// perturb_amp seeds a smooth doubly periodic deviation from the plane
/// initial data (0 keeps G0 = m x + n y exactly).
FrontState make_front_state(int nx, int ny, double m, double n, double cfl = 0.4,
                            double perturb_amp = 0.0);

struct SpeedEstimate {
    std::vector<std::pair<double, double>> series;  // (t, -<W>/t)
    double speed = 0;                // endpoint estimate -<W(T)>/T
    double speed_extrapolated = 0;   // slope fit of -<W> over the last half
    bool stabilized = false;         // <1% relative drift over the last third
};

/// March the strain G-equation with forward Euler and a Lax-Friedrichs
/// numerical Hamiltonian (row-local dissipation bounds). Refuses cfl > 0.4.
SpeedEstimate evolve(FrontState& state, const FieldRealization& field, double c, double T);

/// Front speeds at two Markstein numbers on identical grids.
std::pair<double, double> measure_strain_reduction(const FieldRealization& field, double m,
                                                   double n, double c1, double c2, int grid,
                                                   double T, double cfl = 0.4);

}  // namespace gstrain
