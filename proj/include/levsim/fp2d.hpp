#pragma once

#include <cstddef>
#include <vector>

#include "levsim/distribution.hpp"
#include "levsim/model.hpp"
#include "levsim/moments.hpp"

namespace levsim {
namespace fp2d {

struct PhaseGrid {
    std::size_t nx = 0, np = 0; // node counts, nodes include both box edges
    double x_max = 0.0, p_max = 0.0; // symmetric extents about the origin
    double dx = 0.0, dp = 0.0;       // dx = 2 x_max / (nx - 1)

    // Nodes are generated from the box center so that reflected indices give
    // bitwise-negated coordinates; the parity-exact update relies on this.
    double x(std::size_t i) const {
        return (static_cast<double>(i) - 0.5 * static_cast<double>(nx - 1)) * dx;
    }
    double p(std::size_t j) const {
        return (static_cast<double>(j) - 0.5 * static_cast<double>(np - 1)) * dp;
    }
    std::size_t size() const { return nx * np; }
};

struct WignerField {
    PhaseGrid grid;
    std::vector<double> values; // row-major: values[i * np + j], i = x index
    double time = 0.0;

    double& at(std::size_t i, std::size_t j) { return values[i * grid.np + j]; }
    double at(std::size_t i, std::size_t j) const {
        return values[i * grid.np + j];
    }
    double mass() const; // sum W dx dp
};

// Which steady-variance estimate sizes the box.  Hot fits the no-feedback
// (gas-equilibrium) variance and suits cooling runs started at N_0; Steady
// fits the feedback steady state (the larger of the second-moment and
// overdamped-distribution estimates); Auto takes the larger of the two,
// which for strong cooling produces a box that cannot also resolve the
// final narrow structure -- build_grid then reports the resolution error.
enum class GridBasis { Auto, Hot, Steady };

struct GridSpec {
    std::size_t nx = 257, np = 257;
    double span_sigmas = 5.0;
    GridBasis basis = GridBasis::Auto;
};

// Box half-width span_sigmas * sqrt(basis variance); pure formula, no
// resolution check.
double grid_extent(const SystemParams& params, const GridSpec& spec);

// Validates nx, np >= 16, span >= 4, then checks that the analytically
// predicted density structure for the chosen basis keeps >= 8 cells across
// its narrower peak (FWHM/dx), and throws otherwise.
PhaseGrid build_grid(const SystemParams& params, const GridSpec& spec);

// Isotropic Gaussian with <x^2> = <p^2> = n0 + 1/2, normalized on the
// grid.  Throws if the off-grid Gaussian mass exceeds 1e-6.
WignerField init_thermal(const PhaseGrid& grid, double n0);

// Largest stable time step for the explicit passes of the split scheme:
// 0.5 * min(dx/(omega_z p_max), dp/(omega_z x_max), dx^2/(2 D_q)).  The
// momentum drift-diffusion part is integrated implicitly (Chang-Cooper) and
// imposes no step limit.
double stable_dt(const SystemParams& params, const PhaseGrid& grid);

struct Fp2dMoments {
    moments::MomentState m;
    double n = 0.0;
    double n2 = 0.0; // grid quadrature of W * (eps^2 - eps), eps = (x^2+p^2)/2
    double g2 = 0.0; // (n2 - n) / n^2
};

Fp2dMoments moments(const WignerField& field);

// x and p marginals on the grid nodes; the epsilon marginal bins cell
// probability into equal-energy annuli of width max(dx,dp)*r_box/2.
Distribution1D marginal(const WignerField& field, Axis axis);

// One conservative split step: half steps of limited-upwind rotation
// advection and explicit position diffusion around a full implicit
// Chang-Cooper sweep of the momentum drift-diffusion operator.  Throws if
// dt exceeds stable_dt or if the field develops non-finite values.
void step(WignerField& field, const SystemParams& params, double dt);

struct MomentRecord {
    double t = 0.0;
    Fp2dMoments mom;
};

// Advance to t_end recording moments at the first step boundary within
// half a step of each requested sample time.  dt = 0 selects stable_dt.
std::vector<MomentRecord> evolve(WignerField& field, const SystemParams& params,
                                 double t_end,
                                 const std::vector<double>& sample_times,
                                 double dt = 0.0);

struct SteadyStateReport {
    bool converged = false;
    std::size_t iterations = 0; // completed check windows
    double residual = 0.0;      // relative L1 change per unit time
    double final_time = 0.0;
};

// Advance in windows of t_check (default 10 trap periods) until the L1
// change of the field over a window, per unit time, drops below tol.
// Exhausting max_time (default 500 windows) returns converged = false.
// Warns on stderr if the converged field's boundary density exceeds
// 1e-10 of its maximum.
SteadyStateReport evolve_to_steady(WignerField& field,
                                   const SystemParams& params,
                                   double tol = 1e-6, double t_check = 0.0,
                                   double max_time = 0.0, double dt = 0.0);

// max |W| over the box edge divided by max W (boundary-leakage diagnostic).
double boundary_ratio(const WignerField& field);

} // namespace fp2d
} // namespace levsim
