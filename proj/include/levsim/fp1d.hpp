// Generic steady-state solver for 1D Fokker-Planck equations
//   dW/dt = -d/dy (D1(y) W) + d^2/dy^2 (D2(y) W),
// used as an independent oracle for the energy-space and overdamped-position
// equations.
#pragma once

#include <cstddef>
#include <functional>

#include "levsim/distribution.hpp"
#include "levsim/model.hpp"

namespace levsim {
namespace fp1d {

struct FP1DProblem {
    Axis axis = Axis::x;
    double y_min = 0.0, y_max = 0.0;
    std::size_t n = 0;  // output grid size, >= 64
    std::function<double(double)> D1;
    std::function<double(double)> D2;  // must be > 0 on the interior
};

// Steady state W ~ (1/D2) exp(int D1/D2), accumulated in log-domain with
// adaptive Gauss-Kronrod quadrature per grid interval, then normalized.
Distribution1D steady_state(const FP1DProblem& problem);

// Overdamped position problem: D1 = h + g*g', D2 = g^2 with
// h = -omega_z^2 x / c(x), g = omega_z sqrt(S + 72 Gamma_f x^4)/c(x),
// c(x) = 2*gamma_g + 24*gamma_f*x^2.
FP1DProblem overdamped_position_problem(const SystemParams& params,
                                        double x_max, std::size_t n);

// Low-damping energy problem: D1 = S - 2*gamma_g*eps - 12*gamma_f*eps^2,
// D2 = S*eps, on [floor, eps_max]; floor keeps 1/D2 finite at eps = 0.
FP1DProblem energy_problem(const SystemParams& params, double eps_max,
                           std::size_t n, double eps_floor);

// Drift and noise of the adiabatically eliminated position equation; shared
// with the Langevin module.
double drift_h(const SystemParams& params, double x);
double noise_g(const SystemParams& params, double x);
double noise_g_prime(const SystemParams& params, double x);

// Maximum absolute discrete steady-state flux of `dist` under `problem`,
// relative to the maximum drift-flux magnitude (detailed-balance residual).
double flux_residual(const FP1DProblem& problem, const Distribution1D& dist);

} // namespace fp1d
} // namespace levsim
