// Closed-form steady-state results: the Gaussian no-feedback state, the
// feedback steady moments, the low-damping energy/position distributions, and
// the overdamped position/momentum distributions with their phonon statistics.
#pragma once

#include <vector>

#include "levsim/distribution.hpp"
#include "levsim/model.hpp"

namespace levsim {
namespace analytic {

struct GaussianSteadyState {
    double a = 0.0, b = 0.0, c = 0.0;  // covariance parameters of the ansatz
    double x2 = 0.0, p2 = 0.0, xp = 0.0;
    double n_ss = 0.0;
};

// No-feedback thermal steady state; throws std::domain_error when gamma_g = 0.
GaussianSteadyState no_feedback_steady(const SystemParams& params);

struct SteadyX2 {
    double exact = 0.0;    // positive root of 2J*x2^2 + 2*gamma_g*x2 - S = 0
    double approx = 0.0;   // sqrt(S/(2J))
    bool approx_valid = false;  // J*N_0 >> gamma_g heuristic (factor 100)
};

// Steady <x^2> with feedback; throws std::domain_error if J <= 0.
SteadyX2 steady_x2(const SystemParams& params);

// sqrt(S/(2J)) - 1/2; throws std::domain_error if J <= 0.
double steady_n(const SystemParams& params);

// Characteristic cooling scale 2*sqrt((2J+2gamma_g)^2 + 8J(S - J/2)), returned
// verbatim in rate units; throws std::domain_error on a negative radicand.
double cooling_time_tau(const SystemParams& params);

// Low-damping steady energy density ~ exp[-(2*gamma_g*eps + 6*gamma_f*eps^2)/S].
Distribution1D energy_dist_low_damping(const SystemParams& params,
                                       const std::vector<double>& eps_grid);

// Low-damping steady position density (modified-Bessel closed form).
Distribution1D position_dist_low_damping(const SystemParams& params,
                                         const std::vector<double>& x_grid);

enum class OverdampedForm { Full, Simplified };

// Overdamped steady position density; Full carries the gas arctan factor,
// Simplified is the peaks-only form that vanishes at x = 0.
Distribution1D position_dist_overdamped(const SystemParams& params,
                                        const std::vector<double>& x_grid,
                                        OverdampedForm form = OverdampedForm::Full);

// Maxima of the overdamped position density, +-(S/(2J))^(1/4).
struct PeakPair { double x_minus = 0.0, x_plus = 0.0; };
PeakPair peak_positions(const SystemParams& params);

// Gamma-function second moment of the overdamped position distribution.
double x2_Wss(const SystemParams& params);

struct MomentumOverdamped {
    Distribution1D dist;       // Gaussian in p
    double p2_Wss = 0.0;       // sqrt(S/(3J/2))
    double p4_Wss = 0.0;       // 3*p2_Wss^2
};
MomentumOverdamped momentum_dist_overdamped(const SystemParams& params,
                                            const std::vector<double>& p_grid);

struct PhononStats {
    double n_Wss = 0.0;
    double n2_Wss = 0.0;
    double g2 = 0.0;
    // Reference constants carried alongside the computed values.
    static constexpr double g2_asymptotic = 51.0 / 25.0;
    static constexpr double g2_thermal = 2.0;
};
PhononStats phonon_stats_overdamped(const SystemParams& params);

// U(x) = -ln W(x) in k_B*T units, shifted so min U = 0; density values are
// clipped at 1e-300 before the logarithm and the clip count is reported.
PotentialCurve potential_from_density(const Distribution1D& dist);

} // namespace analytic
} // namespace levsim
