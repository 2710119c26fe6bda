#pragma once

#include <cstddef>
#include <vector>

#include "levsim/model.hpp"

namespace levsim {
namespace moments {

// Second moments plus the higher-order moments that enter the feedback
// terms.  x3p, x4, x5p, x6 carry their Gaussian (isserlis) values whenever
// the state is produced by evolve() or steady_moments().
struct MomentState {
    double x2 = 0.0;
    double p2 = 0.0;
    double xp = 0.0;
    double x3p = 0.0;
    double x4 = 0.0;
    double x5p = 0.0;
    double x6 = 0.0;

    double n() const { return 0.5 * (x2 + p2) - 0.5; }
};

// Gaussian-closure values of the higher moments for given second moments.
MomentState close_gaussian(double x2, double p2, double xp);

// Time derivative of the full moment vector with the Gaussian closure
// substituted for the eighth-order correlators that appear on the right
// hand side (x2p2 -> x2*p2 + 2*xp^2, x5p -> 15*x2^2*xp).  The derivative
// of each closed higher moment follows by the chain rule, so rhs() of a
// Gaussian state is tangent to the closure manifold.
MomentState rhs(const SystemParams& params, const MomentState& s);

struct MomentTrace {
    std::vector<double> t;
    std::vector<MomentState> states;
};

struct EvolveOptions {
    double rel_tol = 1e-8;
    double abs_tol = 1e-12;
};

// Integrate the closure-reduced system (x2, p2, xp) from a Gaussian initial
// state and report the full moment vector along the requested output times.
// Integrating the seven-component vector directly is numerically unstable:
// the literal hierarchy has a growing mode transverse to the closure
// manifold, so the reduction is exact on the manifold and stable off it.
MomentTrace evolve(const SystemParams& params, const MomentState& initial,
                   const std::vector<double>& times,
                   const EvolveOptions& opt = {});

struct SteadyMoments {
    MomentState state;
    double n = 0.0;
};

// Self-consistent Gaussian steady state: positive root of
// 2 J x2^2 + 2 gamma_g x2 - S = 0 with the equipartition correction
// p2 = (1 - 72 gamma_f D_q / omega_z^2) x2 - 2 gamma_g D_q / omega_z^2
// and xp = -D_q / omega_z.
SteadyMoments steady_moments(const SystemParams& params);

struct FullCoefficients {
    double A = 0.0; // quadratic coefficient (times 3 in 3A x2^2 + B x2 - C = 0)
    double B = 0.0;
    double C = 0.0;
    double x2 = 0.0; // positive root
};

// Position variance from the closure including the position-diffusion
// cross terms; reduces to steady_moments().state.x2 when D_q -> 0.
FullCoefficients steady_x2_full_coefficients(const SystemParams& params);

} // namespace moments
} // namespace levsim
