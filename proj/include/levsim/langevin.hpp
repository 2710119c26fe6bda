#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "levsim/distribution.hpp"
#include "levsim/model.hpp"
#include "levsim/moments.hpp"

namespace levsim {
namespace langevin {

enum class SdeMode { Full2D, Overdamped1D };

// StratonovichHeun is the physically correct integrator for the
// position-only equation (its stationary density carries the g*g' drift).
// ItoEuler is a deliberately wrong-correspondence fixed-step variant used
// to demonstrate that the choice is observable.
enum class OverdampedScheme { StratonovichHeun, ItoEuler };

struct SdeConfig {
    SdeMode mode = SdeMode::Full2D;
    std::size_t n_traj = 1;
    double dt = 0.0;        // outer step; also the recording quantum
    double t_end = 0.0;
    double burn_in = 0.0;   // samples recorded only for t >= burn_in
    std::uint64_t seed = 1;
    std::size_t stride = 1; // record every stride-th outer step (0 = auto)
    OverdampedScheme scheme = OverdampedScheme::StratonovichHeun;
    double divergence_threshold = 0.0; // 0 = auto from steady scales
    unsigned n_threads = 1;
    std::size_t max_samples = 10'000'000;
    // Optional explicit initial condition per trajectory index; when unset,
    // trajectories start from the self-consistent Gaussian steady scales
    // (symmetrically signed peak positions in the bistable case).
    std::function<std::pair<double, double>(std::size_t)> init;
};

struct TrajectoryEnsemble {
    SdeMode mode = SdeMode::Full2D;
    std::vector<double> times;
    std::vector<std::vector<double>> x; // [trajectory][sample]
    std::vector<std::vector<double>> p; // empty for Overdamped1D
    std::vector<std::uint64_t> seeds;   // per-trajectory generator seeds
    std::vector<std::size_t> divergent; // excluded trajectory indices
    std::size_t n_requested = 0;

    std::size_t n_kept() const { return x.size(); }
};

// Euler-Maruyama on the two-variable system
//   dx = omega_z p dt + sqrt(2 D_q) dW_x
//   dp = (-omega_z x - 2 gamma_g p - 24 gamma_f x^2 p) dt
//        + sqrt(2 S + 144 Gamma_f x^4) dW_p.
// The p-noise amplitude depends only on x, which dW_p does not drive, so
// the Ito/Stratonovich distinction is vacuous here.  Requires
// dt <= 0.05 / omega_z.
TrajectoryEnsemble simulate_full(const SystemParams& params,
                                 const SdeConfig& config);

// Position-only equation dx = h(x) dt + g(x) dW (Stratonovich), with
//   h = -omega_z^2 x / c(x),  g = omega_z sqrt(S + 72 Gamma_f x^4) / c(x),
//   c = 2 gamma_g + 24 gamma_f x^2,  <dW^2> = 2 dt.
// Interior region: integrated in the transformed coordinate y = F(x) with
// F' = 1/g (tabulated once per parameter set), where the noise is additive
// and a Heun step is uniformly accurate even through x ~ 0 where g blows
// up like 1/(2 gamma_g).  Outer region: Heun in x with local step caps on
// relaxation rate, noise-amplitude variation and drift displacement.
// Warns on stderr when the effective damping ratio is below 1.
TrajectoryEnsemble simulate_overdamped(const SystemParams& params,
                                       const SdeConfig& config);

// Normalized histogram over recorded samples.  lo == hi requests automatic
// range from the data.  density_err holds the half-width of a Wilson score
// interval (z = 1) per bin, treating samples as independent: choose the
// recording stride at or above the decorrelation time for meaningful bars.
Distribution1D histogram(const TrajectoryEnsemble& ensemble, Axis axis,
                         std::size_t bins, double lo = 0.0, double hi = 0.0);

struct EnsembleMoments {
    moments::MomentState mean;
    moments::MomentState se; // batch-means standard errors (one batch per
                             // trajectory); p-fields are zero in 1D mode
    std::size_t n_samples = 0;
};

EnsembleMoments ensemble_moments(const TrajectoryEnsemble& ensemble);

// 10x the slower of the effective relaxation time and the trap period.
double default_burn_in(const SystemParams& params, double x2_ss);

} // namespace langevin
} // namespace levsim
