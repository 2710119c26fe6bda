#pragma once

#include <cstddef>
#include <vector>

#include "levsim/distribution.hpp"
#include "levsim/model.hpp"

namespace levsim {
namespace analysis {

struct Peak {
    double position = 0.0;
    double height = 0.0;
    std::size_t index = 0; // grid index of the discrete maximum
};

// Interior local maxima of values over grid, after optional moving-average
// smoothing (odd window; 0 or 1 means none).  Maxima are refined to sub-bin
// positions with a three-point parabola (any monotone grid) and filtered to
// those rising at least rel_floor of the value range above the minimum.
// Peaks are returned in ascending position order.
std::vector<Peak> detect_peaks(const std::vector<double>& grid,
                               const std::vector<double>& values,
                               std::size_t smooth_window = 0,
                               double rel_floor = 0.05);
std::vector<Peak> detect_peaks(const Distribution1D& dist,
                               std::size_t smooth_window = 0,
                               double rel_floor = 0.05);

struct BistabilityReport {
    bool bistable = false;
    double x_minus = 0.0, x_plus = 0.0; // positions of the two highest peaks
    double separation = 0.0;            // x_plus - x_minus
    double dip_position = 0.0;          // lowest point between the peaks
    double dip_value = 0.0;
    double barrier = 0.0; // ln(lower peak height / dip value)
    std::vector<Peak> peaks;
};

// Classifies a density as bimodal when it has at least two detected peaks;
// the two highest define the wells and the minimum between them the dip.
BistabilityReport analyze_bistability(const Distribution1D& dist,
                                      std::size_t smooth_window = 0);

// ln(peak/dip) of a bimodal density; throws std::domain_error if the
// density is not bimodal.
double barrier_height(const Distribution1D& dist,
                      std::size_t smooth_window = 0);

// Potential of the deterministic part of the overdamped position equation,
// V(x) = omega_z^2 ln(1 + 12 gamma_f x^2 / gamma_g) / (48 gamma_f), with
// V -> omega_z^2 x^2 / (4 gamma_g) as gamma_f -> 0.  Always single-welled:
// the bistability of the full dynamics is induced by the noise profile.
PotentialCurve drift_potential(const SystemParams& params,
                               const std::vector<double>& x_grid);

struct ScanRow {
    double gamma_eff_target = 0.0;
    double gamma_eff = 0.0; // achieved value (gas floor when unreachable)
    bool achievable = false;
    double gamma_f = 0.0;
    double Gamma_f = 0.0;
    double x2_ss = 0.0;
    double n_ss = 0.0;
    double modulation = 0.0; // gamma_f * n_ss / omega_z
    bool over_limit = false; // modulation > 1
    bool bistable = false;   // gamma_f above the bimodality onset
    double x_peak = 0.0;     // one-sided position-density peak, 0 if unimodal
    std::size_t iterations = 0;
};

// For each target effective damping rate (units of omega_z), solves
// (2 gamma_g + 24 gamma_f <x^2>_ss(gamma_f)) / omega_z = target for gamma_f
// by fixed-point iteration (relative tolerance 1e-6, at most 200 rounds)
// holding the backaction ratio Gamma_f / gamma_f of the base parameters
// fixed.  Targets at or below the bare-gas floor 2 gamma_g / omega_z get an
// achievable = false row evaluated at gamma_f = 0.
std::vector<ScanRow> scan_feedback(const SystemParams& base,
                                   const std::vector<double>& targets);

} // namespace analysis
} // namespace levsim
