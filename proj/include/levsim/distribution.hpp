// Tabulated 1D densities over x, p, or energy, shared by the analytic formulas,
// the 1D Fokker-Planck solver, histograms, and the 2D solver's marginals.
#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace levsim {

enum class Axis { x, p, epsilon };

struct Distribution1D {
    Axis axis = Axis::x;
    std::vector<double> grid;     // sample points, strictly increasing
    std::vector<double> density;  // nonnegative values, trapezoid-normalized
    // Optional per-point uncertainty (filled by histogram builders, else empty).
    std::vector<double> density_err;

    std::size_t size() const { return grid.size(); }

    // Trapezoidal integral of the current density values.
    double integral() const;

    // Scales density to unit trapezoidal integral; returns the raw integral.
    // Throws std::runtime_error if the raw integral is not positive and finite.
    double normalize();

    // Trapezoidal integral of grid^k * density.
    double moment(int k) const;

    // L1 distance on a shared grid (throws if grids differ).
    double l1_distance(const Distribution1D& other) const;

    // L1 distance after linearly interpolating `other` onto this grid
    // (other is treated as 0 outside its support).
    double l1_distance_resampled(const Distribution1D& other) const;
};

std::vector<double> linspace(double lo, double hi, std::size_t n);

// Non-equilibrium potential U = -ln W in units of k_B*T, shifted to min 0.
struct PotentialCurve {
    Axis axis = Axis::x;
    std::vector<double> grid;
    std::vector<double> U;
    std::size_t clipped = 0;  // number of density values clipped at the floor
};

} // namespace levsim
