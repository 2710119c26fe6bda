#include "doctest.h"

#include "levsim/analytic.hpp"
#include "levsim/distribution.hpp"
#include "levsim/fp1d.hpp"
#include "levsim/presets.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

using namespace levsim;

TEST_SUITE("fp1d") {

TEST_CASE("Ornstein-Uhlenbeck steady state is the exact Gaussian [fp1d][ou]") {
    const double k = 2.5, D = 1.3;
    fp1d::FP1DProblem pr;
    pr.axis = Axis::x;
    const double sigma = std::sqrt(D / k);
    pr.y_min = -8.0 * sigma;
    pr.y_max = 8.0 * sigma;
    pr.n = 2001;
    pr.D1 = [k](double y) { return -k * y; };
    pr.D2 = [D](double) { return D; };

    const auto dist = fp1d::steady_state(pr);
    CHECK(dist.integral() == doctest::Approx(1.0).epsilon(1e-10));

    Distribution1D exact;
    exact.axis = Axis::x;
    exact.grid = dist.grid;
    exact.density.resize(dist.grid.size());
    const double norm = 1.0 / (sigma * std::sqrt(2.0 * M_PI));
    for (std::size_t i = 0; i < dist.grid.size(); ++i) {
        const double y = dist.grid[i];
        exact.density[i] = norm * std::exp(-0.5 * y * y / (sigma * sigma));
    }
    exact.normalize();

    CHECK(dist.l1_distance(exact) < 1e-8);
    CHECK(dist.moment(2) == doctest::Approx(sigma * sigma).epsilon(1e-8));

    // The flux residual is a second-order face diagnostic, so it floors at
    // O(h^2) even on the exact solution and shrinks ~4x when n doubles.
    const double r1 = fp1d::flux_residual(pr, dist);
    CHECK(r1 < 5e-5);
    pr.n = 4001;
    const double r2 = fp1d::flux_residual(pr, fp1d::steady_state(pr));
    CHECK(r2 < 0.3 * r1);
}

TEST_CASE("overdamped position problem reproduces the closed form [fp1d][position]") {
    const SystemParams p = presets::get("fig6");
    const double L = 55.0;
    const auto pr = fp1d::overdamped_position_problem(p, L, 4097);
    const auto dist = fp1d::steady_state(pr);

    const auto exact = analytic::position_dist_overdamped(
        p, dist.grid, analytic::OverdampedForm::Full);
    CHECK(dist.l1_distance(exact) < 1e-6);
    CHECK(dist.moment(2) == doctest::Approx(exact.moment(2)).epsilon(1e-7));
}

TEST_CASE("energy problem reproduces the low-damping closed form [fp1d][energy]") {
    const SystemParams p = presets::get("fig4-desk");
    const auto pr = fp1d::energy_problem(p, 40.0, 4097, 1e-8);
    const auto dist = fp1d::steady_state(pr);

    const auto exact = analytic::energy_dist_low_damping(p, dist.grid);
    CHECK(dist.l1_distance(exact) < 1e-6);
    CHECK(dist.moment(1) == doctest::Approx(exact.moment(1)).epsilon(1e-6));
}

TEST_CASE("drift and noise of the eliminated position equation [fp1d][drift]") {
    const SystemParams p = presets::get("fig6");
    const auto d = derive_coefficients(p);

    CHECK(fp1d::drift_h(p, 0.0) == 0.0);
    CHECK(fp1d::noise_g(p, 0.0) ==
          doctest::Approx(p.omega_z * std::sqrt(d.S()) / (2.0 * p.gamma_g))
              .epsilon(1e-12));

    // Restoring drift on both sides.
    CHECK(fp1d::drift_h(p, 5.0) < 0.0);
    CHECK(fp1d::drift_h(p, -5.0) > 0.0);

    // g' agrees with a symmetric finite difference.
    for (double x : {0.5, 3.0, 8.0, 20.0}) {
        const double h = 1e-5 * std::max(1.0, std::fabs(x));
        const double fd =
            (fp1d::noise_g(p, x + h) - fp1d::noise_g(p, x - h)) / (2.0 * h);
        CHECK(fp1d::noise_g_prime(p, x) == doctest::Approx(fd).epsilon(1e-6));
    }
}

TEST_CASE("invalid problems are rejected [fp1d][errors]") {
    const SystemParams p = presets::get("fig6");

    SystemParams free = p;
    free.gamma_g = 0.0;
    free.gamma_f = 0.0;
    free.Gamma_f = 0.0;
    // c(x) = 0 everywhere: no overdamped limit.
    CHECK_THROWS_AS(fp1d::overdamped_position_problem(free, 10.0, 256),
                    std::invalid_argument);

    // The energy-space diffusion D2 = S*eps vanishes at eps = 0, so the
    // floor must be positive.
    CHECK_THROWS_AS(fp1d::energy_problem(p, 40.0, 256, 0.0),
                    std::invalid_argument);

    // Grids below the minimum size are refused.
    fp1d::FP1DProblem pr;
    pr.y_min = -1.0;
    pr.y_max = 1.0;
    pr.n = 32;
    pr.D1 = [](double) { return 0.0; };
    pr.D2 = [](double) { return 1.0; };
    CHECK_THROWS_AS(fp1d::steady_state(pr), std::invalid_argument);

    // Nonpositive diffusion on the interior is refused.
    pr.n = 128;
    pr.D2 = [](double y) { return y; };
    CHECK_THROWS_AS(fp1d::steady_state(pr), std::runtime_error);
}

TEST_CASE("flux residual flags a non-stationary density [fp1d][flux]") {
    const double k = 2.5, D = 1.3;
    fp1d::FP1DProblem pr;
    pr.y_min = -4.0;
    pr.y_max = 4.0;
    pr.n = 801;
    pr.D1 = [k](double y) { return -k * y; };
    pr.D2 = [D](double) { return D; };

    // A Gaussian with the wrong width carries a large detailed-balance
    // residual.
    Distribution1D off;
    off.axis = Axis::x;
    off.grid = linspace(pr.y_min, pr.y_max, pr.n);
    off.density.resize(pr.n);
    for (std::size_t i = 0; i < off.grid.size(); ++i)
        off.density[i] = std::exp(-off.grid[i] * off.grid[i] / 0.4);
    off.normalize();
    CHECK(fp1d::flux_residual(pr, off) > 1e-2);
}

}  // TEST_SUITE
