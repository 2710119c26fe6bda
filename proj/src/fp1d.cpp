#include "levsim/fp1d.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace levsim {
namespace fp1d {

namespace {

using Quad = boost::math::quadrature::gauss_kronrod<double, 15>;

double c_of(const SystemParams& p, double x) {
    return 2.0 * p.gamma_g + 24.0 * p.gamma_f * x * x;
}

} // namespace

double drift_h(const SystemParams& p, double x) {
    if (x == 0.0) return 0.0;
    return -p.omega_z * p.omega_z * x / c_of(p, x);
}

double noise_g(const SystemParams& p, double x) {
    const auto d = derive_coefficients(p);
    const double x2 = x * x;
    return p.omega_z * std::sqrt(d.S() + 72.0 * p.Gamma_f * x2 * x2) / c_of(p, x);
}

double noise_g_prime(const SystemParams& p, double x) {
    const auto d = derive_coefficients(p);
    const double x2 = x * x;
    const double s4 = d.S() + 72.0 * p.Gamma_f * x2 * x2;
    // d/dx ln g = 144 Gamma_f x^3 / (S + 72 Gamma_f x^4) - 48 gamma_f x / c(x)
    const double dlng = 144.0 * p.Gamma_f * x2 * x / s4 -
                        48.0 * p.gamma_f * x / c_of(p, x);
    return noise_g(p, x) * dlng;
}

Distribution1D steady_state(const FP1DProblem& problem) {
    if (problem.n < 64)
        throw std::invalid_argument("fp1d grid size must be >= 64");
    if (!(problem.y_max > problem.y_min))
        throw std::invalid_argument("fp1d domain must be nonempty");
    const auto grid = linspace(problem.y_min, problem.y_max, problem.n);

    std::vector<double> d2(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        d2[i] = problem.D2(grid[i]);
        if (!(d2[i] > 0.0))
            throw std::runtime_error("fp1d: D2 must be positive on the grid");
    }

    auto ratio = [&](double y) { return problem.D1(y) / problem.D2(y); };
    std::vector<double> log_w(grid.size());
    double phi = 0.0;
    log_w[0] = -std::log(d2[0]);
    for (std::size_t i = 1; i < grid.size(); ++i) {
        phi += Quad::integrate(ratio, grid[i - 1], grid[i], 15, 1e-10);
        log_w[i] = phi - std::log(d2[i]);
    }

    const double m = *std::max_element(log_w.begin(), log_w.end());
    Distribution1D dist;
    dist.axis = problem.axis;
    dist.grid = grid;
    dist.density.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
        dist.density[i] = std::exp(log_w[i] - m);
    dist.normalize();
    return dist;
}

FP1DProblem overdamped_position_problem(const SystemParams& params,
                                        double x_max, std::size_t n) {
    if (!(params.gamma_g > 0.0))
        throw std::invalid_argument(
            "overdamped position problem requires gamma_g > 0 (c(0) > 0)");
    FP1DProblem pr;
    pr.axis = Axis::x;
    pr.y_min = -x_max;
    pr.y_max = x_max;
    pr.n = n;
    pr.D1 = [params](double x) {
        return drift_h(params, x) + noise_g(params, x) * noise_g_prime(params, x);
    };
    pr.D2 = [params](double x) {
        const double g = noise_g(params, x);
        return g * g;
    };
    return pr;
}

FP1DProblem energy_problem(const SystemParams& params, double eps_max,
                           std::size_t n, double eps_floor) {
    if (!(eps_floor > 0.0))
        throw std::invalid_argument("energy problem needs eps_floor > 0");
    const auto d = derive_coefficients(params);
    const double S = d.S();
    FP1DProblem pr;
    pr.axis = Axis::epsilon;
    pr.y_min = eps_floor;
    pr.y_max = eps_max;
    pr.n = n;
    pr.D1 = [params, S](double e) {
        return S - 2.0 * params.gamma_g * e - 12.0 * params.gamma_f * e * e;
    };
    pr.D2 = [S](double e) { return S * e; };
    return pr;
}

double flux_residual(const FP1DProblem& problem, const Distribution1D& dist) {
    const auto& y = dist.grid;
    const auto& w = dist.density;
    double max_flux = 0.0, max_scale = 0.0;
    for (std::size_t i = 0; i + 1 < y.size(); ++i) {
        const double ym = 0.5 * (y[i] + y[i + 1]);
        const double dy = y[i + 1] - y[i];
        const double drift = problem.D1(ym) * 0.5 * (w[i] + w[i + 1]);
        const double diff =
            (problem.D2(y[i + 1]) * w[i + 1] - problem.D2(y[i]) * w[i]) / dy;
        max_flux = std::max(max_flux, std::fabs(drift - diff));
        max_scale = std::max(max_scale, std::fabs(drift));
    }
    return max_scale > 0.0 ? max_flux / max_scale : max_flux;
}

} // namespace fp1d
} // namespace levsim
