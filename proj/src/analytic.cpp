#include "levsim/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <gsl/gsl_sf_bessel.h>
#include <gsl/gsl_sf_gamma.h>

namespace levsim {
namespace analytic {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Exponentiates log-density values after subtracting their maximum, then
// trapezoid-normalizes; the standard guard against the huge exponents in the
// closed forms.
Distribution1D from_log_density(Axis axis, const std::vector<double>& grid,
                                std::vector<double>&& log_w) {
    const double m = *std::max_element(log_w.begin(), log_w.end());
    if (!std::isfinite(m))
        throw std::runtime_error("log-density has no finite maximum");
    Distribution1D d;
    d.axis = axis;
    d.grid = grid;
    d.density.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
        d.density[i] = std::exp(log_w[i] - m);
    d.normalize();
    return d;
}

} // namespace

GaussianSteadyState no_feedback_steady(const SystemParams& params) {
    if (!(params.gamma_g > 0.0))
        throw std::domain_error("no_feedback_steady requires gamma_g > 0");
    const auto d = derive_coefficients(params);
    const double S = d.S();
    const double w2 = params.omega_z * params.omega_z;
    GaussianSteadyState g;
    g.b = (S + d.D_q) / (2.0 * params.gamma_g);
    g.a = g.b + 2.0 * params.gamma_g * d.D_q / w2;
    g.c = -d.D_q / params.omega_z;
    g.x2 = g.a;
    g.p2 = g.b;
    g.xp = g.c;
    g.n_ss = 0.5 * (g.x2 + g.p2) - 0.5;
    return g;
}

SteadyX2 steady_x2(const SystemParams& params) {
    const auto d = derive_coefficients(params);
    if (!(d.J > 0.0)) throw std::domain_error("steady_x2 requires J > 0");
    const double S = d.S();
    SteadyX2 r;
    r.exact = (-params.gamma_g +
               std::sqrt(params.gamma_g * params.gamma_g + 2.0 * d.J * S)) /
              (2.0 * d.J);
    r.approx = std::sqrt(S / (2.0 * d.J));
    r.approx_valid = d.J * params.N_0 > 100.0 * params.gamma_g;
    return r;
}

double steady_n(const SystemParams& params) {
    return steady_x2(params).approx - 0.5;
}

double cooling_time_tau(const SystemParams& params) {
    const auto d = derive_coefficients(params);
    const double S = d.S();
    const double a = 2.0 * d.J + 2.0 * params.gamma_g;
    const double radicand = a * a + 8.0 * d.J * (S - 0.5 * d.J);
    if (radicand < 0.0)
        throw std::domain_error("cooling_time_tau: negative radicand");
    return 2.0 * std::sqrt(radicand);
}

Distribution1D energy_dist_low_damping(const SystemParams& params,
                                       const std::vector<double>& eps_grid) {
    const auto d = derive_coefficients(params);
    const double S = d.S();
    std::vector<double> log_w(eps_grid.size());
    for (std::size_t i = 0; i < eps_grid.size(); ++i) {
        const double e = eps_grid[i];
        if (e < 0.0) throw std::invalid_argument("energy grid must be >= 0");
        log_w[i] = -(2.0 * params.gamma_g * e + 6.0 * params.gamma_f * e * e) / S;
    }
    return from_log_density(Axis::epsilon, eps_grid, std::move(log_w));
}

Distribution1D position_dist_low_damping(const SystemParams& params,
                                         const std::vector<double>& x_grid) {
    const auto d = derive_coefficients(params);
    const double S = d.S();
    std::vector<double> log_w(x_grid.size());
    if (params.gamma_f <= 0.0) {
        // Feedback-off limit of the closed form: Gaussian of variance S/(2*gamma_g).
        if (!(params.gamma_g > 0.0))
            throw std::domain_error("position_dist_low_damping needs gamma_f or gamma_g > 0");
        for (std::size_t i = 0; i < x_grid.size(); ++i)
            log_w[i] = -params.gamma_g * x_grid[i] * x_grid[i] / S;
        return from_log_density(Axis::x, x_grid, std::move(log_w));
    }
    for (std::size_t i = 0; i < x_grid.size(); ++i) {
        const double x = x_grid[i];
        const double u = 3.0 * x * x * params.gamma_f + params.gamma_g;
        const double z = u * u / (12.0 * params.gamma_f * S);
        if (z < 1e-12) {
            // K_{1/4}(z) ~ Gamma(1/4)/2 * (2/z)^{1/4}: the z^{1/4} prefactor
            // cancels and the density approaches a finite constant.
            log_w[i] = 0.25 * std::log(24.0 * params.gamma_f * S) +
                       gsl_sf_lngamma(0.25) - std::log(2.0);
        } else {
            log_w[i] = 0.5 * std::log(u) - z + gsl_sf_bessel_lnKnu(0.25, z);
        }
    }
    return from_log_density(Axis::x, x_grid, std::move(log_w));
}

Distribution1D position_dist_overdamped(const SystemParams& params,
                                        const std::vector<double>& x_grid,
                                        OverdampedForm form) {
    const auto d = derive_coefficients(params);
    if (!(d.J > 0.0))
        throw std::domain_error("position_dist_overdamped requires J > 0");
    if (!(params.Gamma_f > 0.0))
        throw std::domain_error("position_dist_overdamped requires Gamma_f > 0");
    const double S = d.S();
    const double q = (params.gamma_f + 6.0 * params.Gamma_f) / (12.0 * params.Gamma_f);
    std::vector<double> log_w(x_grid.size());
    for (std::size_t i = 0; i < x_grid.size(); ++i) {
        const double x = x_grid[i];
        const double x2 = x * x;
        const double tail = -q * std::log(S + 72.0 * params.Gamma_f * x2 * x2);
        if (form == OverdampedForm::Simplified) {
            log_w[i] = x2 > 0.0
                           ? std::log(12.0 * params.gamma_f * x2) + tail
                           : kNegInf;
        } else {
            const double arctan_arg =
                6.0 * std::sqrt(2.0) * x2 * std::sqrt(params.Gamma_f / S);
            const double E = params.gamma_g /
                             (6.0 * std::sqrt(2.0 * params.Gamma_f * S)) *
                             std::atan(arctan_arg);
            log_w[i] = std::log(params.gamma_g + 12.0 * params.gamma_f * x2) +
                       tail - E;
        }
    }
    return from_log_density(Axis::x, x_grid, std::move(log_w));
}

PeakPair peak_positions(const SystemParams& params) {
    const auto d = derive_coefficients(params);
    if (!(d.J > 0.0)) throw std::domain_error("peak_positions requires J > 0");
    const double xp = std::pow(d.S() / (2.0 * d.J), 0.25);
    return PeakPair{-xp, xp};
}

double x2_Wss(const SystemParams& params) {
    const auto d = derive_coefficients(params);
    if (!(params.Gamma_f > 0.0))
        throw std::domain_error("x2_Wss requires Gamma_f > 0");
    const double m = params.gamma_f / (12.0 * params.Gamma_f);
    if (!(m > 0.75))
        throw std::domain_error("x2_Wss requires gamma_f/(12*Gamma_f) > 3/4");
    const double log_ratio = gsl_sf_lngamma(1.25) + gsl_sf_lngamma(m - 0.75) -
                             gsl_sf_lngamma(0.75) - gsl_sf_lngamma(m - 0.25);
    return std::sqrt(d.S() / (72.0 * params.Gamma_f)) * std::exp(log_ratio);
}

MomentumOverdamped momentum_dist_overdamped(const SystemParams& params,
                                            const std::vector<double>& p_grid) {
    const auto d = derive_coefficients(params);
    if (!(d.J > 0.0))
        throw std::domain_error("momentum_dist_overdamped requires J > 0");
    MomentumOverdamped r;
    r.p2_Wss = std::sqrt(d.S() / (1.5 * d.J));
    r.p4_Wss = 3.0 * r.p2_Wss * r.p2_Wss;
    std::vector<double> log_w(p_grid.size());
    for (std::size_t i = 0; i < p_grid.size(); ++i)
        log_w[i] = -p_grid[i] * p_grid[i] / (2.0 * r.p2_Wss);
    r.dist = from_log_density(Axis::p, p_grid, std::move(log_w));
    return r;
}

PhononStats phonon_stats_overdamped(const SystemParams& params) {
    const auto d = derive_coefficients(params);
    if (!(d.J > 0.0))
        throw std::domain_error("phonon_stats_overdamped requires J > 0");
    const double S = d.S();
    PhononStats s;
    s.n_Wss = 2.5 / std::sqrt(3.0) * std::sqrt(S / (2.0 * d.J)) - 0.5;
    s.n2_Wss = (17.0 / 8.0) * (S / d.J) -
               2.5 / std::sqrt(3.0) * std::sqrt(S / (2.0 * d.J));
    s.g2 = (s.n2_Wss - s.n_Wss) / (s.n_Wss * s.n_Wss);
    return s;
}

PotentialCurve potential_from_density(const Distribution1D& dist) {
    constexpr double kFloor = 1e-300;
    PotentialCurve p;
    p.axis = dist.axis;
    p.grid = dist.grid;
    p.U.resize(dist.density.size());
    for (std::size_t i = 0; i < dist.density.size(); ++i) {
        double w = dist.density[i];
        if (w < kFloor) {
            w = kFloor;
            ++p.clipped;
        }
        p.U[i] = -std::log(w);
    }
    const double u_min = *std::min_element(p.U.begin(), p.U.end());
    for (double& u : p.U) u -= u_min;
    return p;
}

} // namespace analytic
} // namespace levsim
