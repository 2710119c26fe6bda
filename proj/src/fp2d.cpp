#include "levsim/fp2d.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "levsim/analytic.hpp"

namespace levsim {
namespace fp2d {

namespace {

// Monotonized-central slope: the Fromm centered slope on smooth data,
// bounded by twice the one-sided differences.  Far less dissipative at
// smooth peaks than minmod while still suppressing new extrema.
double mc_slope(double fwd, double bwd) {
    if (fwd * bwd <= 0.0) return 0.0;
    const double central = 0.5 * (fwd + bwd);
    const double bound = 2.0 * std::min(std::fabs(fwd), std::fabs(bwd));
    return std::copysign(std::min(std::fabs(central), bound), central);
}

// Second-order limited upwind advection at constant speed s > 0 along a
// contiguous line, zero flux through the end faces.  flux[] has n+1 faces.
void advect_line_pos(double* w, std::size_t n, double s, double dt, double dc,
                     double* flux) {
    const double nu = s * dt / dc;
    flux[0] = 0.0;
    flux[n] = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double fwd = w[i + 1] - w[i];
        const double bwd = i > 0 ? w[i] - w[i - 1] : 0.0;
        flux[i + 1] = s * (w[i] + 0.5 * (1.0 - nu) * mc_slope(fwd, bwd));
    }
    const double r = dt / dc;
    for (std::size_t i = 0; i < n; ++i) w[i] -= r * (flux[i + 1] - flux[i]);
}

// Explicit centered diffusion along a contiguous line, zero-flux ends.
void diffuse_line(double* w, std::size_t n, double D, double dt, double dc,
                  double* flux) {
    const double k = D / dc;
    flux[0] = 0.0;
    flux[n] = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) flux[i + 1] = -k * (w[i + 1] - w[i]);
    const double r = dt / dc;
    for (std::size_t i = 0; i < n; ++i) w[i] -= r * (flux[i + 1] - flux[i]);
}

double cc_delta(double w) {
    if (std::fabs(w) < 1e-5) return 0.5 + w / 12.0 - w * w * w / 720.0;
    return 1.0 / (-std::expm1(-w)) - 1.0 / w;
}

// Implicit (backward Euler) Chang-Cooper factorization of the momentum
// operator d/dp[(2 gamma_g + 24 gamma_f x^2) p W + (S + 72 Gamma_f x^4)
// dW/dp] for one column of fixed x.  The face weights reproduce the local
// Gaussian kernel exactly and give an M-matrix for any step size.
struct CCColumn {
    std::vector<double> lower, cp, invden;

    void build(double c, double D, const PhaseGrid& g, double dt) {
        const std::size_t n = g.np;
        std::vector<double> alpha(n - 1), beta(n - 1);
        for (std::size_t j = 0; j + 1 < n; ++j) {
            const double pf = g.p(j) + 0.5 * g.dp;
            const double u = -c * pf; // drift velocity in p
            const double w = u * g.dp / D;
            const double delta = cc_delta(w);
            alpha[j] = u * delta + D / g.dp;
            beta[j] = u * (1.0 - delta) - D / g.dp;
        }
        std::vector<double> diag(n), upper(n - 1);
        lower.assign(n, 0.0);
        const double r = dt / g.dp;
        for (std::size_t j = 0; j < n; ++j) {
            double d = 1.0;
            if (j + 1 < n) d += r * alpha[j];
            if (j > 0) d -= r * beta[j - 1];
            diag[j] = d;
            if (j + 1 < n) upper[j] = r * beta[j];
            if (j > 0) lower[j] = -r * alpha[j - 1];
        }
        cp.assign(n - 1, 0.0);
        invden.assign(n, 0.0);
        double den = diag[0];
        invden[0] = 1.0 / den;
        cp[0] = upper[0] * invden[0];
        for (std::size_t j = 1; j < n; ++j) {
            den = diag[j] - lower[j] * cp[j - 1];
            invden[j] = 1.0 / den;
            if (j + 1 < n) cp[j] = upper[j] * invden[j];
        }
    }

    void solve(double* b, std::size_t n, double* z) const {
        z[0] = b[0] * invden[0];
        for (std::size_t j = 1; j < n; ++j)
            z[j] = (b[j] - lower[j] * z[j - 1]) * invden[j];
        b[n - 1] = z[n - 1];
        for (std::size_t j = n - 1; j-- > 0;) b[j] = z[j] - cp[j] * b[j + 1];
    }
};

struct StepContext {
    SystemParams params;
    PhaseGrid grid;
    double dt = 0.0;
    double S = 0.0, D_q = 0.0;
    std::vector<CCColumn> cols; // one per column of the left half (+ center)
    std::vector<double> buf, buf2, flux;

    StepContext(const SystemParams& p, const PhaseGrid& g, double step_dt)
        : params(p), grid(g), dt(step_dt) {
        const auto d = derive_coefficients(p);
        S = d.S();
        D_q = d.D_q;
        const std::size_t half = (g.nx + 1) / 2;
        cols.resize(half);
        for (std::size_t i = 0; i < half; ++i) {
            const double x = g.x(i);
            const double c = 2.0 * p.gamma_g + 24.0 * p.gamma_f * x * x;
            const double D = S + 72.0 * p.Gamma_f * x * x * x * x;
            cols[i].build(c, D, g, dt);
        }
        const std::size_t m = std::max(g.nx, g.np);
        buf.resize(m);
        buf2.resize(m);
        flux.resize(m + 1);
    }

    // Mirrored lines are advected by reversing into the positive-speed
    // routine, which keeps the update bit-exactly parity symmetric.
    void advect_x(WignerField& f, double dt_a) {
        const std::size_t nx = grid.nx, np = grid.np;
        for (std::size_t j = 0; j < np; ++j) {
            const double v = params.omega_z * grid.p(j);
            if (v == 0.0) continue;
            double* w = f.values.data() + j;
            if (v > 0.0) {
                for (std::size_t i = 0; i < nx; ++i) buf[i] = w[i * np];
            } else {
                for (std::size_t i = 0; i < nx; ++i)
                    buf[i] = w[(nx - 1 - i) * np];
            }
            advect_line_pos(buf.data(), nx, std::fabs(v), dt_a, grid.dx,
                            flux.data());
            if (v > 0.0) {
                for (std::size_t i = 0; i < nx; ++i) w[i * np] = buf[i];
            } else {
                for (std::size_t i = 0; i < nx; ++i)
                    w[(nx - 1 - i) * np] = buf[i];
            }
        }
    }

    void advect_p(WignerField& f, double dt_a) {
        const std::size_t nx = grid.nx, np = grid.np;
        for (std::size_t i = 0; i < nx; ++i) {
            const double v = -params.omega_z * grid.x(i);
            if (v == 0.0) continue;
            double* w = f.values.data() + i * np;
            if (v > 0.0) {
                std::copy(w, w + np, buf.begin());
            } else {
                std::reverse_copy(w, w + np, buf.begin());
            }
            advect_line_pos(buf.data(), np, std::fabs(v), dt_a, grid.dp,
                            flux.data());
            if (v > 0.0) {
                std::copy(buf.begin(), buf.begin() + np, w);
            } else {
                std::reverse_copy(buf.begin(), buf.begin() + np, w);
            }
        }
    }

    void diffuse_x(WignerField& f, double dt_d) {
        if (D_q == 0.0) return;
        const std::size_t nx = grid.nx, np = grid.np;
        for (std::size_t j = 0; j < np; ++j) {
            double* w = f.values.data() + j;
            for (std::size_t i = 0; i < nx; ++i) buf[i] = w[i * np];
            diffuse_line(buf.data(), nx, D_q, dt_d, grid.dx, flux.data());
            for (std::size_t i = 0; i < nx; ++i) w[i * np] = buf[i];
        }
    }

    // Columns x and -x share one factorization; the mirror column is solved
    // on p-reversed data, which is the exact solve of the reflected matrix
    // and keeps parity bit-exact.  The self-mirrored center column is
    // symmetrized by averaging the two solve orientations.
    void cc_p(WignerField& f) {
        const std::size_t nx = grid.nx, np = grid.np;
        for (std::size_t i = 0; 2 * i + 1 <= nx; ++i) {
            const std::size_t im = nx - 1 - i;
            double* wl = f.values.data() + i * np;
            if (im == i) {
                // Self-mirrored column: average the two solve orientations
                // so a symmetric input stays symmetric to the last bit.
                std::reverse_copy(wl, wl + np, buf.begin());
                cols[i].solve(buf.data(), np, buf2.data());
                cols[i].solve(wl, np, buf2.data());
                for (std::size_t j = 0; j < np; ++j)
                    wl[j] = 0.5 * (wl[j] + buf[np - 1 - j]);
                continue;
            }
            cols[i].solve(wl, np, buf2.data());
            double* wr = f.values.data() + im * np;
            std::reverse_copy(wr, wr + np, buf.begin());
            cols[i].solve(buf.data(), np, buf2.data());
            std::reverse_copy(buf.begin(), buf.begin() + np, wr);
        }
    }

    void advance(WignerField& f, std::size_t n_steps) {
        for (std::size_t s = 0; s < n_steps; ++s) {
            advect_x(f, 0.5 * dt);
            diffuse_x(f, 0.5 * dt);
            advect_p(f, 0.5 * dt);
            cc_p(f);
            advect_p(f, 0.5 * dt);
            diffuse_x(f, 0.5 * dt);
            advect_x(f, 0.5 * dt);
            f.time += dt;
            for (double v : f.values)
                if (!std::isfinite(v)) {
                    std::ostringstream msg;
                    msg << "fp2d: non-finite field value at t=" << f.time;
                    throw std::runtime_error(msg.str());
                }
        }
    }
};

// Peak FWHM of a sampled density, linearly interpolating the half-maximum
// crossings around the global maximum.
double probe_fwhm(const std::vector<double>& x, const std::vector<double>& d) {
    std::size_t m = 0;
    for (std::size_t i = 1; i < d.size(); ++i)
        if (d[i] > d[m]) m = i;
    const double half = 0.5 * d[m];
    double lo = x.front(), hi = x.back();
    for (std::size_t i = m; i-- > 0;) {
        if (d[i] <= half) {
            const double t = (half - d[i]) / (d[i + 1] - d[i]);
            lo = x[i] + t * (x[i + 1] - x[i]);
            break;
        }
    }
    for (std::size_t i = m + 1; i < d.size(); ++i) {
        if (d[i] <= half) {
            const double t = (half - d[i - 1]) / (d[i] - d[i - 1]);
            hi = x[i - 1] + t * (x[i] - x[i - 1]);
            break;
        }
    }
    return hi - lo;
}

double steady_basis_variance(const SystemParams& params) {
    const auto d = derive_coefficients(params);
    double v = 0.0;
    try {
        v = analytic::steady_x2(params).exact;
    } catch (const std::exception&) {
        // No feedback-cooled fixed point (J <= 0): the steady state is the
        // gas equilibrium.
        if (params.gamma_g > 0.0) v = analytic::no_feedback_steady(params).a;
    }
    if (params.Gamma_f > 0.0) {
        try {
            v = std::max(v, analytic::x2_Wss(params));
        } catch (const std::exception&) {
        }
    }
    if (d.J > 0.0) v = std::max(v, std::sqrt(2.0 * d.S() / (3.0 * d.J)));
    return v;
}

// Narrowest predicted density feature for the chosen basis, as a FWHM.
double predicted_fwhm(const SystemParams& params, GridBasis basis,
                      double extent) {
    const double hot_sigma =
        params.gamma_g > 0.0
            ? std::sqrt(analytic::no_feedback_steady(params).b)
            : std::numeric_limits<double>::infinity();
    double hot = 2.3548 * hot_sigma;
    if (basis == GridBasis::Hot) return hot;

    double steady;
    if (params.gamma_f <= 0.0) {
        steady = hot;
    } else {
        const auto x2 = analytic::steady_x2(params);
        const auto regime = classify_regime(params, x2.exact);
        const auto grid = linspace(-extent, extent, 8193);
        try {
            const auto dist =
                regime.regime == Regime::LowDamping
                    ? analytic::position_dist_low_damping(params, grid)
                    : analytic::position_dist_overdamped(params, grid);
            steady = probe_fwhm(dist.grid, dist.density);
        } catch (const std::exception&) {
            steady = 2.3548 * std::sqrt(x2.exact);
        }
    }
    if (basis == GridBasis::Steady) return steady;
    return std::min(hot, steady);
}

} // namespace

double WignerField::mass() const {
    long double s = 0.0L;
    for (double v : values) s += v;
    return static_cast<double>(s) * grid.dx * grid.dp;
}

double grid_extent(const SystemParams& params, const GridSpec& spec) {
    validate(params);
    double var = 0.0;
    const bool want_hot = spec.basis != GridBasis::Steady;
    const bool want_steady = spec.basis != GridBasis::Hot;
    if (want_hot && params.gamma_g > 0.0)
        var = std::max(var, analytic::no_feedback_steady(params).a);
    if (want_steady) var = std::max(var, steady_basis_variance(params));
    if (!(var > 0.0))
        throw std::invalid_argument("grid_extent: no usable variance estimate");
    return spec.span_sigmas * std::sqrt(var);
}

PhaseGrid build_grid(const SystemParams& params, const GridSpec& spec) {
    if (spec.nx < 16 || spec.np < 16)
        throw std::invalid_argument("build_grid: need nx, np >= 16");
    if (!(spec.span_sigmas >= 4.0))
        throw std::invalid_argument("build_grid: need span_sigmas >= 4");
    const double ext = grid_extent(params, spec);
    PhaseGrid g;
    g.nx = spec.nx;
    g.np = spec.np;
    g.x_max = ext;
    g.p_max = ext;
    g.dx = 2.0 * ext / static_cast<double>(spec.nx - 1);
    g.dp = 2.0 * ext / static_cast<double>(spec.np - 1);

    const double fwhm = predicted_fwhm(params, spec.basis, ext);
    const double cells = fwhm / std::max(g.dx, g.dp);
    if (cells < 8.0) {
        std::ostringstream msg;
        msg << "build_grid: predicted peak FWHM " << fwhm << " spans only "
            << cells << " cells (need >= 8); refine the grid or change basis";
        throw std::invalid_argument(msg.str());
    }
    return g;
}

WignerField init_thermal(const PhaseGrid& grid, double n0) {
    if (n0 < 0.0) throw std::invalid_argument("init_thermal: n0 must be >= 0");
    const double var = n0 + 0.5;
    const double outside =
        1.0 - std::erf(grid.x_max / std::sqrt(2.0 * var)) *
                  std::erf(grid.p_max / std::sqrt(2.0 * var));
    if (outside > 1e-6) {
        std::ostringstream msg;
        msg << "init_thermal: Gaussian mass outside grid = " << outside
            << " (> 1e-6); enlarge the box";
        throw std::invalid_argument(msg.str());
    }
    WignerField f;
    f.grid = grid;
    f.values.resize(grid.size());
    const double inv2v = 0.5 / var;
    for (std::size_t i = 0; i < grid.nx; ++i) {
        const double x = grid.x(i);
        for (std::size_t j = 0; j < grid.np; ++j) {
            const double p = grid.p(j);
            f.at(i, j) = std::exp(-(x * x + p * p) * inv2v);
        }
    }
    const double m = f.mass();
    for (auto& v : f.values) v /= m;
    return f;
}

double stable_dt(const SystemParams& params, const PhaseGrid& grid) {
    const auto d = derive_coefficients(params);
    double dt = grid.dx / (params.omega_z * grid.p_max);
    dt = std::min(dt, grid.dp / (params.omega_z * grid.x_max));
    if (d.D_q > 0.0) dt = std::min(dt, grid.dx * grid.dx / (2.0 * d.D_q));
    return 0.5 * dt;
}

Fp2dMoments moments(const WignerField& field) {
    const auto& g = field.grid;
    long double x2 = 0, p2 = 0, xp = 0, x3p = 0, x4 = 0, x5p = 0, x6 = 0,
                n2i = 0, mass = 0;
    for (std::size_t i = 0; i < g.nx; ++i) {
        const double x = g.x(i);
        const double xx = x * x;
        for (std::size_t j = 0; j < g.np; ++j) {
            const double w = field.at(i, j);
            const double p = g.p(j);
            const double pp = p * p;
            mass += w;
            x2 += w * xx;
            p2 += w * pp;
            xp += w * x * p;
            x3p += w * xx * x * p;
            x4 += w * xx * xx;
            x5p += w * xx * xx * x * p;
            x6 += w * xx * xx * xx;
            const double eps = 0.5 * (xx + pp);
            n2i += w * (eps * eps - eps);
        }
    }
    const double cell = g.dx * g.dp;
    const double m = static_cast<double>(mass) * cell;
    Fp2dMoments out;
    out.m.x2 = static_cast<double>(x2) * cell / m;
    out.m.p2 = static_cast<double>(p2) * cell / m;
    out.m.xp = static_cast<double>(xp) * cell / m;
    out.m.x3p = static_cast<double>(x3p) * cell / m;
    out.m.x4 = static_cast<double>(x4) * cell / m;
    out.m.x5p = static_cast<double>(x5p) * cell / m;
    out.m.x6 = static_cast<double>(x6) * cell / m;
    out.n = 0.5 * (out.m.x2 + out.m.p2) - 0.5;
    out.n2 = static_cast<double>(n2i) * cell / m;
    out.g2 = (out.n2 - out.n) / (out.n * out.n);
    return out;
}

Distribution1D marginal(const WignerField& field, Axis axis) {
    const auto& g = field.grid;
    Distribution1D dist;
    dist.axis = axis;
    if (axis == Axis::x) {
        dist.grid.resize(g.nx);
        dist.density.assign(g.nx, 0.0);
        for (std::size_t i = 0; i < g.nx; ++i) {
            dist.grid[i] = g.x(i);
            long double s = 0.0L;
            for (std::size_t j = 0; j < g.np; ++j) s += field.at(i, j);
            dist.density[i] = static_cast<double>(s) * g.dp;
        }
    } else if (axis == Axis::p) {
        dist.grid.resize(g.np);
        dist.density.assign(g.np, 0.0);
        for (std::size_t j = 0; j < g.np; ++j) {
            dist.grid[j] = g.p(j);
            long double s = 0.0L;
            for (std::size_t i = 0; i < g.nx; ++i) s += field.at(i, j);
            dist.density[j] = static_cast<double>(s) * g.dx;
        }
    } else {
        // Deposit each cell's mass linearly onto the two bracketing energy
        // nodes: this keeps the trapezoid integral and the first moment of
        // the marginal exactly equal to the field's mass and mean energy.
        const double r_box = std::min(g.x_max, g.p_max);
        const double de = 0.5 * std::max(g.dx, g.dp) * r_box;
        const double e_corner = 0.5 * (g.x_max * g.x_max + g.p_max * g.p_max);
        const std::size_t nb =
            static_cast<std::size_t>(std::ceil(e_corner / de)) + 2;
        std::vector<double> massb(nb, 0.0);
        for (std::size_t i = 0; i < g.nx; ++i) {
            const double x = g.x(i);
            for (std::size_t j = 0; j < g.np; ++j) {
                const double p = g.p(j);
                const double eps = 0.5 * (x * x + p * p);
                auto b = static_cast<std::size_t>(eps / de);
                b = std::min(b, nb - 2);
                const double f = eps / de - static_cast<double>(b);
                massb[b] += field.at(i, j) * (1.0 - f);
                massb[b + 1] += field.at(i, j) * f;
            }
        }
        dist.grid.resize(nb);
        dist.density.resize(nb);
        const double cell = g.dx * g.dp;
        for (std::size_t b = 0; b < nb; ++b) {
            dist.grid[b] = static_cast<double>(b) * de;
            const double w = (b == 0 || b == nb - 1) ? 0.5 : 1.0;
            dist.density[b] = massb[b] * cell / (de * w);
        }
    }
    dist.normalize();
    return dist;
}

void step(WignerField& field, const SystemParams& params, double dt) {
    validate(params);
    const double lim = stable_dt(params, field.grid);
    if (dt > lim * (1.0 + 1e-12)) {
        std::ostringstream msg;
        msg << "fp2d::step: dt=" << dt << " exceeds stability limit " << lim;
        throw std::invalid_argument(msg.str());
    }
    StepContext ctx(params, field.grid, dt);
    ctx.advance(field, 1);
}

std::vector<MomentRecord> evolve(WignerField& field, const SystemParams& params,
                                 double t_end,
                                 const std::vector<double>& sample_times,
                                 double dt) {
    validate(params);
    if (t_end < field.time)
        throw std::invalid_argument("fp2d::evolve: t_end before field time");
    const double lim = stable_dt(params, field.grid);
    if (dt <= 0.0) dt = lim;
    if (dt > lim * (1.0 + 1e-12))
        throw std::invalid_argument("fp2d::evolve: dt exceeds stability limit");
    for (std::size_t k = 1; k < sample_times.size(); ++k)
        if (!(sample_times[k] > sample_times[k - 1]))
            throw std::invalid_argument("fp2d::evolve: sample times must rise");

    StepContext ctx(params, field.grid, dt);
    std::vector<MomentRecord> records;
    std::size_t next = 0;
    while (next < sample_times.size() && sample_times[next] <= field.time) {
        records.push_back({field.time, moments(field)});
        ++next;
    }
    while (field.time < t_end - 0.5 * dt) {
        ctx.advance(field, 1);
        while (next < sample_times.size() &&
               field.time >= sample_times[next] - 0.5 * dt) {
            records.push_back({field.time, moments(field)});
            ++next;
        }
    }
    return records;
}

SteadyStateReport evolve_to_steady(WignerField& field,
                                   const SystemParams& params, double tol,
                                   double t_check, double max_time, double dt) {
    validate(params);
    if (!(tol > 0.0))
        throw std::invalid_argument("fp2d::evolve_to_steady: tol must be > 0");
    if (t_check <= 0.0) t_check = 10.0 * 2.0 * M_PI / params.omega_z;
    if (max_time <= 0.0) max_time = 500.0 * t_check;
    const double lim = stable_dt(params, field.grid);
    if (dt <= 0.0) dt = lim;
    if (dt > lim * (1.0 + 1e-12))
        throw std::invalid_argument(
            "fp2d::evolve_to_steady: dt exceeds stability limit");

    StepContext ctx(params, field.grid, dt);
    const auto steps_per_window =
        static_cast<std::size_t>(std::ceil(t_check / dt - 1e-9));
    const double window = static_cast<double>(steps_per_window) * dt;
    const double cell = field.grid.dx * field.grid.dp;

    SteadyStateReport rep;
    std::vector<double> prev;
    const double t_start = field.time;
    while (field.time - t_start < max_time - 0.5 * dt) {
        prev = field.values;
        ctx.advance(field, steps_per_window);
        ++rep.iterations;
        long double diff = 0.0L;
        for (std::size_t k = 0; k < prev.size(); ++k)
            diff += std::fabs(field.values[k] - prev[k]);
        rep.residual = static_cast<double>(diff) * cell / window;
        rep.final_time = field.time;
        if (rep.residual < tol) {
            rep.converged = true;
            break;
        }
    }
    rep.final_time = field.time;
    if (rep.converged) {
        const double br = boundary_ratio(field);
        if (br > 1e-10)
            std::fprintf(stderr,
                         "warning: fp2d steady field boundary density %.3g of "
                         "max exceeds 1e-10; enlarge the box\n",
                         br);
    }
    return rep;
}

double boundary_ratio(const WignerField& field) {
    const auto& g = field.grid;
    double peak = 0.0;
    for (double v : field.values) peak = std::max(peak, std::fabs(v));
    double edge = 0.0;
    for (std::size_t i = 0; i < g.nx; ++i) {
        edge = std::max(edge, std::fabs(field.at(i, 0)));
        edge = std::max(edge, std::fabs(field.at(i, g.np - 1)));
    }
    for (std::size_t j = 0; j < g.np; ++j) {
        edge = std::max(edge, std::fabs(field.at(0, j)));
        edge = std::max(edge, std::fabs(field.at(g.nx - 1, j)));
    }
    return peak > 0.0 ? edge / peak : 0.0;
}

} // namespace fp2d
} // namespace levsim
