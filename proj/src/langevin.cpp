#include "levsim/langevin.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <mutex>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "levsim/fp1d.hpp"

namespace levsim {
namespace langevin {

namespace {

constexpr double kKick = 0.1; // fractional noise/drift resolution per substep

std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::uint64_t trajectory_seed(std::uint64_t master, std::size_t idx) {
    return splitmix64(master ^ splitmix64(static_cast<std::uint64_t>(idx) + 1));
}

struct Scales {
    double x_peak = 0.0;   // analytic peak position scale (0 if monostable)
    double x_rms = 0.0;    // sqrt of self-consistent steady x^2
    double p_rms = 0.0;
    double c_typ = 0.0;    // relaxation rate at the typical displacement
};

Scales make_scales(const SystemParams& params) {
    const auto d = derive_coefficients(params);
    Scales s;
    const auto ss = moments::steady_moments(params);
    s.x_rms = std::sqrt(ss.state.x2);
    s.p_rms = ss.state.p2 > 0.0 ? std::sqrt(ss.state.p2) : s.x_rms;
    if (params.gamma_f > 0.0)
        s.x_peak = std::pow(d.S() / (12.0 * params.gamma_f), 0.25);
    const double x_chk = std::max(s.x_peak, s.x_rms);
    s.c_typ = 2.0 * params.gamma_g + 24.0 * params.gamma_f * x_chk * x_chk;
    return s;
}

void validate_config(const SdeConfig& cfg) {
    if (cfg.n_traj < 1)
        throw std::invalid_argument("langevin: n_traj must be >= 1");
    if (!(cfg.dt > 0.0))
        throw std::invalid_argument("langevin: dt must be positive");
    if (!(cfg.t_end > cfg.burn_in) || cfg.burn_in < 0.0)
        throw std::invalid_argument("langevin: need 0 <= burn_in < t_end");
}

struct RecordingPlan {
    std::size_t n_steps = 0;
    std::size_t stride = 1;
    std::vector<double> times;
    std::size_t first_recorded_step = 0;
};

RecordingPlan plan_recording(const SdeConfig& cfg) {
    RecordingPlan plan;
    plan.n_steps = static_cast<std::size_t>(std::ceil(cfg.t_end / cfg.dt - 1e-9));
    std::size_t stride = cfg.stride;
    if (stride == 0) {
        const double recorded_span = cfg.t_end - cfg.burn_in;
        const double per_traj =
            static_cast<double>(cfg.max_samples) / static_cast<double>(cfg.n_traj);
        stride = static_cast<std::size_t>(
            std::ceil(recorded_span / cfg.dt / std::max(per_traj, 1.0)));
        stride = std::max<std::size_t>(stride, 1);
    }
    plan.stride = stride;
    for (std::size_t k = stride; k <= plan.n_steps; k += stride) {
        const double t = static_cast<double>(k) * cfg.dt;
        if (t >= cfg.burn_in - 1e-12) {
            if (plan.times.empty()) plan.first_recorded_step = k;
            plan.times.push_back(t);
        }
    }
    if (plan.times.empty())
        throw std::invalid_argument(
            "langevin: no samples recorded (stride too coarse for t_end - burn_in)");
    if (plan.times.size() * cfg.n_traj > cfg.max_samples)
        throw std::invalid_argument(
            "langevin: requested sample count exceeds max_samples; "
            "increase stride or lower t_end");
    return plan;
}

// Tabulated noise coordinate y = F(x), F' = 1/g, on a uniform x grid.
// In y the Stratonovich equation reads dy = (h/g) dt + dW with a bounded
// smooth drift, so a Heun step stays accurate through the origin where g
// itself diverges like 1/(2 gamma_g).
struct NoiseMap {
    double x_form = 0.0; // table half-width
    double x_hand = 0.0; // switch to x-space stepping beyond this
    double dx = 0.0;
    std::vector<double> xs, ys, slopes; // slopes = F'(x) = 1/g

    bool active() const { return !xs.empty(); }

    double forward(double x) const {
        const double u = (x - xs.front()) / dx;
        std::size_t i = static_cast<std::size_t>(u);
        i = std::min(i, xs.size() - 2);
        const double t = (x - xs[i]) / dx;
        const double h00 = (1 + 2 * t) * (1 - t) * (1 - t);
        const double h10 = t * (1 - t) * (1 - t);
        const double h01 = t * t * (3 - 2 * t);
        const double h11 = t * t * (t - 1);
        return h00 * ys[i] + h10 * dx * slopes[i] + h01 * ys[i + 1] +
               h11 * dx * slopes[i + 1];
    }

    // Monotone inverse: bracket by node search, then bisection-safeguarded
    // Newton on the Hermite interpolant.
    double inverse(double y, bool& overflow) const {
        if (y <= ys.front()) { overflow = y < ys.front(); return xs.front(); }
        if (y >= ys.back()) { overflow = y > ys.back(); return xs.back(); }
        overflow = false;
        const auto it = std::upper_bound(ys.begin(), ys.end(), y);
        std::size_t i = static_cast<std::size_t>(it - ys.begin()) - 1;
        double lo = xs[i], hi = xs[i + 1];
        double x = lo + (hi - lo) * (y - ys[i]) / (ys[i + 1] - ys[i]);
        for (int iter = 0; iter < 80; ++iter) {
            const double f = forward(x) - y;
            if (f > 0.0) hi = x; else lo = x;
            const double t = (x - xs[i]) / dx;
            const double d = slopes[i] * (1 - t) * (1 - 3 * t) +
                             slopes[i + 1] * t * (3 * t - 2) +
                             6.0 * t * (1 - t) * (ys[i + 1] - ys[i]) / dx;
            double xn = d > 0.0 ? x - f / d : 0.5 * (lo + hi);
            if (!(xn > lo) || !(xn < hi)) xn = 0.5 * (lo + hi);
            if (std::fabs(xn - x) < 1e-14 * (std::fabs(x) + dx)) return xn;
            x = xn;
        }
        return x;
    }
};

NoiseMap build_noise_map(const SystemParams& params, const Scales& sc) {
    NoiseMap map;
    if (!(params.gamma_f > 0.0)) return map; // additive noise: not needed
    map.x_form = 2.2 * std::max(sc.x_peak, sc.x_rms);
    map.x_hand = 0.85 * map.x_form;
    const std::size_t n = 16385;
    map.xs = linspace(-map.x_form, map.x_form, n);
    map.dx = map.xs[1] - map.xs[0];
    map.ys.resize(n);
    map.slopes.resize(n);
    auto fp = [&](double x) { return 1.0 / fp1d::noise_g(params, x); };
    for (std::size_t i = 0; i < n; ++i) map.slopes[i] = fp(map.xs[i]);
    using Quad = boost::math::quadrature::gauss_kronrod<double, 15>;
    map.ys[0] = 0.0;
    for (std::size_t i = 1; i < n; ++i)
        map.ys[i] = map.ys[i - 1] +
                    Quad::integrate(fp, map.xs[i - 1], map.xs[i], 10, 1e-12);
    const double mid = map.forward(0.0);
    for (auto& v : map.ys) v -= mid; // F(0) = 0
    return map;
}

struct RunOutcome {
    std::vector<std::vector<double>> x, p;
    std::vector<std::uint64_t> seeds;
    std::vector<std::size_t> divergent;
};

template <typename StepTraj>
RunOutcome run_trajectories(const SdeConfig& cfg, const RecordingPlan& plan,
                            StepTraj&& step_traj) {
    RunOutcome out;
    out.x.assign(cfg.n_traj, {});
    out.p.assign(cfg.n_traj, {});
    out.seeds.resize(cfg.n_traj);
    std::vector<char> bad(cfg.n_traj, 0);
    for (std::size_t i = 0; i < cfg.n_traj; ++i)
        out.seeds[i] = trajectory_seed(cfg.seed, i);

    auto work = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i)
            bad[i] = step_traj(i, out.seeds[i], out.x[i], out.p[i]) ? 0 : 1;
    };
    const unsigned nt = std::max(1u, cfg.n_threads);
    if (nt == 1 || cfg.n_traj < 2) {
        work(0, cfg.n_traj);
    } else {
        std::vector<std::thread> pool;
        const std::size_t chunk = (cfg.n_traj + nt - 1) / nt;
        for (unsigned t = 0; t < nt; ++t) {
            const std::size_t b = t * chunk;
            if (b >= cfg.n_traj) break;
            pool.emplace_back(work, b, std::min(cfg.n_traj, b + chunk));
        }
        for (auto& th : pool) th.join();
    }

    RunOutcome kept;
    kept.seeds = out.seeds;
    for (std::size_t i = 0; i < cfg.n_traj; ++i) {
        if (bad[i]) {
            kept.divergent.push_back(i);
        } else {
            kept.x.push_back(std::move(out.x[i]));
            kept.p.push_back(std::move(out.p[i]));
        }
    }
    if (static_cast<double>(kept.divergent.size()) >
        1e-3 * static_cast<double>(cfg.n_traj)) {
        std::ostringstream msg;
        msg << "langevin: " << kept.divergent.size() << " of " << cfg.n_traj
            << " trajectories diverged (> 0.1% policy)";
        throw std::runtime_error(msg.str());
    }
    (void)plan;
    return kept;
}

} // namespace

double default_burn_in(const SystemParams& params, double x2_ss) {
    const double c = 2.0 * params.gamma_g + 24.0 * params.gamma_f * x2_ss;
    const double trap_period = 2.0 * M_PI / params.omega_z;
    return 10.0 * std::max(c > 0.0 ? 1.0 / c : trap_period, trap_period);
}

TrajectoryEnsemble simulate_full(const SystemParams& params,
                                 const SdeConfig& config) {
    validate(params);
    validate_config(config);
    if (config.dt > 0.05 / params.omega_z + 1e-15)
        throw std::invalid_argument(
            "simulate_full: dt must satisfy dt <= 0.05/omega_z");
    const auto d = derive_coefficients(params);
    const auto plan = plan_recording(config);

    const double sig_x = std::sqrt(2.0 * d.D_q * config.dt);
    const double two_s = 2.0 * d.S();

    double x_scale = 1.0, p_scale = 1.0;
    std::function<std::pair<double, double>(std::size_t, std::mt19937_64&)>
        make_init;
    if (config.init) {
        make_init = [&](std::size_t i, std::mt19937_64&) {
            return config.init(i);
        };
    } else {
        const auto sc = make_scales(params);
        x_scale = std::max({sc.x_rms, sc.x_peak, 1.0});
        p_scale = std::max(sc.p_rms, 1.0);
        make_init = [x_scale, p_scale](std::size_t, std::mt19937_64& eng) {
            std::normal_distribution<double> nd;
            return std::make_pair(x_scale * nd(eng), p_scale * nd(eng));
        };
    }
    const double thr = config.divergence_threshold > 0.0
                           ? config.divergence_threshold
                           : 1e3 * std::max(x_scale, p_scale);

    auto step_traj = [&](std::size_t idx, std::uint64_t seed,
                         std::vector<double>& xs, std::vector<double>& ps) {
        std::mt19937_64 eng(seed);
        std::normal_distribution<double> nd;
        auto [x, p] = make_init(idx, eng);
        xs.reserve(plan.times.size());
        ps.reserve(plan.times.size());
        std::size_t rec = 0;
        for (std::size_t k = 1; k <= plan.n_steps; ++k) {
            const double x2 = x * x;
            const double sig_p =
                std::sqrt((two_s + 144.0 * params.Gamma_f * x2 * x2) * config.dt);
            const double xn = x + params.omega_z * p * config.dt +
                              (sig_x > 0.0 ? sig_x * nd(eng) : 0.0);
            const double pn =
                p +
                (-params.omega_z * x - 2.0 * params.gamma_g * p -
                 24.0 * params.gamma_f * x2 * p) *
                    config.dt +
                (sig_p > 0.0 ? sig_p * nd(eng) : 0.0);
            x = xn;
            p = pn;
            if (!std::isfinite(x) || !std::isfinite(p) || std::fabs(x) > thr ||
                std::fabs(p) > thr)
                return false;
            if (rec < plan.times.size() && k % plan.stride == 0 &&
                static_cast<double>(k) * config.dt >= config.burn_in - 1e-12) {
                xs.push_back(x);
                ps.push_back(p);
                ++rec;
            }
        }
        return true;
    };

    auto kept = run_trajectories(config, plan, step_traj);
    TrajectoryEnsemble ens;
    ens.mode = SdeMode::Full2D;
    ens.times = plan.times;
    ens.x = std::move(kept.x);
    ens.p = std::move(kept.p);
    ens.seeds = std::move(kept.seeds);
    ens.divergent = std::move(kept.divergent);
    ens.n_requested = config.n_traj;
    return ens;
}

TrajectoryEnsemble simulate_overdamped(const SystemParams& params,
                                       const SdeConfig& config) {
    validate(params);
    validate_config(config);
    // The position-space noise amplitude goes as 1/(2 gamma_g + 24 gamma_f
    // x^2) and is singular at the origin without gas damping.
    if (!(params.gamma_g > 0.0))
        throw std::invalid_argument("simulate_overdamped requires gamma_g > 0");
    const auto sc = make_scales(params);
    if (config.dt > 0.1 / sc.c_typ + 1e-15)
        throw std::invalid_argument(
            "simulate_overdamped: dt must satisfy dt <= 0.1/(2 gamma_g + 24 "
            "gamma_f x2_ss)");
    {
        const double gamma_eff = sc.c_typ / params.omega_z;
        if (gamma_eff < 1.0)
            std::fprintf(stderr,
                         "warning: simulate_overdamped outside overdamped "
                         "regime (gamma_eff ratio %.3g < 1)\n",
                         gamma_eff);
    }
    const auto plan = plan_recording(config);
    const auto map =
        config.scheme == OverdampedScheme::StratonovichHeun
            ? build_noise_map(params, sc)
            : NoiseMap{};

    const double thr = config.divergence_threshold > 0.0
                           ? config.divergence_threshold
                           : 1e3 * std::max({sc.x_peak, sc.x_rms, 1.0});
    const double x_jitter = 0.2 * std::max(sc.x_peak, sc.x_rms);

    auto h = [&](double x) { return fp1d::drift_h(params, x); };
    auto g = [&](double x) { return fp1d::noise_g(params, x); };
    auto gp = [&](double x) { return fp1d::noise_g_prime(params, x); };
    auto c_of = [&](double x) {
        return 2.0 * params.gamma_g + 24.0 * params.gamma_f * x * x;
    };
    const auto d = derive_coefficients(params);
    const double S = d.S();
    auto drift_y = [&](double x) {
        const double x2 = x * x;
        return -params.omega_z * x / std::sqrt(S + 72.0 * params.Gamma_f * x2 * x2);
    };

    auto step_traj = [&](std::size_t idx, std::uint64_t seed,
                         std::vector<double>& xs, std::vector<double>& ps) {
        std::mt19937_64 eng(seed);
        std::normal_distribution<double> nd;
        double x;
        if (config.init) {
            x = config.init(idx).first;
        } else if (sc.x_peak > 0.0) {
            x = (idx % 2 == 0 ? 1.0 : -1.0) * sc.x_peak + x_jitter * nd(eng);
        } else {
            x = sc.x_rms * nd(eng);
        }
        xs.reserve(plan.times.size());
        std::size_t rec = 0;
        for (std::size_t k = 1; k <= plan.n_steps; ++k) {
            if (config.scheme == OverdampedScheme::ItoEuler) {
                const double dW = std::sqrt(2.0 * config.dt) * nd(eng);
                x = x + h(x) * config.dt + g(x) * dW;
            } else {
                double remaining = config.dt;
                while (remaining > 0.0) {
                    double dt_loc = remaining;
                    if (map.active() && std::fabs(x) < map.x_hand) {
                        const double dW = std::sqrt(2.0 * dt_loc) * nd(eng);
                        const double y0 = map.forward(x);
                        bool ovf = false;
                        const double a0 = drift_y(x);
                        const double xp_ = map.inverse(y0 + a0 * dt_loc + dW, ovf);
                        const double a1 = drift_y(xp_);
                        x = map.inverse(y0 + 0.5 * (a0 + a1) * dt_loc + dW, ovf);
                    } else {
                        dt_loc = std::min(dt_loc, 0.1 / c_of(x));
                        const double gpv = gp(x);
                        if (gpv != 0.0)
                            dt_loc = std::min(dt_loc,
                                              kKick * kKick / (2.0 * gpv * gpv));
                        const double hv = h(x);
                        if (hv != 0.0)
                            dt_loc = std::min(
                                dt_loc, kKick *
                                            (std::fabs(x) +
                                             std::max(sc.x_peak, sc.x_rms)) /
                                            std::fabs(hv));
                        if (dt_loc < 1e-9 * config.dt) return false; // stalled
                        const double dW = std::sqrt(2.0 * dt_loc) * nd(eng);
                        const double xp_ = x + hv * dt_loc + g(x) * dW;
                        x = x + 0.5 * (hv + h(xp_)) * dt_loc +
                            0.5 * (g(x) + g(xp_)) * dW;
                    }
                    remaining -= dt_loc;
                    if (!std::isfinite(x) || std::fabs(x) > thr) return false;
                }
            }
            if (!std::isfinite(x) || std::fabs(x) > thr) return false;
            if (rec < plan.times.size() && k % plan.stride == 0 &&
                static_cast<double>(k) * config.dt >= config.burn_in - 1e-12) {
                xs.push_back(x);
                ++rec;
            }
        }
        (void)ps;
        return true;
    };

    auto kept = run_trajectories(config, plan, step_traj);
    TrajectoryEnsemble ens;
    ens.mode = SdeMode::Overdamped1D;
    ens.times = plan.times;
    ens.x = std::move(kept.x);
    ens.seeds = std::move(kept.seeds);
    ens.divergent = std::move(kept.divergent);
    ens.n_requested = config.n_traj;
    return ens;
}

Distribution1D histogram(const TrajectoryEnsemble& ensemble, Axis axis,
                         std::size_t bins, double lo, double hi) {
    if (bins < 2) throw std::invalid_argument("histogram: need >= 2 bins");
    const bool want_p = axis == Axis::p;
    if (want_p && ensemble.p.empty())
        throw std::invalid_argument("histogram: ensemble has no momentum data");
    if (axis == Axis::epsilon)
        throw std::invalid_argument("histogram: epsilon axis not supported");
    const auto& rows = want_p ? ensemble.p : ensemble.x;
    std::size_t n = 0;
    for (const auto& r : rows) n += r.size();
    if (n == 0) throw std::invalid_argument("histogram: empty ensemble");

    if (lo == hi) {
        lo = std::numeric_limits<double>::infinity();
        hi = -lo;
        for (const auto& r : rows)
            for (double v : r) {
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
        const double pad = 1e-9 * (hi - lo) + 1e-300;
        lo -= pad;
        hi += pad;
    }
    if (!(hi > lo)) throw std::invalid_argument("histogram: empty range");

    const double w = (hi - lo) / static_cast<double>(bins);
    std::vector<double> counts(bins, 0.0);
    for (const auto& r : rows)
        for (double v : r) {
            if (v < lo || v >= hi) continue;
            const auto b = static_cast<std::size_t>((v - lo) / w);
            counts[std::min(b, bins - 1)] += 1.0;
        }

    Distribution1D dist;
    dist.axis = axis;
    dist.grid.resize(bins);
    dist.density.resize(bins);
    dist.density_err.resize(bins);
    const double N = static_cast<double>(n);
    for (std::size_t b = 0; b < bins; ++b) {
        dist.grid[b] = lo + (static_cast<double>(b) + 0.5) * w;
        const double phat = counts[b] / N;
        dist.density[b] = phat / w;
        // Wilson score half-width, z = 1, treating samples as independent.
        const double denom = 1.0 + 1.0 / N;
        const double half =
            std::sqrt(phat * (1.0 - phat) / N + 0.25 / (N * N)) / denom;
        dist.density_err[b] = half / w;
    }
    const double total = dist.integral();
    if (total > 0.0) {
        for (auto& v : dist.density) v /= total;
        for (auto& v : dist.density_err) v /= total;
    }
    return dist;
}

EnsembleMoments ensemble_moments(const TrajectoryEnsemble& ensemble) {
    const std::size_t K = ensemble.x.size();
    if (K == 0) throw std::invalid_argument("ensemble_moments: empty ensemble");
    const bool full = ensemble.mode == SdeMode::Full2D;

    struct Acc {
        double x2 = 0, p2 = 0, xp = 0, x3p = 0, x4 = 0, x5p = 0, x6 = 0;
    };
    std::vector<Acc> per(K);
    std::size_t n_total = 0;
    for (std::size_t i = 0; i < K; ++i) {
        const auto& xr = ensemble.x[i];
        Acc a;
        for (std::size_t k = 0; k < xr.size(); ++k) {
            const double x = xr[k];
            const double x2 = x * x;
            a.x2 += x2;
            a.x4 += x2 * x2;
            a.x6 += x2 * x2 * x2;
            if (full) {
                const double p = ensemble.p[i][k];
                a.p2 += p * p;
                a.xp += x * p;
                a.x3p += x2 * x * p;
                a.x5p += x2 * x2 * x * p;
            }
        }
        const double m = static_cast<double>(xr.size());
        a.x2 /= m; a.p2 /= m; a.xp /= m; a.x3p /= m;
        a.x4 /= m; a.x5p /= m; a.x6 /= m;
        per[i] = a;
        n_total += xr.size();
    }

    auto reduce = [&](auto field, double& mean, double& se) {
        double s = 0.0;
        for (const auto& a : per) s += a.*field;
        mean = s / static_cast<double>(K);
        double v = 0.0;
        for (const auto& a : per) {
            const double dlt = a.*field - mean;
            v += dlt * dlt;
        }
        se = K > 1 ? std::sqrt(v / static_cast<double>(K - 1) /
                               static_cast<double>(K))
                   : 0.0;
    };

    EnsembleMoments out;
    out.n_samples = n_total;
    reduce(&Acc::x2, out.mean.x2, out.se.x2);
    reduce(&Acc::p2, out.mean.p2, out.se.p2);
    reduce(&Acc::xp, out.mean.xp, out.se.xp);
    reduce(&Acc::x3p, out.mean.x3p, out.se.x3p);
    reduce(&Acc::x4, out.mean.x4, out.se.x4);
    reduce(&Acc::x5p, out.mean.x5p, out.se.x5p);
    reduce(&Acc::x6, out.mean.x6, out.se.x6);
    return out;
}

} // namespace langevin
} // namespace levsim
