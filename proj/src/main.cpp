// levsim command-line tool: parameter derivation, analytic distributions,
// the 2D phase-space solver, Langevin ensembles, the moment hierarchy, the
// feedback scan, and a cross-method consistency check.
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "levsim/analysis.hpp"
#include "levsim/analytic.hpp"
#include "levsim/config.hpp"
#include "levsim/fp1d.hpp"
#include "levsim/fp2d.hpp"
#include "levsim/io.hpp"
#include "levsim/langevin.hpp"
#include "levsim/model.hpp"
#include "levsim/moments.hpp"
#include "levsim/presets.hpp"

namespace {

using namespace levsim;

constexpr const char* kVersion = "0.1.0";

struct Common {
    std::string config_path;
    std::string preset;
    std::string outdir;
    std::uint64_t seed = 1;
    unsigned threads = 1;
};

SystemParams resolve_params(const Common& c) {
    if (c.config_path.empty() == c.preset.empty())
        throw std::invalid_argument(
            "give exactly one parameter source: --config FILE or --preset NAME");
    return c.config_path.empty() ? presets::get(c.preset)
                                 : config::load_params(c.config_path);
}

std::string out_path(const Common& c, const std::string& name) {
    std::filesystem::create_directories(c.outdir);
    return (std::filesystem::path(c.outdir) / name).string();
}

std::string provenance(const SystemParams& p, const Common& c,
                       io::KeyValues extra = {}) {
    io::KeyValues head{{"levsim_version", kVersion},
                       {"seed", std::to_string(c.seed)}};
    head.insert(head.end(), extra.begin(), extra.end());
    return io::format_params(p) + io::format_kv(head);
}

void kv_print(const char* key, double v) {
    std::printf("%-14s = %.12g\n", key, v);
}

void kv_print(const char* key, const std::string& v) {
    std::printf("%-14s = %s\n", key, v.c_str());
}

// Position scale for plotting/validation grids: the larger of the
// self-consistent Gaussian width and (when defined) the overdamped width.
double position_scale(const SystemParams& p) {
    double x2;
    try {
        x2 = analytic::steady_x2(p).exact;
    } catch (const std::exception&) {
        x2 = analytic::no_feedback_steady(p).a;
    }
    try {
        x2 = std::max(x2, analytic::x2_Wss(p));
    } catch (const std::exception&) {
    }
    return std::sqrt(x2);
}

double steady_n_or_hot(const SystemParams& p) {
    try {
        return analytic::steady_n(p);
    } catch (const std::exception&) {
        return analytic::no_feedback_steady(p).n_ss;
    }
}

// ---------------------------------------------------------------- derive

void cmd_derive(const Common& c, const std::string& write_config) {
    const auto p = resolve_params(c);
    const auto d = derive_coefficients(p);
    const auto sm = moments::steady_moments(p);
    const auto regime = classify_regime(p, sm.state.x2);
    const auto mod = modulation(p, sm.n);
    kv_print("D_p", d.D_p);
    kv_print("D_q", d.D_q);
    kv_print("S", d.S());
    kv_print("J", d.J);
    kv_print("x2_ss", sm.state.x2);
    kv_print("p2_ss", sm.state.p2);
    kv_print("n_ss", sm.n);
    kv_print("gamma_eff", regime.gamma_eff);
    kv_print("regime", regime_name(regime.regime));
    kv_print("modulation", mod.M);
    kv_print("over_limit", mod.over_limit ? "yes" : "no");
    kv_print("tau", analytic::cooling_time_tau(p));
    if (!write_config.empty()) {
        std::ofstream out(write_config);
        if (!out)
            throw std::runtime_error("cannot open '" + write_config + "'");
        out << config::format_params_text(p);
        std::printf("config written to %s\n", write_config.c_str());
    }
}

// --------------------------------------------------------------- analytic

void cmd_analytic(const Common& c, std::size_t points, double span) {
    const auto p = resolve_params(c);
    const double xs = position_scale(p);
    const auto x_grid = linspace(-span * xs, span * xs, points);
    const double n_char = steady_n_or_hot(p) + 0.5;
    const auto eps_grid = linspace(1e-6 * n_char, 30.0 * n_char, points);
    const auto prov = provenance(p, c);

    const auto emit = [&](const char* name, auto&& build) {
        try {
            build();
            std::printf("wrote %s\n", out_path(c, name).c_str());
        } catch (const std::exception& e) {
            std::fprintf(stderr, "skipped %s: %s\n", name, e.what());
        }
    };

    emit("analytic_energy_low.csv", [&] {
        io::write_distribution_csv(out_path(c, "analytic_energy_low.csv"),
                                   analytic::energy_dist_low_damping(p, eps_grid),
                                   prov);
    });
    emit("analytic_position_low.csv", [&] {
        io::write_distribution_csv(out_path(c, "analytic_position_low.csv"),
                                   analytic::position_dist_low_damping(p, x_grid),
                                   prov);
    });
    emit("analytic_position_over.csv", [&] {
        io::write_distribution_csv(
            out_path(c, "analytic_position_over.csv"),
            analytic::position_dist_overdamped(p, x_grid), prov);
    });
    emit("analytic_position_over_simplified.csv", [&] {
        io::write_distribution_csv(
            out_path(c, "analytic_position_over_simplified.csv"),
            analytic::position_dist_overdamped(p, x_grid,
                                               analytic::OverdampedForm::Simplified),
            prov);
    });
    emit("analytic_potential_over.csv", [&] {
        io::write_potential_csv(
            out_path(c, "analytic_potential_over.csv"),
            analytic::potential_from_density(
                analytic::position_dist_overdamped(p, x_grid)),
            prov);
    });
    emit("analytic_drift_potential.csv", [&] {
        io::write_potential_csv(out_path(c, "analytic_drift_potential.csv"),
                                analysis::drift_potential(p, x_grid), prov);
    });
    emit("analytic_momentum_over.csv", [&] {
        const auto d = derive_coefficients(p);
        const double p2 = d.J > 0.0
                              ? std::sqrt(2.0 * d.S() / (3.0 * d.J))
                              : analytic::no_feedback_steady(p).b;
        const auto p_grid = linspace(-span * std::sqrt(p2),
                                     span * std::sqrt(p2), points);
        io::write_distribution_csv(
            out_path(c, "analytic_momentum_over.csv"),
            analytic::momentum_dist_overdamped(p, p_grid).dist, prov);
    });

    try {
        kv_print("steady_n", analytic::steady_n(p));
        const auto x2 = analytic::steady_x2(p);
        kv_print("x2_exact", x2.exact);
        kv_print("x2_approx", x2.approx);
        const auto pk = analytic::peak_positions(p);
        kv_print("x_minus", pk.x_minus);
        kv_print("x_plus", pk.x_plus);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "steady summary unavailable: %s\n", e.what());
    }
    try {
        const auto st = analytic::phonon_stats_overdamped(p);
        kv_print("x2_Wss", analytic::x2_Wss(p));
        kv_print("n_Wss", st.n_Wss);
        kv_print("n2_Wss", st.n2_Wss);
        kv_print("g2", st.g2);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "overdamped stats unavailable: %s\n", e.what());
    }
    kv_print("tau", analytic::cooling_time_tau(p));
}

// ------------------------------------------------------------------ fp2d

fp2d::GridBasis parse_basis(const std::string& name) {
    if (name == "auto") return fp2d::GridBasis::Auto;
    if (name == "hot") return fp2d::GridBasis::Hot;
    if (name == "steady") return fp2d::GridBasis::Steady;
    throw std::invalid_argument("unknown grid basis '" + name +
                                "' (auto|hot|steady)");
}

struct Fp2dOpts {
    std::string basis = "auto";
    std::size_t nx = 257, np = 257;
    double span = 5.0;
    double n0 = -1.0; // < 0: basis default (hot: N_0, steady: steady_n)
    double dt = 0.0;
    double t_end = 0.0;
    std::size_t samples = 50;
    bool steady = false;
    double tol = 1e-6;
    double t_check = 0.0;
    double max_time = 0.0;
    bool field_out = false;
};

void cmd_fp2d(const Common& c, const Fp2dOpts& o) {
    const auto p = resolve_params(c);
    fp2d::GridSpec spec;
    spec.basis = parse_basis(o.basis);
    spec.nx = o.nx;
    spec.np = o.np;
    spec.span_sigmas = o.span;
    const auto grid = fp2d::build_grid(p, spec);

    double n0 = o.n0;
    if (n0 < 0.0)
        n0 = spec.basis == fp2d::GridBasis::Steady ? steady_n_or_hot(p) : p.N_0;
    auto field = fp2d::init_thermal(grid, n0);

    const io::KeyValues run_kv{{"basis", o.basis},
                               {"nx", std::to_string(grid.nx)},
                               {"np", std::to_string(grid.np)},
                               {"x_max", std::to_string(grid.x_max)},
                               {"n0", std::to_string(n0)},
                               {"dt", std::to_string(
                                    o.dt > 0.0 ? o.dt : fp2d::stable_dt(p, grid))}};
    const auto prov = provenance(p, c, run_kv);

    std::vector<fp2d::MomentRecord> records;
    if (o.steady) {
        const auto rep =
            fp2d::evolve_to_steady(field, p, o.tol, o.t_check, o.max_time, o.dt);
        kv_print("converged", rep.converged ? "yes" : "no");
        kv_print("residual", rep.residual);
        kv_print("final_time", rep.final_time);
        kv_print("windows", static_cast<double>(rep.iterations));
        records.push_back({field.time, fp2d::moments(field)});
    } else {
        if (!(o.t_end > 0.0))
            throw std::invalid_argument("fp2d: give --t-end or --steady");
        std::vector<double> times{0.0};
        for (std::size_t k = 1; k <= o.samples; ++k)
            times.push_back(o.t_end * static_cast<double>(k) /
                            static_cast<double>(o.samples));
        records = fp2d::evolve(field, p, o.t_end, times, o.dt);
    }

    io::write_moment_series_csv(out_path(c, "fp2d_moments.csv"), records, prov);
    const auto mx = fp2d::marginal(field, Axis::x);
    io::write_distribution_csv(out_path(c, "fp2d_marginal_x.csv"), mx, prov);
    io::write_distribution_csv(out_path(c, "fp2d_marginal_p.csv"),
                               fp2d::marginal(field, Axis::p), prov);
    io::write_distribution_csv(out_path(c, "fp2d_marginal_epsilon.csv"),
                               fp2d::marginal(field, Axis::epsilon), prov);
    if (o.field_out || o.steady)
        io::write_field_binary(out_path(c, "fp2d_field.bin"), field);

    const auto mom = records.back().mom;
    kv_print("t", field.time);
    kv_print("n", mom.n);
    kv_print("x2", mom.m.x2);
    kv_print("p2", mom.m.p2);
    kv_print("g2", mom.g2);
    kv_print("mass_drift", field.mass() - 1.0);
    kv_print("boundary_ratio", fp2d::boundary_ratio(field));
    const auto bi = analysis::analyze_bistability(mx);
    kv_print("bistable", bi.bistable ? "yes" : "no");
    if (bi.bistable) {
        kv_print("x_minus", bi.x_minus);
        kv_print("x_plus", bi.x_plus);
        kv_print("barrier", bi.barrier);
    }
}

// --------------------------------------------------------------- langevin

struct LangevinOpts {
    std::string mode = "overdamped";
    std::string scheme = "strat";
    std::size_t n_traj = 64;
    double dt = 0.0;
    double t_end = 0.0;
    double burn_in = -1.0; // < 0: default_burn_in
    std::size_t stride = 0;
    std::size_t bins = 201;
};

void cmd_langevin(const Common& c, const LangevinOpts& o) {
    const auto p = resolve_params(c);
    langevin::SdeConfig cfg;
    if (o.mode == "full")
        cfg.mode = langevin::SdeMode::Full2D;
    else if (o.mode == "overdamped")
        cfg.mode = langevin::SdeMode::Overdamped1D;
    else
        throw std::invalid_argument("unknown sde mode '" + o.mode +
                                    "' (full|overdamped)");
    if (o.scheme == "strat")
        cfg.scheme = langevin::OverdampedScheme::StratonovichHeun;
    else if (o.scheme == "ito")
        cfg.scheme = langevin::OverdampedScheme::ItoEuler;
    else
        throw std::invalid_argument("unknown scheme '" + o.scheme +
                                    "' (strat|ito)");
    cfg.n_traj = o.n_traj;
    cfg.dt = o.dt;
    cfg.t_end = o.t_end;
    cfg.seed = c.seed;
    cfg.stride = o.stride;
    cfg.n_threads = c.threads;
    cfg.burn_in = o.burn_in >= 0.0
                      ? o.burn_in
                      : langevin::default_burn_in(
                            p, moments::steady_moments(p).state.x2);

    const auto ens = cfg.mode == langevin::SdeMode::Full2D
                         ? langevin::simulate_full(p, cfg)
                         : langevin::simulate_overdamped(p, cfg);
    const auto prov = provenance(
        p, c,
        {{"mode", o.mode},
         {"scheme", o.scheme},
         {"n_traj", std::to_string(ens.n_kept())},
         {"divergent", std::to_string(ens.divergent.size())},
         {"dt", std::to_string(cfg.dt)},
         {"burn_in", std::to_string(cfg.burn_in)},
         {"t_end", std::to_string(cfg.t_end)}});

    io::write_distribution_csv(out_path(c, "langevin_hist_x.csv"),
                               langevin::histogram(ens, Axis::x, o.bins), prov);
    if (cfg.mode == langevin::SdeMode::Full2D)
        io::write_distribution_csv(out_path(c, "langevin_hist_p.csv"),
                                   langevin::histogram(ens, Axis::p, o.bins),
                                   prov);

    const auto m = langevin::ensemble_moments(ens);
    kv_print("trajectories", static_cast<double>(ens.n_kept()));
    kv_print("divergent", static_cast<double>(ens.divergent.size()));
    kv_print("samples", static_cast<double>(m.n_samples));
    kv_print("x2", m.mean.x2);
    kv_print("x2_se", m.se.x2);
    if (cfg.mode == langevin::SdeMode::Full2D) {
        kv_print("p2", m.mean.p2);
        kv_print("p2_se", m.se.p2);
        kv_print("n", 0.5 * (m.mean.x2 + m.mean.p2) - 0.5);
    }
}

// ---------------------------------------------------------------- moments

void cmd_moments(const Common& c, double n0, double t_end, std::size_t samples) {
    const auto p = resolve_params(c);
    if (n0 < 0.0) n0 = p.N_0;
    if (!(t_end > 0.0)) throw std::invalid_argument("moments: need --t-end > 0");
    const auto initial = moments::close_gaussian(n0 + 0.5, n0 + 0.5, 0.0);
    std::vector<double> times{0.0};
    for (std::size_t k = 1; k <= samples; ++k)
        times.push_back(t_end * static_cast<double>(k) /
                        static_cast<double>(samples));
    const auto trace = moments::evolve(p, initial, times, {});
    io::write_moment_trace_csv(out_path(c, "moments_trace.csv"), trace,
                               provenance(p, c, {{"n0", std::to_string(n0)}}));

    const auto& last = trace.states.back();
    kv_print("t", trace.t.back());
    kv_print("n", last.n());
    kv_print("x2", last.x2);
    const auto sm = moments::steady_moments(p);
    kv_print("x2_ss", sm.state.x2);
    kv_print("n_ss", sm.n);
    const auto fc = moments::steady_x2_full_coefficients(p);
    kv_print("x2_ss_full", fc.x2);
}

// ------------------------------------------------------------------- scan

void cmd_scan(const Common& c, double from, double to, std::size_t points,
              const std::vector<double>& explicit_targets) {
    const auto p = resolve_params(c);
    std::vector<double> targets = explicit_targets;
    if (targets.empty()) {
        if (!(from > 0.0 && to > from && points >= 2))
            throw std::invalid_argument("scan: need 0 < --from < --to, --points >= 2");
        for (std::size_t k = 0; k < points; ++k)
            targets.push_back(from * std::pow(to / from,
                                              static_cast<double>(k) /
                                                  static_cast<double>(points - 1)));
    }
    const auto rows = analysis::scan_feedback(p, targets);
    io::write_scan_csv(out_path(c, "scan.csv"), rows, provenance(p, c));
    std::printf("%-12s %-12s %-10s %-12s %s\n", "gamma_eff", "gamma_f",
                "bistable", "x_peak", "n_ss");
    for (const auto& r : rows)
        std::printf("%-12.4g %-12.4g %-10s %-12.6g %.6g\n", r.gamma_eff,
                    r.gamma_f, r.bistable ? "yes" : "no", r.x_peak, r.n_ss);
}

// ------------------------------------------------------------- crosscheck

struct CrosscheckOpts {
    std::size_t points = 1201;
    double span = 5.0;
    std::size_t n_traj = 64;
    double dt = 2e-4;
    double t_end = 60.0;
    std::size_t bins = 161;
    std::size_t nx = 257, np = 257;
    double tol = 1e-6;
    bool skip_fp2d = false;
};

void cmd_crosscheck(const Common& c, const CrosscheckOpts& o) {
    const auto p = resolve_params(c);
    const double L = o.span * position_scale(p);
    const auto x_grid = linspace(-L, L, o.points);
    const auto prov = provenance(p, c);

    std::vector<std::string> names;
    std::vector<Distribution1D> dists;

    names.push_back("analytic");
    dists.push_back(analytic::position_dist_overdamped(p, x_grid));

    names.push_back("fp1d");
    dists.push_back(
        fp1d::steady_state(fp1d::overdamped_position_problem(p, L, o.points)));

    {
        langevin::SdeConfig cfg;
        cfg.mode = langevin::SdeMode::Overdamped1D;
        cfg.n_traj = o.n_traj;
        cfg.dt = o.dt;
        cfg.t_end = o.t_end;
        cfg.seed = c.seed;
        cfg.n_threads = c.threads;
        cfg.burn_in = langevin::default_burn_in(
            p, moments::steady_moments(p).state.x2);
        const auto ens = langevin::simulate_overdamped(p, cfg);
        names.push_back("langevin");
        dists.push_back(langevin::histogram(ens, Axis::x, o.bins, -L, L));
    }

    if (!o.skip_fp2d) {
        fp2d::GridSpec spec;
        spec.basis = fp2d::GridBasis::Steady;
        spec.nx = o.nx;
        spec.np = o.np;
        spec.span_sigmas = o.span;
        const auto grid = fp2d::build_grid(p, spec);
        auto field = fp2d::init_thermal(grid, steady_n_or_hot(p));
        const auto rep = fp2d::evolve_to_steady(field, p, o.tol);
        if (!rep.converged)
            std::fprintf(stderr,
                         "warning: fp2d not converged (residual %.3g)\n",
                         rep.residual);
        names.push_back("fp2d");
        dists.push_back(fp2d::marginal(field, Axis::x));
    }

    for (std::size_t i = 0; i < dists.size(); ++i)
        io::write_distribution_csv(
            out_path(c, "crosscheck_" + names[i] + ".csv"), dists[i], prov);

    std::ofstream mat(out_path(c, "crosscheck_l1.csv"));
    mat << prov << "a,b,l1\n";
    std::printf("pairwise L1 distances:\n");
    for (std::size_t i = 0; i < dists.size(); ++i)
        for (std::size_t j = i + 1; j < dists.size(); ++j) {
            const double l1 = dists[i].size() >= dists[j].size()
                                  ? dists[i].l1_distance_resampled(dists[j])
                                  : dists[j].l1_distance_resampled(dists[i]);
            std::printf("  %-9s vs %-9s : %.4f\n", names[i].c_str(),
                        names[j].c_str(), l1);
            mat << names[i] << "," << names[j] << "," << std::setprecision(17)
                << l1 << "\n";
        }

    for (std::size_t i = 0; i < dists.size(); ++i) {
        const auto bi = analysis::analyze_bistability(dists[i],
                                                      names[i] == "langevin" ? 5 : 0);
        if (bi.bistable)
            std::printf("  %-9s peaks %+.4f / %+.4f, dip %.6g, barrier %.4f\n",
                        names[i].c_str(), bi.x_minus, bi.x_plus, bi.dip_value,
                        bi.barrier);
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"levsim: parametric-feedback-cooled nanoparticle toolkit"};
    app.require_subcommand(1);

    Common c;
    if (const char* env = std::getenv("LEVSIM_OUTDIR")) c.outdir = env;
    if (c.outdir.empty()) c.outdir = ".";
    app.add_option("--config", c.config_path, "parameter file (key = value)");
    app.add_option("--preset", c.preset, "named preset (see README)");
    app.add_option("--outdir", c.outdir,
                   "output directory (default $LEVSIM_OUTDIR or .)");
    app.add_option("--seed", c.seed, "random seed recorded in outputs");
    app.add_option("--threads", c.threads, "worker threads for Langevin runs");

    std::string write_config;
    auto* sub_derive =
        app.add_subcommand("derive", "print derived coefficients and regime");
    sub_derive->fallthrough();
    sub_derive->add_option("--write-config", write_config,
                           "also dump the parameters as a config file");
    sub_derive->callback([&] { cmd_derive(c, write_config); });

    std::size_t an_points = 2001;
    double an_span = 5.0;
    auto* sub_analytic =
        app.add_subcommand("analytic", "write closed-form steady distributions");
    sub_analytic->fallthrough();
    sub_analytic->add_option("--points", an_points, "grid points per file");
    sub_analytic->add_option("--x-span", an_span, "half-width in position sigmas");
    sub_analytic->callback([&] { cmd_analytic(c, an_points, an_span); });

    Fp2dOpts fo;
    auto* sub_fp2d =
        app.add_subcommand("fp2d", "evolve the 2D phase-space density");
    sub_fp2d->fallthrough();
    sub_fp2d->add_option("--basis", fo.basis, "grid basis: auto|hot|steady");
    sub_fp2d->add_option("--nx", fo.nx, "position nodes");
    sub_fp2d->add_option("--np", fo.np, "momentum nodes");
    sub_fp2d->add_option("--span", fo.span, "half-width in sigmas");
    sub_fp2d->add_option("--n0", fo.n0, "initial thermal occupation");
    sub_fp2d->add_option("--dt", fo.dt, "time step (0 = stability limit)");
    sub_fp2d->add_option("--t-end", fo.t_end, "evolution time");
    sub_fp2d->add_option("--samples", fo.samples, "moment samples over t-end");
    sub_fp2d->add_flag("--steady", fo.steady, "run to steady state instead");
    sub_fp2d->add_option("--tol", fo.tol, "steady-state residual tolerance");
    sub_fp2d->add_option("--t-check", fo.t_check, "steady-check window");
    sub_fp2d->add_option("--max-time", fo.max_time, "steady-search time cap");
    sub_fp2d->add_flag("--field-out", fo.field_out, "always dump the field");
    sub_fp2d->callback([&] { cmd_fp2d(c, fo); });

    LangevinOpts lo;
    auto* sub_lang =
        app.add_subcommand("langevin", "simulate trajectory ensembles");
    sub_lang->fallthrough();
    sub_lang->add_option("--sde", lo.mode, "full|overdamped");
    sub_lang->add_option("--scheme", lo.scheme,
                         "overdamped integrator: strat|ito");
    sub_lang->add_option("--n-traj", lo.n_traj, "trajectories");
    sub_lang->add_option("--dt", lo.dt, "outer time step");
    sub_lang->add_option("--t-end", lo.t_end, "simulated time per trajectory");
    sub_lang->add_option("--burn-in", lo.burn_in,
                         "discarded lead-in time (default: auto)");
    sub_lang->add_option("--stride", lo.stride,
                         "record every stride-th step (0 = auto)");
    sub_lang->add_option("--bins", lo.bins, "histogram bins");
    sub_lang->callback([&] { cmd_langevin(c, lo); });

    double mo_n0 = -1.0, mo_t_end = 0.0;
    std::size_t mo_samples = 200;
    auto* sub_mom =
        app.add_subcommand("moments", "integrate the moment hierarchy");
    sub_mom->fallthrough();
    sub_mom->add_option("--n0", mo_n0, "initial occupation (default N_0)");
    sub_mom->add_option("--t-end", mo_t_end, "integration time");
    sub_mom->add_option("--samples", mo_samples, "trace samples");
    sub_mom->callback([&] { cmd_moments(c, mo_n0, mo_t_end, mo_samples); });

    double sc_from = 1e-3, sc_to = 10.0;
    std::size_t sc_points = 25;
    std::vector<double> sc_targets;
    auto* sub_scan =
        app.add_subcommand("scan", "sweep feedback strength vs gamma_eff");
    sub_scan->fallthrough();
    sub_scan->add_option("--from", sc_from, "lowest gamma_eff target");
    sub_scan->add_option("--to", sc_to, "highest gamma_eff target");
    sub_scan->add_option("--points", sc_points, "log-spaced target count");
    sub_scan->add_option("--targets", sc_targets,
                         "explicit gamma_eff targets (overrides the grid)");
    sub_scan->callback(
        [&] { cmd_scan(c, sc_from, sc_to, sc_points, sc_targets); });

    CrosscheckOpts co;
    auto* sub_cross = app.add_subcommand(
        "crosscheck", "compare position densities across all routes");
    sub_cross->fallthrough();
    sub_cross->add_option("--points", co.points, "analytic/fp1d grid points");
    sub_cross->add_option("--span", co.span, "half-width in sigmas");
    sub_cross->add_option("--n-traj", co.n_traj, "Langevin trajectories");
    sub_cross->add_option("--dt", co.dt, "Langevin time step");
    sub_cross->add_option("--t-end", co.t_end, "Langevin time per trajectory");
    sub_cross->add_option("--bins", co.bins, "histogram bins");
    sub_cross->add_option("--nx", co.nx, "fp2d position nodes");
    sub_cross->add_option("--np", co.np, "fp2d momentum nodes");
    sub_cross->add_option("--tol", co.tol, "fp2d steady tolerance");
    sub_cross->add_flag("--skip-fp2d", co.skip_fp2d,
                        "compare only the three 1D routes");
    sub_cross->callback([&] { cmd_crosscheck(c, co); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
    return 0;
}
