#include "levsim/moments.hpp"

#include <array>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include <boost/numeric/odeint.hpp>

namespace levsim {
namespace moments {

MomentState close_gaussian(double x2, double p2, double xp) {
    MomentState s;
    s.x2 = x2;
    s.p2 = p2;
    s.xp = xp;
    s.x3p = 3.0 * x2 * xp;
    s.x4 = 3.0 * x2 * x2;
    s.x5p = 15.0 * x2 * x2 * xp;
    s.x6 = 15.0 * x2 * x2 * x2;
    return s;
}

MomentState rhs(const SystemParams& params, const MomentState& s) {
    const auto d = derive_coefficients(params);
    const double w = params.omega_z;
    const double gg = params.gamma_g;
    const double gf = params.gamma_f;
    const double Gf = params.Gamma_f;
    const double S = d.S();
    const double Dq = d.D_q;

    // Correlators not carried in the state, in Gaussian closure.
    const double x2p2 = s.x2 * s.p2 + 2.0 * s.xp * s.xp;
    const double x5p = 15.0 * s.x2 * s.x2 * s.xp;

    MomentState ds;
    ds.x2 = 2.0 * w * s.xp + 2.0 * Dq;
    ds.p2 = -2.0 * w * s.xp - 4.0 * gg * s.p2 + 2.0 * S +
            144.0 * Gf * s.x4 - 48.0 * gf * x2p2;
    ds.xp = w * (s.p2 - s.x2) - 2.0 * gg * s.xp - 24.0 * gf * s.x3p;
    ds.x3p = 3.0 * w * x2p2 - w * s.x4 - 2.0 * gg * s.x3p - 24.0 * gf * x5p;
    ds.x4 = 4.0 * w * s.x3p + 12.0 * Dq * s.x2;
    ds.x6 = 6.0 * w * x5p + 30.0 * Dq * s.x4;
    // x5p has no independent evolution equation: it is defined by the
    // closure, so its rate is the chain-rule derivative of 15*x2^2*xp.
    ds.x5p = 30.0 * s.x2 * s.xp * ds.x2 + 15.0 * s.x2 * s.x2 * ds.xp;
    return ds;
}

namespace {

using State3 = std::array<double, 3>;

struct ReducedRhs {
    double w, gg, gf, Gf, S, Dq;
    void operator()(const State3& y, State3& dy, double /*t*/) const {
        const double x2 = y[0], p2 = y[1], xp = y[2];
        dy[0] = 2.0 * w * xp + 2.0 * Dq;
        dy[1] = -2.0 * w * xp - 4.0 * gg * p2 + 2.0 * S +
                432.0 * Gf * x2 * x2 - 48.0 * gf * (x2 * p2 + 2.0 * xp * xp);
        dy[2] = w * (p2 - x2) - 2.0 * gg * xp - 72.0 * gf * x2 * xp;
    }
};

} // namespace

MomentTrace evolve(const SystemParams& params, const MomentState& initial,
                   const std::vector<double>& times, const EvolveOptions& opt) {
    if (times.empty())
        throw std::invalid_argument("evolve: need at least one output time");
    if (times.front() < 0.0)
        throw std::invalid_argument("evolve: times must be >= 0");
    for (std::size_t i = 1; i < times.size(); ++i)
        if (!(times[i] > times[i - 1]))
            throw std::invalid_argument("evolve: times must be increasing");
    if (!(initial.x2 > 0.0) || !(initial.p2 > 0.0))
        throw std::invalid_argument("evolve: initial x2 and p2 must be positive");

    // The initial state is defined at t = 0 regardless of the first
    // requested output time.
    std::vector<double> pts;
    const bool drop_first = times.front() > 0.0;
    if (drop_first) pts.push_back(0.0);
    pts.insert(pts.end(), times.begin(), times.end());

    const auto d = derive_coefficients(params);
    ReducedRhs f{params.omega_z, params.gamma_g, params.gamma_f,
                 params.Gamma_f, d.S(), d.D_q};
    State3 y{initial.x2, initial.p2, initial.xp};

    MomentTrace trace;
    trace.t.reserve(times.size());
    trace.states.reserve(times.size());
    auto observer = [&](const State3& s, double t) {
        if (!std::isfinite(s[0]) || !std::isfinite(s[1]) || !std::isfinite(s[2])) {
            std::ostringstream msg;
            msg << "moment integration failed at t=" << t << " (x2=" << s[0]
                << ", p2=" << s[1] << ", xp=" << s[2] << ")";
            throw std::runtime_error(msg.str());
        }
        trace.t.push_back(t);
        trace.states.push_back(close_gaussian(s[0], s[1], s[2]));
    };

    namespace ode = boost::numeric::odeint;
    auto stepper = ode::make_controlled(
        opt.abs_tol, opt.rel_tol,
        ode::runge_kutta_dopri5<State3>());
    ode::integrate_times(stepper, f, y, pts.begin(), pts.end(),
                         1e-6 * (pts.back() - pts.front() + 1e-300),
                         observer);
    if (drop_first) {
        trace.t.erase(trace.t.begin());
        trace.states.erase(trace.states.begin());
    }
    return trace;
}

SteadyMoments steady_moments(const SystemParams& params) {
    const auto d = derive_coefficients(params);
    const double S = d.S();
    const double J = d.J;
    const double gg = params.gamma_g;
    if (!(J > 0.0) && !(gg > 0.0))
        throw std::invalid_argument("steady_moments: need J > 0 or gamma_g > 0");

    double x2;
    if (J == 0.0) {
        x2 = S / (2.0 * gg);
    } else {
        const double disc = gg * gg + 2.0 * J * S;
        if (disc < 0.0)
            throw std::runtime_error("steady_moments: no positive root");
        x2 = (-gg + std::sqrt(disc)) / (2.0 * J);
        if (!(x2 > 0.0))
            throw std::runtime_error("steady_moments: no positive root");
    }

    const double w2 = params.omega_z * params.omega_z;
    const double p2 = (1.0 - 72.0 * params.gamma_f * d.D_q / w2) * x2 -
                      2.0 * gg * d.D_q / w2;
    const double xp = -d.D_q / params.omega_z;

    SteadyMoments out;
    out.state = close_gaussian(x2, p2, xp);
    out.n = out.state.n();
    return out;
}

FullCoefficients steady_x2_full_coefficients(const SystemParams& params) {
    const auto d = derive_coefficients(params);
    const double w2 = params.omega_z * params.omega_z;
    FullCoefficients fc;
    // Expanded so gamma_f = 0 stays well defined.
    fc.A = 8.0 * (params.gamma_f - 9.0 * params.Gamma_f) -
           960.0 * params.gamma_f * params.gamma_f * d.D_q / w2;
    fc.B = 2.0 * params.gamma_g * (1.0 - 96.0 * params.gamma_f * d.D_q / w2);
    fc.C = d.S() + d.D_q + 4.0 * params.gamma_g * params.gamma_g * d.D_q / w2;
    // With x4 = 3 x2^2 the balance reads 3A x2^2 + B x2 = C: the source
    // term C enters with opposite sign to the damping terms, which is what
    // admits a positive root; at D_q -> 0 this is the J-form quadratic.
    if (fc.A == 0.0) {
        if (!(fc.B > 0.0))
            throw std::runtime_error("steady_x2_full: no positive root");
        fc.x2 = fc.C / fc.B;
        return fc;
    }
    const double disc = fc.B * fc.B + 12.0 * fc.A * fc.C;
    if (disc < 0.0)
        throw std::runtime_error("steady_x2_full: no positive root");
    fc.x2 = (-fc.B + std::sqrt(disc)) / (6.0 * fc.A);
    if (!(fc.x2 > 0.0))
        throw std::runtime_error("steady_x2_full: no positive root");
    return fc;
}

} // namespace moments
} // namespace levsim
