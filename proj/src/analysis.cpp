#include "levsim/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "levsim/moments.hpp"

namespace levsim {
namespace analysis {

namespace {

std::vector<double> moving_average(const std::vector<double>& v,
                                   std::size_t window) {
    if (window < 2) return v;
    const std::size_t h = window / 2;
    const std::size_t n = v.size();
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t lo = i > h ? i - h : 0;
        const std::size_t hi = std::min(i + h, n - 1);
        double s = 0.0;
        for (std::size_t k = lo; k <= hi; ++k) s += v[k];
        out[i] = s / static_cast<double>(hi - lo + 1);
    }
    return out;
}

// Vertex of the parabola through three (x, v) samples around a discrete
// maximum; falls back to the node when the points are not concave.
Peak refine_peak(const std::vector<double>& x, const std::vector<double>& v,
                 std::size_t i) {
    Peak pk{x[i], v[i], i};
    const double d1 = (v[i] - v[i - 1]) / (x[i] - x[i - 1]);
    const double d2 = (v[i + 1] - v[i]) / (x[i + 1] - x[i]);
    const double a2 = (d2 - d1) / (x[i + 1] - x[i - 1]);
    if (!(a2 < 0.0)) return pk;
    double xs = 0.5 * (x[i - 1] + x[i]) - 0.5 * d1 / a2;
    xs = std::clamp(xs, x[i - 1], x[i + 1]);
    pk.position = xs;
    pk.height = v[i - 1] + d1 * (xs - x[i - 1]) + a2 * (xs - x[i - 1]) * (xs - x[i]);
    return pk;
}

} // namespace

std::vector<Peak> detect_peaks(const std::vector<double>& grid,
                               const std::vector<double>& values,
                               std::size_t smooth_window, double rel_floor) {
    if (grid.size() != values.size())
        throw std::invalid_argument("detect_peaks: grid/values size mismatch");
    if (grid.size() < 3) return {};
    const auto v = moving_average(values, smooth_window);
    const auto [mn_it, mx_it] = std::minmax_element(v.begin(), v.end());
    const double floor = *mn_it + rel_floor * (*mx_it - *mn_it);
    std::vector<Peak> peaks;
    for (std::size_t i = 1; i + 1 < v.size(); ++i) {
        if (v[i] > v[i - 1] && v[i] > v[i + 1] && v[i] > floor)
            peaks.push_back(refine_peak(grid, v, i));
    }
    return peaks;
}

std::vector<Peak> detect_peaks(const Distribution1D& dist,
                               std::size_t smooth_window, double rel_floor) {
    return detect_peaks(dist.grid, dist.density, smooth_window, rel_floor);
}

BistabilityReport analyze_bistability(const Distribution1D& dist,
                                      std::size_t smooth_window) {
    BistabilityReport rep;
    rep.peaks = detect_peaks(dist, smooth_window);
    if (rep.peaks.size() < 2) {
        if (!rep.peaks.empty()) {
            rep.x_minus = rep.x_plus = rep.peaks.front().position;
        }
        return rep;
    }
    auto two = rep.peaks;
    std::partial_sort(two.begin(), two.begin() + 2, two.end(),
                      [](const Peak& a, const Peak& b) {
                          return a.height > b.height;
                      });
    const Peak& left = two[0].position < two[1].position ? two[0] : two[1];
    const Peak& right = two[0].position < two[1].position ? two[1] : two[0];
    rep.bistable = true;
    rep.x_minus = left.position;
    rep.x_plus = right.position;
    rep.separation = right.position - left.position;

    const auto v = moving_average(dist.density, smooth_window);
    std::size_t dip = left.index;
    for (std::size_t i = left.index; i <= right.index; ++i)
        if (v[i] < v[dip]) dip = i;
    rep.dip_position = dist.grid[dip];
    rep.dip_value = v[dip];
    const double lower = std::min(left.height, right.height);
    rep.barrier = rep.dip_value > 0.0
                      ? std::log(lower / rep.dip_value)
                      : std::numeric_limits<double>::infinity();
    return rep;
}

double barrier_height(const Distribution1D& dist, std::size_t smooth_window) {
    const auto rep = analyze_bistability(dist, smooth_window);
    if (!rep.bistable)
        throw std::domain_error("barrier_height: density is not bimodal");
    return rep.barrier;
}

PotentialCurve drift_potential(const SystemParams& params,
                               const std::vector<double>& x_grid) {
    validate(params);
    if (params.gamma_g <= 0.0)
        throw std::domain_error("drift_potential: needs gamma_g > 0");
    PotentialCurve curve;
    curve.axis = Axis::x;
    curve.grid = x_grid;
    curve.U.resize(x_grid.size());
    const double w2 = params.omega_z * params.omega_z;
    for (std::size_t i = 0; i < x_grid.size(); ++i) {
        const double x2 = x_grid[i] * x_grid[i];
        curve.U[i] = params.gamma_f > 0.0
                         ? w2 * std::log1p(12.0 * params.gamma_f * x2 /
                                           params.gamma_g) /
                               (48.0 * params.gamma_f)
                         : w2 * x2 / (4.0 * params.gamma_g);
    }
    return curve;
}

namespace {

// Position of the maximum of the overdamped steady log-density (the full
// form, including the backaction tail and the drift-potential factor),
// located on a geometric grid with parabolic refinement.
double full_form_peak(const SystemParams& p, double x_ref) {
    const auto d = derive_coefficients(p);
    const double S = d.S();
    const auto log_density = [&](double x) {
        const double x2 = x * x;
        const double lead = std::log(p.gamma_g + 12.0 * p.gamma_f * x2);
        if (p.Gamma_f > 0.0) {
            const double q = (p.gamma_f + 6.0 * p.Gamma_f) / (12.0 * p.Gamma_f);
            const double tail = S + 72.0 * p.Gamma_f * x2 * x2;
            const double E = p.gamma_g *
                             std::atan(6.0 * std::sqrt(2.0) * x2 *
                                       std::sqrt(p.Gamma_f / S)) /
                             (6.0 * std::sqrt(2.0 * p.Gamma_f * S));
            return lead - q * std::log(tail) - E;
        }
        return lead - 6.0 * p.gamma_f * x2 * x2 / S - p.gamma_g * x2 / S;
    };
    const std::size_t n = 300001;
    const double lo = std::log(1e-6 * x_ref), hi = std::log(1e2 * x_ref);
    std::vector<double> xs(n), ls(n);
    for (std::size_t i = 0; i < n; ++i) {
        xs[i] = std::exp(lo + (hi - lo) * static_cast<double>(i) /
                                  static_cast<double>(n - 1));
        ls[i] = log_density(xs[i]);
    }
    std::size_t m = 0;
    for (std::size_t i = 1; i < n; ++i)
        if (ls[i] > ls[m]) m = i;
    if (m == 0 || m + 1 == n) return xs[m];
    return refine_peak(xs, ls, m).position;
}

} // namespace

std::vector<ScanRow> scan_feedback(const SystemParams& base,
                                   const std::vector<double>& targets) {
    validate(base);
    if (base.omega_z <= 0.0)
        throw std::invalid_argument("scan_feedback: needs omega_z > 0");
    const double ratio =
        base.gamma_f > 0.0 ? base.Gamma_f / base.gamma_f : 0.0;

    std::vector<ScanRow> rows;
    rows.reserve(targets.size());
    for (double target : targets) {
        ScanRow row;
        row.gamma_eff_target = target;
        SystemParams p = base;
        p.gamma_f = 0.0;
        p.Gamma_f = 0.0;

        const double excess = target * base.omega_z - 2.0 * base.gamma_g;
        if (excess > 0.0) {
            row.achievable = true;
            double x2 = moments::steady_moments(p).state.x2;
            double gf = excess / (24.0 * x2);
            for (row.iterations = 1; row.iterations <= 200; ++row.iterations) {
                p.gamma_f = gf;
                p.Gamma_f = ratio * gf;
                x2 = moments::steady_moments(p).state.x2;
                const double next = excess / (24.0 * x2);
                const bool done = std::fabs(next - gf) <= 1e-12 * next;
                gf = next;
                if (done) break;
            }
            p.gamma_f = gf;
            p.Gamma_f = ratio * gf;
        }

        const auto d = derive_coefficients(p);
        const auto sm = moments::steady_moments(p);
        row.gamma_f = p.gamma_f;
        row.Gamma_f = p.Gamma_f;
        row.x2_ss = sm.state.x2;
        row.n_ss = sm.n;
        row.gamma_eff =
            (2.0 * p.gamma_g + 24.0 * p.gamma_f * sm.state.x2) / p.omega_z;
        const auto mod = modulation(p, sm.n);
        row.modulation = mod.M;
        row.over_limit = mod.over_limit;
        const double onset =
            base.gamma_g * base.gamma_g / (12.0 * d.S());
        row.bistable = p.gamma_f > onset && d.J > 0.0;
        if (row.bistable)
            row.x_peak = full_form_peak(p, std::sqrt(sm.state.x2));
        rows.push_back(row);
    }
    return rows;
}

} // namespace analysis
} // namespace levsim
