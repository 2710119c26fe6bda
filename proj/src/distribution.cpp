#include "levsim/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace levsim {

namespace {

double trapezoid(const std::vector<double>& x, const std::vector<double>& f) {
    double acc = 0.0;
    for (std::size_t i = 1; i < x.size(); ++i)
        acc += 0.5 * (f[i] + f[i - 1]) * (x[i] - x[i - 1]);
    return acc;
}

} // namespace

double Distribution1D::integral() const { return trapezoid(grid, density); }

double Distribution1D::normalize() {
    const double z = integral();
    if (!(z > 0.0) || !std::isfinite(z))
        throw std::runtime_error("distribution integral is not positive/finite");
    for (double& v : density) v /= z;
    for (double& e : density_err) e /= z;
    return z;
}

double Distribution1D::moment(int k) const {
    std::vector<double> f(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
        f[i] = std::pow(grid[i], k) * density[i];
    return trapezoid(grid, f);
}

double Distribution1D::l1_distance(const Distribution1D& other) const {
    if (grid.size() != other.grid.size())
        throw std::invalid_argument("l1_distance requires a shared grid");
    std::vector<double> diff(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (grid[i] != other.grid[i])
            throw std::invalid_argument("l1_distance requires a shared grid");
        diff[i] = std::fabs(density[i] - other.density[i]);
    }
    return trapezoid(grid, diff);
}

double Distribution1D::l1_distance_resampled(const Distribution1D& other) const {
    std::vector<double> diff(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double y = grid[i];
        double v = 0.0;
        if (y >= other.grid.front() && y <= other.grid.back()) {
            auto it = std::upper_bound(other.grid.begin(), other.grid.end(), y);
            std::size_t hi = std::min<std::size_t>(it - other.grid.begin(),
                                                   other.grid.size() - 1);
            std::size_t lo = hi == 0 ? 0 : hi - 1;
            const double x0 = other.grid[lo], x1 = other.grid[hi];
            const double t = x1 > x0 ? (y - x0) / (x1 - x0) : 0.0;
            v = (1.0 - t) * other.density[lo] + t * other.density[hi];
        }
        diff[i] = std::fabs(density[i] - v);
    }
    return trapezoid(grid, diff);
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
    if (n < 2) throw std::invalid_argument("linspace needs n >= 2");
    std::vector<double> v(n);
    const double step = (hi - lo) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) v[i] = lo + step * static_cast<double>(i);
    v.back() = hi;
    return v;
}

} // namespace levsim
