#include "heavytail/grid.hpp"

#include "heavytail/error.hpp"

#include <algorithm>
#include <cmath>

namespace heavytail {

namespace {

void require_same_grid(const GridDensity& a, const GridDensity& b) {
    if (!(a.grid == b.grid) || a.values.size() != b.values.size())
        throw DomainError("densities live on different grids");
}

}  // namespace

Grid::Grid(double lo, double hi, std::size_t n) : lo_(lo), hi_(hi), n_(n), h_(0.0) {
    if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) throw DomainError("grid requires finite lo < hi");
    if (n < 3) throw DomainError("grid requires at least 3 nodes");
    h_ = (hi - lo) / static_cast<double>(n - 1);
}

std::size_t Grid::nearest(double x) const noexcept {
    const double pos = std::round((x - lo_) / h_);
    if (!(pos > 0.0)) return 0;
    if (pos >= static_cast<double>(n_ - 1)) return n_ - 1;
    return static_cast<std::size_t>(pos);
}

double trapezoid(const Grid& grid, const std::vector<double>& values) {
    double total = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) total += grid.weight(i) * values[i];
    return total;
}

double GridDensity::mean() const {
    double m = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) m += grid.weight(i) * grid.node(i) * values[i];
    return m / integral();
}

double GridDensity::variance() const {
    const double mu = mean();
    double v = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double dx = grid.node(i) - mu;
        v += grid.weight(i) * dx * dx * values[i];
    }
    return v / integral();
}

std::vector<double> GridDensity::cdf() const {
    std::vector<double> c(values.size(), 0.0);
    const double h = grid.spacing();
    for (std::size_t i = 1; i < values.size(); ++i) c[i] = c[i - 1] + 0.5 * h * (values[i - 1] + values[i]);
    return c;
}

GridDensity density_on_grid(const Grid& grid, const std::function<double(double)>& f) {
    GridDensity d{grid, std::vector<double>(grid.size())};
    for (std::size_t i = 0; i < grid.size(); ++i) d.values[i] = f(grid.node(i));
    normalize(d);
    return d;
}

void normalize(GridDensity& d) {
    const double mass = d.integral();
    if (!(mass > 0.0) || !std::isfinite(mass)) throw NumericalError("density has no positive finite mass");
    for (double& v : d.values) v /= mass;
}

double l1_distance(const GridDensity& a, const GridDensity& b) {
    require_same_grid(a, b);
    double total = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) total += a.grid.weight(i) * std::fabs(a.values[i] - b.values[i]);
    return total;
}

double sup_distance(const GridDensity& a, const GridDensity& b) {
    require_same_grid(a, b);
    double m = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) m = std::max(m, std::fabs(a.values[i] - b.values[i]));
    return m;
}

double ks_distance(const GridDensity& a, const GridDensity& b) {
    require_same_grid(a, b);
    const auto ca = a.cdf();
    const auto cb = b.cdf();
    double m = 0.0;
    for (std::size_t i = 0; i < ca.size(); ++i) m = std::max(m, std::fabs(ca[i] - cb[i]));
    return m;
}

}  // namespace heavytail
