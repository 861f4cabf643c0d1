#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace heavytail {

/// Uniform node grid on [lo, hi] with n >= 3 nodes.
class Grid {
public:
    Grid(double lo, double hi, std::size_t n);

    double lo() const noexcept { return lo_; }
    double hi() const noexcept { return hi_; }
    std::size_t size() const noexcept { return n_; }
    double spacing() const noexcept { return h_; }
    double node(std::size_t i) const noexcept {
        return i + 1 == n_ ? hi_ : lo_ + h_ * static_cast<double>(i);
    }
    /// Trapezoid weight of node i (h/2 at the ends, h inside).
    double weight(std::size_t i) const noexcept { return (i == 0 || i + 1 == n_) ? 0.5 * h_ : h_; }
    /// Index of the node closest to x (clamped to the grid).
    std::size_t nearest(double x) const noexcept;

    friend bool operator==(const Grid&, const Grid&) = default;

private:
    double lo_;
    double hi_;
    std::size_t n_;
    double h_;
};

/// Trapezoid rule of node values on the grid.
double trapezoid(const Grid& grid, const std::vector<double>& values);

/// Non-negative node values whose trapezoid integral is 1 once normalized.
struct GridDensity {
    Grid grid;
    std::vector<double> values;

    double integral() const { return trapezoid(grid, values); }
    double mean() const;
    double variance() const;
    /// Trapezoid CDF at every node.
    std::vector<double> cdf() const;
};

/// Samples `f` at the nodes and normalizes. Throws NumericalError if the mass is not positive.
GridDensity density_on_grid(const Grid& grid, const std::function<double(double)>& f);

/// Rescales to unit trapezoid integral.
void normalize(GridDensity& d);

/// Trapezoid L1 distance; grids must match.
double l1_distance(const GridDensity& a, const GridDensity& b);
/// Max absolute node difference; grids must match.
double sup_distance(const GridDensity& a, const GridDensity& b);
/// Max CDF difference at the nodes; grids must match.
double ks_distance(const GridDensity& a, const GridDensity& b);

}  // namespace heavytail
