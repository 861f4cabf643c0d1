#pragma once

#include "heavytail/timeseries.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace heavytail {

/// Uniform-bin histogram normalized as a probability density.
///
/// Bin i covers [edges[i], edges[i+1]); the last bin is closed on the right.
/// Samples outside [edges.front(), edges.back()] are counted in `out_of_range`
/// and excluded from the normalization, so the heights always integrate to 1.
struct EmpiricalDensity {
    std::vector<double> edges;
    std::vector<double> heights;
    std::vector<std::size_t> counts;
    std::size_t total_count = 0;   ///< in-range samples (the normalizing count)
    std::size_t out_of_range = 0;  ///< samples that fell outside the edges

    std::size_t bins() const noexcept { return heights.size(); }
    double bin_width(std::size_t i) const { return edges[i + 1] - edges[i]; }
    double integral() const;
};

struct DensitySpec {
    std::size_t n_bins = 101;
    /// Explicit (lo, hi); when empty the range is [-8 sd, +8 sd] of the input.
    std::optional<std::pair<double, double>> range;
    /// Below this many samples the histogram is considered meaningless.
    std::size_t min_samples = 100;
};

inline constexpr double kAutoRangeSigmas = 8.0;

EmpiricalDensity estimate_density(std::span<const double> values, const DensitySpec& spec = {});
EmpiricalDensity estimate_density(const ReturnSeries& returns, const DensitySpec& spec = {});

struct LogDensityPoint {
    double x;
    double log10_p;
};

/// Plot-ready (bin center, log10 height) pairs; empty bins are omitted.
std::vector<LogDensityPoint> log_density_points(const EmpiricalDensity& d);

}  // namespace heavytail
