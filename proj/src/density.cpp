#include "heavytail/density.hpp"

#include "heavytail/error.hpp"

#include <cmath>
#include <string>

namespace heavytail {

double EmpiricalDensity::integral() const {
    double total = 0.0;
    for (std::size_t i = 0; i < heights.size(); ++i) total += heights[i] * bin_width(i);
    return total;
}

EmpiricalDensity estimate_density(std::span<const double> values, const DensitySpec& spec) {
    if (spec.n_bins == 0) throw DomainError("n_bins must be positive");
    if (values.size() < spec.min_samples)
        throw InsufficientDataError("density estimate needs at least " + std::to_string(spec.min_samples) +
                                    " samples, got " + std::to_string(values.size()));
    double lo = 0.0;
    double hi = 0.0;
    if (spec.range) {
        std::tie(lo, hi) = *spec.range;
        if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi))
            throw DomainError("density range requires finite lo < hi");
    } else {
        const double sd = volatility(values);
        lo = -kAutoRangeSigmas * sd;
        hi = kAutoRangeSigmas * sd;
    }

    EmpiricalDensity d;
    const std::size_t m = spec.n_bins;
    const double width = (hi - lo) / static_cast<double>(m);
    d.edges.resize(m + 1);
    for (std::size_t i = 0; i <= m; ++i) d.edges[i] = lo + width * static_cast<double>(i);
    d.edges.back() = hi;
    d.counts.assign(m, 0);

    for (double v : values) {
        if (!(v >= lo && v <= hi)) {
            ++d.out_of_range;
            continue;
        }
        auto idx = static_cast<std::size_t>((v - lo) / width);
        if (idx >= m) idx = m - 1;
        // Floating-point division can land one bin off near an edge.
        while (idx > 0 && v < d.edges[idx]) --idx;
        while (idx + 1 < m && v >= d.edges[idx + 1]) ++idx;
        ++d.counts[idx];
    }
    d.total_count = values.size() - d.out_of_range;
    if (d.total_count == 0) throw InsufficientDataError("no samples inside the density range");

    d.heights.resize(m);
    const double n = static_cast<double>(d.total_count);
    for (std::size_t i = 0; i < m; ++i) d.heights[i] = static_cast<double>(d.counts[i]) / (n * d.bin_width(i));
    return d;
}

EmpiricalDensity estimate_density(const ReturnSeries& returns, const DensitySpec& spec) {
    return estimate_density(std::span<const double>(returns.values), spec);
}

std::vector<LogDensityPoint> log_density_points(const EmpiricalDensity& d) {
    std::vector<LogDensityPoint> pts;
    pts.reserve(d.bins());
    for (std::size_t i = 0; i < d.bins(); ++i) {
        if (d.counts[i] == 0) continue;
        pts.push_back({0.5 * (d.edges[i] + d.edges[i + 1]), std::log10(d.heights[i])});
    }
    return pts;
}

}  // namespace heavytail
