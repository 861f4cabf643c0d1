#pragma once

#include "heavytail/density.hpp"
#include "heavytail/grid.hpp"
#include "heavytail/timeseries.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace heavytail {

/// Returns file: `# key: value` header lines, then one value per line.
/// Recognized keys: instrument, interval_seconds, count, raw_volatility, normalization.
void write_returns(std::ostream& out, const ReturnSeries& r, double raw_volatility);
ReturnSeries read_returns(std::istream& in);

/// A block of a plot file: `# block: <name>`, further `# key: value` metadata,
/// then two numeric columns. Blocks are separated by a blank line.
struct PlotBlock {
    std::string name;
    std::map<std::string, std::string> meta;
    std::vector<std::pair<double, double>> rows;
};

void write_plot_block(std::ostream& out, const PlotBlock& block);
std::vector<PlotBlock> read_plot_blocks(std::istream& in);

/// Empirical log10 density as a plot block; metadata carries bin_width and counts.
PlotBlock log_density_block(const EmpiricalDensity& d, std::string name = "empirical");
/// Re-integrates a log_density_block: sum of 10^y * bin_width.
double integrate_log_density_block(const PlotBlock& block);

/// GridDensity as `x p` rows.
PlotBlock grid_density_block(const GridDensity& d, std::string name);

/// Price CSV `timestamp,price` from returns: p_0 = start_price,
/// p_{k+1} = p_k exp(scale * values[k]) evaluated as start_price * exp(scale * cumsum).
void write_price_csv(std::ostream& out, std::span<const double> values, double scale, double start_price,
                     std::int64_t start_timestamp, std::int64_t interval_seconds);

std::string format_double(double v);

}  // namespace heavytail
