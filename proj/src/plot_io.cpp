#include "heavytail/plot_io.hpp"

#include "heavytail/error.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

namespace heavytail {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

bool parse_double(std::string_view s, double& out) {
    s = trim(s);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && ptr == s.data() + s.size() && !s.empty();
}

// "# key: value" -> (key, value); false for plain comments.
bool parse_meta(std::string_view line, std::string& key, std::string& value) {
    line.remove_prefix(1);
    const auto colon = line.find(':');
    if (colon == std::string_view::npos) return false;
    const auto k = trim(line.substr(0, colon));
    if (k.empty() || k.find(' ') != std::string_view::npos) return false;
    key = std::string(k);
    value = std::string(trim(line.substr(colon + 1)));
    return true;
}

Normalization parse_normalization(const std::string& s, std::size_t line) {
    if (s == "raw") return normalization::Raw{};
    if (s == "unit_variance") return normalization::UnitVariance{};
    const std::string prefix = "reference_scaled(";
    if (s.rfind(prefix, 0) == 0 && s.back() == ')') {
        double v = 0.0;
        if (parse_double(std::string_view(s).substr(prefix.size(), s.size() - prefix.size() - 1), v) && v > 0.0)
            return normalization::ReferenceScaled{v};
    }
    throw InputError("unknown normalization '" + s + "'", line);
}

}  // namespace

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_returns(std::ostream& out, const ReturnSeries& r, double raw_volatility) {
    out << "# instrument: " << r.instrument << '\n'
        << "# interval_seconds: " << r.interval_seconds << '\n'
        << "# count: " << r.values.size() << '\n'
        << "# raw_volatility: " << format_double(raw_volatility) << '\n'
        << "# normalization: " << to_string(r.normalization) << '\n';
    for (double v : r.values) out << format_double(v) << '\n';
}

ReturnSeries read_returns(std::istream& in) {
    ReturnSeries r;
    r.instrument = "returns";
    std::string line;
    std::size_t line_no = 0;
    long long declared = -1;
    while (std::getline(in, line)) {
        ++line_no;
        const auto row = trim(line);
        if (row.empty()) continue;
        if (row.front() == '#') {
            std::string key, value;
            if (!parse_meta(row, key, value)) continue;
            if (key == "instrument") {
                r.instrument = value;
            } else if (key == "interval_seconds") {
                double v = 0.0;
                if (!parse_double(value, v) || !(v >= 1.0)) throw InputError("invalid interval_seconds", line_no);
                r.interval_seconds = static_cast<std::int64_t>(v);
            } else if (key == "count") {
                double v = 0.0;
                if (!parse_double(value, v) || v < 0.0) throw InputError("invalid count", line_no);
                declared = static_cast<long long>(v);
            } else if (key == "normalization") {
                r.normalization = parse_normalization(value, line_no);
            }
            continue;
        }
        double v = 0.0;
        if (!parse_double(row, v) || !std::isfinite(v)) throw InputError("malformed return value", line_no);
        r.values.push_back(v);
    }
    if (r.values.empty()) throw InputError("returns file contains no values");
    if (declared >= 0 && static_cast<std::size_t>(declared) != r.values.size())
        throw InputError("header declares " + std::to_string(declared) + " values but file has " +
                         std::to_string(r.values.size()));
    return r;
}

void write_plot_block(std::ostream& out, const PlotBlock& block) {
    out << "# block: " << block.name << '\n';
    for (const auto& [k, v] : block.meta) out << "# " << k << ": " << v << '\n';
    for (const auto& [x, y] : block.rows) out << format_double(x) << "  " << format_double(y) << '\n';
}

std::vector<PlotBlock> read_plot_blocks(std::istream& in) {
    std::vector<PlotBlock> blocks;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto row = trim(line);
        if (row.empty()) continue;
        if (row.front() == '#') {
            std::string key, value;
            if (!parse_meta(row, key, value)) continue;
            if (key == "block") {
                blocks.push_back(PlotBlock{value, {}, {}});
            } else if (!blocks.empty()) {
                blocks.back().meta[key] = value;
            }
            continue;
        }
        if (blocks.empty()) throw InputError("data row before any block header", line_no);
        std::istringstream fields{std::string(row)};
        std::string a, b, extra;
        double x = 0.0, y = 0.0;
        if (!(fields >> a >> b) || (fields >> extra) || !parse_double(a, x) || !parse_double(b, y))
            throw InputError("expected two numeric columns", line_no);
        blocks.back().rows.emplace_back(x, y);
    }
    return blocks;
}

PlotBlock log_density_block(const EmpiricalDensity& d, std::string name) {
    PlotBlock b{std::move(name), {}, {}};
    b.meta["columns"] = "x log10_p";
    b.meta["bin_width"] = format_double(d.bin_width(0));
    b.meta["bins"] = std::to_string(d.bins());
    b.meta["total_count"] = std::to_string(d.total_count);
    b.meta["out_of_range"] = std::to_string(d.out_of_range);
    for (const auto& p : log_density_points(d)) b.rows.emplace_back(p.x, p.log10_p);
    return b;
}

double integrate_log_density_block(const PlotBlock& block) {
    const auto it = block.meta.find("bin_width");
    double width = 0.0;
    if (it == block.meta.end() || !parse_double(it->second, width) || !(width > 0.0))
        throw InputError("block '" + block.name + "' has no valid bin_width");
    double total = 0.0;
    for (const auto& [x, y] : block.rows) total += std::pow(10.0, y) * width;
    return total;
}

PlotBlock grid_density_block(const GridDensity& d, std::string name) {
    PlotBlock b{std::move(name), {}, {}};
    b.meta["columns"] = "x p";
    b.meta["nodes"] = std::to_string(d.grid.size());
    for (std::size_t i = 0; i < d.values.size(); ++i) b.rows.emplace_back(d.grid.node(i), d.values[i]);
    return b;
}

void write_price_csv(std::ostream& out, std::span<const double> values, double scale, double start_price,
                     std::int64_t start_timestamp, std::int64_t interval_seconds) {
    out << "timestamp,price\n";
    double cumulative = 0.0;
    out << start_timestamp << ',' << format_double(start_price) << '\n';
    for (std::size_t k = 0; k < values.size(); ++k) {
        cumulative += scale * values[k];
        const double price = start_price * std::exp(cumulative);
        if (!(price > 0.0) || !std::isfinite(price))
            throw NumericalError("synthetic price leaves the representable range at step " + std::to_string(k + 1));
        out << start_timestamp + static_cast<std::int64_t>(k + 1) * interval_seconds << ',' << format_double(price)
            << '\n';
    }
}

}  // namespace heavytail
