#include "heavytail/timeseries.hpp"

#include "heavytail/error.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <string_view>

namespace heavytail {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

template <typename T>
bool parse_number(std::string_view s, T& out) {
    s = trim(s);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    const auto* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, out);
    return ec == std::errc{} && ptr == end && !s.empty();
}

int parse_fixed_int(std::string_view s, std::size_t pos, std::size_t len) {
    if (pos + len > s.size()) throw InputError("truncated ISO-8601 timestamp '" + std::string(s) + "'");
    int v = 0;
    for (std::size_t i = pos; i < pos + len; ++i) {
        if (s[i] < '0' || s[i] > '9')
            throw InputError("invalid ISO-8601 timestamp '" + std::string(s) + "'");
        v = v * 10 + (s[i] - '0');
    }
    return v;
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

}  // namespace

PriceSeries::PriceSeries(std::string instrument, std::vector<PriceSample> samples)
    : instrument_(std::move(instrument)), samples_(std::move(samples)) {
    if (samples_.empty()) throw InputError("price series is empty");
    for (std::size_t i = 0; i < samples_.size(); ++i) {
        if (!(samples_[i].price > 0.0) || !std::isfinite(samples_[i].price))
            throw InputError("non-positive price at sample " + std::to_string(i));
        if (i > 0 && samples_[i].timestamp <= samples_[i - 1].timestamp)
            throw InputError("timestamps not strictly increasing at sample " + std::to_string(i));
    }
}

std::string to_string(const Normalization& n) {
    return std::visit(
        [](const auto& m) -> std::string {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, normalization::Raw>) {
                return "raw";
            } else if constexpr (std::is_same_v<T, normalization::UnitVariance>) {
                return "unit_variance";
            } else {
                char buf[64];
                std::snprintf(buf, sizeof buf, "reference_scaled(%.17g)", m.ref_vol);
                return buf;
            }
        },
        n);
}

std::int64_t parse_iso8601(std::string_view text) {
    using namespace std::chrono;
    const std::string_view s = trim(text);
    const int y = parse_fixed_int(s, 0, 4);
    if (s.size() < 10 || s[4] != '-' || s[7] != '-')
        throw InputError("invalid ISO-8601 date '" + std::string(s) + "'");
    const int mo = parse_fixed_int(s, 5, 2);
    const int d = parse_fixed_int(s, 8, 2);
    const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
    if (!ymd.ok()) throw InputError("invalid calendar date '" + std::string(s) + "'");

    std::int64_t secs = 0;
    std::size_t pos = 10;
    if (pos < s.size()) {
        if (s[pos] != 'T' && s[pos] != ' ')
            throw InputError("invalid ISO-8601 timestamp '" + std::string(s) + "'");
        const int hh = parse_fixed_int(s, pos + 1, 2);
        if (pos + 3 >= s.size() || s[pos + 3] != ':')
            throw InputError("invalid ISO-8601 time '" + std::string(s) + "'");
        const int mm = parse_fixed_int(s, pos + 4, 2);
        int ss = 0;
        pos += 6;
        if (pos < s.size() && s[pos] == ':') {
            ss = parse_fixed_int(s, pos + 1, 2);
            pos += 3;
            if (pos < s.size() && s[pos] == '.') {
                ++pos;
                while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') ++pos;
            }
        }
        if (hh > 23 || mm > 59 || ss > 60)
            throw InputError("time of day out of range in '" + std::string(s) + "'");
        secs = hh * 3600 + mm * 60 + ss;
        if (pos < s.size()) {
            if (s[pos] == 'Z' && pos + 1 == s.size()) {
                // UTC
            } else if ((s[pos] == '+' || s[pos] == '-') && pos + 6 == s.size() && s[pos + 3] == ':') {
                const int sign = s[pos] == '+' ? 1 : -1;
                const int oh = parse_fixed_int(s, pos + 1, 2);
                const int om = parse_fixed_int(s, pos + 4, 2);
                secs -= sign * (oh * 3600 + om * 60);
            } else {
                throw InputError("invalid UTC offset in '" + std::string(s) + "'");
            }
        }
    }
    const auto days = sys_days{ymd}.time_since_epoch().count();
    return static_cast<std::int64_t>(days) * 86400 + secs;
}

PriceSeries load_prices(std::istream& in, std::string instrument, TimeFormat format) {
    std::vector<PriceSample> samples;
    std::string line;
    std::size_t line_no = 0;
    bool seen_data = false;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view row = trim(line);
        if (row.empty() || row.front() == '#') continue;

        const auto comma = row.find(',');
        if (comma == std::string_view::npos || row.find(',', comma + 1) != std::string_view::npos)
            throw InputError("expected two comma-separated columns", line_no);
        const std::string_view ts_field = trim(row.substr(0, comma));
        const std::string_view px_field = trim(row.substr(comma + 1));

        PriceSample sample{};
        bool ts_ok = false;
        if (format == TimeFormat::epoch_seconds) {
            ts_ok = parse_number(ts_field, sample.timestamp);
        } else {
            try {
                sample.timestamp = parse_iso8601(ts_field);
                ts_ok = true;
            } catch (const InputError&) {
                ts_ok = false;
            }
        }
        const bool px_ok = parse_number(px_field, sample.price);

        if (!ts_ok || !px_ok) {
            // A non-numeric first row is a header.
            if (!seen_data && samples.empty() && !ts_ok && !px_ok) {
                seen_data = true;
                continue;
            }
            throw InputError(std::string("malformed ") + (ts_ok ? "price" : "timestamp") + " field", line_no);
        }
        seen_data = true;
        if (!(sample.price > 0.0) || !std::isfinite(sample.price))
            throw InputError("non-positive price " + std::string(px_field), line_no);
        if (!samples.empty() && sample.timestamp <= samples.back().timestamp)
            throw InputError("timestamp not strictly increasing", line_no);
        samples.push_back(sample);
    }
    if (samples.size() < 2)
        throw InputError("need at least 2 valid rows, found " + std::to_string(samples.size()));
    return PriceSeries(std::move(instrument), std::move(samples));
}

PriceSeries load_prices(const std::filesystem::path& path, TimeFormat format) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path.string());
    return load_prices(in, path.stem().string(), format);
}

PriceSeries resample(const PriceSeries& series, std::int64_t interval_seconds) {
    if (interval_seconds < 1) throw DomainError("resample interval must be >= 1 second");
    std::vector<PriceSample> out;
    for (const auto& s : series.samples()) {
        const std::int64_t bucket = floor_div(s.timestamp, interval_seconds) * interval_seconds;
        if (!out.empty() && out.back().timestamp == bucket) {
            out.back().price = s.price;
        } else {
            out.push_back({bucket, s.price});
        }
    }
    return PriceSeries(series.instrument(), std::move(out));
}

ReturnSeries log_returns(const PriceSeries& series) {
    if (series.size() < 2) throw InsufficientDataError("log_returns needs at least 2 prices");
    const auto samples = series.samples();
    ReturnSeries r;
    r.instrument = series.instrument();
    r.values.reserve(samples.size() - 1);
    std::vector<std::int64_t> gaps;
    gaps.reserve(samples.size() - 1);
    for (std::size_t i = 0; i + 1 < samples.size(); ++i) {
        r.values.push_back(std::log(samples[i + 1].price / samples[i].price));
        gaps.push_back(samples[i + 1].timestamp - samples[i].timestamp);
    }
    auto mid = gaps.begin() + static_cast<std::ptrdiff_t>(gaps.size() / 2);
    std::nth_element(gaps.begin(), mid, gaps.end());
    r.interval_seconds = *mid;
    return r;
}

double volatility(std::span<const double> values) {
    if (values.size() < 2) throw InsufficientDataError("volatility needs at least 2 values");
    // exact check: rounding in the mean must not turn identical values into a tiny variance
    if (std::adjacent_find(values.begin(), values.end(), std::not_equal_to<>()) == values.end())
        throw DegenerateInputError("zero variance: all returns are equal");
    const double n = static_cast<double>(values.size());
    const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / (n - 1.0));
    if (!(sd > 0.0)) throw DegenerateInputError("zero variance: all returns are equal");
    return sd;
}

double volatility(const ReturnSeries& returns) { return volatility(returns.values); }

ReturnSeries normalize(const ReturnSeries& returns, const NormalizeMode& mode) {
    const double current = volatility(returns);
    const double target = std::visit(
        [](const auto& m) -> double {
            if constexpr (std::is_same_v<std::decay_t<decltype(m)>, normalization::UnitVariance>) {
                return 1.0;
            } else {
                return m.ref_vol;
            }
        },
        mode);
    if (!(target > 0.0) || !std::isfinite(target))
        throw DomainError("reference volatility must be positive and finite");

    ReturnSeries out = returns;
    const double factor = target / current;
    for (double& v : out.values) v *= factor;
    out.normalization = std::visit([](const auto& m) -> Normalization { return m; }, mode);
    return out;
}

}  // namespace heavytail
