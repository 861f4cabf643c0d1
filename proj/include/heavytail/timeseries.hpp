#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace heavytail {

struct PriceSample {
    std::int64_t timestamp;  ///< seconds since epoch
    double price;
    friend bool operator==(const PriceSample&, const PriceSample&) = default;
};

/// Ordered, strictly increasing, strictly positive price samples of one instrument.
class PriceSeries {
public:
    /// Validates the invariants; throws InputError on violation.
    PriceSeries(std::string instrument, std::vector<PriceSample> samples);

    const std::string& instrument() const noexcept { return instrument_; }
    std::span<const PriceSample> samples() const noexcept { return samples_; }
    std::size_t size() const noexcept { return samples_.size(); }

    friend bool operator==(const PriceSeries&, const PriceSeries&) = default;

private:
    std::string instrument_;
    std::vector<PriceSample> samples_;
};

namespace normalization {
struct Raw {
    friend bool operator==(const Raw&, const Raw&) = default;
};
struct UnitVariance {
    friend bool operator==(const UnitVariance&, const UnitVariance&) = default;
};
struct ReferenceScaled {
    double ref_vol;
    friend bool operator==(const ReferenceScaled&, const ReferenceScaled&) = default;
};
}  // namespace normalization

using Normalization =
    std::variant<normalization::Raw, normalization::UnitVariance, normalization::ReferenceScaled>;

/// Target of `normalize`: only the two non-raw modes are meaningful.
using NormalizeMode = std::variant<normalization::UnitVariance, normalization::ReferenceScaled>;

std::string to_string(const Normalization& n);

struct ReturnSeries {
    std::string instrument;
    std::int64_t interval_seconds = 1;
    std::vector<double> values;
    Normalization normalization = normalization::Raw{};
};

enum class TimeFormat { epoch_seconds, iso8601 };

/// Parses an ISO-8601 timestamp (`YYYY-MM-DD[T| ]hh:mm[:ss[.fff]][Z|+hh:mm|-hh:mm]`
/// or a bare date) into epoch seconds. Fractional seconds are truncated.
std::int64_t parse_iso8601(std::string_view text);

/// Reads `timestamp,price` rows. Header optional, `#` comments and blank lines ignored.
PriceSeries load_prices(std::istream& in, std::string instrument,
                        TimeFormat format = TimeFormat::epoch_seconds);
PriceSeries load_prices(const std::filesystem::path& path,
                        TimeFormat format = TimeFormat::epoch_seconds);

/// Last price per bucket of `interval_seconds`; buckets are aligned to the first
/// sample's bucket and empty buckets are skipped.
PriceSeries resample(const PriceSeries& series, std::int64_t interval_seconds);

/// x[i] = ln(p[i+1]/p[i]); interval recorded as the median timestamp gap.
ReturnSeries log_returns(const PriceSeries& series);

/// Sample standard deviation (n-1). Throws DegenerateInputError on zero variance.
double volatility(std::span<const double> values);
double volatility(const ReturnSeries& returns);

ReturnSeries normalize(const ReturnSeries& returns, const NormalizeMode& mode);

}  // namespace heavytail
