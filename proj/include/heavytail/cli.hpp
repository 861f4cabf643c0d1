#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace heavytail::cli {

enum class Command { returns, density, fit, compare, simulate, stationary, reconcile };

/// Exit statuses.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;  ///< computation or data error
inline constexpr int kExitIo = 2;       ///< input missing or unreadable, output not writable
inline constexpr int kExitUsage = 64;   ///< invalid command line

/// Parsed command line. Every numeric option is checked by `validate` before any
/// file is touched.
struct RunConfig {
    Command command = Command::returns;
    std::string input;
    std::string output = "-";
    std::string report;

    // returns
    std::int64_t interval = 300;
    std::string normalize = "unit";  ///< unit | raw | reference
    double ref_vol = 0.0;
    std::string time_format = "epoch";
    std::string instrument;

    // density / compare
    std::size_t bins = 101;
    std::vector<double> range;

    // fit
    std::string family = "student-t";

    // model
    std::string model = "canonical-t";
    double nu = 3.0;
    double D = 1.0;
    double lambda = 0.0;
    std::string g_family = "rational";

    // simulate
    double dt = 1e-3;
    double steps = 1e6;
    double burn_in = 1e5;
    std::uint64_t seed = 42;
    double x0 = 0.0;
    std::size_t paths = 1;
    std::size_t threads = 0;
    std::size_t thin = 1;
    std::string emit_prices;
    double return_scale = 1e-3;
    double start_price = 100.0;
    std::int64_t price_interval = 300;
    std::int64_t start_timestamp = 1699999800;

    // grid
    double lo = -8.0;
    double hi = 8.0;
    std::size_t nodes = 2001;
};

/// Default seed: HEAVYTAIL_SEED when set to an unsigned integer, else 42.
std::uint64_t default_seed();

/// Throws CLI-independent heavytail::DomainError describing the first invalid option.
void validate(const RunConfig& config);

/// Runs the command described by argv. Diagnostics go to `err`; data go to the
/// output files, or to `out` when the output path is "-".
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace heavytail::cli
