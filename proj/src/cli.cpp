#include "heavytail/cli.hpp"

#include "heavytail/density.hpp"
#include "heavytail/distributions.hpp"
#include "heavytail/error.hpp"
#include "heavytail/fokker_planck.hpp"
#include "heavytail/plot_io.hpp"
#include "heavytail/sde.hpp"
#include "heavytail/timeseries.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>

namespace heavytail::cli {

namespace {

using nlohmann::ordered_json;

/// Input file missing or unreadable.
class IoError : public Error {
public:
    using Error::Error;
};

void require(bool ok, const std::string& message) {
    if (!ok) throw DomainError(message);
}

bool is_count(double v) { return std::isfinite(v) && v >= 0.0 && v == std::floor(v) && v < 9.0e15; }

std::ifstream open_input(const std::string& path) {
    if (!std::filesystem::is_regular_file(path)) throw IoError("cannot open input file '" + path + "'");
    std::ifstream in(path);
    if (!in) throw IoError("cannot open input file '" + path + "'");
    return in;
}

/// Writes to `out` for "-", otherwise to a file.
class Sink {
public:
    Sink(const std::string& path, std::ostream& fallback) : path_(path) {
        if (path == "-") {
            stream_ = &fallback;
        } else {
            file_ = std::make_unique<std::ofstream>(path);
            if (!*file_) throw IoError("cannot open output file '" + path + "'");
            stream_ = file_.get();
        }
    }
    std::ostream& stream() { return *stream_; }
    void close() {
        stream_->flush();
        if (!*stream_) throw IoError("failed writing '" + path_ + "'");
    }

private:
    std::string path_;
    std::unique_ptr<std::ofstream> file_;
    std::ostream* stream_ = nullptr;
};

SdeSpec make_spec(const RunConfig& c) {
    SdeModel m;
    if (c.model == "gaussian") {
        m = model::Gaussian{};
    } else if (c.model == "canonical-t") {
        m = model::CanonicalT{c.nu};
    } else if (c.model == "paper-t") {
        m = model::PaperT{c.nu};
    } else {
        m = model::Lambda{c.lambda, c.g_family == "sqrt" ? DiffusionFamily::sqrt_rational : DiffusionFamily::rational,
                          c.nu};
    }
    return SdeSpec{std::move(m), c.D};
}

ReturnSeries load_returns_file(const std::string& path) {
    auto in = open_input(path);
    return read_returns(in);
}

ordered_json fit_json(const FitResult& r) {
    ordered_json j;
    std::visit(
        [&](const auto& p) {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, GaussianParams>) {
                j["family"] = "gaussian";
                j["d_hat"] = p.D;
            } else if constexpr (std::is_same_v<T, StudentTParams>) {
                j["family"] = "student_t";
                j["nu_hat"] = p.nu;
                j["q_hat"] = q_of_nu(p.nu);
                j["scale_hat"] = p.scale;
            }
        },
        r.params);
    j["loglik"] = r.log_likelihood;
    j["n"] = r.n;
    j["converged"] = r.converged;
    j["iterations"] = r.iterations;
    j["at_bound"] = r.at_bound;
    return j;
}

void cmd_returns(const RunConfig& c, std::ostream& out) {
    auto in = open_input(c.input);
    const auto format = c.time_format == "iso8601" ? TimeFormat::iso8601 : TimeFormat::epoch_seconds;
    const std::string instrument =
        c.instrument.empty() ? std::filesystem::path(c.input).stem().string() : c.instrument;
    const PriceSeries prices = resample(load_prices(in, instrument, format), c.interval);
    ReturnSeries r = log_returns(prices);
    const double raw_vol = volatility(r);
    if (c.normalize == "unit") {
        r = normalize(r, normalization::UnitVariance{});
    } else if (c.normalize == "reference") {
        r = normalize(r, normalization::ReferenceScaled{c.ref_vol});
    }
    Sink sink(c.output, out);
    write_returns(sink.stream(), r, raw_vol);
    sink.close();
}

DensitySpec density_spec(const RunConfig& c) {
    DensitySpec spec;
    spec.n_bins = c.bins;
    if (c.range.size() == 2) spec.range = std::make_pair(c.range[0], c.range[1]);
    return spec;
}

void cmd_density(const RunConfig& c, std::ostream& out) {
    const ReturnSeries r = load_returns_file(c.input);
    const EmpiricalDensity d = estimate_density(r, density_spec(c));
    Sink sink(c.output, out);
    write_plot_block(sink.stream(), log_density_block(d));
    sink.close();
}

void cmd_fit(const RunConfig& c, std::ostream& out) {
    const ReturnSeries r = load_returns_file(c.input);
    ordered_json j;
    j["instrument"] = r.instrument;
    if (c.family == "student-t" || c.family == "both") j["student_t"] = fit_json(fit_student_t(r));
    if (c.family == "gaussian" || c.family == "both") j["gaussian"] = fit_json(fit_gaussian(r));
    Sink sink(c.output, out);
    sink.stream() << j.dump(2) << '\n';
    sink.close();
}

void cmd_compare(const RunConfig& c, std::ostream& out) {
    const ReturnSeries r = load_returns_file(c.input);
    const FitComparison cmp = compare_fits(r);
    const EmpiricalDensity d = estimate_density(r, density_spec(c));

    const auto& t = std::get<StudentTParams>(cmp.student_t.fit.params);
    const auto& g = std::get<GaussianParams>(cmp.gaussian.fit.params);

    PlotBlock empirical = log_density_block(d);
    PlotBlock t_curve{"student_t", {{"columns", "x log10_p"}, {"nu", format_double(t.nu)}, {"scale", format_double(t.scale)}}, {}};
    PlotBlock g_curve{"gaussian", {{"columns", "x log10_p"}, {"d", format_double(g.D)}}, {}};
    for (std::size_t i = 0; i < d.bins(); ++i) {
        const double x = 0.5 * (d.edges[i] + d.edges[i + 1]);
        t_curve.rows.emplace_back(x, std::log10(student_t_pdf(x, t)));
        g_curve.rows.emplace_back(x, std::log10(gaussian_pdf(x, g)));
    }

    ordered_json j;
    j["instrument"] = r.instrument;
    j["n"] = r.values.size();
    j["nu_hat"] = t.nu;
    j["q_hat"] = q_of_nu(t.nu);
    j["scale_hat"] = t.scale;
    j["d_hat"] = g.D;
    j["ks_student_t"] = cmp.student_t.ks;
    j["ks_gaussian"] = cmp.gaussian.ks;
    j["loglik_student_t"] = cmp.student_t.fit.log_likelihood;
    j["loglik_gaussian"] = cmp.gaussian.fit.log_likelihood;
    j["converged"] = cmp.student_t.fit.converged;
    j["iterations"] = cmp.student_t.fit.iterations;
    j["at_bound"] = cmp.student_t.fit.at_bound;
    j["preferred"] = to_string(cmp.preferred);

    Sink plot(c.output, out);
    write_plot_block(plot.stream(), empirical);
    plot.stream() << '\n';
    write_plot_block(plot.stream(), t_curve);
    plot.stream() << '\n';
    write_plot_block(plot.stream(), g_curve);
    plot.close();
    if (!c.report.empty()) {
        Sink report(c.report, out);
        report.stream() << j.dump(2) << '\n';
        report.close();
    }
}

void cmd_simulate(const RunConfig& c, std::ostream& out) {
    const SdeSpec spec = make_spec(c);
    SimulationRequest req;
    req.x0 = c.x0;
    req.dt = c.dt;
    req.n_steps = static_cast<std::size_t>(c.steps);
    req.burn_in = static_cast<std::size_t>(c.burn_in);
    req.seed = c.seed;
    req.thin = c.thin;
    const auto paths = simulate_paths(spec, req, c.paths, c.threads);
    const auto values = merge_values(paths);

    Sink sink(c.output, out);
    auto& s = sink.stream();
    s << "# model: " << to_string(spec) << '\n'
      << "# dt: " << format_double(c.dt) << '\n'
      << "# steps: " << req.n_steps << '\n'
      << "# burn_in: " << req.burn_in << '\n'
      << "# thin: " << req.thin << '\n'
      << "# seed: " << c.seed << '\n'
      << "# paths: " << c.paths << '\n'
      << "# count: " << values.size() << '\n';
    for (double v : values) s << format_double(v) << '\n';
    sink.close();

    if (!c.emit_prices.empty()) {
        Sink prices(c.emit_prices, out);
        write_price_csv(prices.stream(), values, c.return_scale, c.start_price, c.start_timestamp, c.price_interval);
        prices.close();
    }
}

void cmd_stationary(const RunConfig& c, std::ostream& out) {
    const SdeSpec spec = make_spec(c);
    const Grid grid(c.lo, c.hi, c.nodes);
    const GridDensity p = stationary_density(spec, grid);
    PlotBlock block = grid_density_block(p, "stationary");
    block.meta["model"] = to_string(spec);
    const FreeEnergyReport fe = free_energy(p, spec);
    block.meta["free_energy"] = format_double(fe.F);

    Sink sink(c.output, out);
    write_plot_block(sink.stream(), block);
    if (closed_form_stationary(spec, 0.0)) {
        const GridDensity closed = density_on_grid(grid, [&](double x) { return *closed_form_stationary(spec, x); });
        PlotBlock cf = grid_density_block(closed, "closed_form");
        cf.meta["l1_to_stationary"] = format_double(l1_distance(p, closed));
        sink.stream() << '\n';
        write_plot_block(sink.stream(), cf);
    }
    sink.close();
}

void cmd_reconcile(const RunConfig& c, std::ostream& out) {
    const Grid grid(c.lo, c.hi, c.nodes);
    const CaseIiiReconciliation r = reconcile_case_iii(c.nu, c.D, grid);
    ordered_json j;
    j["nu"] = c.nu;
    j["d"] = c.D;
    j["exponent_measured"] = r.exponent_measured;
    j["exponent_claimed"] = r.exponent_claimed;
    j["agrees"] = r.agrees;
    Sink sink(c.output, out);
    sink.stream() << j.dump(2) << '\n';
    sink.close();
}

void add_model_options(CLI::App* sub, RunConfig& c) {
    sub->add_option("--model", c.model, "gaussian | canonical-t | paper-t | lambda")->capture_default_str();
    sub->add_option("--nu", c.nu, "tail parameter nu")->capture_default_str();
    sub->add_option("--d", c.D, "noise strength D")->capture_default_str();
    sub->add_option("--lambda", c.lambda, "lambda of the lambda model")->capture_default_str();
    sub->add_option("--g-family", c.g_family, "rational | sqrt (lambda model)")->capture_default_str();
}

void add_grid_options(CLI::App* sub, RunConfig& c) {
    sub->add_option("--lo", c.lo, "grid lower bound")->capture_default_str();
    sub->add_option("--hi", c.hi, "grid upper bound")->capture_default_str();
    sub->add_option("--nodes", c.nodes, "grid nodes")->capture_default_str();
}

}  // namespace

std::uint64_t default_seed() {
    if (const char* env = std::getenv("HEAVYTAIL_SEED")) {
        const std::string s(env);
        std::uint64_t v = 0;
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec == std::errc{} && ptr == s.data() + s.size() && !s.empty()) return v;
    }
    return 42;
}

void validate(const RunConfig& c) {
    switch (c.command) {
        case Command::returns:
            require(c.interval >= 1, "--interval must be a positive number of seconds");
            require(c.normalize == "unit" || c.normalize == "raw" || c.normalize == "reference",
                    "--normalize must be unit, raw or reference");
            require(c.normalize != "reference" || (c.ref_vol > 0.0 && std::isfinite(c.ref_vol)),
                    "--normalize reference needs a positive --ref-vol");
            require(c.time_format == "epoch" || c.time_format == "iso8601", "--time-format must be epoch or iso8601");
            break;
        case Command::density:
        case Command::compare:
            require(c.bins >= 1, "--bins must be positive");
            require(c.range.empty() || (c.range.size() == 2 && c.range[0] < c.range[1]),
                    "--range needs two values lo < hi");
            break;
        case Command::fit:
            require(c.family == "student-t" || c.family == "gaussian" || c.family == "both",
                    "--family must be student-t, gaussian or both");
            break;
        case Command::simulate:
        case Command::stationary:
        case Command::reconcile:
            require(c.model == "gaussian" || c.model == "canonical-t" || c.model == "paper-t" || c.model == "lambda",
                    "--model must be gaussian, canonical-t, paper-t or lambda");
            require(c.nu > 0.0 && std::isfinite(c.nu), "--nu must be positive");
            require(c.D > 0.0 && std::isfinite(c.D), "--d must be positive");
            require(std::isfinite(c.lambda), "--lambda must be finite");
            require(c.g_family == "rational" || c.g_family == "sqrt", "--g-family must be rational or sqrt");
            break;
    }
    if (c.command == Command::simulate) {
        require(c.dt > 0.0 && std::isfinite(c.dt), "--dt must be positive");
        require(is_count(c.steps) && c.steps >= 1.0, "--steps must be a positive integer");
        require(is_count(c.burn_in), "--burn-in must be a non-negative integer");
        require(c.paths >= 1, "--paths must be positive");
        require(c.thin >= 1 && static_cast<double>(c.thin) <= c.steps, "--thin must lie in [1, steps]");
        require(std::isfinite(c.x0), "--x0 must be finite");
        require(c.return_scale > 0.0 && std::isfinite(c.return_scale), "--return-scale must be positive");
        require(c.start_price > 0.0 && std::isfinite(c.start_price), "--start-price must be positive");
        require(c.price_interval >= 1, "--price-interval must be positive");
    }
    if (c.command == Command::stationary || c.command == Command::reconcile) {
        require(c.lo < c.hi && std::isfinite(c.lo) && std::isfinite(c.hi), "grid needs finite --lo < --hi");
        require(c.nodes >= 3, "--nodes must be at least 3");
    }
    if (c.command == Command::returns || c.command == Command::density || c.command == Command::fit ||
        c.command == Command::compare)
        require(!c.input.empty(), "--input is required");
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    RunConfig c;
    c.seed = default_seed();

    CLI::App app{"Heavy-tailed return distributions: fitting, Fokker-Planck and Monte-Carlo tools", "heavytail"};
    app.require_subcommand(1);

    auto* returns = app.add_subcommand("returns", "prices CSV -> normalized log-returns");
    returns->add_option("--input,-i", c.input, "price CSV (timestamp,price)");
    returns->add_option("--output,-o", c.output, "returns file, '-' for stdout")->capture_default_str();
    returns->add_option("--interval", c.interval, "resampling interval in seconds")->capture_default_str();
    returns->add_option("--normalize", c.normalize, "unit | raw | reference")->capture_default_str();
    returns->add_option("--ref-vol", c.ref_vol, "target volatility for --normalize reference");
    returns->add_option("--time-format", c.time_format, "epoch | iso8601")->capture_default_str();
    returns->add_option("--instrument", c.instrument, "instrument name (default: file stem)");

    auto* density = app.add_subcommand("density", "returns -> empirical log10 density plot data");
    density->add_option("--input,-i", c.input, "returns file");
    density->add_option("--output,-o", c.output, "plot file")->capture_default_str();
    density->add_option("--bins", c.bins, "number of bins")->capture_default_str();
    density->add_option("--range", c.range, "explicit range lo hi (default +-8 sd)")->expected(2);

    auto* fit = app.add_subcommand("fit", "maximum-likelihood fit of the return distribution");
    fit->add_option("--input,-i", c.input, "returns file");
    fit->add_option("--output,-o", c.output, "JSON report")->capture_default_str();
    fit->add_option("--family", c.family, "student-t | gaussian | both")->capture_default_str();

    auto* compare = app.add_subcommand("compare", "Student-t vs Gaussian overlay and fit report");
    compare->add_option("--input,-i", c.input, "returns file");
    compare->add_option("--output,-o", c.output, "three-block plot file")->capture_default_str();
    compare->add_option("--report", c.report, "JSON report file");
    compare->add_option("--bins", c.bins, "number of bins")->capture_default_str();
    compare->add_option("--range", c.range, "explicit range lo hi (default +-8 sd)")->expected(2);

    auto* simulate = app.add_subcommand("simulate", "Euler-Maruyama simulation of the Langevin model");
    add_model_options(simulate, c);
    simulate->add_option("--dt", c.dt, "time step")->capture_default_str();
    simulate->add_option("--steps", c.steps, "retained steps per path (after burn-in)")->capture_default_str();
    simulate->add_option("--burn-in", c.burn_in, "discarded initial steps")->capture_default_str();
    simulate->add_option("--seed", c.seed, "RNG seed (default HEAVYTAIL_SEED or 42)");
    simulate->add_option("--x0", c.x0, "initial state")->capture_default_str();
    simulate->add_option("--paths", c.paths, "independent paths, seeds seed..seed+paths-1")->capture_default_str();
    simulate->add_option("--threads", c.threads, "worker threads (0 = hardware)")->capture_default_str();
    simulate->add_option("--thin", c.thin, "keep every k-th state")->capture_default_str();
    simulate->add_option("--output,-o", c.output, "one-column path file")->capture_default_str();
    simulate->add_option("--emit-prices", c.emit_prices, "also write a synthetic price CSV");
    simulate->add_option("--return-scale", c.return_scale, "log-return per unit of x")->capture_default_str();
    simulate->add_option("--start-price", c.start_price, "first synthetic price")->capture_default_str();
    simulate->add_option("--price-interval", c.price_interval, "seconds between synthetic prices")
        ->capture_default_str();
    simulate->add_option("--start-timestamp", c.start_timestamp, "epoch seconds of the first synthetic price")
        ->capture_default_str();

    auto* stationary = app.add_subcommand("stationary", "stationary density by quadrature on a grid");
    add_model_options(stationary, c);
    add_grid_options(stationary, c);
    stationary->add_option("--output,-o", c.output, "plot file")->capture_default_str();

    auto* reconcile = app.add_subcommand("reconcile", "tail exponent of the literal t-model vs (nu+1)/2");
    reconcile->add_option("--nu", c.nu, "nu")->capture_default_str();
    reconcile->add_option("--d", c.D, "noise strength D")->capture_default_str();
    add_grid_options(reconcile, c);
    reconcile->add_option("--output,-o", c.output, "JSON report")->capture_default_str();

    const std::vector<std::pair<CLI::App*, Command>> commands{
        {returns, Command::returns},   {density, Command::density},       {fit, Command::fit},
        {compare, Command::compare},   {simulate, Command::simulate},     {stationary, Command::stationary},
        {reconcile, Command::reconcile}};

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "heavytail: " << e.what() << '\n';
        return kExitUsage;
    }
    for (const auto& [sub, cmd] : commands)
        if (sub->parsed()) c.command = cmd;
    if (c.command == Command::reconcile) c.model = "paper-t";

    try {
        validate(c);
    } catch (const DomainError& e) {
        err << "heavytail: usage: " << e.what() << '\n';
        return kExitUsage;
    }

    try {
        switch (c.command) {
            case Command::returns: cmd_returns(c, out); break;
            case Command::density: cmd_density(c, out); break;
            case Command::fit: cmd_fit(c, out); break;
            case Command::compare: cmd_compare(c, out); break;
            case Command::simulate: cmd_simulate(c, out); break;
            case Command::stationary: cmd_stationary(c, out); break;
            case Command::reconcile: cmd_reconcile(c, out); break;
        }
    } catch (const IoError& e) {
        err << "heavytail: " << e.what() << '\n';
        return kExitIo;
    } catch (const std::exception& e) {
        err << "heavytail: " << e.what() << '\n';
        return kExitFailure;
    }
    return kExitOk;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("heavytail");
    for (const auto& a : args) argv.push_back(a.c_str());
    return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace heavytail::cli
