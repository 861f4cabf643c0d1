#include "heavytail/distributions.hpp"

#include "heavytail/error.hpp"
#include "heavytail/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

namespace heavytail {

namespace {

constexpr double kPi = std::numbers::pi;

// log of the Student-t normalization: ln(sqrt(nu) B(1/2, nu/2)).
double student_t_log_norm(double nu) { return 0.5 * std::log(nu) + special::log_beta(0.5, 0.5 * nu); }

void require_samples(std::size_t n, std::size_t min, const char* what) {
    if (n < min)
        throw InsufficientDataError(std::string(what) + " needs at least " + std::to_string(min) +
                                    " samples, got " + std::to_string(n));
}

// Profile likelihood of the Student-t over the scale for a fixed nu.
class StudentTProfile {
public:
    explicit StudentTProfile(std::span<const double> values) : n_(static_cast<double>(values.size())) {
        squares_.reserve(values.size());
        double m2 = 0.0;
        for (double v : values) {
            squares_.push_back(v * v);
            m2 += v * v;
            if (v != 0.0) ++nonzero_;
        }
        second_moment_ = m2 / n_;
        log_var_ = std::log(second_moment_);
    }

    std::size_t nonzero() const noexcept { return nonzero_; }

    struct Point {
        double nu;
        double var;  ///< scale^2
        double log_likelihood;
    };

    Point evaluate(double nu) {
        if ((nu + 1.0) * static_cast<double>(nonzero_) <= n_)
            throw DegenerateInputError("too many zero returns: Student-t likelihood is unbounded at nu = " +
                                       std::to_string(nu));
        log_var_ = solve_log_var(nu, log_var_);
        const double var = std::exp(log_var_);
        return {nu, var, log_likelihood(nu, var)};
    }

    double log_likelihood(double nu, double var) const {
        double tail = 0.0;
        const double inv = 1.0 / (nu * var);
        for (double x2 : squares_) tail += std::log1p(x2 * inv);
        return -n_ * (student_t_log_norm(nu) + 0.5 * std::log(var)) - 0.5 * (nu + 1.0) * tail;
    }

private:
    // Score in log(var): (nu+1) sum x^2/(nu var + x^2) - n, decreasing in var.
    std::pair<double, double> score(double nu, double log_var) const {
        const double nv = nu * std::exp(log_var);
        double s = 0.0;
        double ds = 0.0;
        for (double x2 : squares_) {
            const double denom = nv + x2;
            const double r = x2 / denom;
            s += r;
            ds += r * nv / denom;
        }
        return {(nu + 1.0) * s - n_, -(nu + 1.0) * ds};
    }

    double solve_log_var(double nu, double start) const {
        constexpr double kStep = 1.3862943611198906;  // ln 4
        double lo = start;
        double hi = start;
        const double s0 = score(nu, start).first;
        if (s0 == 0.0) return start;
        if (s0 > 0.0) {
            double s_hi = s0;
            for (int k = 0; k < 400 && s_hi > 0.0; ++k) {
                lo = hi;
                hi += kStep;
                s_hi = score(nu, hi).first;
            }
            if (!(s_hi < 0.0)) throw NumericalError("cannot bracket the Student-t scale");
        } else {
            double s_lo = s0;
            for (int k = 0; k < 400 && s_lo < 0.0; ++k) {
                hi = lo;
                lo -= kStep;
                s_lo = score(nu, lo).first;
            }
            if (!(s_lo > 0.0)) throw NumericalError("cannot bracket the Student-t scale");
        }

        double t = std::clamp(start, lo, hi);
        for (int it = 0; it < 200; ++it) {
            auto [s, ds] = score(nu, t);
            if (s == 0.0) return t;
            if (s > 0.0) {
                lo = t;
            } else {
                hi = t;
            }
            double next = t - s / ds;
            if (!(next > lo && next < hi) || !std::isfinite(next)) next = 0.5 * (lo + hi);
            if (std::fabs(next - t) < 1e-14 * std::max(1.0, std::fabs(t)) || hi - lo < 1e-14) return next;
            t = next;
        }
        return t;
    }

    double n_;
    std::vector<double> squares_;
    std::size_t nonzero_ = 0;
    double second_moment_ = 0.0;
    double log_var_ = 0.0;
};

}  // namespace

Family family_of(const DistParams& p) noexcept { return static_cast<Family>(p.index()); }

std::string to_string(Family f) {
    switch (f) {
        case Family::gaussian: return "gaussian";
        case Family::student_t: return "student_t";
        case Family::q_exponential: return "q_exponential";
    }
    return "unknown";
}

void validate(const DistParams& p) {
    std::visit(
        [](const auto& m) {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, GaussianParams>) {
                if (!(m.D > 0.0) || !std::isfinite(m.D)) throw DomainError("Gaussian D must be positive");
            } else if constexpr (std::is_same_v<T, StudentTParams>) {
                if (!(m.nu > 0.0) || !std::isfinite(m.nu)) throw DomainError("Student-t nu must be positive");
                if (!(m.scale > 0.0) || !std::isfinite(m.scale))
                    throw DomainError("Student-t scale must be positive");
            } else {
                if (!(m.q > 1.0 && m.q < 3.0)) throw DomainError("q-exponential q must lie in (1, 3)");
                if (!(m.scale > 0.0) || !std::isfinite(m.scale))
                    throw DomainError("q-exponential scale must be positive");
            }
        },
        p);
}

double gaussian_pdf(double x, GaussianParams p) { return std::exp(-x * x / p.D) / std::sqrt(kPi * p.D); }

double gaussian_cdf(double x, GaussianParams p) { return 0.5 * std::erfc(-x / std::sqrt(p.D)); }

double student_t_log_pdf(double x, StudentTParams p) {
    const double u = x / p.scale;
    return -0.5 * (p.nu + 1.0) * std::log1p(u * u / p.nu) - student_t_log_norm(p.nu) - std::log(p.scale);
}

double student_t_pdf(double x, StudentTParams p) { return std::exp(student_t_log_pdf(x, p)); }

double student_t_cdf(double x, StudentTParams p) {
    const double t = x / p.scale;
    if (t == 0.0) return 0.5;
    const double t2 = t * t;
    double tail = 0.0;  // P(T > |t|)
    if (t2 < p.nu) {
        tail = 0.5 * (1.0 - special::incomplete_beta(0.5, 0.5 * p.nu, t2 / (p.nu + t2)));
    } else {
        tail = 0.5 * special::incomplete_beta(0.5 * p.nu, 0.5, p.nu / (p.nu + t2));
    }
    return t < 0.0 ? tail : 1.0 - tail;
}

double student_t_variance(StudentTParams p) {
    if (p.nu <= 2.0) return std::numeric_limits<double>::infinity();
    return p.scale * p.scale * p.nu / (p.nu - 2.0);
}

double q_exponential_pdf(double x, QExponentialParams p) {
    const double u = x / p.scale;
    const double qm1 = p.q - 1.0;
    const double ratio = (3.0 - p.q) / qm1;
    const double exponent = 1.0 / qm1;
    const double log_z = std::log(p.scale) + 0.5 * std::log(ratio) + special::log_beta(0.5, exponent - 0.5);
    return std::exp(-exponent * std::log1p(u * u / ratio) - log_z);
}

double nu_of_q(double q) {
    if (!(q > 1.0 && q < 3.0)) throw DomainError("nu_of_q requires q in (1, 3)");
    return 2.0 / (q - 1.0) - 1.0;
}

double q_of_nu(double nu) {
    if (!(nu > 0.0)) throw DomainError("q_of_nu requires nu > 0");
    return 1.0 + 2.0 / (nu + 1.0);
}

StudentTParams as_student_t(QExponentialParams p) { return {nu_of_q(p.q), p.scale}; }

double pdf(double x, const DistParams& p) {
    return std::visit(
        [x](const auto& m) -> double {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, GaussianParams>) {
                return gaussian_pdf(x, m);
            } else if constexpr (std::is_same_v<T, StudentTParams>) {
                return student_t_pdf(x, m);
            } else {
                return q_exponential_pdf(x, m);
            }
        },
        p);
}

double cdf(double x, const DistParams& p) {
    return std::visit(
        [x](const auto& m) -> double {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, GaussianParams>) {
                return gaussian_cdf(x, m);
            } else if constexpr (std::is_same_v<T, StudentTParams>) {
                return student_t_cdf(x, m);
            } else {
                return student_t_cdf(x, as_student_t(m));
            }
        },
        p);
}

double log_likelihood(std::span<const double> values, const DistParams& p) {
    validate(p);
    if (const auto* g = std::get_if<GaussianParams>(&p)) {
        double m2 = 0.0;
        for (double v : values) m2 += v * v;
        const double n = static_cast<double>(values.size());
        return -m2 / g->D - 0.5 * n * std::log(kPi * g->D);
    }
    const StudentTParams t =
        std::holds_alternative<StudentTParams>(p) ? std::get<StudentTParams>(p) : as_student_t(std::get<QExponentialParams>(p));
    double total = 0.0;
    for (double v : values) total += student_t_log_pdf(v, t);
    return total;
}

FitResult fit_student_t(std::span<const double> values, const StudentTFitOptions& options) {
    require_samples(values.size(), options.min_samples, "fit_student_t");
    if (!(options.nu_min > 0.0 && options.nu_min < options.nu_max))
        throw DomainError("fit_student_t requires 0 < nu_min < nu_max");
    volatility(values);  // throws on zero variance

    StudentTProfile profile(values);
    const double lo = std::log(options.nu_min);
    const double hi = std::log(options.nu_max);
    const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;

    double a = lo;
    double b = hi;
    double c = b - ratio * (b - a);
    double d = a + ratio * (b - a);
    auto fc = profile.evaluate(std::exp(c));
    auto fd = profile.evaluate(std::exp(d));

    FitResult result;
    result.n = values.size();
    std::size_t it = 0;
    while (std::exp(b) - std::exp(a) >= options.nu_tolerance && it < options.max_iterations) {
        ++it;
        if (fc.log_likelihood > fd.log_likelihood) {
            b = d;
            d = c;
            fd = fc;
            c = b - ratio * (b - a);
            fc = profile.evaluate(std::exp(c));
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + ratio * (b - a);
            fd = profile.evaluate(std::exp(d));
        }
    }
    result.iterations = it;
    result.converged = std::exp(b) - std::exp(a) < options.nu_tolerance;

    auto best = fc.log_likelihood > fd.log_likelihood ? fc : fd;
    // The bracket collapses onto an edge when the profile is monotone there.
    if (a == lo || b == hi) {
        const auto edge = profile.evaluate(a == lo ? options.nu_min : options.nu_max);
        if (edge.log_likelihood >= best.log_likelihood) {
            best = edge;
            result.at_bound = true;
        }
    }
    result.params = StudentTParams{best.nu, std::sqrt(best.var)};
    result.log_likelihood = best.log_likelihood;
    return result;
}

FitResult fit_student_t(const ReturnSeries& returns, const StudentTFitOptions& options) {
    return fit_student_t(std::span<const double>(returns.values), options);
}

FitResult fit_gaussian(std::span<const double> values) {
    require_samples(values.size(), 2, "fit_gaussian");
    volatility(values);
    double m2 = 0.0;
    for (double v : values) m2 += v * v;
    const double n = static_cast<double>(values.size());
    const GaussianParams p{2.0 * m2 / n};
    FitResult r;
    r.params = p;
    r.n = values.size();
    r.log_likelihood = -0.5 * n - 0.5 * n * std::log(kPi * p.D);
    r.converged = true;
    return r;
}

FitResult fit_gaussian(const ReturnSeries& returns) { return fit_gaussian(std::span<const double>(returns.values)); }

double ks_statistic(std::span<const double> values, const DistParams& p, std::size_t min_samples) {
    require_samples(values.size(), min_samples, "ks_statistic");
    validate(p);
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(sorted.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const double f = cdf(sorted[i], p);
        d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
    }
    return d;
}

double ks_statistic(const ReturnSeries& returns, const DistParams& p) { return ks_statistic(returns.values, p); }

FitComparison compare_fits(std::span<const double> values, const StudentTFitOptions& options) {
    FitComparison c;
    c.gaussian.fit = fit_gaussian(values);
    c.student_t.fit = fit_student_t(values, options);
    c.gaussian.ks = ks_statistic(values, c.gaussian.fit.params, options.min_samples);
    c.student_t.ks = ks_statistic(values, c.student_t.fit.params, options.min_samples);
    c.preferred = c.student_t.fit.log_likelihood > c.gaussian.fit.log_likelihood ? Family::student_t : Family::gaussian;
    return c;
}

FitComparison compare_fits(const ReturnSeries& returns, const StudentTFitOptions& options) {
    return compare_fits(std::span<const double>(returns.values), options);
}

}  // namespace heavytail
