#pragma once

#include "heavytail/timeseries.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <variant>

namespace heavytail {

/// Gaussian in the noise-strength form exp(-x^2 / D) / sqrt(pi D); variance D/2.
struct GaussianParams {
    double D;
    friend bool operator==(const GaussianParams&, const GaussianParams&) = default;
};

/// Student-t with tail exponent nu and scale s: density of s * T_nu.
struct StudentTParams {
    double nu;
    double scale = 1.0;
    friend bool operator==(const StudentTParams&, const StudentTParams&) = default;
};

/// Tsallis q-exponential (1 + u^2 (q-1)/(3-q))^(-1/(q-1)), u = x / scale, 1 < q < 3.
struct QExponentialParams {
    double q;
    double scale = 1.0;
    friend bool operator==(const QExponentialParams&, const QExponentialParams&) = default;
};

using DistParams = std::variant<GaussianParams, StudentTParams, QExponentialParams>;

enum class Family { gaussian, student_t, q_exponential };

Family family_of(const DistParams& p) noexcept;
std::string to_string(Family f);

/// Throws DomainError if the parameters violate their invariants.
void validate(const DistParams& p);

double gaussian_pdf(double x, GaussianParams p);
double gaussian_cdf(double x, GaussianParams p);

double student_t_pdf(double x, StudentTParams p);
double student_t_log_pdf(double x, StudentTParams p);
/// Via the regularized incomplete beta function.
double student_t_cdf(double x, StudentTParams p);
/// Variance s^2 nu/(nu-2); infinite for nu <= 2.
double student_t_variance(StudentTParams p);

double q_exponential_pdf(double x, QExponentialParams p);

/// nu = 2/(q-1) - 1, defined for q in (1, 3).
double nu_of_q(double q);
/// q = 1 + 2/(nu+1), defined for nu > 0.
double q_of_nu(double nu);

/// The q-exponential with parameter q and scale s is exactly the Student-t with
/// nu = nu_of_q(q) and the same scale, because (q-1)/(3-q) = 1/nu.
StudentTParams as_student_t(QExponentialParams p);

double pdf(double x, const DistParams& p);
double cdf(double x, const DistParams& p);

double log_likelihood(std::span<const double> values, const DistParams& p);

struct FitResult {
    DistParams params;
    double log_likelihood = 0.0;
    std::size_t n = 0;
    bool converged = false;
    std::size_t iterations = 0;
    /// The estimate sits on an edge of the search interval (constrained optimum).
    bool at_bound = false;
};

struct StudentTFitOptions {
    double nu_min = 0.5;
    double nu_max = 200.0;
    double nu_tolerance = 1e-6;
    std::size_t max_iterations = 200;
    std::size_t min_samples = 100;
};

/// Maximum likelihood over (nu, scale): golden-section search over log(nu) of the
/// profile likelihood, with the scale solved by safeguarded Newton for each nu.
FitResult fit_student_t(std::span<const double> values, const StudentTFitOptions& options = {});
FitResult fit_student_t(const ReturnSeries& returns, const StudentTFitOptions& options = {});

/// Closed-form MLE under exp(-x^2/D): D = 2 * mean(x^2).
FitResult fit_gaussian(std::span<const double> values);
FitResult fit_gaussian(const ReturnSeries& returns);

/// Kolmogorov-Smirnov distance between the empirical CDF and the model CDF.
double ks_statistic(std::span<const double> values, const DistParams& p, std::size_t min_samples = 100);
double ks_statistic(const ReturnSeries& returns, const DistParams& p);

struct FamilyFit {
    FitResult fit;
    double ks = 0.0;
};

struct FitComparison {
    FamilyFit gaussian;
    FamilyFit student_t;
    Family preferred = Family::student_t;
};

/// Fits both families; the preferred one has the higher log-likelihood.
FitComparison compare_fits(std::span<const double> values, const StudentTFitOptions& options = {});
FitComparison compare_fits(const ReturnSeries& returns, const StudentTFitOptions& options = {});

}  // namespace heavytail
