#include "heavytail/distributions.hpp"
#include "heavytail/error.hpp"
#include "heavytail/special_functions.hpp"

#include "doctest.h"
#include "oracles.hpp"

#include <boost/math/special_functions/beta.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

using namespace heavytail;

namespace {

// Mass of a symmetric density over [-L, L] by adaptive quadrature on log-spaced panels.
template <class F>
double symmetric_mass(F f, double L) {
    double total = 0.0;
    double a = 0.0;
    for (double b : {1.0, 10.0, 100.0, 1e3, 1e4, 1e5, 1e6}) {
        const double hi = std::min(b, L);
        if (hi > a) total += oracle::integrate(f, a, hi);
        a = hi;
    }
    return 2.0 * total;
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return v[v.size() / 2];
}

}  // namespace

TEST_CASE("gaussian_pdf") {
    const double z = oracle::integrate([](double x) { return std::exp(-x * x); }, -40.0, 40.0);
    CHECK(gaussian_pdf(0.0, {1.0}) == doctest::Approx(1.0 / z).epsilon(1e-13));
    CHECK(gaussian_pdf(0.0, {1.0}) == doctest::Approx(0.5642).epsilon(1e-4));
    CHECK(gaussian_pdf(1e3, {1.0}) == 0.0);
    CHECK(gaussian_pdf(-1e3, {1.0}) == 0.0);
    CHECK(gaussian_pdf(1.7, {2.0}) == gaussian_pdf(-1.7, {2.0}));
    CHECK(gaussian_cdf(0.7, {2.0}) == doctest::Approx(oracle::normal_cdf(0.7, 1.0)).epsilon(1e-14));
}

TEST_CASE("student_t_pdf") {
    const double z = 2.0 * oracle::integrate_to_infinity([](double x) { return std::pow(1.0 + x * x / 3.0, -2.0); }, 0.0);
    CHECK(student_t_pdf(0.0, {3.0, 1.0}) == doctest::Approx(1.0 / z).epsilon(1e-12));
    CHECK(student_t_pdf(0.0, {3.0, 1.0}) == doctest::Approx(2.0 / (std::numbers::pi * std::sqrt(3.0))).epsilon(1e-14));
    CHECK(student_t_pdf(5.0, {3.0, 1.0}) == student_t_pdf(-5.0, {3.0, 1.0}));
    CHECK(student_t_pdf(2.0, {3.0, 0.5}) == doctest::Approx(2.0 * student_t_pdf(4.0, {3.0, 1.0})).epsilon(1e-14));
    CHECK(student_t_variance({3.0, 2.0}) == doctest::Approx(12.0));
    CHECK(std::isinf(student_t_variance({2.0, 1.0})));
}

TEST_CASE("student_t_pdf: Gaussian limit at nu = 1000, variance matched") {
    const double nu = 1000.0;
    const StudentTParams t{nu, std::sqrt((nu - 2.0) / nu)};
    const GaussianParams g{2.0};
    double sup = 0.0;
    for (int i = 0; i <= 10000; ++i) {
        const double x = -5.0 + 1e-3 * i;
        sup = std::max(sup, std::fabs(student_t_pdf(x, t) - gaussian_pdf(x, g)));
    }
    CHECK(sup < 1e-3);
}

TEST_CASE("q_exponential_pdf") {
    for (double x : {-7.0, -1.3, 0.0, 0.4, 2.0, 31.0}) {
        CHECK(std::fabs(q_exponential_pdf(x, {1.5, 1.0}) - student_t_pdf(x, {3.0, 1.0})) < 1e-12);
    }
    // peak value is the normalization alone
    const double z = 2.0 * oracle::integrate_to_infinity(
                               [](double x) { return std::pow(1.0 + x * x * 0.5 / 1.5, -2.0); }, 0.0);
    CHECK(q_exponential_pdf(0.0, {1.5, 1.0}) == doctest::Approx(1.0 / z).epsilon(1e-12));
    // q -> 1+: unit-scale q-exponential tends to the unit-variance Gaussian (D = 2)
    for (double x : {0.0, 0.5, 1.0, 2.0}) CHECK(std::fabs(q_exponential_pdf(x, {1.001, 1.0}) - gaussian_pdf(x, {2.0})) < 1e-3);
}

TEST_CASE("nu <-> q mapping") {
    CHECK(q_of_nu(3.0) == 1.5);
    CHECK(nu_of_q(1.5) == 3.0);
    CHECK(nu_of_q(q_of_nu(7.3)) == doctest::Approx(7.3).epsilon(1e-12));
    CHECK(q_of_nu(1e15) - 1.0 < 1e-14);
    CHECK_THROWS_AS(nu_of_q(1.0), DomainError);
    CHECK_THROWS_AS(nu_of_q(3.0), DomainError);
    CHECK_THROWS_AS(q_of_nu(0.0), DomainError);
}

TEST_CASE("property: reparameterization identity over q and x") {
    for (double q = 1.01; q < 2.99; q += 0.07) {
        for (double s : {0.3, 1.0, 4.0}) {
            const QExponentialParams qp{q, s};
            const StudentTParams tp = as_student_t(qp);
            CHECK(tp.scale == s);
            for (double x = -20.0; x <= 20.0; x += 0.9) CHECK(std::fabs(q_exponential_pdf(x, qp) - student_t_pdf(x, tp)) < 1e-12);
        }
    }
}

TEST_CASE("property: every pdf integrates to one") {
    const double L = 1e6;
    for (double nu : {0.5, 1.0, 2.0, 3.0, 10.0, 100.0}) {
        const StudentTParams p{nu, 1.0};
        double mass = symmetric_mass([&](double x) { return student_t_pdf(x, p); }, L);
        if (nu <= 2.0) mass += 2.0 * (1.0 - oracle::student_t_cdf(L, nu));  // analytic tail beyond L
        CHECK_MESSAGE(std::fabs(mass - 1.0) < 1e-6, "nu = " << nu);
    }
    for (double q : {1.2, 1.5, 2.5}) {
        const QExponentialParams p{q, 1.0};
        double mass = symmetric_mass([&](double x) { return q_exponential_pdf(x, p); }, L);
        if (nu_of_q(q) <= 2.0) mass += 2.0 * (1.0 - oracle::student_t_cdf(L, nu_of_q(q)));
        CHECK_MESSAGE(std::fabs(mass - 1.0) < 1e-6, "q = " << q);
    }
    for (double D : {0.5, 2.0}) CHECK(std::fabs(symmetric_mass([&](double x) { return gaussian_pdf(x, {D}); }, L) - 1.0) < 1e-6);
}

TEST_CASE("property: pdfs strictly decrease in |x|") {
    const std::vector<DistParams> params{GaussianParams{1.0}, StudentTParams{0.7, 1.0}, StudentTParams{3.0, 2.0},
                                         QExponentialParams{1.5, 1.0}};
    for (const auto& p : params) {
        double prev = pdf(0.0, p);
        for (double x = 0.25; x <= 8.0; x += 0.25) {
            const double v = pdf(x, p);
            CHECK(v < prev);
            CHECK(pdf(-x, p) == v);
            prev = v;
        }
    }
}

TEST_CASE("incomplete beta and Student-t CDF against Boost") {
    for (double a : {0.5, 1.0, 1.5, 25.0, 100.0})
        for (double b : {0.5, 2.0, 40.0})
            for (double x : {1e-6, 0.01, 0.3, 0.5, 0.77, 0.999})
                CHECK(std::fabs(special::incomplete_beta(a, b, x) - boost::math::ibeta(a, b, x)) < 1e-12);
    CHECK(special::incomplete_beta(2.0, 3.0, 0.0) == 0.0);
    CHECK(special::incomplete_beta(2.0, 3.0, 1.0) == 1.0);
    CHECK_THROWS_AS(special::incomplete_beta(-1.0, 3.0, 0.5), DomainError);

    double worst = 0.0;
    for (double nu : {0.5, 1.0, 2.5, 3.0, 7.0, 30.0, 200.0})
        for (double x = -60.0; x <= 60.0; x += 0.37)
            worst = std::max(worst, std::fabs(student_t_cdf(x, {nu, 1.0}) - oracle::student_t_cdf(x, nu)));
    CHECK(worst < 1e-10);
    CHECK(student_t_cdf(0.0, {3.0, 1.0}) == 0.5);
    CHECK(student_t_cdf(1.2, {3.0, 2.0}) == doctest::Approx(oracle::student_t_cdf(0.6, 3.0)).epsilon(1e-12));
}

TEST_CASE("fit_student_t") {
    SUBCASE("recovers nu = 3") {
        const auto xs = oracle::student_t_draws(3.0, 1.0, 100000, 314);
        const auto r = fit_student_t(xs);
        const auto& p = std::get<StudentTParams>(r.params);
        CHECK(r.converged);
        CHECK_FALSE(r.at_bound);
        CHECK(r.n == xs.size());
        CHECK(p.nu >= 2.85);
        CHECK(p.nu <= 3.15);
        CHECK(p.scale == doctest::Approx(1.0).epsilon(0.02));
        CHECK(r.log_likelihood == doctest::Approx(log_likelihood(xs, r.params)).epsilon(1e-10));
    }
    SUBCASE("Gaussian input runs into the Gaussian limit") {
        const auto xs = oracle::gaussian_draws(1.0, 100000, 271);
        const auto r = fit_student_t(xs);
        CHECK(std::get<StudentTParams>(r.params).nu >= 50.0);
    }
    SUBCASE("errors") {
        CHECK_THROWS_AS(fit_student_t(std::vector<double>(200, 0.01)), DegenerateInputError);
        CHECK_THROWS_AS(fit_student_t(oracle::gaussian_draws(1.0, 99, 1)), InsufficientDataError);
    }
    SUBCASE("iteration cap gives an honest non-converged result") {
        const auto xs = oracle::student_t_draws(3.0, 1.0, 2000, 8);
        StudentTFitOptions opt;
        opt.max_iterations = 3;
        const auto r = fit_student_t(xs, opt);
        CHECK_FALSE(r.converged);
        CHECK(r.iterations == 3);
    }
}

TEST_CASE("property: the fit is a local maximum") {
    std::mt19937_64 eng(5);
    std::uniform_real_distribution<double> jitter(-0.05, 0.05);
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        const auto xs = oracle::student_t_draws(3.0, 0.7, 20000, seed);
        const auto r = fit_student_t(xs);
        REQUIRE(r.converged);
        const auto best = std::get<StudentTParams>(r.params);
        for (double f : {0.99, 1.01}) CHECK(log_likelihood(xs, StudentTParams{best.nu * f, best.scale}) < r.log_likelihood);
        for (int k = 0; k < 100; ++k) {
            const StudentTParams p{best.nu * (1.0 + jitter(eng)), best.scale * (1.0 + jitter(eng))};
            CHECK(log_likelihood(xs, p) <= r.log_likelihood + 1e-9);
        }
    }
}

TEST_CASE("property: nu estimate error shrinks with n") {
    std::vector<double> medians;
    for (std::size_t n : {1000u, 10000u, 100000u}) {
        std::vector<double> errs;
        for (std::uint64_t seed = 0; seed < 9; ++seed) {
            const auto xs = oracle::student_t_draws(3.0, 1.0, n, 7000 + seed);
            errs.push_back(std::fabs(std::get<StudentTParams>(fit_student_t(xs).params).nu - 3.0));
        }
        medians.push_back(median(errs));
    }
    CHECK(medians[1] < medians[0]);
    CHECK(medians[2] < medians[1]);
}

TEST_CASE("fit_gaussian") {
    const auto r = fit_gaussian(std::vector<double>{-1.0, 0.0, 0.0, 1.0});
    CHECK(std::get<GaussianParams>(r.params).D == 1.0);
    CHECK(r.log_likelihood == doctest::Approx(log_likelihood(std::vector<double>{-1.0, 0.0, 0.0, 1.0}, r.params)));

    auto xs = oracle::gaussian_draws(1.0, 100000, 3);
    CHECK(std::get<GaussianParams>(fit_gaussian(xs).params).D == doctest::Approx(2.0).epsilon(0.02));
    CHECK_THROWS_AS(fit_gaussian(std::vector<double>(10, 0.4)), DegenerateInputError);
    CHECK_THROWS_AS(fit_gaussian(std::vector<double>{1.0}), InsufficientDataError);
}

TEST_CASE("ks_statistic") {
    const std::size_t n = 100000;
    const auto t3 = oracle::student_t_draws(3.0, 1.0, n, 4242);
    SUBCASE("sample from the model") {
        const double ks = ks_statistic(t3, StudentTParams{3.0, 1.0});
        CHECK(ks < 1.63 / std::sqrt(static_cast<double>(n)));
        CHECK(ks == doctest::Approx(oracle::ks(t3, [](double x) { return oracle::student_t_cdf(x, 3.0); })).epsilon(1e-8));
    }
    SUBCASE("Gaussian model at matched variance against a nu = 3 sample") {
        // brute-force distance between the two analytic CDFs at variance 3
        double analytic = 0.0;
        for (double x = -10.0; x <= 10.0; x += 1e-3)
            analytic = std::max(analytic, std::fabs(oracle::normal_cdf(x, std::sqrt(3.0)) - oracle::student_t_cdf(x, 3.0)));
        CHECK(analytic > 0.02);
        CHECK(ks_statistic(t3, GaussianParams{6.0}) > 0.02);
        CHECK(ks_statistic(t3, fit_gaussian(t3).params) > 0.02);
    }
    SUBCASE("model quantiles give the grid resolution") {
        std::vector<double> q(1000);
        const boost::math::students_t_distribution<double> dist(3.0);
        for (std::size_t i = 0; i < q.size(); ++i) q[i] = boost::math::quantile(dist, (i + 0.5) / q.size());
        CHECK(ks_statistic(q, StudentTParams{3.0, 1.0}) <= 0.5 / q.size() + 1e-10);
        CHECK(ks_statistic(q, QExponentialParams{1.5, 1.0}) <= 0.5 / q.size() + 1e-10);
    }
    CHECK_THROWS_AS(ks_statistic(std::vector<double>(50, 1.0), GaussianParams{1.0}), InsufficientDataError);
}

TEST_CASE("compare_fits") {
    SUBCASE("nu = 3 sample prefers the Student-t") {
        const auto xs = oracle::student_t_draws(3.0, 1.0, 100000, 61);
        const auto c = compare_fits(xs);
        CHECK(c.preferred == Family::student_t);
        CHECK(c.student_t.fit.log_likelihood > c.gaussian.fit.log_likelihood);
        CHECK(c.gaussian.ks > c.student_t.ks);
    }
    SUBCASE("Gaussian sample: fitted shape is Gaussian-compatible") {
        const auto xs = oracle::gaussian_draws(1.0, 100000, 62);
        const auto c = compare_fits(xs);
        CHECK(std::get<StudentTParams>(c.student_t.fit.params).nu >= 50.0);
    }
    SUBCASE("tiny sample") {
        const auto c = compare_fits(oracle::student_t_draws(3.0, 1.0, 100, 63));
        CHECK(c.student_t.fit.n == 100);
    }
}

TEST_CASE("property: preferred family is invariant under rescaling") {
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
        for (bool heavy : {true, false}) {
            const auto xs = heavy ? oracle::student_t_draws(3.0, 1.0, 5000, 900 + seed)
                                  : oracle::gaussian_draws(1.0, 5000, 900 + seed);
            const auto base = compare_fits(xs).preferred;
            for (double c : {1e-3, 0.37, 250.0}) {
                auto scaled = xs;
                for (double& v : scaled) v *= c;
                CHECK(compare_fits(scaled).preferred == base);
            }
        }
    }
}
