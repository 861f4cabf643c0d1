#include "heavytail/density.hpp"
#include "heavytail/error.hpp"

#include "doctest.h"
#include "oracles.hpp"

#include <array>
#include <cmath>
#include <numbers>

using namespace heavytail;

TEST_CASE("estimate_density: Gaussian sample against the analytic pdf") {
    const auto draws = oracle::gaussian_draws(1.0, 1'000'000, 2024);
    const auto d = estimate_density(draws, DensitySpec{100, std::nullopt});
    REQUIRE(d.bins() == 100);
    // 100 bins: 0 is the edge between bins 49 and 50
    const double peak = 1.0 / std::sqrt(2.0 * std::numbers::pi);
    CHECK(std::fabs(d.heights[49] - peak) < 0.01);
    CHECK(std::fabs(d.heights[50] - peak) < 0.01);
    CHECK(std::fabs(d.integral() - 1.0) < 1e-9);
    const double sd = volatility(draws);
    CHECK(d.edges.front() == doctest::Approx(-8.0 * sd));
    CHECK(d.edges.back() == doctest::Approx(8.0 * sd));
}

TEST_CASE("estimate_density: degenerate mass point") {
    const std::vector<double> zeros(100, 0.0);
    const auto d = estimate_density(zeros, DensitySpec{2, std::make_pair(-1.0, 1.0)});
    CHECK(d.counts == std::vector<std::size_t>{0, 100});
    CHECK(d.heights[1] == 1.0);
    CHECK(std::fabs(d.integral() - 1.0) < 1e-12);
}

TEST_CASE("estimate_density: hand-binned two-sample case") {
    // bins [-2,-1) [-1,0) [0,1) [1,2]; -1 falls in bin 1, +1 in bin 3
    const std::vector<double> xs{-1.0, 1.0};
    const auto d = estimate_density(xs, DensitySpec{4, std::make_pair(-2.0, 2.0), 2});
    CHECK(d.counts == std::vector<std::size_t>{0, 1, 0, 1});
    CHECK(d.heights == std::vector<double>{0.0, 0.5, 0.0, 0.5});
    CHECK(d.total_count == 2);
}

TEST_CASE("estimate_density: out-of-range samples are tracked, not normalized") {
    std::vector<double> xs(200, 0.5);
    xs.push_back(10.0);
    xs.push_back(-3.0);
    const auto d = estimate_density(xs, DensitySpec{10, std::make_pair(-1.0, 1.0)});
    CHECK(d.out_of_range == 2);
    CHECK(d.total_count == 200);
    CHECK(std::fabs(d.integral() - 1.0) < 1e-12);

    // the right edge itself is inside the last bin
    const std::vector<double> edge(100, 1.0);
    CHECK(estimate_density(edge, DensitySpec{4, std::make_pair(-1.0, 1.0)}).counts[3] == 100);
}

TEST_CASE("estimate_density: errors") {
    const auto few = oracle::gaussian_draws(1.0, 99, 1);
    CHECK_THROWS_AS(estimate_density(few), InsufficientDataError);
    const auto ok = oracle::gaussian_draws(1.0, 100, 1);
    CHECK_THROWS_AS(estimate_density(ok, DensitySpec{10, std::make_pair(1.0, 1.0)}), DomainError);
    CHECK_THROWS_AS(estimate_density(ok, DensitySpec{0, std::nullopt}), DomainError);
    CHECK_THROWS_AS(estimate_density(std::vector<double>(100, 2.0)), DegenerateInputError);
}

TEST_CASE("log_density_points") {
    EmpiricalDensity one{{0.0, 1.0}, {1.0}, {7}, 7, 0};
    const auto pts = log_density_points(one);
    REQUIRE(pts.size() == 1);
    CHECK(pts[0].x == 0.5);
    CHECK(pts[0].log10_p == 0.0);

    EmpiricalDensity gap{{0.0, 1.0, 2.0, 3.0}, {0.5, 0.0, 0.5}, {1, 0, 1}, 2, 0};
    const auto g = log_density_points(gap);
    REQUIRE(g.size() == 2);
    CHECK(g[0].x == 0.5);
    CHECK(g[1].x == 2.5);
}

TEST_CASE("log_density_points: Gaussian sample traces a parabola") {
    const auto draws = oracle::gaussian_draws(1.0, 1'000'000, 77);
    const auto pts = log_density_points(estimate_density(draws));
    // least-squares fit y = a0 + a1 x + a2 x^2 over |x| < 3
    std::array<std::array<double, 4>, 3> m{};
    for (const auto& p : pts) {
        if (std::fabs(p.x) >= 3.0) continue;
        const std::array<double, 3> phi{1.0, p.x, p.x * p.x};
        for (int r = 0; r < 3; ++r) {
            for (int c = 0; c < 3; ++c) m[r][c] += phi[r] * phi[c];
            m[r][3] += phi[r] * p.log10_p;
        }
    }
    for (int k = 0; k < 3; ++k)
        for (int r = 0; r < 3; ++r) {
            if (r == k) continue;
            const double f = m[r][k] / m[k][k];
            for (int c = 0; c < 4; ++c) m[r][c] -= f * m[k][c];
        }
    const double a2 = m[2][3] / m[2][2];
    const double a1 = m[1][3] / m[1][1];
    CHECK(a2 == doctest::Approx(-1.0 / (2.0 * std::numbers::ln10)).epsilon(0.02));
    CHECK(std::fabs(a1) < 0.01);
}

TEST_CASE("property: integral, bin doubling and mirror symmetry") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        auto xs = oracle::student_t_draws(3.0, 1.0, 20000, seed);
        const auto d1 = estimate_density(xs, DensitySpec{51, std::nullopt});
        const auto d2 = estimate_density(xs, DensitySpec{102, std::nullopt});
        CHECK(std::fabs(d1.integral() - 1.0) < 1e-9);
        CHECK(std::fabs(d2.integral() - 1.0) < 1e-9);
        CHECK(d1.total_count == d2.total_count);
        CHECK(d1.out_of_range == d2.out_of_range);

        const std::size_t n = xs.size();
        for (std::size_t i = 0; i < n; ++i) xs.push_back(-xs[i]);
        const auto s = estimate_density(xs, DensitySpec{101, std::make_pair(-6.0, 6.0)});
        for (std::size_t i = 0; i < s.bins(); ++i) {
            const double a = static_cast<double>(s.counts[i]);
            const double b = static_cast<double>(s.counts[s.bins() - 1 - i]);
            CHECK(std::fabs(a - b) <= 3.0 * std::sqrt(std::max(a, 1.0)));
        }
    }
}
