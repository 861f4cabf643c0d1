#pragma once

#include "heavytail/fokker_planck.hpp"
#include "heavytail/grid.hpp"
#include "heavytail/sde_model.hpp"

#include <cstddef>
#include <cstdint>
#include <vector>

namespace heavytail {

/// Euler-Maruyama aborts when |f(x)| dt exceeds this.
inline constexpr double kStiffnessLimit = 0.5;

struct SimPath {
    SdeSpec spec;
    double dt = 0.0;
    std::vector<double> values;  ///< retained states after burn-in, every `thin`-th step
    std::uint64_t seed = 0;
    std::size_t n_discarded = 0;  ///< burn-in steps
    std::size_t thin = 1;
};

struct SimulationRequest {
    double x0 = 0.0;
    double dt = 1e-3;
    std::size_t n_steps = 1;
    std::size_t burn_in = 100000;
    std::uint64_t seed = 42;
    std::size_t thin = 1;  ///< keep every thin-th post-burn-in state
};

/// Ito Euler-Maruyama: x += f(x) dt + g(x) sqrt(D dt) xi, xi ~ NormalGenerator(seed).
/// Runs burn_in + n_steps steps and keeps n_steps / thin states. Bit-identical for identical arguments. Throws StiffnessError or NumericalError.
SimPath simulate(const SdeSpec& spec, const SimulationRequest& request);

/// Independent paths with seeds seed, seed+1, ..., seed+n_paths-1, computed on up to
/// `threads` threads; the result is ordered by seed and independent of `threads`.
std::vector<SimPath> simulate_paths(const SdeSpec& spec, const SimulationRequest& request, std::size_t n_paths,
                                    std::size_t threads = 0);

/// Concatenates path values in order.
std::vector<double> merge_values(const std::vector<SimPath>& paths);

/// Histogram of path states on the grid nodes (node i owns the cell of half-width
/// h/2 around it, clipped to [lo, hi]), normalized as a density. States outside
/// the grid are dropped.
GridDensity stationary_histogram(const SimPath& path, const Grid& grid, std::size_t min_length = 100000);
GridDensity stationary_histogram(const std::vector<double>& values, const Grid& grid,
                                 std::size_t min_length = 100000);

/// Least-squares tail exponent: slope of log P against log(1 + x^2/nu) over the
/// outer half of the grid, sign-flipped so P ~ (1 + x^2/nu)^-exponent.
double fit_tail_exponent(const GridDensity& density, double nu);

struct CaseIiiReconciliation {
    double exponent_measured = 0.0;
    double exponent_claimed = 0.0;  ///< (nu + 1) / 2
    bool agrees = false;            ///< |measured - claimed| < 0.05
};

/// Quadrature of the stationary law of the literal t-model, compared with the
/// exponent of the Student-t it is claimed to produce.
CaseIiiReconciliation reconcile_case_iii(double nu, double D, const Grid& grid);

}  // namespace heavytail
