#pragma once

#include "heavytail/grid.hpp"
#include "heavytail/sde_model.hpp"

#include <cstddef>
#include <vector>

namespace heavytail {

/// Dimensionless potential phi = w/D of the Gibbs form P = exp(-phi)/Z:
///   phi(x) = (2/D) * integral of (D g g' - f) / g^2,
/// integrated by the trapezoid rule outward from the node closest to x = 0,
/// where phi is anchored to 0.
/// Throws NumericalError when g <= 0 or the integrand is not finite at a node.
std::vector<double> gibbs_potential(const SdeSpec& spec, const Grid& grid);

/// Stationary solution of the Fokker-Planck equation by quadrature, normalized
/// to unit trapezoid mass.
GridDensity stationary_density(const SdeSpec& spec, const Grid& grid);

/// Largest step accepted by evolve_density: 0.4 h^2 / (D max g^2).
double max_stable_dt(const SdeSpec& spec, const Grid& grid);

struct Evolution {
    GridDensity density;  ///< renormalized output
    double raw_mass = 0.0;       ///< trapezoid mass before the final renormalization
    std::size_t upwind_faces = 0;  ///< cell faces using the upwind drift flux
};

/// Explicit finite-volume integration of
///   dP/dt = d2/dx2 [(D/2) g^2 P] - d/dx [f P]
/// with zero-flux boundaries. Drift fluxes are central, switching to upwind on
/// faces where |f| dt / h > 0.5. Mass is conserved up to rounding.
///
/// Throws DomainError on a stability-bound violation or when the stationary law
/// has divergent variance (tail power <= 3), NumericalError if the density goes
/// below -1e-12.
Evolution evolve(const SdeSpec& spec, const GridDensity& initial, double dt, std::size_t n_steps);

GridDensity evolve_density(const SdeSpec& spec, const GridDensity& initial, double dt, std::size_t n_steps);

struct FreeEnergyReport {
    double entropy_term = 0.0;  ///< integral of P log P
    double energy_term = 0.0;   ///< integral of P w / D
    double lambda = 0.0;
    double F = 0.0;             ///< entropy_term + energy_term - lambda
};

/// Generating functional F[P] = integral of P (log P + w/D - lambda), lambda = 0.
FreeEnergyReport free_energy(const GridDensity& p, const SdeSpec& spec);

}  // namespace heavytail
