#include "heavytail/fokker_planck.hpp"

#include "heavytail/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace heavytail {

namespace {

std::string node_label(const Grid& grid, std::size_t i) {
    return "node " + std::to_string(i) + " (x = " + std::to_string(grid.node(i)) + ")";
}

}  // namespace

std::vector<double> gibbs_potential(const SdeSpec& spec, const Grid& grid) {
    validate(spec);
    const std::size_t n = grid.size();
    std::vector<double> integrand(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double x = grid.node(i);
        const double g = diffusion(spec, x);
        if (!(g > 0.0)) throw NumericalError("diffusion vanishes at " + node_label(grid, i));
        const double v = (2.0 / spec.D) * (spec.D * g * diffusion_derivative(spec, x) - drift(spec, x)) / (g * g);
        if (!std::isfinite(v)) throw NumericalError("non-finite potential gradient at " + node_label(grid, i));
        integrand[i] = v;
    }

    std::vector<double> phi(n, 0.0);
    const std::size_t anchor = grid.nearest(0.0);
    const double half_h = 0.5 * grid.spacing();
    for (std::size_t i = anchor + 1; i < n; ++i) phi[i] = phi[i - 1] + half_h * (integrand[i - 1] + integrand[i]);
    for (std::size_t i = anchor; i-- > 0;) phi[i] = phi[i + 1] - half_h * (integrand[i] + integrand[i + 1]);
    for (std::size_t i = 0; i < n; ++i)
        if (!std::isfinite(phi[i])) throw NumericalError("potential overflows at " + node_label(grid, i));
    return phi;
}

GridDensity stationary_density(const SdeSpec& spec, const Grid& grid) {
    const auto phi = gibbs_potential(spec, grid);
    // exp(-phi) is evaluated relative to its largest value; the shift cancels in Z.
    const double phi_min = *std::min_element(phi.begin(), phi.end());
    GridDensity d{grid, std::vector<double>(grid.size())};
    for (std::size_t i = 0; i < phi.size(); ++i) d.values[i] = std::exp(-(phi[i] - phi_min));
    normalize(d);
    return d;
}

double max_stable_dt(const SdeSpec& spec, const Grid& grid) {
    validate(spec);
    double g2_max = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double g = diffusion(spec, grid.node(i));
        g2_max = std::max(g2_max, g * g);
    }
    const double h = grid.spacing();
    return 0.4 * h * h / (spec.D * g2_max);
}

Evolution evolve(const SdeSpec& spec, const GridDensity& initial, double dt, std::size_t n_steps) {
    validate(spec);
    const Grid& grid = initial.grid;
    const std::size_t n = grid.size();
    if (initial.values.size() != n) throw DomainError("initial density does not match its grid");
    if (!(dt > 0.0)) throw DomainError("dt must be positive");
    if (const auto p = stationary_tail_power(spec); p && *p <= 3.0)
        throw DomainError("refusing fixed-grid evolution of " + to_string(spec) +
                          ": stationary law has divergent variance");
    const double dt_max = max_stable_dt(spec, grid);
    if (dt > dt_max)
        throw DomainError("dt = " + std::to_string(dt) + " violates the stability bound " + std::to_string(dt_max));

    const double h = grid.spacing();
    std::vector<double> a(n);  // (D/2) g^2
    std::vector<double> f(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double x = grid.node(i);
        const double g = diffusion(spec, x);
        a[i] = 0.5 * spec.D * g * g;
        f[i] = drift(spec, x);
    }
    // Per face i+1/2: 0 = central, +1 = upwind from the left node, -1 = from the right node.
    std::vector<int> mode(n - 1, 0);
    Evolution out{initial, 0.0, 0};
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double face = 0.5 * (f[i] + f[i + 1]);
        if (std::fabs(face) * dt / h > 0.5) {
            mode[i] = face > 0.0 ? 1 : -1;
            ++out.upwind_faces;
        }
    }

    std::vector<double> p = initial.values;
    std::vector<double> flux(n - 1);
    const double inv_h = 1.0 / h;
    for (std::size_t step = 0; step < n_steps; ++step) {
        for (std::size_t i = 0; i + 1 < n; ++i) {
            double adv = 0.0;
            if (mode[i] == 0) {
                adv = 0.5 * (f[i] * p[i] + f[i + 1] * p[i + 1]);
            } else if (mode[i] > 0) {
                adv = f[i] * p[i];
            } else {
                adv = f[i + 1] * p[i + 1];
            }
            flux[i] = adv - (a[i + 1] * p[i + 1] - a[i] * p[i]) * inv_h;
        }
        p[0] -= dt * flux[0] / (0.5 * h);
        for (std::size_t i = 1; i + 1 < n; ++i) p[i] -= dt * (flux[i] - flux[i - 1]) * inv_h;
        p[n - 1] += dt * flux[n - 2] / (0.5 * h);

        for (std::size_t i = 0; i < n; ++i) {
            if (p[i] < -1e-12)
                throw NumericalError("negative density " + std::to_string(p[i]) + " at " + node_label(grid, i) +
                                     " after step " + std::to_string(step + 1));
        }
    }

    out.density.values = std::move(p);
    out.raw_mass = out.density.integral();
    for (double& v : out.density.values) v = std::max(v, 0.0);
    normalize(out.density);
    return out;
}

GridDensity evolve_density(const SdeSpec& spec, const GridDensity& initial, double dt, std::size_t n_steps) {
    return evolve(spec, initial, dt, n_steps).density;
}

FreeEnergyReport free_energy(const GridDensity& p, const SdeSpec& spec) {
    const auto phi = gibbs_potential(spec, p.grid);
    FreeEnergyReport r;
    for (std::size_t i = 0; i < p.values.size(); ++i) {
        const double v = p.values[i];
        const double w = p.grid.weight(i);
        if (v >= 1e-300) r.entropy_term += w * v * std::log(v);
        r.energy_term += w * v * phi[i];
    }
    r.lambda = 0.0;
    r.F = r.entropy_term + r.energy_term - r.lambda;
    return r;
}

}  // namespace heavytail
