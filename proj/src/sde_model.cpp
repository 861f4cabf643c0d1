#include "heavytail/sde_model.hpp"

#include "heavytail/error.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

namespace heavytail {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_nu(double nu) {
    if (!(nu > 0.0) || !std::isfinite(nu)) throw DomainError("model nu must be positive and finite");
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

}  // namespace

void validate(const SdeSpec& spec) {
    if (!(spec.D > 0.0) || !std::isfinite(spec.D)) throw DomainError("noise strength D must be positive");
    std::visit(overloaded{
                   [](const model::Gaussian&) {},
                   [](const model::Lambda& m) {
                       require_nu(m.nu);
                       if (!std::isfinite(m.lambda)) throw DomainError("lambda must be finite");
                   },
                   [](const model::PaperT& m) { require_nu(m.nu); },
                   [](const model::CanonicalT& m) { require_nu(m.nu); },
                   [](const model::Custom& m) {
                       if (!m.f || !m.g || !m.dg) throw DomainError("custom model needs f, g and g'");
                   },
               },
               spec.model);
}

std::string to_string(const SdeSpec& spec) {
    const std::string d = ", D=" + fmt(spec.D);
    return std::visit(overloaded{
                          [&](const model::Gaussian&) { return "gaussian(" + d.substr(2) + ")"; },
                          [&](const model::Lambda& m) {
                              return std::string("lambda(lambda=") + fmt(m.lambda) + ", g=" +
                                     (m.family == DiffusionFamily::rational ? "rational" : "sqrt-rational") +
                                     ", nu=" + fmt(m.nu) + d + ")";
                          },
                          [&](const model::PaperT& m) { return "paper-t(nu=" + fmt(m.nu) + d + ")"; },
                          [&](const model::CanonicalT& m) { return "canonical-t(nu=" + fmt(m.nu) + d + ")"; },
                          [&](const model::Custom& m) { return m.name + "(" + d.substr(2) + ")"; },
                      },
                      spec.model);
}

double canonical_gamma(double nu, double D) { return D * (nu - 1.0) / (2.0 * nu); }

double drift(const SdeSpec& spec, double x) {
    return std::visit(overloaded{
                          [&](const model::Gaussian&) { return -x; },
                          [&](const model::Lambda& m) {
                              return m.lambda * diffusion(spec, x) * diffusion_derivative(spec, x);
                          },
                          [&](const model::PaperT& m) { return (2.0 * x / m.nu) * (1.0 + x * x / m.nu); },
                          [&](const model::CanonicalT& m) { return -canonical_gamma(m.nu, spec.D) * x; },
                          [&](const model::Custom& m) { return m.f(x); },
                      },
                      spec.model);
}

double diffusion(const SdeSpec& spec, double x) {
    return std::visit(overloaded{
                          [&](const model::Gaussian&) { return 1.0; },
                          [&](const model::Lambda& m) {
                              const double r = 1.0 + x * x / m.nu;
                              return m.family == DiffusionFamily::rational ? r : std::sqrt(r);
                          },
                          [&](const model::PaperT& m) { return 1.0 + x * x / m.nu; },
                          [&](const model::CanonicalT& m) { return std::sqrt(1.0 + x * x / m.nu); },
                          [&](const model::Custom& m) { return m.g(x); },
                      },
                      spec.model);
}

double diffusion_derivative(const SdeSpec& spec, double x) {
    return std::visit(overloaded{
                          [&](const model::Gaussian&) { return 0.0; },
                          [&](const model::Lambda& m) {
                              if (m.family == DiffusionFamily::rational) return 2.0 * x / m.nu;
                              return (x / m.nu) / std::sqrt(1.0 + x * x / m.nu);
                          },
                          [&](const model::PaperT& m) { return 2.0 * x / m.nu; },
                          [&](const model::CanonicalT& m) { return (x / m.nu) / std::sqrt(1.0 + x * x / m.nu); },
                          [&](const model::Custom& m) { return m.dg(x); },
                      },
                      spec.model);
}

std::optional<double> closed_form_stationary(const SdeSpec& spec, double x) {
    const double D = spec.D;
    return std::visit(overloaded{
                          [&](const model::Gaussian&) -> std::optional<double> { return std::exp(-x * x / D); },
                          [&](const model::Lambda& m) -> std::optional<double> {
                              return std::pow(diffusion(spec, x), -2.0 * (1.0 - m.lambda / D));
                          },
                          [&](const model::PaperT&) -> std::optional<double> {
                              return std::pow(diffusion(spec, x), -2.0 * (1.0 - 1.0 / D));
                          },
                          [&](const model::CanonicalT& m) -> std::optional<double> {
                              return std::pow(1.0 + x * x / m.nu, -0.5 * (m.nu + 1.0));
                          },
                          [](const model::Custom&) -> std::optional<double> { return std::nullopt; },
                      },
                      spec.model);
}

std::optional<double> stationary_tail_power(const SdeSpec& spec) {
    const double D = spec.D;
    return std::visit(overloaded{
                          [](const model::Gaussian&) -> std::optional<double> {
                              return std::numeric_limits<double>::infinity();
                          },
                          [&](const model::Lambda& m) -> std::optional<double> {
                              const double k = m.family == DiffusionFamily::rational ? 4.0 : 2.0;
                              return k * (1.0 - m.lambda / D);
                          },
                          [&](const model::PaperT&) -> std::optional<double> { return 4.0 * (1.0 - 1.0 / D); },
                          [](const model::CanonicalT& m) -> std::optional<double> { return m.nu + 1.0; },
                          [](const model::Custom&) -> std::optional<double> { return std::nullopt; },
                      },
                      spec.model);
}

}  // namespace heavytail
