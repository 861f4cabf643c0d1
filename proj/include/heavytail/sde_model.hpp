#pragma once

#include <functional>
#include <optional>
#include <string>
#include <variant>

namespace heavytail {

/// Diffusion families available to the lambda case.
enum class DiffusionFamily {
    rational,       ///< g(x) = 1 + x^2/nu
    sqrt_rational,  ///< g(x) = sqrt(1 + x^2/nu)
};

namespace model {

/// f(x) = -x, g(x) = 1: Ornstein-Uhlenbeck with a Gaussian stationary law.
struct Gaussian {};

/// f(x) = lambda g g', g from a fixed family; stationary law g^(-2(1 - lambda/D)).
struct Lambda {
    double lambda;
    DiffusionFamily family;
    double nu;
};

/// Literal t-model: f(x) = (2x/nu)(1 + x^2/nu), g(x) = 1 + x^2/nu.
/// Note f = g g', so this is the lambda case with lambda = 1.
struct PaperT {
    double nu;
};

/// f(x) = -gamma x with gamma = D(nu-1)/(2 nu), g(x) = sqrt(1 + x^2/nu).
/// Its stationary law is the Student-t with nu degrees of freedom and unit scale.
struct CanonicalT {
    double nu;
};

/// User-supplied coefficients. `dg` must be the derivative of `g`.
struct Custom {
    std::function<double(double)> f;
    std::function<double(double)> g;
    std::function<double(double)> dg;
    std::string name = "custom";
};

}  // namespace model

using SdeModel = std::variant<model::Gaussian, model::Lambda, model::PaperT, model::CanonicalT, model::Custom>;

/// Langevin model dx/dt = f(x) + g(x) eps(t) with <eps(t) eps(t')> = D delta(t - t').
struct SdeSpec {
    SdeModel model;
    double D = 1.0;
};

/// Throws DomainError when D <= 0, nu <= 0 or a custom coefficient is missing.
void validate(const SdeSpec& spec);

std::string to_string(const SdeSpec& spec);

/// Drift rate of the canonical t-model, derived from (nu, D).
double canonical_gamma(double nu, double D);

double drift(const SdeSpec& spec, double x);
double diffusion(const SdeSpec& spec, double x);
double diffusion_derivative(const SdeSpec& spec, double x);

/// Unnormalized closed-form stationary density, when the model has one.
std::optional<double> closed_form_stationary(const SdeSpec& spec, double x);

/// Exponent p of the power-law tail P ~ |x|^-p of the stationary law
/// (infinity for the Gaussian case, empty for custom models).
std::optional<double> stationary_tail_power(const SdeSpec& spec);

}  // namespace heavytail
