#pragma once

namespace heavytail::special {

/// ln B(a, b) via lgamma.
double log_beta(double a, double b);

/// Regularized incomplete beta I_x(a, b) for a, b > 0, x in [0, 1].
/// Continued fraction (modified Lentz) with the usual symmetry switch;
/// relative accuracy ~1e-14 in the convergent region.
double incomplete_beta(double a, double b, double x);

}  // namespace heavytail::special
