#pragma once

#include <vector>

namespace jpa {

// Real roots of a*x^3 + b*x^2 + c*x + d = 0, ascending, with multiplicity
// collapsed (a double root appears once). Handles the degenerate quadratic /
// linear cases when leading coefficients vanish. Roots are polished with one
// Newton step against the original polynomial.
std::vector<double> solve_cubic_real(double a, double b, double c, double d);

// Discriminant 18abcd - 4b^3d + b^2c^2 - 4ac^3 - 27a^2d^2, normalized by the
// largest contributing term so "zero" is meaningful in floating point.
// Positive: three distinct real roots; negative: one real root; ~0: repeated
// root.
double cubic_discriminant_normalized(double a, double b, double c, double d);

}  // namespace jpa
