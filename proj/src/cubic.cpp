#include "jpa/cubic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace jpa {

namespace {

// One Newton step; keeps the root if the step degrades the residual.
double polish(double a, double b, double c, double d, double x) {
  const double p = ((a * x + b) * x + c) * x + d;
  const double dp = (3.0 * a * x + 2.0 * b) * x + c;
  if (dp == 0.0) return x;
  const double y = x - p / dp;
  const double py = ((a * y + b) * y + c) * y + d;
  return std::abs(py) <= std::abs(p) ? y : x;
}

std::vector<double> solve_quadratic(double b, double c, double d) {
  if (b == 0.0) {
    if (c == 0.0) return {};  // constant polynomial: no roots (or all x when d==0)
    return {-d / c};
  }
  const double disc = c * c - 4.0 * b * d;
  if (disc < 0.0) return {};
  if (disc == 0.0) return {-c / (2.0 * b)};
  // Numerically stable pair: avoid cancellation in the small root.
  const double q = -0.5 * (c + std::copysign(std::sqrt(disc), c));
  std::vector<double> roots{q / b, d / q};
  std::sort(roots.begin(), roots.end());
  return roots;
}

}  // namespace

std::vector<double> solve_cubic_real(double a, double b, double c, double d) {
  if (a == 0.0) return solve_quadratic(b, c, d);

  // Normalize and depress: x = t - b/(3a) gives t^3 + p t + q = 0.
  const double bn = b / a;
  const double cn = c / a;
  const double dn = d / a;
  const double shift = bn / 3.0;
  const double p = cn - bn * bn / 3.0;
  const double q = 2.0 * bn * bn * bn / 27.0 - bn * cn / 3.0 + dn;

  std::vector<double> roots;
  const double half_q = q / 2.0;
  const double third_p = p / 3.0;
  const double disc = half_q * half_q + third_p * third_p * third_p;
  const double scale = std::max({std::abs(half_q * half_q),
                                 std::abs(third_p * third_p * third_p), 1e-300});

  if (disc > 1e-14 * scale) {
    // One real root (Cardano).
    const double s = std::sqrt(disc);
    const double u = std::cbrt(-half_q + s);
    const double v = std::cbrt(-half_q - s);
    roots.push_back(u + v - shift);
  } else if (disc < -1e-14 * scale) {
    // Three distinct real roots (trigonometric form).
    const double r = std::sqrt(-third_p);
    const double arg = std::clamp(-half_q / (r * r * r), -1.0, 1.0);
    const double theta = std::acos(arg) / 3.0;
    for (int k = 0; k < 3; ++k) {
      roots.push_back(2.0 * r * std::cos(theta - 2.0 * std::numbers::pi * k / 3.0) - shift);
    }
  } else {
    // Repeated roots: t^3 + pt + q with discriminant ~ 0.
    if (std::abs(p) < 1e-14 * std::max(1.0, std::cbrt(scale))) {
      roots.push_back(-shift);  // triple root
    } else {
      const double t1 = 3.0 * q / p;         // simple root
      const double t2 = -3.0 * q / (2.0 * p);  // double root
      roots.push_back(t1 - shift);
      roots.push_back(t2 - shift);
    }
  }

  for (double& x : roots) x = polish(a, b, c, d, x);
  std::sort(roots.begin(), roots.end());
  return roots;
}

double cubic_discriminant_normalized(double a, double b, double c, double d) {
  const double t1 = 18.0 * a * b * c * d;
  const double t2 = -4.0 * b * b * b * d;
  const double t3 = b * b * c * c;
  const double t4 = -4.0 * a * c * c * c;
  const double t5 = -27.0 * a * a * d * d;
  const double scale =
      std::max({std::abs(t1), std::abs(t2), std::abs(t3), std::abs(t4), std::abs(t5), 1e-300});
  return (t1 + t2 + t3 + t4 + t5) / scale;
}

}  // namespace jpa
