#include "pidmap/cubic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace pidmap {

namespace {

// Two damped Newton steps on the original cubic. Closed-form extraction is
// accurate to a few ulps for well-separated roots but loses digits near a
// repeated root; polishing recovers them. Steps that do not reduce |f| are
// rejected, which keeps repeated roots (f' ~ 0 there) from being kicked away.
double polish(double x, double a, double b, double c, double d) {
  for (int it = 0; it < 2; ++it) {
    const double f = ((a * x + b) * x + c) * x + d;
    const double fp = (3.0 * a * x + 2.0 * b) * x + c;
    if (fp == 0.0) break;
    const double step = f / fp;
    if (!std::isfinite(step) || std::abs(step) > 0.1 * (1.0 + std::abs(x))) break;
    const double xn = x - step;
    const double fn = ((a * xn + b) * xn + c) * xn + d;
    if (std::abs(fn) > std::abs(f)) break;
    x = xn;
  }
  return x;
}

}  // namespace

int CubicSolution::real_root_count() const {
  int n = 0;
  for (const auto& r : real_roots) n += r.multiplicity;
  return n;
}

double CubicSolution::eval(double x) const {
  return ((a * x + b) * x + c) * x + d;
}

CubicSolution solve_cubic(double a, double b, double c, double d) {
  if (a == 0.0 || !std::isfinite(a)) {
    throw std::invalid_argument("solve_cubic: leading coefficient must be nonzero (not a cubic)");
  }

  CubicSolution s;
  s.a = a;
  s.b = b;
  s.c = c;
  s.d = d;

  const double ba = b / a;
  const double ca = c / a;
  const double da = d / a;
  const double shift = ba / 3.0;  // x = y - b/(3a)

  s.p = ca - ba * ba / 3.0;
  s.q = (2.0 / 27.0) * ba * ba * ba - ba * ca / 3.0 + da;

  const double p3 = s.p / 3.0;
  const double q2 = s.q / 2.0;
  s.discriminant = p3 * p3 * p3 + q2 * q2;

  // Floating-point D never lands exactly on zero for a repeated root, so the
  // degenerate case is a relative band around it.
  const double d_scale = std::max({1.0, std::abs(p3 * p3 * p3), q2 * q2});
  const bool degenerate = std::abs(s.discriminant) <= 1e-12 * d_scale;

  if (degenerate) {
    s.kind = CubicCase::degenerate;
    const double y_scale = 1.0 + std::abs(shift);
    if (std::abs(s.p) <= 1e-9 * y_scale * y_scale &&
        std::abs(s.q) <= 1e-9 * y_scale * y_scale * y_scale) {
      // p = q = 0: triple root at the shift point.
      s.real_roots.push_back({polish(-shift, a, b, c, d), 3});
    } else {
      // Double root m and simple root -2m of the depressed cubic
      // (from p = -3m^2, q = 2m^3).
      const double m = -3.0 * s.q / (2.0 * s.p);
      const double y_double = m;
      const double y_single = -2.0 * m;
      s.real_roots.push_back({polish(y_double - shift, a, b, c, d), 2});
      s.real_roots.push_back({polish(y_single - shift, a, b, c, d), 1});
    }
  } else if (s.discriminant > 0.0) {
    // Cardano: one real root, one conjugate pair.
    s.kind = CubicCase::one_real;
    const double sq = std::sqrt(s.discriminant);
    const double u = std::cbrt(-q2 + sq);
    const double v = std::cbrt(-q2 - sq);
    const double y_real = u + v;
    s.real_roots.push_back({polish(y_real - shift, a, b, c, d), 1});
    const double re = -0.5 * y_real - shift;
    const double im = 0.5 * std::sqrt(3.0) * std::abs(u - v);
    s.complex_pair = std::complex<double>(re, im);
  } else {
    // Three distinct real roots via the trigonometric method.
    s.kind = CubicCase::three_real;
    const double rho = 2.0 * std::sqrt(-p3);
    double cosarg = 3.0 * s.q / (2.0 * s.p) * std::sqrt(-3.0 / s.p);
    cosarg = std::clamp(cosarg, -1.0, 1.0);
    const double phi = std::acos(cosarg);
    for (int k = 0; k < 3; ++k) {
      const double y = rho * std::cos(phi / 3.0 - 2.0 * std::numbers::pi * k / 3.0);
      s.real_roots.push_back({polish(y - shift, a, b, c, d), 1});
    }
  }

  std::sort(s.real_roots.begin(), s.real_roots.end(),
            [](const CubicRoot& x, const CubicRoot& y) { return x.value < y.value; });
  return s;
}

double max_real_part(const CubicSolution& s) {
  double m = -std::numeric_limits<double>::infinity();
  for (const auto& r : s.real_roots) m = std::max(m, r.value);
  if (s.complex_pair) m = std::max(m, s.complex_pair->real());
  return m;
}

}  // namespace pidmap
