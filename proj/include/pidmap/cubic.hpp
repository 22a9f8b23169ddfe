#pragma once

#include <complex>
#include <optional>
#include <vector>

namespace pidmap {

/// Root structure of a real cubic, keyed by the sign of the discriminant
/// D = (p/3)^3 + (q/2)^2 of the depressed form y^3 + p y + q.
enum class CubicCase {
  one_real,    ///< D > 0: one real root plus a complex-conjugate pair
  three_real,  ///< D < 0: three distinct real roots
  degenerate,  ///< D = 0: a repeated real root (triple when p = q = 0)
};

struct CubicRoot {
  double value = 0.0;
  int multiplicity = 1;
};

struct CubicSolution {
  double a = 0.0, b = 0.0, c = 0.0, d = 0.0;  // a x^3 + b x^2 + c x + d
  double p = 0.0, q = 0.0;                    // depressed coefficients, x = y - b/(3a)
  double discriminant = 0.0;
  CubicCase kind = CubicCase::one_real;
  std::vector<CubicRoot> real_roots;                 // ascending by value
  std::optional<std::complex<double>> complex_pair;  // the Im > 0 member, when present

  /// Number of real roots counted with multiplicity (1 or 3).
  int real_root_count() const;

  /// p evaluated at x (Horner).
  double eval(double x) const;
};

/// Solves a x^3 + b x^2 + c x + d = 0 exactly by radicals / trigonometry,
/// classifies the discriminant, and Newton-polishes every real root.
/// Throws std::invalid_argument when a == 0.
CubicSolution solve_cubic(double a, double b, double c, double d);

/// Largest real part over all roots, real and complex.
double max_real_part(const CubicSolution& s);

}  // namespace pidmap
