#pragma once

#include <optional>

#include "pidmap/cubic.hpp"
#include "pidmap/gainmap.hpp"
#include "pidmap/linalg.hpp"
#include "pidmap/plant.hpp"

namespace pidmap {

/// Third-order closed-loop error system in companion form, states
/// (qI, e1, e2), driven through B = (0, 0, 1)^T.
struct ClosedLoopMatrix {
  linalg::Mat3 A;

  static constexpr linalg::Vec3 B{0.0, 0.0, 1.0};

  /// Coefficients {c2, c1, c0} of det(sI - A) = s^3 + c2 s^2 + c1 s + c0.
  std::array<double, 3> char_poly() const;

  /// Companion matrix for a monic cubic s^3 + c2 s^2 + c1 s + c0.
  static ClosedLoopMatrix from_char_poly(double c2, double c1, double c0);
};

ClosedLoopMatrix closed_loop_matrix(const PidGains& gains, const PlantParams& truth);

/// Stability inequalities on the gains and the (unknown-to-the-controller)
/// truth: K_P > a1/(1+b), K_D > a2/(1+b), 0 < K_I < (K_P - a1/(1+b))((1+b)K_D - a2).
/// Necessary and sufficient for exponential stability of the error loop.
bool routh_condition(const PidGains& gains, const PlantParams& truth);

/// Eigenvalues of the companion matrix (roots of its characteristic cubic).
CubicSolution closed_loop_eigenvalues(const ClosedLoopMatrix& m);

/// Eigenvalue route: true iff every root of the characteristic cubic has a
/// strictly negative real part. Independent of routh_condition, which tests
/// the inequalities directly; the two must agree.
bool is_hurwitz(const ClosedLoopMatrix& m);

/// Solves P A + A^T P = -I for symmetric P via the linear system in the
/// n(n+1)/2 distinct entries. Empty when the system is singular or the
/// solution is not positive definite (A not Hurwitz).
std::optional<linalg::Mat2> solve_lyapunov(const linalg::Mat2& A);
std::optional<linalg::Mat3> solve_lyapunov(const linalg::Mat3& A);

/// Eigenvalues of a symmetric matrix, ascending. 3x3 goes through the cubic
/// solver on the characteristic polynomial.
linalg::Vec2 sym_eigenvalues(const linalg::Mat2& P);
linalg::Vec3 sym_eigenvalues(const linalg::Mat3& P);

struct UltimateBoundReport {
  linalg::Mat3 P;
  double lambda_max = 0.0;
  double lambda_min = 0.0;
  double theta = 0.0;
  double u_inf = 0.0;
  double bound = 0.0;  // (2 |B| u_inf / theta) sqrt(lambda_max^3 / lambda_min)
};

/// Lyapunov ultimate bound of the forced companion system. Throws
/// std::invalid_argument if the matrix is not Hurwitz, theta is outside
/// (0, 1), or u_inf < 0.
UltimateBoundReport ultimate_bound(const ClosedLoopMatrix& m, double u_inf, double theta = 0.5);

/// Result of the single-parameter stability search over T.
struct StabilityThreshold {
  enum class Status {
    stable_everywhere,   ///< Hurwitz at every tested T in the range
    threshold_found,     ///< largest T below which all tested T are Hurwitz
    unstable_at_minimum  ///< not Hurwitz even at the range minimum
  };

  Status status = Status::unstable_at_minimum;
  double t_bar = 0.0;  // +inf for stable_everywhere, NaN for unstable_at_minimum
};

/// Scans a log grid over [t_min, t_max] and bisects the first
/// stable-to-unstable transition to 1e-4 relative width. The returned
/// threshold bounds the contiguous stable prefix: Hurwitz verdicts at larger
/// isolated T values (stability islands) do not extend it.
StabilityThreshold find_T_bar(double kp, double kd, const PlantParams& truth,
                              double t_min = 1e-4, double t_max = 1e3);

}  // namespace pidmap
