#include "pidmap/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

namespace pidmap {

namespace linalg {

bool solve_dense(double* A, double* b, int n) {
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r) {
      if (std::abs(A[r * n + col]) > std::abs(A[piv * n + col])) piv = r;
    }
    if (A[piv * n + col] == 0.0) return false;
    if (piv != col) {
      for (int c = 0; c < n; ++c) std::swap(A[col * n + c], A[piv * n + c]);
      std::swap(b[col], b[piv]);
    }
    for (int r = col + 1; r < n; ++r) {
      const double f = A[r * n + col] / A[col * n + col];
      if (f == 0.0) continue;
      for (int c = col; c < n; ++c) A[r * n + c] -= f * A[col * n + c];
      b[r] -= f * b[col];
    }
  }
  for (int r = n - 1; r >= 0; --r) {
    double s = b[r];
    for (int c = r + 1; c < n; ++c) s -= A[r * n + c] * b[c];
    b[r] = s / A[r * n + r];
  }
  return true;
}

}  // namespace linalg

std::array<double, 3> ClosedLoopMatrix::char_poly() const {
  // det(sI - A) = s^3 - tr s^2 + m2 s - det. For a companion matrix this
  // reduces exactly to the last-row entries; the general form also covers
  // non-companion inputs such as -I.
  const double tr = A(0, 0) + A(1, 1) + A(2, 2);
  const double m2 = A(0, 0) * A(1, 1) - A(0, 1) * A(1, 0) +
                    A(0, 0) * A(2, 2) - A(0, 2) * A(2, 0) +
                    A(1, 1) * A(2, 2) - A(1, 2) * A(2, 1);
  const double det = A(0, 0) * (A(1, 1) * A(2, 2) - A(1, 2) * A(2, 1)) -
                     A(0, 1) * (A(1, 0) * A(2, 2) - A(1, 2) * A(2, 0)) +
                     A(0, 2) * (A(1, 0) * A(2, 1) - A(1, 1) * A(2, 0));
  return {-tr, m2, -det};
}

ClosedLoopMatrix ClosedLoopMatrix::from_char_poly(double c2, double c1, double c0) {
  ClosedLoopMatrix m;
  m.A(0, 1) = 1.0;
  m.A(1, 2) = 1.0;
  m.A(2, 0) = -c0;
  m.A(2, 1) = -c1;
  m.A(2, 2) = -c2;
  return m;
}

ClosedLoopMatrix closed_loop_matrix(const PidGains& gains, const PlantParams& truth) {
  if (!truth.valid()) {
    throw std::invalid_argument("plant parameters require b in (-1, 1)");
  }
  const double ob = 1.0 + truth.b;
  ClosedLoopMatrix m;
  m.A(0, 1) = 1.0;
  m.A(1, 2) = 1.0;
  m.A(2, 0) = -ob * gains.kI;
  m.A(2, 1) = truth.a1 - ob * gains.kP;
  m.A(2, 2) = truth.a2 - ob * gains.kD;
  return m;
}

bool routh_condition(const PidGains& gains, const PlantParams& truth) {
  if (!truth.valid()) {
    throw std::invalid_argument("plant parameters require b in (-1, 1)");
  }
  const double ob = 1.0 + truth.b;
  return gains.kP > truth.a1 / ob && gains.kD > truth.a2 / ob && gains.kI > 0.0 &&
         gains.kI < (gains.kP - truth.a1 / ob) * (ob * gains.kD - truth.a2);
}

CubicSolution closed_loop_eigenvalues(const ClosedLoopMatrix& m) {
  const auto [c2, c1, c0] = m.char_poly();
  return solve_cubic(1.0, c2, c1, c0);
}

bool is_hurwitz(const ClosedLoopMatrix& m) {
  return max_real_part(closed_loop_eigenvalues(m)) < 0.0;
}

namespace {

// Assembles and solves the symmetric Lyapunov system P A + A^T P = -I in the
// vech(P) unknowns, row-major upper triangle.
template <std::size_t N>
std::optional<linalg::Mat<N>> solve_lyapunov_impl(const linalg::Mat<N>& A) {
  constexpr int n = static_cast<int>(N);
  constexpr int m = n * (n + 1) / 2;

  auto unknown_index = [](int i, int j) {
    if (i > j) std::swap(i, j);
    // upper-triangle, row-major
    int idx = 0;
    for (int r = 0; r < i; ++r) idx += n - r;
    return idx + (j - i);
  };

  double M[m * m] = {0};
  double rhs[m] = {0};

  int eq = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j, ++eq) {
      // (P A + A^T P)_{ij} = sum_k P_{ik} A_{kj} + A_{ki} P_{kj}
      for (int k = 0; k < n; ++k) {
        M[eq * m + unknown_index(i, k)] += A(k, j);
        M[eq * m + unknown_index(k, j)] += A(k, i);
      }
      rhs[eq] = (i == j) ? -1.0 : 0.0;
    }
  }

  if (!linalg::solve_dense(M, rhs, m)) return std::nullopt;

  linalg::Mat<N> P;
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      P(i, j) = rhs[unknown_index(i, j)];
      P(j, i) = P(i, j);
    }
  }

  // A non-Hurwitz A yields a solvable system whose P is not positive
  // definite; reject it here rather than hand back a meaningless matrix.
  if (!(sym_eigenvalues(P)[0] > 0.0)) return std::nullopt;
  return P;
}

}  // namespace

std::optional<linalg::Mat2> solve_lyapunov(const linalg::Mat2& A) {
  return solve_lyapunov_impl<2>(A);
}

std::optional<linalg::Mat3> solve_lyapunov(const linalg::Mat3& A) {
  return solve_lyapunov_impl<3>(A);
}

linalg::Vec2 sym_eigenvalues(const linalg::Mat2& P) {
  const double tr = P(0, 0) + P(1, 1);
  const double det = P(0, 0) * P(1, 1) - P(0, 1) * P(1, 0);
  const double disc = std::sqrt(std::max(0.0, tr * tr / 4.0 - det));
  return {tr / 2.0 - disc, tr / 2.0 + disc};
}

linalg::Vec3 sym_eigenvalues(const linalg::Mat3& P) {
  // Characteristic polynomial l^3 - tr l^2 + m2 l - det, all roots real for
  // symmetric input, so the cubic solver's real roots are the spectrum.
  const double tr = P(0, 0) + P(1, 1) + P(2, 2);
  const double m2 = P(0, 0) * P(1, 1) - P(0, 1) * P(1, 0) +
                    P(0, 0) * P(2, 2) - P(0, 2) * P(2, 0) +
                    P(1, 1) * P(2, 2) - P(1, 2) * P(2, 1);
  const double det = P(0, 0) * (P(1, 1) * P(2, 2) - P(1, 2) * P(2, 1)) -
                     P(0, 1) * (P(1, 0) * P(2, 2) - P(1, 2) * P(2, 0)) +
                     P(0, 2) * (P(1, 0) * P(2, 1) - P(1, 1) * P(2, 0));
  const CubicSolution s = solve_cubic(1.0, -tr, m2, -det);

  linalg::Vec3 ev{};
  std::size_t k = 0;
  for (const auto& r : s.real_roots) {
    for (int i = 0; i < r.multiplicity && k < 3; ++i) ev[k++] = r.value;
  }
  // A conjugate pair can only appear through rounding on a symmetric input;
  // fold its real part back in.
  while (k < 3 && s.complex_pair) ev[k++] = s.complex_pair->real();
  return ev;
}

UltimateBoundReport ultimate_bound(const ClosedLoopMatrix& m, double u_inf, double theta) {
  if (!(theta > 0.0 && theta < 1.0)) {
    throw std::invalid_argument("ultimate_bound requires theta in (0, 1)");
  }
  if (!(u_inf >= 0.0)) {
    throw std::invalid_argument("ultimate_bound requires u_inf >= 0");
  }
  if (!is_hurwitz(m)) {
    throw std::invalid_argument("ultimate_bound requires a Hurwitz system matrix");
  }
  const auto P = solve_lyapunov(m.A);
  if (!P) {
    throw std::invalid_argument("Lyapunov equation has no positive-definite solution");
  }

  UltimateBoundReport rep;
  rep.P = *P;
  const auto ev = sym_eigenvalues(*P);
  rep.lambda_min = ev[0];
  rep.lambda_max = ev[2];
  rep.theta = theta;
  rep.u_inf = u_inf;
  const double norm_b = linalg::norm2(ClosedLoopMatrix::B);  // = 1 for canonical B
  rep.bound = 2.0 * norm_b * u_inf / theta *
              std::sqrt(rep.lambda_max * rep.lambda_max * rep.lambda_max / rep.lambda_min);
  return rep;
}

StabilityThreshold find_T_bar(double kp, double kd, const PlantParams& truth, double t_min,
                              double t_max) {
  if (!(kp > 0.0 && kd > 0.0)) {
    throw std::invalid_argument("find_T_bar requires kp > 0 and kd > 0");
  }
  if (!truth.valid()) {
    throw std::invalid_argument("plant parameters require b in (-1, 1)");
  }
  if (!(t_min > 0.0 && t_max > t_min)) {
    throw std::invalid_argument("find_T_bar requires 0 < t_min < t_max");
  }

  auto stable_at = [&](double T) {
    const PidGains g = forward_map(AuxParams{kp, kd, T});
    return is_hurwitz(closed_loop_matrix(g, truth));
  };

  constexpr int kPointsPerDecade = 50;
  const double log_lo = std::log10(t_min);
  const double log_hi = std::log10(t_max);
  const int n = std::max(2, static_cast<int>((log_hi - log_lo) * kPointsPerDecade) + 1);

  if (!stable_at(t_min)) {
    return {StabilityThreshold::Status::unstable_at_minimum,
            std::numeric_limits<double>::quiet_NaN()};
  }

  double lo = t_min;  // last grid point of the contiguous stable prefix
  double hi = 0.0;    // first unstable grid point, if any
  bool found_unstable = false;
  for (int i = 1; i < n; ++i) {
    const double T = std::pow(10.0, log_lo + (log_hi - log_lo) * i / (n - 1));
    if (stable_at(T)) {
      lo = T;
    } else {
      hi = T;
      found_unstable = true;
      break;
    }
  }
  if (!found_unstable) {
    return {StabilityThreshold::Status::stable_everywhere,
            std::numeric_limits<double>::infinity()};
  }

  while ((hi - lo) > 1e-4 * lo) {
    const double mid = 0.5 * (lo + hi);
    if (stable_at(mid)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return {StabilityThreshold::Status::threshold_found, lo};
}

}  // namespace pidmap
