#pragma once

#include <array>
#include <cmath>
#include <cstddef>

// Fixed-size vectors/matrices for the 2- and 3-state systems used throughout.
// Deliberately minimal: everything here is n <= 3 (plus a tiny dense solver
// for the n(n+1)/2 Lyapunov unknowns, at most 6).

namespace pidmap::linalg {

using Vec2 = std::array<double, 2>;
using Vec3 = std::array<double, 3>;

template <std::size_t N>
using Vec = std::array<double, N>;

template <std::size_t N>
struct Mat {
  std::array<std::array<double, N>, N> a{};

  double& operator()(std::size_t r, std::size_t c) { return a[r][c]; }
  double operator()(std::size_t r, std::size_t c) const { return a[r][c]; }

  static Mat identity() {
    Mat m;
    for (std::size_t i = 0; i < N; ++i) m.a[i][i] = 1.0;
    return m;
  }
};

using Mat2 = Mat<2>;
using Mat3 = Mat<3>;

template <std::size_t N>
inline Vec<N> mul(const Mat<N>& m, const Vec<N>& v) {
  Vec<N> r{};
  for (std::size_t i = 0; i < N; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < N; ++j) s += m.a[i][j] * v[j];
    r[i] = s;
  }
  return r;
}

template <std::size_t N>
inline double dot(const Vec<N>& x, const Vec<N>& y) {
  double s = 0.0;
  for (std::size_t i = 0; i < N; ++i) s += x[i] * y[i];
  return s;
}

template <std::size_t N>
inline double norm2(const Vec<N>& v) {
  return std::sqrt(dot(v, v));
}

/// Solves A x = b in place by Gaussian elimination with partial pivoting.
/// A is n*n row-major. Returns false if the system is (numerically) singular.
bool solve_dense(double* A, double* b, int n);

}  // namespace pidmap::linalg
