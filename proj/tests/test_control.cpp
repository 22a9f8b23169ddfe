#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "pidmap/control.hpp"
#include "pidmap/gainmap.hpp"

using namespace pidmap;

TEST_CASE("pid_raw substitutions") {
  CHECK(pid_raw({21, 10, 12}, {0.0, 1.0, 0.0}, 0.0) == doctest::Approx(21.0));
  CHECK(pid_raw({21, 10, 12}, {0.0, 0.0, 0.0}, 2.0) == doctest::Approx(2.0));
  CHECK(pid_raw({5, 4, 3.5}, {0.5, 0.0, 1.0}, 0.0) == doctest::Approx(5.5));
}

TEST_CASE("pid_decomposed substitutions") {
  {
    const auto dec = pid_decomposed({1, 2, 0.1}, {0.0, 1.0, 0.0}, 0.0);
    CHECK(dec.u0 == doctest::Approx(1.0));
    CHECK(dec.d_hat == doctest::Approx(-20.0));
    CHECK(dec.u == doctest::Approx(21.0));
  }
  {
    const auto dec = pid_decomposed({3, 4, 0.2}, {0.0, 0.0, 0.0}, 1.5);
    CHECK(dec.u0 == doctest::Approx(1.5));
    CHECK(dec.d_hat == doctest::Approx(0.0));
  }
  {
    const auto dec = pid_decomposed({6, 4, 0.4}, {1.0, 0.0, 0.0}, 0.0);
    CHECK(dec.d_hat == doctest::Approx(-15.0));
    CHECK(dec.u == doctest::Approx(15.0));
  }
  CHECK_THROWS_AS(pid_decomposed({0, 1, 1}, {}, 0.0), std::invalid_argument);
}

TEST_CASE("initial_estimate substitutions") {
  CHECK(initial_estimate({1, 2, 0.1}, 1.0, 0.0) == doctest::Approx(-20.0));
  // cancellation: e2_0 = -kd e1_0 makes the initial estimate vanish for any T
  for (double T : {0.01, 0.1, 1.0}) {
    CHECK(initial_estimate({1, 2, T}, 3.0, -6.0) == doctest::Approx(0.0));
  }
  // halving T doubles the magnitude when the numerator is nonzero
  const double at_T = initial_estimate({1, 2, 0.2}, 1.5, 0.5);
  const double at_half = initial_estimate({1, 2, 0.1}, 1.5, 0.5);
  CHECK(at_half == doctest::Approx(2.0 * at_T));
}

TEST_CASE("initial_estimate is homogeneous of degree -1 in T") {
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> u(-4.0, 4.0);
  std::uniform_real_distribution<double> pos(0.05, 5.0);
  for (int i = 0; i < 100; ++i) {
    const double kp = pos(rng), kd = pos(rng), T = pos(rng);
    const double e1 = u(rng), e2 = u(rng);
    const double s = pos(rng);  // scale on T
    const double lhs = initial_estimate({kp, kd, s * T}, e1, e2);
    const double rhs = initial_estimate({kp, kd, T}, e1, e2) / s;
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
  }
}

TEST_CASE("raw and decomposed laws are algebraically equal") {
  std::mt19937 rng(20240314);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  std::uniform_real_distribution<double> pos(0.02, 8.0);
  for (int i = 0; i < 2000; ++i) {
    const AuxParams aux{pos(rng), pos(rng), pos(rng)};
    const ErrorState err{u(rng), u(rng), u(rng)};
    const double qdd_d = u(rng);

    const double raw = pid_raw(forward_map(aux), err, qdd_d);
    const auto dec = pid_decomposed(aux, err, qdd_d);
    CHECK(dec.u == dec.u0 - dec.d_hat);  // exact by construction
    const double scale = std::max({1.0, std::fabs(raw), std::fabs(dec.d_hat)});
    CHECK(std::fabs(raw - dec.u) <= 1e-12 * scale);
  }
}

TEST_CASE("both laws are linear in the error state and feedforward") {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  const PidGains g{7.0, 3.0, 5.0};
  const AuxParams aux{2.0, 1.0, 0.25};
  for (int i = 0; i < 100; ++i) {
    const ErrorState x{u(rng), u(rng), u(rng)};
    const ErrorState y{u(rng), u(rng), u(rng)};
    const double fx = u(rng), fy = u(rng);
    const ErrorState sum{x.qI + y.qI, x.e1 + y.e1, x.e2 + y.e2};

    CHECK(pid_raw(g, sum, fx + fy) ==
          doctest::Approx(pid_raw(g, x, fx) + pid_raw(g, y, fy)).epsilon(1e-12));
    CHECK(pid_decomposed(aux, sum, fx + fy).u ==
          doctest::Approx(pid_decomposed(aux, x, fx).u + pid_decomposed(aux, y, fy).u)
              .epsilon(1e-12));
  }
}
