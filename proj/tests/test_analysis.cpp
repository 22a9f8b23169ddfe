#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "pidmap/analysis.hpp"
#include "pidmap/gainmap.hpp"
#include "pidmap/sim.hpp"

using namespace pidmap;
using linalg::Mat2;
using linalg::Mat3;

namespace {

PlantParams truth_of(double a1, double a2, double b) {
  return PlantParams{.a1 = a1, .a2 = a2, .b = b, .w = {}};
}

double lyap_residual(const Mat3& P, const Mat3& A) {
  double worst = 0.0;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      double s = (i == j) ? 1.0 : 0.0;  // PA + A^T P + I
      for (int k = 0; k < 3; ++k) s += P(i, k) * A(k, j) + A(k, i) * P(k, j);
      worst = std::max(worst, std::fabs(s));
    }
  }
  return worst;
}

}  // namespace

TEST_CASE("routh_condition substitutions") {
  CHECK(routh_condition({21, 10, 12}, truth_of(0, 0, 0)));
  CHECK(!routh_condition({21, 0, 12}, truth_of(0, 0, 0)));   // K_I = 0
  CHECK(!routh_condition({21, 10, 12}, truth_of(300, 0, 0)));  // K_P < a1
  CHECK_THROWS_AS(routh_condition({1, 1, 1}, truth_of(0, 0, 1.5)), std::invalid_argument);
}

TEST_CASE("closed_loop_matrix rows and characteristic polynomial") {
  {
    const auto m = closed_loop_matrix({21, 10, 12}, truth_of(0, 0, 0));
    CHECK(m.A(2, 0) == doctest::Approx(-10.0));
    CHECK(m.A(2, 1) == doctest::Approx(-21.0));
    CHECK(m.A(2, 2) == doctest::Approx(-12.0));
    CHECK(m.A(0, 1) == 1.0);
    CHECK(m.A(1, 2) == 1.0);
    CHECK(m.A(0, 0) == 0.0);
    const auto [c2, c1, c0] = m.char_poly();
    CHECK(c2 == doctest::Approx(12.0));
    CHECK(c1 == doctest::Approx(21.0));
    CHECK(c0 == doctest::Approx(10.0));
  }
  {
    const auto m = closed_loop_matrix({0, 0, 0}, truth_of(0, 0, 0));
    for (int i = 0; i < 3; ++i) CHECK(m.A(2, i) == 0.0);  // triple integrator
  }
  {
    const auto m = closed_loop_matrix({2, 1, 2}, truth_of(0, 0, 0.5));
    CHECK(m.A(2, 0) == doctest::Approx(-1.5));
    CHECK(m.A(2, 1) == doctest::Approx(-3.0));
    CHECK(m.A(2, 2) == doctest::Approx(-3.0));
  }
}

TEST_CASE("is_hurwitz on known characteristic polynomials") {
  // (s+1)^3: triple root at -1
  CHECK(is_hurwitz(ClosedLoopMatrix::from_char_poly(3.0, 3.0, 1.0)));
  // s^3 + s: roots 0, +-i (marginal)
  CHECK(!is_hurwitz(ClosedLoopMatrix::from_char_poly(0.0, 1.0, 0.0)));
  // one unstable real root
  CHECK(!is_hurwitz(ClosedLoopMatrix::from_char_poly(1.0, -1.0, -1.0)));
}

TEST_CASE("routh_condition and eigenvalue test agree on random samples") {
  std::mt19937 rng(20240315);
  std::uniform_real_distribution<double> gain(-5.0, 25.0);
  std::uniform_real_distribution<double> coeff(-3.0, 3.0);
  std::uniform_real_distribution<double> bdist(-0.9, 0.9);
  int stable = 0;
  for (int i = 0; i < 2000; ++i) {
    const PidGains g{gain(rng), gain(rng), gain(rng)};
    const PlantParams truth = truth_of(coeff(rng), coeff(rng), bdist(rng));
    const bool routh = routh_condition(g, truth);
    const bool eig = is_hurwitz(closed_loop_matrix(g, truth));
    CAPTURE(g.kP);
    CAPTURE(g.kI);
    CAPTURE(g.kD);
    CAPTURE(truth.a1);
    CHECK(routh == eig);
    stable += routh;
  }
  CHECK(stable > 100);  // the sample covers both verdicts
  CHECK(stable < 1900);
}

TEST_CASE("solve_lyapunov: diagonal case P = I/2") {
  Mat3 A;
  A(0, 0) = A(1, 1) = A(2, 2) = -1.0;
  const auto P = solve_lyapunov(A);
  REQUIRE(P.has_value());
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      CHECK((*P)(i, j) == doctest::Approx(i == j ? 0.5 : 0.0));
    }
  }
}

TEST_CASE("solve_lyapunov: hand-solved 2x2 system") {
  Mat2 A;
  A(0, 0) = 0.0;
  A(0, 1) = 1.0;
  A(1, 0) = -1.0;
  A(1, 1) = -1.0;
  const auto P = solve_lyapunov(A);
  REQUIRE(P.has_value());
  CHECK((*P)(0, 0) == doctest::Approx(1.5));
  CHECK((*P)(0, 1) == doctest::Approx(0.5));
  CHECK((*P)(1, 0) == doctest::Approx(0.5));
  CHECK((*P)(1, 1) == doctest::Approx(1.0));
}

TEST_CASE("solve_lyapunov: random Hurwitz systems give PD solutions") {
  std::mt19937 rng(777);
  std::uniform_real_distribution<double> re(-5.0, -0.2);
  std::uniform_real_distribution<double> im(0.1, 3.0);
  std::bernoulli_distribution complex_pair(0.5);
  for (int i = 0; i < 100; ++i) {
    // build a stable cubic from either three real roots or one real + pair
    double c2, c1, c0;
    if (complex_pair(rng)) {
      const double r = re(rng), sre = re(rng), sim = im(rng);
      // (s - r)(s^2 - 2 sre s + sre^2 + sim^2)
      c2 = -(r + 2.0 * sre);
      c1 = sre * sre + sim * sim + 2.0 * r * sre;
      c0 = -r * (sre * sre + sim * sim);
    } else {
      const double r1 = re(rng), r2 = re(rng), r3 = re(rng);
      c2 = -(r1 + r2 + r3);
      c1 = r1 * r2 + r1 * r3 + r2 * r3;
      c0 = -r1 * r2 * r3;
    }
    const auto m = ClosedLoopMatrix::from_char_poly(c2, c1, c0);
    REQUIRE(is_hurwitz(m));
    const auto P = solve_lyapunov(m.A);
    REQUIRE(P.has_value());
    CHECK(lyap_residual(*P, m.A) <= 1e-9);
    CHECK(sym_eigenvalues(*P)[0] > 0.0);
  }
}

TEST_CASE("solve_lyapunov reports failure for non-Hurwitz input") {
  Mat3 A = ClosedLoopMatrix::from_char_poly(1.0, -1.0, -1.0).A;  // root at +1
  CHECK(!solve_lyapunov(A).has_value());
}

TEST_CASE("ultimate_bound closed forms and domain checks") {
  Mat3 minus_i;
  minus_i(0, 0) = minus_i(1, 1) = minus_i(2, 2) = -1.0;
  ClosedLoopMatrix m{minus_i};

  const auto rep0 = ultimate_bound(m, 0.0, 0.5);
  CHECK(rep0.bound == doctest::Approx(0.0));

  const auto rep = ultimate_bound(m, 1.0, 0.5);
  CHECK(rep.lambda_max == doctest::Approx(0.5));
  CHECK(rep.lambda_min == doctest::Approx(0.5));
  CHECK(rep.bound == doctest::Approx(2.0));

  CHECK_THROWS_AS(ultimate_bound(m, 1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(ultimate_bound(m, 1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(ultimate_bound(m, -1.0, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(ultimate_bound(ClosedLoopMatrix::from_char_poly(1, -1, -1), 1.0, 0.5),
                  std::invalid_argument);
}

TEST_CASE("find_T_bar: zero truth is stable across the whole range") {
  const auto res = find_T_bar(1.3, 0.7, truth_of(0, 0, 0));
  CHECK(res.status == StabilityThreshold::Status::stable_everywhere);
  CHECK(std::isinf(res.t_bar));
}

TEST_CASE("find_T_bar: a2 = 5 drives a finite threshold at 1/(2 + 2 sqrt 2)") {
  const auto res = find_T_bar(1.0, 1.0, truth_of(0, 5, 0));
  REQUIRE(res.status == StabilityThreshold::Status::threshold_found);
  // K_I < K_P ((1+b)K_D - a2) binds first: x = 1/T > 2 + 2 sqrt(2)
  const double exact = 1.0 / (2.0 + 2.0 * std::sqrt(2.0));
  CHECK(res.t_bar == doctest::Approx(exact).epsilon(2e-4));

  // every tested T below the threshold keeps the Hurwitz verdict
  for (int i = 1; i <= 100; ++i) {
    const double T = res.t_bar * i / 101.0;
    CHECK(is_hurwitz(closed_loop_matrix(forward_map({1.0, 1.0, T}), truth_of(0, 5, 0))));
  }
}

TEST_CASE("find_T_bar: unstable at the range minimum is reported") {
  // K_D(T) = kd + 1/T <= kd + 10 at T >= 0.1, so a2 = 50 kills the range
  const auto res = find_T_bar(1.0, 1.0, truth_of(0, 50, 0), 0.1, 10.0);
  CHECK(res.status == StabilityThreshold::Status::unstable_at_minimum);
  CHECK(std::isnan(res.t_bar));
}

TEST_CASE("stability islands exist and do not extend the threshold") {
  // With truth (a1 = 0.9, a2 = 0.9, b = 0) and kp = kd = 1, c1 c2 - c0 as a
  // function of x = 1/T is x^2 - 0.8 x + 0.01: positive for x < r1 or
  // x > r2 with r1 = 0.0127..., r2 = 0.7873.... The loop is therefore stable
  // for T < 1/r2 = 1.2702 and again for T > 1/r1 = 78.73 (an island), but
  // unstable in between. The single-parameter rule "smaller T, still stable"
  // only holds below the contiguous prefix, which is what find_T_bar reports.
  const PlantParams truth = truth_of(0.9, 0.9, 0.0);
  auto stable_at = [&](double T) {
    return is_hurwitz(closed_loop_matrix(forward_map({1.0, 1.0, T}), truth));
  };
  CHECK(stable_at(1.0));
  CHECK(!stable_at(10.0));
  CHECK(stable_at(100.0));  // the island

  const auto res = find_T_bar(1.0, 1.0, truth);
  REQUIRE(res.status == StabilityThreshold::Status::threshold_found);
  const double r2 = (0.8 + std::sqrt(0.6)) / 2.0;
  CHECK(res.t_bar == doctest::Approx(1.0 / r2).epsilon(2e-4));
}

TEST_CASE("contiguous-prefix stability holds on random admissible samples") {
  std::mt19937 rng(20240316);
  std::uniform_real_distribution<double> pos(0.1, 5.0);
  std::uniform_real_distribution<double> coeff(-2.0, 2.0);
  std::uniform_real_distribution<double> bdist(-0.8, 0.8);
  for (int i = 0; i < 200; ++i) {
    const double kp = pos(rng), kd = pos(rng);
    const PlantParams truth = truth_of(coeff(rng), coeff(rng), bdist(rng));
    const auto res = find_T_bar(kp, kd, truth);
    // a stable prefix always exists at small T
    CHECK(res.status != StabilityThreshold::Status::unstable_at_minimum);
    if (res.status == StabilityThreshold::Status::threshold_found) {
      for (int k = 1; k <= 20; ++k) {
        const double T = res.t_bar * k / 21.0;
        if (T < 1e-4) continue;
        CHECK(is_hurwitz(closed_loop_matrix(forward_map({kp, kd, T}), truth)));
      }
    }
  }
}

TEST_CASE("ultimate_bound exceeds the simulated closed-loop tail") {
  const PidGains gains{21.0, 10.0, 12.0};
  const PlantParams truth = truth_of(0, 0, 0);
  const auto rep = ultimate_bound(closed_loop_matrix(gains, truth), 0.345, 0.5);

  SimConfig cfg;
  cfg.truth = PlantParams{.a1 = 0, .a2 = 0, .b = 0, .w = disturbance_preset("d2-elevation")};
  cfg.controller = gains;
  cfg.trajectory = trajectory_preset("heli-elevation");
  cfg.initial = PlantState{-25.7, 0.0};
  const SimResult r = run_closed_loop(cfg);

  double tail = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (r.t[i] >= 40.0) {
      const double n = std::sqrt(r.qI[i] * r.qI[i] + r.e1[i] * r.e1[i] + r.e2[i] * r.e2[i]);
      tail = std::max(tail, n);
    }
  }
  CHECK(tail <= rep.bound);  // conservative by a wide margin
  CHECK(rep.bound < 1e3);
}
