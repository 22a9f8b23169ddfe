#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "pidmap/plant.hpp"

using namespace pidmap;

TEST_CASE("lud: pure constant disturbance") {
  PlantParams p{.a1 = 0, .a2 = 0, .b = 0, .w = DisturbanceSignal::constant(0.345)};
  CHECK(lud(p, 12.0, -3.0, 7.0, 1.5) == doctest::Approx(0.345));
}

TEST_CASE("lud: single-term activation") {
  PlantParams p{.a1 = 1.0, .a2 = 0, .b = 0, .w = DisturbanceSignal::zero()};
  CHECK(lud(p, 2.0, 0.0, 0.0, 0.0) == doctest::Approx(2.0));
}

TEST_CASE("lud matches the four-term sum on random inputs and is linear") {
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  std::uniform_real_distribution<double> bdist(-0.9, 0.9);
  for (int i = 0; i < 200; ++i) {
    PlantParams p{.a1 = u(rng), .a2 = u(rng), .b = bdist(rng),
                  .w = DisturbanceSignal::sinusoid(u(rng), 1.3, 0.2)};
    const double q = u(rng), qd = u(rng), uu = u(rng), t = std::fabs(u(rng));
    const double direct = p.a1 * q + p.a2 * qd + p.b * uu + p.w.value(t);
    CHECK(lud(p, q, qd, uu, t) == doctest::Approx(direct).epsilon(1e-14));

    // superposition in (q, qdot, u) at fixed t
    const double q2 = u(rng), qd2 = u(rng), uu2 = u(rng);
    const double w0 = p.w.value(t);
    const double lhs = lud(p, q + q2, qd + qd2, uu + uu2, t);
    const double rhs = lud(p, q, qd, uu, t) + lud(p, q2, qd2, uu2, t) - w0;
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
  }
}

TEST_CASE("lud_initial: direct substitutions") {
  {
    PlantParams p;
    CHECK(lud_initial(p, PlantState{0, 0}, 0.0) == 0.0);
  }
  {
    PlantParams p{.a1 = 0.1, .a2 = 0, .b = 0, .w = DisturbanceSignal::constant(0.345)};
    CHECK(lud_initial(p, PlantState{-25.7, 0.0}, 0.0) == doctest::Approx(-2.225));
  }
  {
    PlantParams p{.a1 = 0, .a2 = 0, .b = 0, .w = DisturbanceSignal::constant(0.345)};
    CHECK(lud_initial(p, PlantState{3.0, 4.0}, 5.0) == doctest::Approx(0.345));
  }
}

TEST_CASE("plant_rhs: double integrator, disturbance feedthrough, input gain") {
  PlantParams clean;
  CHECK(plant_rhs(clean, PlantState{1.0, 2.0}, 1.0, 0.0) == doctest::Approx(1.0));

  PlantParams disturbed{.a1 = 0, .a2 = 0, .b = 0, .w = DisturbanceSignal::constant(0.345)};
  CHECK(plant_rhs(disturbed, PlantState{0, 0}, 0.0, 9.0) == doctest::Approx(0.345));

  PlantParams gained{.a1 = 0, .a2 = 0, .b = 0.5, .w = DisturbanceSignal::zero()};
  CHECK(plant_rhs(gained, PlantState{0, 0}, 2.0, 0.0) == doctest::Approx(3.0));
}

TEST_CASE("PlantParams validity follows the input-gain assumption") {
  CHECK(PlantParams{.a1 = 0, .a2 = 0, .b = 0.99, .w = {}}.valid());
  CHECK(!PlantParams{.a1 = 0, .a2 = 0, .b = 1.0, .w = {}}.valid());
  CHECK(!PlantParams{.a1 = 0, .a2 = 0, .b = -1.0, .w = {}}.valid());
  CHECK(!PlantParams{.a1 = 0, .a2 = 0, .b = 1.5, .w = {}}.valid());
}

TEST_CASE("elevation preset at t = 0") {
  const auto traj = trajectory_preset("heli-elevation");
  const auto p = traj.eval(0.0);
  CHECK(p.q == doctest::Approx(-1.8909).epsilon(1e-12));
  CHECK(p.qdot == doctest::Approx(5.73 * 0.75).epsilon(1e-12));
}

TEST_CASE("pitch preset at t = 0") {
  const auto traj = trajectory_preset("heli-pitch");
  const auto p = traj.eval(0.0);
  CHECK(p.q == doctest::Approx(0.0));
  CHECK(p.qdot == doctest::Approx(9.45).epsilon(1e-12));
}

TEST_CASE("constant reference has zero derivatives") {
  const auto traj = ReferenceTrajectory::constant(4.2);
  for (double t : {0.0, 1.7, 42.0}) {
    const auto p = traj.eval(t);
    CHECK(p.q == doctest::Approx(4.2));
    CHECK(p.qdot == 0.0);
    CHECK(p.qddot == 0.0);
    CHECK(p.qdddot == 0.0);
  }
}

TEST_CASE("preset derivatives agree with finite differences at O(h^2)") {
  for (const char* name : {"heli-elevation", "heli-pitch"}) {
    const auto traj = trajectory_preset(name);
    for (double t : {0.3, 2.0, 11.7, 40.0}) {
      double err_prev = 0.0;
      int k = 0;
      for (double h : {1e-3, 1e-4}) {
        const double fd = oracles::central_diff(
            [&](double x) { return traj.eval(x).q; }, t, h);
        const double err = std::fabs(fd - traj.eval(t).qdot);
        if (k == 0) {
          err_prev = err;
        } else {
          // quadratic decay: shrinking h by 10 should shrink the error ~100x
          CHECK(err <= err_prev / 50.0 + 1e-12);
        }
        ++k;
        CHECK(err <= 1e-4);
      }
    }
  }
}

TEST_CASE("sinusoid presets are bounded by their amplitude sums") {
  const auto d2 = disturbance_preset("d2-elevation");
  for (int i = 0; i <= 1000; ++i) {
    const double t = 0.06 * i;
    CHECK(std::fabs(d2.value(t)) <= 0.345 + 1e-12);
    CHECK(std::fabs(d2.derivative(t)) <= 0.345 * 1.0 + 1e-12);
  }
}

TEST_CASE("disturbance presets by name") {
  CHECK(disturbance_preset("d1-elevation").value(17.0) == doctest::Approx(0.345));
  CHECK(disturbance_preset("d1-pitch").value(3.0) == doctest::Approx(0.015));
  CHECK(disturbance_preset("d2-elevation").value(0.0) == doctest::Approx(0.345).epsilon(1e-12));
  CHECK(disturbance_preset("d2-pitch").value(0.0) == doctest::Approx(0.015).epsilon(1e-12));
  // d2 is a cosine: derivative at 0 vanishes
  CHECK(disturbance_preset("d2-elevation").derivative(0.0) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(disturbance_preset("d1-elevation", 2.0).value(0.0) == doctest::Approx(0.69));
  CHECK_THROWS_AS(disturbance_preset("d9-nowhere"), std::invalid_argument);
  CHECK_THROWS_AS(trajectory_preset("not-a-channel"), std::invalid_argument);
}

TEST_CASE("tabulated disturbance interpolates its knots and differentiates") {
  // sample a smooth signal densely; the spline should track value and slope
  std::vector<double> ts, ws;
  for (int i = 0; i <= 200; ++i) {
    const double t = 0.05 * i;
    ts.push_back(t);
    ws.push_back(std::sin(1.1 * t) + 0.3 * t * 0.0 + 0.2);
  }
  const auto sig = DisturbanceSignal::tabulated(ts, ws);
  for (std::size_t i = 0; i < ts.size(); ++i) {
    CHECK(sig.value(ts[i]) == doctest::Approx(ws[i]).epsilon(1e-12));
  }
  for (double t : {1.03, 4.57, 7.71}) {
    CHECK(sig.value(t) == doctest::Approx(std::sin(1.1 * t) + 0.2).epsilon(1e-4));
    CHECK(sig.derivative(t) == doctest::Approx(1.1 * std::cos(1.1 * t)).epsilon(1e-2));
    const double fd = oracles::central_diff([&](double x) { return sig.value(x); }, t, 1e-6);
    CHECK(sig.derivative(t) == doctest::Approx(fd).epsilon(1e-6));
  }
  // constant extension beyond the table
  CHECK(sig.value(1000.0) == doctest::Approx(ws.back()));
  CHECK(sig.derivative(1000.0) == 0.0);
  CHECK(sig.value(-5.0) == doctest::Approx(ws.front()));

  CHECK_THROWS_AS(DisturbanceSignal::tabulated({0.0}, {1.0}), std::invalid_argument);
  CHECK_THROWS_AS(DisturbanceSignal::tabulated({0.0, 0.0}, {1.0, 2.0}), std::invalid_argument);
}
