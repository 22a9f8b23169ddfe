#pragma once

#include <string_view>
#include <vector>

namespace pidmap {

/// One additive term A * sin(omega * t + phase).
struct SinusoidTerm {
  double amplitude = 0.0;
  double omega = 0.0;
  double phase = 0.0;
};

/// Exogenous disturbance w(t) with an evaluable first derivative.
/// Analytic kinds are offset + sums of sinusoids; tabulated data is
/// interpolated with a clamped cubic spline (zero end slopes, constant
/// extension) so that the derivative exists and w stays bounded.
class DisturbanceSignal {
 public:
  enum class Kind { constant, sinusoid, sum_of_sinusoids, tabulated };

  DisturbanceSignal() = default;  // identically zero

  static DisturbanceSignal zero() { return DisturbanceSignal{}; }
  static DisturbanceSignal constant(double value);
  static DisturbanceSignal sinusoid(double amplitude, double omega, double phase = 0.0,
                                    double offset = 0.0);
  static DisturbanceSignal sum_of_sinusoids(std::vector<SinusoidTerm> terms, double offset = 0.0);
  /// Samples must be strictly increasing in time, at least two of them.
  static DisturbanceSignal tabulated(std::vector<double> times, std::vector<double> values);

  double value(double t) const;
  double derivative(double t) const;

  Kind kind() const { return kind_; }
  double offset() const { return offset_; }
  const std::vector<SinusoidTerm>& terms() const { return terms_; }

 private:
  Kind kind_ = Kind::constant;
  double offset_ = 0.0;
  std::vector<SinusoidTerm> terms_;

  // tabulated: spline knots and second derivatives
  std::vector<double> tab_t_, tab_w_, tab_m_;
};

/// Desired position and its first three derivatives.
/// q_d(t) = offset + sum A_i sin(omega_i t + phase_i).
struct ReferenceTrajectory {
  std::vector<SinusoidTerm> terms;
  double offset = 0.0;

  struct Point {
    double q = 0.0;
    double qdot = 0.0;
    double qddot = 0.0;
    double qdddot = 0.0;
  };

  Point eval(double t) const;

  static ReferenceTrajectory zero() { return {}; }
  static ReferenceTrajectory constant(double c) { return {.terms = {}, .offset = c}; }
};

/// Ground-truth plant coefficients and disturbance. Visible to the simulator
/// and analyzer only; the controller never sees them.
struct PlantParams {
  double a1 = 0.0;  // position coefficient
  double a2 = 0.0;  // velocity coefficient
  double b = 0.0;   // input coefficient; must lie in (-1, 1)
  DisturbanceSignal w;

  bool valid() const;
};

struct PlantState {
  double q = 0.0;
  double qdot = 0.0;
};

/// Lumped uncertainty and disturbance d = a1 q + a2 qdot + b u + w(t).
double lud(const PlantParams& params, double q, double qdot, double u, double t);

/// LUD at t = 0.
double lud_initial(const PlantParams& params, const PlantState& state0, double u0);

/// Plant acceleration qddot = u + d(q, qdot, u, t).
double plant_rhs(const PlantParams& params, const PlantState& state, double u, double t);

/// Named presets: "zero", "d1-elevation", "d2-elevation", "d1-pitch",
/// "d2-pitch". `scale` multiplies the nominal amplitude/offset.
/// Throws std::invalid_argument on unknown names.
DisturbanceSignal disturbance_preset(std::string_view name, double scale = 1.0);

/// Named presets: "zero", "heli-elevation", "heli-pitch".
ReferenceTrajectory trajectory_preset(std::string_view name);

}  // namespace pidmap
