#pragma once

#include "pidmap/gainmap.hpp"

namespace pidmap {

/// Tracking-error state carried by the closed loop. qI is the running
/// integral of the position error and starts at zero.
struct ErrorState {
  double qI = 0.0;  // integral of e1
  double e1 = 0.0;  // position error
  double e2 = 0.0;  // velocity error
};

/// PID law with acceleration feedforward:
///   u = kP e1 + kD e2 + kI qI + qdd_d.
double pid_raw(const PidGains& gains, const ErrorState& err, double qdd_d);

/// The same control split into a nominal PD part and an estimator output:
///   u0 = qdd_d + kp e1 + kd e2
///   d_hat = -(kd/T) e1 - (1/T) e2 - (kp/T) qI
///   u = u0 - d_hat
/// Equal to pid_raw(forward_map(aux), ...) up to floating-point rounding.
struct ControlDecomposition {
  double u0 = 0.0;
  double d_hat = 0.0;
  double u = 0.0;
};

ControlDecomposition pid_decomposed(const AuxParams& aux, const ErrorState& err, double qdd_d);

/// Estimator output at t = 0: d_hat(0) = -(kd e1_0 + e2_0)/T. Grows like 1/T
/// for fixed nonzero initial error, which is the source of initial peaking.
double initial_estimate(const AuxParams& aux, double e1_0, double e2_0);

}  // namespace pidmap
