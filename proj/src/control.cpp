#include "pidmap/control.hpp"

#include <stdexcept>

namespace pidmap {

double pid_raw(const PidGains& gains, const ErrorState& err, double qdd_d) {
  return gains.kP * err.e1 + gains.kD * err.e2 + gains.kI * err.qI + qdd_d;
}

ControlDecomposition pid_decomposed(const AuxParams& aux, const ErrorState& err, double qdd_d) {
  if (!aux.valid()) {
    throw std::invalid_argument("pid_decomposed requires kp > 0, kd > 0, T > 0");
  }
  ControlDecomposition out;
  out.u0 = qdd_d + aux.kp * err.e1 + aux.kd * err.e2;
  out.d_hat = -(aux.kd / aux.T) * err.e1 - (1.0 / aux.T) * err.e2 - (aux.kp / aux.T) * err.qI;
  out.u = out.u0 - out.d_hat;
  return out;
}

double initial_estimate(const AuxParams& aux, double e1_0, double e2_0) {
  if (!aux.valid()) {
    throw std::invalid_argument("initial_estimate requires kp > 0, kd > 0, T > 0");
  }
  return -(aux.kd * e1_0 + e2_0) / aux.T;
}

}  // namespace pidmap
