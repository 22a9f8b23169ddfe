#include "pidmap/gainmap.hpp"

#include <cmath>
#include <stdexcept>

namespace pidmap {

bool AuxParams::valid() const {
  return std::isfinite(kp) && std::isfinite(kd) && std::isfinite(T) &&
         kp > 0.0 && kd > 0.0 && T > 0.0;
}

namespace {
void require_valid(const AuxParams& aux) {
  if (!aux.valid()) {
    throw std::invalid_argument("gain mapping requires kp > 0, kd > 0, T > 0");
  }
}
}  // namespace

PidGains forward_map(const AuxParams& aux) {
  require_valid(aux);
  return PidGains{
      .kP = aux.kp + aux.kd / aux.T,
      .kI = aux.kp / aux.T,
      .kD = aux.kd + 1.0 / aux.T,
  };
}

GainJacobian jacobian(const AuxParams& aux) {
  require_valid(aux);
  const double T2 = aux.T * aux.T;
  GainJacobian j;
  // K_P row
  j.d[0] = {1.0, 1.0 / aux.T, -aux.kd / T2};
  // K_D row
  j.d[1] = {0.0, 1.0, -1.0 / T2};
  // K_I row
  j.d[2] = {1.0 / aux.T, 0.0, -aux.kp / T2};
  return j;
}

InverseResult inverse_map(const PidGains& gains) {
  if (!(gains.kI > 0.0) || !std::isfinite(gains.kP) || !std::isfinite(gains.kI) ||
      !std::isfinite(gains.kD)) {
    throw std::invalid_argument("inverse mapping requires a positive integral gain (kI > 0)");
  }

  InverseResult out;
  out.cubic = solve_cubic(gains.kI, -gains.kP, gains.kD, -1.0);

  // Roots are already sorted ascending; p(0) = -1 < 0 keeps them away from 0.
  for (const auto& root : out.cubic.real_roots) {
    const double T = root.value;
    if (T <= 0.0) continue;
    InverseCandidate c;
    c.aux = AuxParams{.kp = gains.kI * T, .kd = gains.kD - 1.0 / T, .T = T};
    c.kp_positive = c.aux.kp > 0.0;
    c.kd_positive = c.aux.kd > 0.0;
    out.candidates.push_back(c);
  }
  return out;
}

}  // namespace pidmap
