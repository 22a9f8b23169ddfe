#pragma once

#include <array>
#include <vector>

#include "pidmap/cubic.hpp"

namespace pidmap {

/// Classical PID gains.
struct PidGains {
  double kP = 0.0;
  double kI = 0.0;
  double kD = 0.0;
};

/// Auxiliary parameter triple of the gain mapping: nominal PD pair (kp, kd)
/// and the estimator time constant T. Domain: all three strictly positive.
struct AuxParams {
  double kp = 0.0;
  double kd = 0.0;
  double T = 0.0;

  bool valid() const;
};

/// Maps (kp, kd, T) to (K_P, K_I, K_D):
///   K_P = kp + kd/T,  K_D = kd + 1/T,  K_I = kp/T.
/// Throws std::invalid_argument outside the domain.
PidGains forward_map(const AuxParams& aux);

/// Partial derivatives of the mapping. Rows are (K_P, K_D, K_I), columns
/// (kp, kd, T). Two entries are structural zeros; all T-columns are negative.
struct GainJacobian {
  std::array<std::array<double, 3>, 3> d{};

  double operator()(int row, int col) const { return d[row][col]; }
};

GainJacobian jacobian(const AuxParams& aux);

/// One preimage of a gain triple: a root T of p(T) = kI T^3 - kP T^2 + kD T - 1
/// with kd = kD - 1/T and kp = kI T. kd may come out non-positive; such
/// candidates are kept but flagged, so callers can see why no admissible
/// decomposition exists.
struct InverseCandidate {
  AuxParams aux;
  bool kp_positive = false;
  bool kd_positive = false;

  bool admissible() const { return kp_positive && kd_positive; }
};

struct InverseResult {
  std::vector<InverseCandidate> candidates;  // ascending T
  CubicSolution cubic;                       // the solved p(T), for diagnostics
};

/// All preimages of `gains` under the mapping, one per positive real root of
/// p(T). Non-empty whenever kI > 0. Throws std::invalid_argument if kI <= 0.
InverseResult inverse_map(const PidGains& gains);

}  // namespace pidmap
