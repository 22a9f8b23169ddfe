#pragma once

#include <cmath>
#include <span>
#include <stdexcept>
#include <variant>
#include <vector>

#include "pidmap/control.hpp"
#include "pidmap/gainmap.hpp"
#include "pidmap/linalg.hpp"
#include "pidmap/plant.hpp"

namespace pidmap {

/// Thrown when an integrated state exceeds the escape threshold (1e9): the
/// run is diverging and its data would be meaningless.
class DivergenceError : public std::runtime_error {
 public:
  explicit DivergenceError(double t_at);

  double t() const { return t_; }

 private:
  double t_;
};

/// Closed-loop simulation setup. The controller is either a raw gain triple
/// or an auxiliary triple; with AuxParams both control representations are
/// integrable (set `integrate_raw_pid` to run the algebraically equal raw
/// form for equivalence checks).
struct SimConfig {
  PlantParams truth;
  std::variant<PidGains, AuxParams> controller = PidGains{};
  ReferenceTrajectory trajectory;
  PlantState initial;
  double t_end = 60.0;
  double dt = 1e-3;
  double tail_fraction = 1.0 / 3.0;
  bool integrate_raw_pid = false;

  /// dt <= T/20 keeps the estimator's boundary layer resolved.
  static double default_dt(double T) { return std::min(1e-3, T / 20.0); }

  const AuxParams* aux() const { return std::get_if<AuxParams>(&controller); }

  /// Throws std::invalid_argument on a violated invariant.
  void validate() const;
};

/// Ultimate-bound measurement: eps is the sup of |e1| over the final tail
/// window, t_eps the first time after which |e1| <= 1.05 eps permanently.
struct UbMeasurement {
  double epsilon = 0.0;
  double t_epsilon = 0.0;
  bool settled = false;  // two consecutive tail half-windows agree within 5%
};

UbMeasurement measure_ub(std::span<const double> t, std::span<const double> e1,
                         double tail_fraction);

/// Uniform-grid time series of every closed-loop quantity, plus the measured
/// ultimate bound. dtilde = dhat - d pointwise by construction.
struct SimResult {
  std::vector<double> t, q, qdot, e1, e2, qI, u, u0, dhat, d, dtilde;
  UbMeasurement ub;

  std::size_t size() const { return t.size(); }
};

/// Classical fixed-step RK4. Deterministic: identical inputs produce
/// bit-identical outputs. Throws DivergenceError past the escape threshold.
template <std::size_t N, typename Rhs>
std::vector<linalg::Vec<N>> rk4_integrate(Rhs&& rhs, linalg::Vec<N> y0, double t0, double t_end,
                                          double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("rk4_integrate requires dt > 0");
  const auto steps = static_cast<std::size_t>(std::floor((t_end - t0) / dt + 1e-9));

  std::vector<linalg::Vec<N>> out;
  out.reserve(steps + 1);
  out.push_back(y0);

  linalg::Vec<N> y = y0;
  for (std::size_t i = 0; i < steps; ++i) {
    const double t = t0 + static_cast<double>(i) * dt;
    const auto k1 = rhs(t, y);
    linalg::Vec<N> tmp;
    for (std::size_t j = 0; j < N; ++j) tmp[j] = y[j] + 0.5 * dt * k1[j];
    const auto k2 = rhs(t + 0.5 * dt, tmp);
    for (std::size_t j = 0; j < N; ++j) tmp[j] = y[j] + 0.5 * dt * k2[j];
    const auto k3 = rhs(t + 0.5 * dt, tmp);
    for (std::size_t j = 0; j < N; ++j) tmp[j] = y[j] + dt * k3[j];
    const auto k4 = rhs(t + dt, tmp);
    for (std::size_t j = 0; j < N; ++j) {
      y[j] += dt / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
    }
    for (std::size_t j = 0; j < N; ++j) {
      if (!(std::abs(y[j]) <= 1e9)) throw DivergenceError(t + dt);
    }
    out.push_back(y);
  }
  return out;
}

/// Integrates the augmented state (qI, q, qdot) under the configured
/// controller and records all series.
SimResult run_closed_loop(const SimConfig& config);

/// The closed loop rewritten as a slow/fast pair: slow block
/// edot = A1 e + B1 dtilde, fast block T dtilde_dot = A2 dtilde + T B2 e - T u_d
/// with u_d = a1 qd_dot + a2 qd_ddot + b qd_dddot + w_dot.
struct SpForm {
  linalg::Mat2 A1;
  linalg::Vec2 B1;
  double A2 = 0.0;
  linalg::Vec2 B2;
  AuxParams aux;
  PlantParams truth;
  ReferenceTrajectory trajectory;

  double forcing(double t) const;  // u_d(t)
};

SpForm make_sp_form(const AuxParams& aux, const PlantParams& truth,
                    const ReferenceTrajectory& trajectory);

struct SpResult {
  std::vector<double> t, e1, e2, dtilde;
};

/// Integrates the singular-perturbation form directly, with
/// dtilde(0) = dhat(0) - d0. Requires an AuxParams controller.
SpResult run_sp_form(const SimConfig& config);

struct ReducedResult {
  std::vector<double> t, e1, e2;
};

/// Reduced (slow) model edot* = A1 e*, e*(0) = e0 from the configured
/// initial state and trajectory.
ReducedResult run_reduced(const SimConfig& config);

/// Boundary-layer solution y(tau) = dtilde0 exp(-(1+b) tau).
double boundary_layer(double b, double dtilde0, double tau);
std::vector<double> boundary_layer(double b, double dtilde0, std::span<const double> tau_grid);

struct OTStudyRow {
  double T = 0.0;
  double gap_e = 0.0;      // sup_t ||e - e*||_2
  double gap_d = 0.0;      // sup_{t >= 5T} |dtilde - y(t/T)|
  double ub_e = 0.0;       // tail sup ||e||_2
  double ub_d = 0.0;       // tail sup |dtilde|
  double ub_q = 0.0;       // tail sup |e1|
  double ratio_prev = 0.0; // gap_e ratio vs previous row
  bool has_ratio = false;
};

struct OTStudy {
  std::vector<OTStudyRow> rows;
  double slope = 0.0;      // least-squares fit of gap_e vs T through the origin
  double r_squared = 0.0;  // uncentered: 1 - sum(res^2)/sum(gap_e^2)
};

/// Runs the template config at each T (controller replaced by
/// (kp, kd, T) from the template's aux pair), comparing against the reduced
/// and boundary-layer solutions. All T must be stable.
OTStudy o_of_T_study(const SimConfig& config_template, const std::vector<double>& t_list);

}  // namespace pidmap
