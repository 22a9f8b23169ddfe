#include "pidmap/sim.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pidmap/analysis.hpp"

namespace pidmap {

DivergenceError::DivergenceError(double t_at)
    : std::runtime_error("simulation diverged (state magnitude exceeded 1e9) at t = " +
                         std::to_string(t_at)),
      t_(t_at) {}

void SimConfig::validate() const {
  if (!truth.valid()) {
    throw std::invalid_argument("plant parameters require b in (-1, 1)");
  }
  if (!(dt > 0.0) || !(t_end > 0.0)) {
    throw std::invalid_argument("simulation requires dt > 0 and t_end > 0");
  }
  if (!(tail_fraction > 0.0 && tail_fraction < 1.0)) {
    throw std::invalid_argument("tail_fraction must lie in (0, 1)");
  }
  if (const AuxParams* a = aux()) {
    if (!a->valid()) {
      throw std::invalid_argument("controller aux parameters require kp > 0, kd > 0, T > 0");
    }
    if (dt > a->T / 20.0) {
      throw std::invalid_argument("dt must not exceed T/20 (boundary layer resolution)");
    }
  }
}

UbMeasurement measure_ub(std::span<const double> t, std::span<const double> e1,
                         double tail_fraction) {
  UbMeasurement m;
  if (t.empty()) return m;

  const double t_start = t.back() - tail_fraction * (t.back() - t.front());
  std::size_t i0 = 0;
  while (i0 < t.size() && t[i0] < t_start) ++i0;
  if (i0 >= t.size()) i0 = t.size() - 1;

  double eps = 0.0;
  for (std::size_t i = i0; i < e1.size(); ++i) eps = std::max(eps, std::abs(e1[i]));
  m.epsilon = eps;

  // Settled when the two halves of the tail agree within 5%, or both sit at
  // the numerical-zero floor (constant-disturbance runs decay to roundoff).
  const std::size_t mid = i0 + (e1.size() - i0) / 2;
  double sup_a = 0.0, sup_b = 0.0;
  for (std::size_t i = i0; i < mid; ++i) sup_a = std::max(sup_a, std::abs(e1[i]));
  for (std::size_t i = mid; i < e1.size(); ++i) sup_b = std::max(sup_b, std::abs(e1[i]));
  const double sup_max = std::max(sup_a, sup_b);
  m.settled = sup_max <= 1e-9 || std::abs(sup_a - sup_b) <= 0.05 * sup_max;

  const double level = 1.05 * eps;
  std::size_t last_above = t.size();  // sentinel: never above
  for (std::size_t i = e1.size(); i-- > 0;) {
    if (std::abs(e1[i]) > level) {
      last_above = i;
      break;
    }
  }
  m.t_epsilon = (last_above == t.size()) ? t.front() : t[std::min(last_above + 1, t.size() - 1)];
  return m;
}

namespace {

struct ControlSample {
  double u0, d_hat, u;
};

// Control evaluation shared by the integrator and the series recorder. For a
// gains-only controller there is no canonical decomposition; the whole law is
// reported as nominal (u0 = u, d_hat = 0).
ControlSample eval_control(const SimConfig& cfg, const PidGains& gains, const ErrorState& err,
                           double qdd_d) {
  if (const AuxParams* a = cfg.aux(); a && !cfg.integrate_raw_pid) {
    const ControlDecomposition dec = pid_decomposed(*a, err, qdd_d);
    return {dec.u0, dec.d_hat, dec.u};
  }
  const double u = pid_raw(gains, err, qdd_d);
  if (const AuxParams* a = cfg.aux()) {
    // Raw arithmetic path of an aux controller: decomposition still reported.
    const ControlDecomposition dec = pid_decomposed(*a, err, qdd_d);
    return {dec.u0, dec.d_hat, u};
  }
  return {u, 0.0, u};
}

}  // namespace

SimResult run_closed_loop(const SimConfig& config) {
  config.validate();

  const PidGains gains =
      config.aux() ? forward_map(*config.aux()) : std::get<PidGains>(config.controller);

  // Augmented state (qI, q, qdot); qI(0) = 0.
  auto rhs = [&](double t, const linalg::Vec3& y) -> linalg::Vec3 {
    const auto ref = config.trajectory.eval(t);
    const ErrorState err{y[0], ref.q - y[1], ref.qdot - y[2]};
    const double u = eval_control(config, gains, err, ref.qddot).u;
    const double qddot = plant_rhs(config.truth, PlantState{y[1], y[2]}, u, t);
    return {err.e1, y[2], qddot};
  };

  const auto states =
      rk4_integrate<3>(rhs, {0.0, config.initial.q, config.initial.qdot}, 0.0, config.t_end,
                       config.dt);

  SimResult r;
  const std::size_t n = states.size();
  for (auto* v : {&r.t, &r.q, &r.qdot, &r.e1, &r.e2, &r.qI, &r.u, &r.u0, &r.dhat, &r.d,
                  &r.dtilde}) {
    v->reserve(n);
  }

  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) * config.dt;
    const auto& y = states[i];
    const auto ref = config.trajectory.eval(t);
    const ErrorState err{y[0], ref.q - y[1], ref.qdot - y[2]};
    const ControlSample cs = eval_control(config, gains, err, ref.qddot);
    const double d_true = lud(config.truth, y[1], y[2], cs.u, t);

    r.t.push_back(t);
    r.q.push_back(y[1]);
    r.qdot.push_back(y[2]);
    r.e1.push_back(err.e1);
    r.e2.push_back(err.e2);
    r.qI.push_back(y[0]);
    r.u.push_back(cs.u);
    r.u0.push_back(cs.u0);
    r.dhat.push_back(cs.d_hat);
    r.d.push_back(d_true);
    r.dtilde.push_back(cs.d_hat - d_true);
  }

  r.ub = measure_ub(r.t, r.e1, config.tail_fraction);
  return r;
}

double SpForm::forcing(double t) const {
  const auto ref = trajectory.eval(t);
  return truth.a1 * ref.qdot + truth.a2 * ref.qddot + truth.b * ref.qdddot +
         truth.w.derivative(t);
}

SpForm make_sp_form(const AuxParams& aux, const PlantParams& truth,
                    const ReferenceTrajectory& trajectory) {
  if (!aux.valid()) {
    throw std::invalid_argument("sp form requires kp > 0, kd > 0, T > 0");
  }
  if (!truth.valid()) {
    throw std::invalid_argument("plant parameters require b in (-1, 1)");
  }
  SpForm f;
  f.A1(0, 0) = 0.0;
  f.A1(0, 1) = 1.0;
  f.A1(1, 0) = -aux.kp;
  f.A1(1, 1) = -aux.kd;
  f.B1 = {0.0, 1.0};
  f.A2 = truth.a2 * aux.T - 1.0 - truth.b - truth.b * aux.T * aux.kd;
  f.B2 = {truth.b * aux.kd * aux.kp - truth.a2 * aux.kp,
          truth.a1 + truth.b * aux.kd * aux.kd - truth.a2 * aux.kd - truth.b * aux.kp};
  f.aux = aux;
  f.truth = truth;
  f.trajectory = trajectory;
  return f;
}

SpResult run_sp_form(const SimConfig& config) {
  config.validate();
  const AuxParams* aux = config.aux();
  if (!aux) {
    throw std::invalid_argument("run_sp_form requires an AuxParams controller");
  }

  const SpForm f = make_sp_form(*aux, config.truth, config.trajectory);

  const auto ref0 = config.trajectory.eval(0.0);
  const double e1_0 = ref0.q - config.initial.q;
  const double e2_0 = ref0.qdot - config.initial.qdot;
  const double dhat0 = initial_estimate(*aux, e1_0, e2_0);
  const double u_0 = pid_decomposed(*aux, ErrorState{0.0, e1_0, e2_0}, ref0.qddot).u;
  const double d0 = lud_initial(config.truth, config.initial, u_0);

  const double T = aux->T;
  auto rhs = [&](double t, const linalg::Vec3& y) -> linalg::Vec3 {
    const double e1 = y[0], e2 = y[1], dt_ = y[2];
    return {e2, f.A1(1, 0) * e1 + f.A1(1, 1) * e2 + dt_,
            (f.A2 / T) * dt_ + f.B2[0] * e1 + f.B2[1] * e2 - f.forcing(t)};
  };

  const auto states = rk4_integrate<3>(rhs, {e1_0, e2_0, dhat0 - d0}, 0.0, config.t_end,
                                       config.dt);

  SpResult r;
  r.t.reserve(states.size());
  r.e1.reserve(states.size());
  r.e2.reserve(states.size());
  r.dtilde.reserve(states.size());
  for (std::size_t i = 0; i < states.size(); ++i) {
    r.t.push_back(static_cast<double>(i) * config.dt);
    r.e1.push_back(states[i][0]);
    r.e2.push_back(states[i][1]);
    r.dtilde.push_back(states[i][2]);
  }
  return r;
}

ReducedResult run_reduced(const SimConfig& config) {
  const AuxParams* aux = config.aux();
  if (!aux || !(aux->kp > 0.0 && aux->kd > 0.0)) {
    throw std::invalid_argument("run_reduced requires an AuxParams controller with kp, kd > 0");
  }

  const auto ref0 = config.trajectory.eval(0.0);
  const linalg::Vec2 e0{ref0.q - config.initial.q, ref0.qdot - config.initial.qdot};

  const double kp = aux->kp, kd = aux->kd;
  auto rhs = [&](double, const linalg::Vec2& e) -> linalg::Vec2 {
    return {e[1], -kp * e[0] - kd * e[1]};
  };

  const auto states = rk4_integrate<2>(rhs, e0, 0.0, config.t_end, config.dt);

  ReducedResult r;
  r.t.reserve(states.size());
  r.e1.reserve(states.size());
  r.e2.reserve(states.size());
  for (std::size_t i = 0; i < states.size(); ++i) {
    r.t.push_back(static_cast<double>(i) * config.dt);
    r.e1.push_back(states[i][0]);
    r.e2.push_back(states[i][1]);
  }
  return r;
}

double boundary_layer(double b, double dtilde0, double tau) {
  if (!(1.0 + b > 0.0)) {
    throw std::invalid_argument("boundary layer requires 1 + b > 0");
  }
  return dtilde0 * std::exp(-(1.0 + b) * tau);
}

std::vector<double> boundary_layer(double b, double dtilde0, std::span<const double> tau_grid) {
  std::vector<double> y;
  y.reserve(tau_grid.size());
  for (double tau : tau_grid) y.push_back(boundary_layer(b, dtilde0, tau));
  return y;
}

OTStudy o_of_T_study(const SimConfig& config_template, const std::vector<double>& t_list) {
  const AuxParams* base = config_template.aux();
  if (!base) {
    throw std::invalid_argument("o_of_T_study requires an AuxParams controller template");
  }
  for (std::size_t i = 1; i < t_list.size(); ++i) {
    if (!(t_list[i] < t_list[i - 1])) {
      throw std::invalid_argument("o_of_T_study requires a strictly decreasing T list");
    }
  }

  OTStudy study;
  for (double T : t_list) {
    SimConfig cfg = config_template;
    const AuxParams aux{base->kp, base->kd, T};
    cfg.controller = aux;
    cfg.dt = std::min(config_template.dt, SimConfig::default_dt(T));

    if (!is_hurwitz(closed_loop_matrix(forward_map(aux), cfg.truth))) {
      throw std::invalid_argument("o_of_T_study: T = " + std::to_string(T) +
                                  " is above the stability threshold");
    }

    const SimResult run = run_closed_loop(cfg);
    const ReducedResult red = run_reduced(cfg);

    // dtilde(0) for the boundary-layer comparison, matching run_sp_form.
    const auto ref0 = cfg.trajectory.eval(0.0);
    const double e1_0 = ref0.q - cfg.initial.q;
    const double e2_0 = ref0.qdot - cfg.initial.qdot;
    const double dhat0 = initial_estimate(aux, e1_0, e2_0);
    const double u_0 = pid_decomposed(aux, ErrorState{0.0, e1_0, e2_0}, ref0.qddot).u;
    const double dtilde0 = dhat0 - lud_initial(cfg.truth, cfg.initial, u_0);

    OTStudyRow row;
    row.T = T;
    for (std::size_t i = 0; i < run.size(); ++i) {
      const double ge = std::hypot(run.e1[i] - red.e1[i], run.e2[i] - red.e2[i]);
      row.gap_e = std::max(row.gap_e, ge);
      if (run.t[i] >= 5.0 * T) {
        const double y = boundary_layer(cfg.truth.b, dtilde0, run.t[i] / T);
        row.gap_d = std::max(row.gap_d, std::abs(run.dtilde[i] - y));
      }
    }

    const double tail_start = run.t.back() * (1.0 - cfg.tail_fraction);
    for (std::size_t i = 0; i < run.size(); ++i) {
      if (run.t[i] < tail_start) continue;
      row.ub_e = std::max(row.ub_e, std::hypot(run.e1[i], run.e2[i]));
      row.ub_d = std::max(row.ub_d, std::abs(run.dtilde[i]));
      row.ub_q = std::max(row.ub_q, std::abs(run.e1[i]));
    }

    if (!study.rows.empty() && study.rows.back().gap_e > 0.0) {
      row.ratio_prev = row.gap_e / study.rows.back().gap_e;
      row.has_ratio = true;
    }
    study.rows.push_back(row);
  }

  // Through-origin least squares of gap_e against T; uncentered R^2, the
  // standard convention for a no-intercept fit.
  double stt = 0.0, sty = 0.0, syy = 0.0;
  for (const auto& row : study.rows) {
    stt += row.T * row.T;
    sty += row.T * row.gap_e;
    syy += row.gap_e * row.gap_e;
  }
  study.slope = (stt > 0.0) ? sty / stt : 0.0;
  double ss_res = 0.0;
  for (const auto& row : study.rows) {
    const double res = row.gap_e - study.slope * row.T;
    ss_res += res * res;
  }
  study.r_squared = (syy > 0.0) ? 1.0 - ss_res / syy : 1.0;
  return study;
}

}  // namespace pidmap
