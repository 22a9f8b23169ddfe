#include "pidmap/presets.hpp"

#include <cmath>
#include <stdexcept>

namespace pidmap {

namespace {

const AuxParams kTable1Aux[3] = {
    {1.0, 2.0, 0.1},  // P1
    {6.0, 4.0, 0.4},  // P2
    {1.0, 2.0, 0.4},  // P3
};

SimConfig table1_config(int row, std::string_view disturbance, double scale) {
  SimConfig cfg;
  cfg.truth = PlantParams{.a1 = 0.0, .a2 = 0.0, .b = 0.0,
                          .w = disturbance_preset(disturbance, scale)};
  cfg.controller = kTable1Aux[row];
  cfg.trajectory = trajectory_preset("heli-elevation");
  cfg.initial = PlantState{-25.7, 0.0};
  cfg.t_end = 60.0;
  cfg.dt = SimConfig::default_dt(kTable1Aux[row].T);
  return cfg;
}

}  // namespace

ExperimentSpec experiment_preset(std::string_view name, double disturbance_scale) {
  if (name == "zero") {
    SimConfig cfg;
    cfg.controller = PidGains{0.0, 0.0, 0.0};
    return {"zero", cfg};
  }
  for (int row = 0; row < 3; ++row) {
    for (int dist = 1; dist <= 2; ++dist) {
      const std::string label =
          "table1-P" + std::to_string(row + 1) + "-d" + std::to_string(dist);
      if (name == label) {
        const std::string dname = "d" + std::to_string(dist) + "-elevation";
        return {label, table1_config(row, dname, disturbance_scale)};
      }
    }
  }
  throw std::invalid_argument("unknown experiment preset: " + std::string(name));
}

namespace {

DisturbanceSignal disturbance_from_json(const nlohmann::json& j, double scale) {
  if (j.is_string()) return disturbance_preset(j.get<std::string>(), scale);
  const std::string kind = j.value("kind", "constant");
  if (kind == "constant") {
    return DisturbanceSignal::constant(j.value("offset", 0.0) * scale);
  }
  if (kind == "sinusoid") {
    return DisturbanceSignal::sinusoid(j.value("amplitude", 0.0) * scale, j.value("omega", 1.0),
                                       j.value("phase", 0.0), j.value("offset", 0.0) * scale);
  }
  if (kind == "sum-of-sinusoids") {
    std::vector<SinusoidTerm> terms;
    for (const auto& t : j.at("terms")) {
      terms.push_back({t.value("amplitude", 0.0) * scale, t.value("omega", 1.0),
                       t.value("phase", 0.0)});
    }
    return DisturbanceSignal::sum_of_sinusoids(std::move(terms), j.value("offset", 0.0) * scale);
  }
  if (kind == "tabulated") {
    std::vector<double> times = j.at("times").get<std::vector<double>>();
    std::vector<double> values = j.at("values").get<std::vector<double>>();
    for (double& v : values) v *= scale;
    return DisturbanceSignal::tabulated(std::move(times), std::move(values));
  }
  throw std::invalid_argument("unknown disturbance kind: " + kind);
}

ReferenceTrajectory trajectory_from_json(const nlohmann::json& j) {
  if (j.is_string()) return trajectory_preset(j.get<std::string>());
  ReferenceTrajectory traj;
  traj.offset = j.value("offset", 0.0);
  if (j.contains("terms")) {
    for (const auto& t : j.at("terms")) {
      traj.terms.push_back(
          {t.value("amplitude", 0.0), t.value("omega", 1.0), t.value("phase", 0.0)});
    }
  }
  return traj;
}

}  // namespace

SimConfig config_from_json(const nlohmann::json& j) {
  const double scale = j.value("disturbance_scale", 1.0);

  SimConfig cfg;
  if (j.contains("preset")) {
    cfg = experiment_preset(j.at("preset").get<std::string>(), scale).config;
  }

  if (j.contains("a1")) cfg.truth.a1 = j.at("a1").get<double>();
  if (j.contains("a2")) cfg.truth.a2 = j.at("a2").get<double>();
  if (j.contains("b")) cfg.truth.b = j.at("b").get<double>();
  if (j.contains("disturbance")) cfg.truth.w = disturbance_from_json(j.at("disturbance"), scale);
  if (j.contains("trajectory")) cfg.trajectory = trajectory_from_json(j.at("trajectory"));
  if (j.contains("q0")) cfg.initial.q = j.at("q0").get<double>();
  if (j.contains("qdot0")) cfg.initial.qdot = j.at("qdot0").get<double>();
  if (j.contains("t_end")) cfg.t_end = j.at("t_end").get<double>();
  if (j.contains("tail_fraction")) cfg.tail_fraction = j.at("tail_fraction").get<double>();
  if (j.contains("raw")) cfg.integrate_raw_pid = j.at("raw").get<bool>();

  const bool has_aux = j.contains("kp") || j.contains("kd") || j.contains("T");
  const bool has_gains = j.contains("KP") || j.contains("KI") || j.contains("KD");
  if (has_aux && has_gains) {
    throw std::invalid_argument("specify either (kp, kd, T) or (KP, KI, KD), not both");
  }
  if (has_aux) {
    AuxParams aux = cfg.aux() ? *cfg.aux() : AuxParams{};
    if (j.contains("kp")) aux.kp = j.at("kp").get<double>();
    if (j.contains("kd")) aux.kd = j.at("kd").get<double>();
    if (j.contains("T")) aux.T = j.at("T").get<double>();
    cfg.controller = aux;
  } else if (has_gains) {
    const PidGains* held = std::get_if<PidGains>(&cfg.controller);
    PidGains g = held ? *held : PidGains{};
    if (j.contains("KP")) g.kP = j.at("KP").get<double>();
    if (j.contains("KI")) g.kI = j.at("KI").get<double>();
    if (j.contains("KD")) g.kD = j.at("KD").get<double>();
    cfg.controller = g;
  }

  if (j.contains("dt")) {
    cfg.dt = j.at("dt").get<double>();
  } else if (const AuxParams* a = cfg.aux()) {
    cfg.dt = SimConfig::default_dt(a->T);
  }
  return cfg;
}

Table1Report run_table1(double disturbance_scale) {
  Table1Report report;
  double ub_d2[3] = {0.0, 0.0, 0.0};
  for (int row = 0; row < 3; ++row) {
    Table1Row out;
    out.label = "P" + std::to_string(row + 1);
    out.aux = kTable1Aux[row];
    out.gains = forward_map(out.aux);

    const SimResult r1 = run_closed_loop(table1_config(row, "d1-elevation", disturbance_scale));
    const SimResult r2 = run_closed_loop(table1_config(row, "d2-elevation", disturbance_scale));
    out.ub_d1 = r1.ub.epsilon;
    out.settled_d1 = r1.ub.settled;
    out.ub_d2 = r2.ub.epsilon;
    out.settled_d2 = r2.ub.settled;
    ub_d2[row] = r2.ub.epsilon;
    report.rows.push_back(out);
  }
  report.ratio_p1_p3 = ub_d2[0] / ub_d2[2];
  report.ratio_p2_p3 = ub_d2[1] / ub_d2[2];
  return report;
}

std::vector<SweepRow> sweep_T(const SimConfig& config_template,
                              const std::vector<double>& t_list) {
  const AuxParams* base = config_template.aux();
  if (!base) {
    throw std::invalid_argument("sweep_T requires an AuxParams controller template");
  }

  std::vector<SweepRow> rows;
  for (double T : t_list) {
    SimConfig cfg = config_template;
    const AuxParams aux{base->kp, base->kd, T};
    cfg.controller = aux;
    cfg.dt = std::min(config_template.dt, SimConfig::default_dt(T));

    const SimResult r = run_closed_loop(cfg);
    SweepRow row;
    row.T = T;
    row.gains = forward_map(aux);
    row.ub = r.ub.epsilon;
    row.settling_time = r.ub.t_epsilon;
    row.settled = r.ub.settled;
    for (double v : r.u) row.max_control = std::max(row.max_control, std::abs(v));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace pidmap
