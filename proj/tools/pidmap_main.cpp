// Command-line front end: gain mapping and its inverse, stability reports,
// closed-loop simulation with CSV/JSON output, and the tuning studies.
//
// Exit codes: 0 success, 1 usage/parse error, 2 precondition violation,
// 3 instability escape.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pidmap/analysis.hpp"
#include "pidmap/io.hpp"
#include "pidmap/presets.hpp"
#include "pidmap/sim.hpp"

namespace {

using namespace pidmap;

std::string fmt(double v) { return format_double(v); }

void print_gains(const PidGains& g) {
  std::cout << "KP = " << fmt(g.kP) << "\nKI = " << fmt(g.kI) << "\nKD = " << fmt(g.kD) << "\n";
}

void print_eigenvalues(const CubicSolution& eig) {
  std::cout << "eigenvalues:";
  for (const auto& r : eig.real_roots) {
    for (int i = 0; i < r.multiplicity; ++i) std::cout << ' ' << fmt(r.value);
  }
  if (eig.complex_pair) {
    std::cout << ' ' << fmt(eig.complex_pair->real()) << "+-" << fmt(eig.complex_pair->imag())
              << 'i';
  }
  std::cout << "\n";
}

std::ofstream open_output(const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::invalid_argument("cannot open output file: " + path);
  return os;
}

struct SimulateArgs {
  std::string config_path, preset, csv_path, json_path;
  std::string disturbance, trajectory;
  std::optional<double> kp, kd, T, KP, KI, KD;
  std::optional<double> a1, a2, b, q0, qdot0, t_end, dt, tail_fraction;
  double disturbance_scale = 1.0;
  bool raw = false;

  nlohmann::json to_json() const {
    nlohmann::json j;
    if (!config_path.empty()) {
      std::ifstream is(config_path);
      if (!is) throw std::invalid_argument("cannot open config file: " + config_path);
      is >> j;
    }
    if (!preset.empty()) j["preset"] = preset;
    if (!disturbance.empty()) j["disturbance"] = disturbance;
    if (!trajectory.empty()) j["trajectory"] = trajectory;
    auto set = [&](const char* key, const std::optional<double>& v) {
      if (v) j[key] = *v;
    };
    set("kp", kp);
    set("kd", kd);
    set("T", T);
    set("KP", KP);
    set("KI", KI);
    set("KD", KD);
    set("a1", a1);
    set("a2", a2);
    set("b", b);
    set("q0", q0);
    set("qdot0", qdot0);
    set("t_end", t_end);
    set("dt", dt);
    set("tail_fraction", tail_fraction);
    j["disturbance_scale"] = disturbance_scale;
    if (raw) j["raw"] = true;
    return j;
  }
};

void add_sim_flags(CLI::App* cmd, SimulateArgs& args) {
  cmd->add_option("--config", args.config_path, "JSON config file (flags override its values)");
  cmd->add_option("--preset", args.preset, "named scenario, e.g. table1-P1-d1");
  cmd->add_option("--kp", args.kp, "nominal proportional parameter");
  cmd->add_option("--kd", args.kd, "nominal derivative parameter");
  cmd->add_option("--T", args.T, "estimator time constant (s)");
  cmd->add_option("--KP", args.KP, "proportional gain");
  cmd->add_option("--KI", args.KI, "integral gain");
  cmd->add_option("--KD", args.KD, "derivative gain");
  cmd->add_option("--a1", args.a1, "truth position coefficient");
  cmd->add_option("--a2", args.a2, "truth velocity coefficient");
  cmd->add_option("--b", args.b, "truth input coefficient, in (-1, 1)");
  cmd->add_option("--disturbance", args.disturbance, "disturbance preset name");
  cmd->add_option("--disturbance-scale", args.disturbance_scale,
                  "multiplier on the preset amplitude");
  cmd->add_option("--trajectory", args.trajectory, "trajectory preset name");
  cmd->add_option("--q0", args.q0, "initial position (deg)");
  cmd->add_option("--qdot0", args.qdot0, "initial velocity (deg/s)");
  cmd->add_option("--t-end", args.t_end, "simulation horizon (s)");
  cmd->add_option("--dt", args.dt, "integrator step (s)");
  cmd->add_option("--tail-fraction", args.tail_fraction, "tail window for the UB measurement");
  cmd->add_flag("--raw", args.raw, "integrate the raw-PID arithmetic path");
}

int cmd_map(double kp, double kd, double T) {
  print_gains(forward_map(AuxParams{kp, kd, T}));
  return 0;
}

int cmd_invert(double KP, double KI, double KD) {
  const auto inv = inverse_map(PidGains{KP, KI, KD});
  std::cout << inv.candidates.size() << " candidate(s), ascending T:\n";
  for (const auto& c : inv.candidates) {
    std::cout << "  kp = " << fmt(c.aux.kp) << ", kd = " << fmt(c.aux.kd)
              << ", T = " << fmt(c.aux.T)
              << (c.admissible() ? "  [admissible]" : "  [inadmissible: requires kd > 0]")
              << "\n";
  }
  return 0;
}

int cmd_jacobian(double kp, double kd, double T) {
  const auto j = jacobian(AuxParams{kp, kd, T});
  const char* rows[3] = {"KP", "KD", "KI"};
  std::cout << "rows (KP, KD, KI) x columns (kp, kd, T):\n";
  for (int r = 0; r < 3; ++r) {
    std::cout << "  d" << rows[r] << "/d(kp,kd,T) = [" << fmt(j(r, 0)) << ", " << fmt(j(r, 1))
              << ", " << fmt(j(r, 2)) << "]\n";
  }
  return 0;
}

struct StabilityArgs {
  std::optional<double> kp, kd, T, KP, KI, KD;
  double a1 = 0.0, a2 = 0.0, b = 0.0;
  double range_min = 1e-4, range_max = 1e3;
};

int cmd_stability(const StabilityArgs& args) {
  const PlantParams truth{.a1 = args.a1, .a2 = args.a2, .b = args.b, .w = {}};
  if (!truth.valid()) {
    throw std::invalid_argument("plant parameters require b in (-1, 1)");
  }

  std::optional<PidGains> gains;
  if (args.KP && args.KI && args.KD) {
    gains = PidGains{*args.KP, *args.KI, *args.KD};
  } else if (args.kp && args.kd && args.T) {
    gains = forward_map(AuxParams{*args.kp, *args.kd, *args.T});
    std::cout << "mapped gains: KP = " << fmt(gains->kP) << ", KI = " << fmt(gains->kI)
              << ", KD = " << fmt(gains->kD) << "\n";
  }

  if (gains) {
    const auto m = closed_loop_matrix(*gains, truth);
    std::cout << "routh condition: " << (routh_condition(*gains, truth) ? "stable" : "unstable")
              << "\n";
    print_eigenvalues(closed_loop_eigenvalues(m));
    std::cout << "hurwitz (eigenvalue test): " << (is_hurwitz(m) ? "yes" : "no") << "\n";
  }

  if (args.kp && args.kd) {
    const auto res = find_T_bar(*args.kp, *args.kd, truth, args.range_min, args.range_max);
    switch (res.status) {
      case StabilityThreshold::Status::stable_everywhere:
        std::cout << "T threshold: stable for all tested T in [" << fmt(args.range_min) << ", "
                  << fmt(args.range_max) << "]\n";
        break;
      case StabilityThreshold::Status::threshold_found:
        std::cout << "T threshold: " << fmt(res.t_bar) << "\n";
        break;
      case StabilityThreshold::Status::unstable_at_minimum:
        std::cout << "T threshold: no stable T found in range\n";
        break;
    }
  } else if (!gains) {
    throw std::invalid_argument("stability needs either --kp/--kd [--T] or --KP/--KI/--KD");
  }
  return 0;
}

int cmd_lyapunov_bound(double KP, double KI, double KD, double a1, double a2, double b,
                       double u_inf, double theta) {
  const PlantParams truth{.a1 = a1, .a2 = a2, .b = b, .w = {}};
  const auto m = closed_loop_matrix(PidGains{KP, KI, KD}, truth);
  const auto rep = ultimate_bound(m, u_inf, theta);
  std::cout << "P =\n";
  for (int r = 0; r < 3; ++r) {
    std::cout << "  [" << fmt(rep.P(r, 0)) << ", " << fmt(rep.P(r, 1)) << ", " << fmt(rep.P(r, 2))
              << "]\n";
  }
  std::cout << "lambda_max(P) = " << fmt(rep.lambda_max)
            << "\nlambda_min(P) = " << fmt(rep.lambda_min) << "\ntheta = " << fmt(rep.theta)
            << "\n|u|_inf = " << fmt(rep.u_inf) << "\nultimate bound = " << fmt(rep.bound)
            << "\n";
  return 0;
}

int cmd_simulate(const SimulateArgs& args) {
  const SimConfig cfg = config_from_json(args.to_json());
  const SimResult r = run_closed_loop(cfg);

  if (!args.csv_path.empty()) {
    auto os = open_output(args.csv_path);
    write_csv(r, os);
  }
  const nlohmann::json summary = summary_json(r);
  if (!args.json_path.empty()) {
    auto os = open_output(args.json_path);
    os << summary.dump(2) << "\n";
  } else {
    std::cout << summary.dump(2) << "\n";
  }
  return 0;
}

int cmd_table1(double scale, const std::string& json_path) {
  const Table1Report rep = run_table1(scale);
  std::cout << "No.  (KP, KI, KD)      (kp, kd, T)    UB(d1)      UB(d2)\n";
  for (const auto& row : rep.rows) {
    std::cout << row.label << "   (" << fmt(row.gains.kP) << ", " << fmt(row.gains.kI) << ", "
              << fmt(row.gains.kD) << ")   (" << fmt(row.aux.kp) << ", " << fmt(row.aux.kd)
              << ", " << fmt(row.aux.T) << ")   " << fmt(row.ub_d1) << "   " << fmt(row.ub_d2)
              << (row.settled_d1 && row.settled_d2 ? "" : "   [unsettled]") << "\n";
  }
  std::cout << "measured eps(P1)/eps(P3) = " << fmt(rep.ratio_p1_p3)
            << "  (reference " << fmt(Table1Report::kReferenceRatioP1P3) << ")\n"
            << "measured eps(P2)/eps(P3) = " << fmt(rep.ratio_p2_p3)
            << "  (reference " << fmt(Table1Report::kReferenceRatioP2P3) << ")\n";

  if (!json_path.empty()) {
    nlohmann::json j;
    for (const auto& row : rep.rows) {
      j["rows"].push_back({{"label", row.label},
                           {"KP", row.gains.kP},
                           {"KI", row.gains.kI},
                           {"KD", row.gains.kD},
                           {"kp", row.aux.kp},
                           {"kd", row.aux.kd},
                           {"T", row.aux.T},
                           {"ub_d1", row.ub_d1},
                           {"ub_d2", row.ub_d2},
                           {"settled", row.settled_d1 && row.settled_d2}});
    }
    j["ratio_p1_p3"] = rep.ratio_p1_p3;
    j["ratio_p2_p3"] = rep.ratio_p2_p3;
    j["reference_ratio_p1_p3"] = Table1Report::kReferenceRatioP1P3;
    j["reference_ratio_p2_p3"] = Table1Report::kReferenceRatioP2P3;
    auto os = open_output(json_path);
    os << j.dump(2) << "\n";
  }
  return 0;
}

int cmd_sp_study(const SimulateArgs& sim_args, const std::vector<double>& t_list,
                 const std::string& csv_path) {
  nlohmann::json j = sim_args.to_json();
  if (!j.contains("kp")) j["kp"] = 1.0;
  if (!j.contains("kd")) j["kd"] = 2.0;
  if (!j.contains("T")) j["T"] = t_list.front();
  if (!j.contains("disturbance")) j["disturbance"] = "d2-elevation";
  if (!j.contains("trajectory")) j["trajectory"] = "heli-elevation";
  SimConfig cfg = config_from_json(j);
  if (!j.contains("q0") && !j.contains("qdot0")) {
    // start on the trajectory: the study premise is a T-independent fast IC
    const auto ref0 = cfg.trajectory.eval(0.0);
    cfg.initial = PlantState{ref0.q, ref0.qdot};
  }

  const OTStudy study = o_of_T_study(cfg, t_list);

  std::ostream* os = &std::cout;
  std::ofstream file;
  if (!csv_path.empty()) {
    file = open_output(csv_path);
    os = &file;
  }
  *os << "T,gapE,gapD,ubE,ubD,ratio_prev\n";
  for (const auto& row : study.rows) {
    *os << fmt(row.T) << ',' << fmt(row.gap_e) << ',' << fmt(row.gap_d) << ',' << fmt(row.ub_e)
        << ',' << fmt(row.ub_d) << ',' << (row.has_ratio ? fmt(row.ratio_prev) : "") << "\n";
  }
  std::cout << "fit gapE ~ k T: slope = " << fmt(study.slope)
            << ", R^2 = " << fmt(study.r_squared) << "\n";
  return 0;
}

int cmd_sweep_T(const SimulateArgs& sim_args, const std::vector<double>& t_list,
                const std::string& csv_path) {
  nlohmann::json j = sim_args.to_json();
  if (!j.contains("T")) j["T"] = t_list.front();
  const SimConfig cfg = config_from_json(j);

  const auto rows = sweep_T(cfg, t_list);

  std::ostream* os = &std::cout;
  std::ofstream file;
  if (!csv_path.empty()) {
    file = open_output(csv_path);
    os = &file;
  }
  *os << "T,KP,KI,KD,ub,settling_time,max_control\n";
  for (const auto& row : rows) {
    *os << fmt(row.T) << ',' << fmt(row.gains.kP) << ',' << fmt(row.gains.kI) << ','
        << fmt(row.gains.kD) << ',' << fmt(row.ub) << ',' << fmt(row.settling_time) << ','
        << fmt(row.max_control) << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"PID gain mapping, PD + estimator decomposition, and closed-loop studies"};
  app.require_subcommand(1);

  // map
  double m_kp = 0, m_kd = 0, m_T = 0;
  auto* map_cmd = app.add_subcommand("map", "map (kp, kd, T) to PID gains");
  map_cmd->add_option("--kp", m_kp)->required();
  map_cmd->add_option("--kd", m_kd)->required();
  map_cmd->add_option("--T", m_T)->required();

  // invert
  double i_KP = 0, i_KI = 0, i_KD = 0;
  auto* invert_cmd = app.add_subcommand("invert", "find all (kp, kd, T) preimages of a gain set");
  invert_cmd->add_option("--KP", i_KP)->required();
  invert_cmd->add_option("--KI", i_KI)->required();
  invert_cmd->add_option("--KD", i_KD)->required();

  // jacobian
  double j_kp = 0, j_kd = 0, j_T = 0;
  auto* jac_cmd = app.add_subcommand("jacobian", "partial derivatives of the mapping");
  jac_cmd->add_option("--kp", j_kp)->required();
  jac_cmd->add_option("--kd", j_kd)->required();
  jac_cmd->add_option("--T", j_T)->required();

  // stability
  StabilityArgs st;
  auto* st_cmd = app.add_subcommand("stability", "routh verdict, eigenvalues, T threshold");
  st_cmd->add_option("--kp", st.kp);
  st_cmd->add_option("--kd", st.kd);
  st_cmd->add_option("--T", st.T);
  st_cmd->add_option("--KP", st.KP);
  st_cmd->add_option("--KI", st.KI);
  st_cmd->add_option("--KD", st.KD);
  st_cmd->add_option("--a1", st.a1);
  st_cmd->add_option("--a2", st.a2);
  st_cmd->add_option("--b", st.b);
  st_cmd->add_option("--range-min", st.range_min);
  st_cmd->add_option("--range-max", st.range_max);

  // lyapunov-bound
  double lb_KP = 0, lb_KI = 0, lb_KD = 0, lb_a1 = 0, lb_a2 = 0, lb_b = 0;
  double lb_uinf = 0, lb_theta = 0.5;
  auto* lb_cmd = app.add_subcommand("lyapunov-bound", "Lyapunov solution and ultimate bound");
  lb_cmd->add_option("--KP", lb_KP)->required();
  lb_cmd->add_option("--KI", lb_KI)->required();
  lb_cmd->add_option("--KD", lb_KD)->required();
  lb_cmd->add_option("--a1", lb_a1);
  lb_cmd->add_option("--a2", lb_a2);
  lb_cmd->add_option("--b", lb_b);
  lb_cmd->add_option("--uinf", lb_uinf)->required();
  lb_cmd->add_option("--theta", lb_theta);

  // simulate
  SimulateArgs sim;
  auto* sim_cmd = app.add_subcommand("simulate", "closed-loop run with CSV/JSON output");
  add_sim_flags(sim_cmd, sim);
  sim_cmd->add_option("--csv", sim.csv_path, "write the time series here");
  sim_cmd->add_option("--json", sim.json_path, "write the summary here (default: stdout)");

  // table1
  double t1_scale = 1.0;
  std::string t1_json;
  auto* t1_cmd = app.add_subcommand("table1", "three gain sets under both disturbances");
  t1_cmd->add_option("--disturbance-scale", t1_scale);
  t1_cmd->add_option("--json", t1_json);

  // sp-study
  SimulateArgs sp;
  std::vector<double> sp_T{0.2, 0.1, 0.05, 0.025};
  std::string sp_csv;
  auto* sp_cmd = app.add_subcommand("sp-study", "gap-to-reduced-model table over T");
  add_sim_flags(sp_cmd, sp);
  sp_cmd->add_option("--T-list", sp_T, "descending list of T values")->delimiter(',');
  sp_cmd->add_option("--csv", sp_csv, "write the study table here (default: stdout)");

  // sweep-T
  SimulateArgs sw;
  std::vector<double> sw_T;
  std::string sw_csv;
  auto* sw_cmd = app.add_subcommand("sweep-T", "ultimate bound vs T tuning curve");
  add_sim_flags(sw_cmd, sw);
  sw_cmd->add_option("--T-list", sw_T, "list of T values")->delimiter(',')->required();
  sw_cmd->add_option("--csv", sw_csv, "write the sweep table here (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (map_cmd->parsed()) return cmd_map(m_kp, m_kd, m_T);
    if (invert_cmd->parsed()) return cmd_invert(i_KP, i_KI, i_KD);
    if (jac_cmd->parsed()) return cmd_jacobian(j_kp, j_kd, j_T);
    if (st_cmd->parsed()) return cmd_stability(st);
    if (lb_cmd->parsed()) {
      return cmd_lyapunov_bound(lb_KP, lb_KI, lb_KD, lb_a1, lb_a2, lb_b, lb_uinf, lb_theta);
    }
    if (sim_cmd->parsed()) return cmd_simulate(sim);
    if (t1_cmd->parsed()) return cmd_table1(t1_scale, t1_json);
    if (sp_cmd->parsed()) return cmd_sp_study(sp, sp_T, sp_csv);
    if (sw_cmd->parsed()) return cmd_sweep_T(sw, sw_T, sw_csv);
  } catch (const pidmap::DivergenceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
