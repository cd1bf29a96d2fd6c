// inertia-plan: microgrid investment planning with frequency-security limits.
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "iplan/decomposition.hpp"
#include "iplan/instance.hpp"
#include "iplan/kmeans.hpp"
#include "iplan/linearize.hpp"
#include "iplan/simulate.hpp"
#include "iplan/solution_io.hpp"

namespace {

int log_level() {
  const char* env = std::getenv("INERTIA_PLAN_LOG");
  if (!env) return 1;
  std::string v = env;
  if (v == "error") return 0;
  if (v == "debug") return 2;
  return 1;
}

void info(const std::string& msg) {
  if (log_level() >= 1) std::cerr << "[info] " << msg << "\n";
}

void debug(const std::string& msg) {
  if (log_level() >= 2) std::cerr << "[debug] " << msg << "\n";
}

nlohmann::json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw iplan::InputError("cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw iplan::InputError(std::string("json parse error in ") + path + ": " + e.what());
  }
  return j;
}

void write_file(const std::string& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw iplan::InputError("cannot write " + path);
  out << body;
}

iplan::Algorithm parse_algorithm(const std::string& name) {
  if (name == "a0" || name == "conservative") return iplan::Algorithm::A0;
  if (name == "a1" || name == "aggregate") return iplan::Algorithm::A1;
  if (name == "a2" || name == "investment") return iplan::Algorithm::A2;
  if (name == "exhaustive") return iplan::Algorithm::Exhaustive;
  throw iplan::InputError("unknown algorithm: " + name);
}

int cmd_plan(const std::string& input, const std::string& alg_name, int max_iter,
             double tol, double turbine_t, double fbase, const std::string& out_dir) {
  nlohmann::json j = load_json(input);
  iplan::PlanningInstance inst = iplan::parse_instance(j);
  if (turbine_t > 0) inst.turbine_t = turbine_t;
  if (fbase > 0) inst.f_base_hz = fbase;

  iplan::Algorithm alg = parse_algorithm(alg_name);
  iplan::RunConfig cfg;
  cfg.max_iter = max_iter;
  cfg.tol_kw = tol;

  info("planning " + inst.name + " with " + iplan::algorithm_name(alg));
  iplan::PlanResult r = iplan::plan(inst, alg, cfg);
  debug("iterations: " + std::to_string(r.iterations.size()));

  write_file(out_dir + "/solution.json", iplan::solution_json(inst, r));
  write_file(out_dir + "/costs.json", iplan::costs_json(r));
  write_file(out_dir + "/metrics.csv", iplan::metrics_csv(r));
  write_file(out_dir + "/iterations.jsonl", iplan::iterations_jsonl(r));

  std::printf("%s %s cost=%.6f converged=%s audit=%s\n", inst.name.c_str(),
              iplan::algorithm_name(alg), r.total_cost, r.converged ? "yes" : "no",
              r.audit_pass ? "pass" : "fail");
  if (!r.converged) {
    std::cerr << "not converged: " << r.message << "\n";
    return 2;
  }
  return 0;
}

int cmd_metrics(const std::string& input, double delta_p, double turbine_t, double fbase,
                const std::string& out_path) {
  nlohmann::json j = load_json(input);
  iplan::PlanningInstance inst = iplan::parse_instance(j);
  if (turbine_t > 0) inst.turbine_t = turbine_t;
  if (fbase > 0) inst.f_base_hz = fbase;

  std::vector<double> z(inst.units.size(), 1.0);
  iplan::AggregateParams agg = iplan::aggregate(iplan::fleet_for(inst, z));
  // exact_metrics covers all damping regimes; express delta_p as exchange kW.
  iplan::FrequencyMetrics m =
      iplan::exact_metrics(agg, inst.turbine_t, -delta_p * agg.p_base_kw, inst.f_base_hz);
  iplan::LimitCheck chk = iplan::check_limits(m, inst.limits);

  nlohmann::ordered_json o;
  o["delta_p_pu"] = delta_p;
  o["inertia"] = agg.M;
  o["damping"] = agg.D;
  o["sg_droop_gain"] = agg.R_s;
  o["sg_fast_gain"] = agg.F_s;
  o["p_base_kw"] = agg.p_base_kw;
  o["nadir_hz"] = m.nadir_hz;
  o["rocof_hz_s"] = m.rocof_hz_s;
  o["qss_hz"] = m.qss_hz;
  o["secure"] = chk.all_pass;
  std::string body = o.dump(2) + "\n";
  if (out_path.empty())
    std::cout << body;
  else
    write_file(out_path, body);
  return 0;
}

int cmd_validate(const std::string& input, double delta_p, double dt, double turbine_t,
                 double fbase) {
  nlohmann::json j = load_json(input);
  iplan::PlanningInstance inst = iplan::parse_instance(j);
  if (turbine_t > 0) inst.turbine_t = turbine_t;
  if (fbase > 0) inst.f_base_hz = fbase;

  std::vector<double> z(inst.units.size(), 1.0);
  iplan::AggregateParams agg = iplan::aggregate(iplan::fleet_for(inst, z));
  iplan::FrequencyMetrics closed =
      iplan::exact_metrics(agg, inst.turbine_t, -delta_p * agg.p_base_kw, inst.f_base_hz);
  iplan::SimTrace tr =
      iplan::simulate(agg, inst.turbine_t, delta_p, 120.0, dt, inst.f_base_hz);
  iplan::FrequencyMetrics simd = iplan::trace_metrics(tr);

  std::printf("metric      closed-form      simulated        |diff|\n");
  std::printf("nadir_hz    %14.8f %14.8f %12.3e\n", closed.nadir_hz, simd.nadir_hz,
              std::fabs(closed.nadir_hz - simd.nadir_hz));
  std::printf("rocof_hz_s  %14.8f %14.8f %12.3e\n", closed.rocof_hz_s, simd.rocof_hz_s,
              std::fabs(closed.rocof_hz_s - simd.rocof_hz_s));
  std::printf("qss_hz      %14.8f %14.8f %12.3e\n", closed.qss_hz, simd.qss_hz,
              std::fabs(closed.qss_hz - simd.qss_hz));
  return 0;
}

int cmd_cluster(const std::string& input, int k, unsigned seed, const std::string& out_path) {
  nlohmann::json j = load_json(input);
  std::vector<iplan::RawDay> raw;
  for (const auto& jd : j.at("days")) {
    iplan::RawDay d;
    d.pv_availability = jd.at("pv_availability").get<std::vector<double>>();
    for (auto it = jd.at("demand_kw").begin(); it != jd.at("demand_kw").end(); ++it)
      d.demand_kw[it.key()] = it.value().get<std::vector<double>>();
    raw.push_back(std::move(d));
  }
  std::vector<iplan::RepDay> days = iplan::cluster_days(raw, k, seed);
  nlohmann::ordered_json o = nlohmann::ordered_json::array();
  for (const auto& d : days) {
    nlohmann::ordered_json jd;
    jd["weight_days"] = d.weight_days;
    jd["pv_availability"] = d.pv_availability;
    nlohmann::ordered_json dm;
    for (const auto& [bus, prof] : d.demand_kw) dm[bus] = prof;
    jd["demand_kw"] = dm;
    o.push_back(jd);
  }
  std::string body = o.dump(2) + "\n";
  if (out_path.empty())
    std::cout << body;
  else
    write_file(out_path, body);
  return 0;
}

int cmd_lin_error(int samples, unsigned seed, double turbine_t, const std::string& out_path) {
  iplan::ErrorSampler cfg;
  cfg.D = 0.9;
  cfg.R_s = 100.0 / 3.0;
  cfg.F_s = 35.0 / 3.0;
  cfg.M = 14.0;
  if (turbine_t > 0) cfg.turbine_t = turbine_t;
  iplan::ApproxErrorStats st = iplan::error_stats(samples, cfg, seed);
  nlohmann::ordered_json o;
  o["samples"] = samples;
  o["mean_abs_error_pu"] = st.mean_abs;
  o["max_abs_error_pu"] = st.max_abs;
  o["mean_rel_error"] = st.mean_rel;
  o["max_rel_error"] = st.max_rel;
  std::string body = o.dump(2) + "\n";
  if (out_path.empty())
    std::cout << body;
  else
    write_file(out_path, body);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"microgrid investment planning with transient frequency-security limits"};
  app.require_subcommand(1);

  std::string input, out_dir = ".", out_path, alg = "a1";
  int max_iter = 30, k = 2, samples = 1000;
  unsigned seed = 1;
  double tol = 1e-4, turbine_t = 0, fbase = 0, delta_p = 0.2, dt = 1e-3;

  auto* plan = app.add_subcommand("plan", "solve the investment plan");
  plan->add_option("--input", input, "instance json")->required();
  plan->add_option("--algorithm", alg, "a0|a1|a2|exhaustive");
  plan->add_option("--max-iter", max_iter, "iteration limit");
  plan->add_option("--tol", tol, "convergence tolerance [kW]");
  plan->add_option("--turbine-t", turbine_t, "override turbine time constant [s]");
  plan->add_option("--fbase", fbase, "override nominal frequency [Hz]");
  plan->add_option("--out", out_dir, "output directory");

  auto* met = app.add_subcommand("metrics", "closed-form frequency metrics of the full fleet");
  met->add_option("--input", input, "instance json")->required();
  met->add_option("--delta-p", delta_p, "disturbance [pu]");
  met->add_option("--turbine-t", turbine_t, "override turbine time constant [s]");
  met->add_option("--fbase", fbase, "override nominal frequency [Hz]");
  met->add_option("--out", out_path, "output file (stdout if empty)");

  auto* val = app.add_subcommand("validate", "compare closed-form metrics against simulation");
  val->add_option("--input", input, "instance json")->required();
  val->add_option("--delta-p", delta_p, "disturbance [pu]");
  val->add_option("--dt", dt, "integration step [s]");
  val->add_option("--turbine-t", turbine_t, "override turbine time constant [s]");
  val->add_option("--fbase", fbase, "override nominal frequency [Hz]");

  auto* clu = app.add_subcommand("cluster", "cluster raw days into representative days");
  clu->add_option("--input", input, "raw days json")->required();
  clu->add_option("--k", k, "number of clusters");
  clu->add_option("--seed", seed, "rng seed");
  clu->add_option("--out", out_path, "output file (stdout if empty)");

  auto* lin = app.add_subcommand("lin-error", "sampled linearization error statistics");
  lin->add_option("--samples", samples, "sample count");
  lin->add_option("--seed", seed, "rng seed");
  lin->add_option("--turbine-t", turbine_t, "turbine time constant [s]");
  lin->add_option("--out", out_path, "output file (stdout if empty)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (plan->parsed()) return cmd_plan(input, alg, max_iter, tol, turbine_t, fbase, out_dir);
    if (met->parsed()) return cmd_metrics(input, delta_p, turbine_t, fbase, out_path);
    if (val->parsed()) return cmd_validate(input, delta_p, dt, turbine_t, fbase);
    if (clu->parsed()) return cmd_cluster(input, k, seed, out_path);
    if (lin->parsed()) return cmd_lin_error(samples, seed, turbine_t, out_path);
  } catch (const iplan::ModelError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
