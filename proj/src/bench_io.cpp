// SPDX-License-Identifier: Apache-2.0
#include "irsbeam/harness.hpp"

#include "json.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace irsbeam {

namespace {

using nlohmann::json;

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

json number_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

double number_from(const json& j) {
  return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

json scenario_json(const ScenarioConfig& s) {
  return {{"M", s.M},
          {"K", s.K},
          {"N", s.N},
          {"L_I", s.L_I},
          {"irs_y", s.irs_y},
          {"cluster_x", s.cluster_x},
          {"cluster_y", s.cluster_y},
          {"cluster_radius", s.cluster_radius},
          {"P_T_dbm", s.P_T_dbm},
          {"noise_psd_dbm_hz", s.noise_psd_dbm_hz},
          {"bandwidth_hz", s.bandwidth_hz},
          {"ref_loss_db", s.ref_loss_db},
          {"rho_D", s.rho_D},
          {"rho_I", s.rho_I},
          {"xi_db", s.xi_db},
          {"eta", s.eta},
          {"omega", s.omega}};
}

ScenarioConfig scenario_from(const json& j) {
  ScenarioConfig s;
  j.at("M").get_to(s.M);
  j.at("K").get_to(s.K);
  j.at("N").get_to(s.N);
  j.at("L_I").get_to(s.L_I);
  j.at("irs_y").get_to(s.irs_y);
  j.at("cluster_x").get_to(s.cluster_x);
  j.at("cluster_y").get_to(s.cluster_y);
  j.at("cluster_radius").get_to(s.cluster_radius);
  j.at("P_T_dbm").get_to(s.P_T_dbm);
  j.at("noise_psd_dbm_hz").get_to(s.noise_psd_dbm_hz);
  j.at("bandwidth_hz").get_to(s.bandwidth_hz);
  j.at("ref_loss_db").get_to(s.ref_loss_db);
  j.at("rho_D").get_to(s.rho_D);
  j.at("rho_I").get_to(s.rho_I);
  j.at("xi_db").get_to(s.xi_db);
  j.at("eta").get_to(s.eta);
  j.at("omega").get_to(s.omega);
  return s;
}

json config_json(const BenchConfig& c) {
  json sets = json::array();
  for (const auto& F : c.feasible_sets) sets.push_back(F.name());
  json solvers = json::array();
  for (auto s : c.rc_solvers) solvers.push_back(to_string(s));
  const auto& o = c.optimizer;
  return {
      {"scenario", scenario_json(c.scenario)},
      {"sweep", {{"P_T_dbm", c.P_T_dbm}, {"N", c.N}, {"xi_db", c.xi_db}, {"L_I", c.L_I}}},
      {"methods",
       {{"feasible_sets", sets},
        {"rc_solvers", solvers},
        {"baselines", {{"no_irs", c.baseline_no_irs}, {"random_theta", c.baseline_random_theta}}}}},
      {"trials",
       {{"snapshots", c.snapshots},
        {"realizations", c.realizations},
        {"master_seed", c.master_seed},
        {"jobs", c.jobs},
        {"record_timing", c.record_timing}}},
      {"optimizer",
       {{"max_outer_iter", o.max_outer_iter},
        {"rel_tol", o.rel_tol},
        {"npp_inner", to_string(o.npp_inner)},
        {"max_inner_iter", o.inner_opts.max_iter},
        {"inner_tol", o.inner_opts.tol},
        {"ellipsoid_tol", o.inner_opts.ellipsoid_tol},
        {"ellipsoid_max_iter", o.inner_opts.ellipsoid_max_iter},
        {"admm_mu", o.inner_opts.admm_mu_override ? json(*o.inner_opts.admm_mu_override)
                                                  : json(nullptr)},
        {"power_tol", o.power_opts.tol},
        {"power_max_iter", o.power_opts.max_iter},
        {"max_consecutive_rejections", o.max_consecutive_rejections},
        {"monotone_slack", o.monotone_slack}}}};
}

BenchConfig config_from(const json& j) {
  BenchConfig c;
  c.scenario = scenario_from(j.at("scenario"));
  const auto& sweep = j.at("sweep");
  sweep.at("P_T_dbm").get_to(c.P_T_dbm);
  sweep.at("N").get_to(c.N);
  sweep.at("xi_db").get_to(c.xi_db);
  sweep.at("L_I").get_to(c.L_I);

  const auto& methods = j.at("methods");
  c.feasible_sets.clear();
  for (const auto& f : methods.at("feasible_sets")) {
    c.feasible_sets.push_back(FeasibleSet::parse(f.get<std::string>()));
  }
  c.rc_solvers.clear();
  for (const auto& s : methods.at("rc_solvers")) {
    c.rc_solvers.push_back(parse_rc_solver(s.get<std::string>()));
  }
  methods.at("baselines").at("no_irs").get_to(c.baseline_no_irs);
  methods.at("baselines").at("random_theta").get_to(c.baseline_random_theta);

  const auto& trials = j.at("trials");
  trials.at("snapshots").get_to(c.snapshots);
  trials.at("realizations").get_to(c.realizations);
  trials.at("master_seed").get_to(c.master_seed);
  trials.at("jobs").get_to(c.jobs);
  trials.at("record_timing").get_to(c.record_timing);

  const auto& o = j.at("optimizer");
  auto& opt = c.optimizer;
  o.at("max_outer_iter").get_to(opt.max_outer_iter);
  o.at("rel_tol").get_to(opt.rel_tol);
  opt.npp_inner = parse_convex_solver(o.at("npp_inner").get<std::string>());
  o.at("max_inner_iter").get_to(opt.inner_opts.max_iter);
  o.at("inner_tol").get_to(opt.inner_opts.tol);
  o.at("ellipsoid_tol").get_to(opt.inner_opts.ellipsoid_tol);
  o.at("ellipsoid_max_iter").get_to(opt.inner_opts.ellipsoid_max_iter);
  if (!o.at("admm_mu").is_null()) opt.inner_opts.admm_mu_override = o.at("admm_mu").get<double>();
  o.at("power_tol").get_to(opt.power_opts.tol);
  o.at("power_max_iter").get_to(opt.power_opts.max_iter);
  o.at("max_consecutive_rejections").get_to(opt.max_consecutive_rejections);
  o.at("monotone_slack").get_to(opt.monotone_slack);
  return c;
}

}  // namespace

OutputFormat parse_output_format(std::string_view text) {
  if (text == "csv") return OutputFormat::Csv;
  if (text == "json") return OutputFormat::Json;
  throw std::invalid_argument("unknown format '" + std::string(text) + "' (expected csv or json)");
}

std::string csv_header() {
  return "P_T_dbm,N,xi_db,L_I,method,feasible_set,mean_rate_bpshz,stderr,n_trials,n_failures,"
         "mean_iters,mean_ms";
}

void write_csv(const BenchResult& result, std::ostream& out) {
  out << csv_header() << '\n';
  for (const auto& r : result.rows) {
    out << format_number(r.point.P_T_dbm) << ',' << r.point.N << ',' << format_number(r.point.xi_db)
        << ',' << format_number(r.point.L_I) << ',' << r.method << ',' << r.feasible_set << ','
        << format_number(r.mean_rate) << ',' << format_number(r.std_error) << ',' << r.n_trials
        << ',' << r.n_failures << ',' << format_number(r.mean_iters) << ','
        << format_number(r.mean_ms) << '\n';
  }
}

void write_json(const BenchResult& result, std::ostream& out) {
  json rows = json::array();
  for (const auto& r : result.rows) {
    json samples = json::array();
    for (double x : r.snapshot_means) samples.push_back(x);
    rows.push_back({{"P_T_dbm", r.point.P_T_dbm},
                    {"N", r.point.N},
                    {"xi_db", r.point.xi_db},
                    {"L_I", r.point.L_I},
                    {"method", r.method},
                    {"feasible_set", r.feasible_set},
                    {"mean_rate_bpshz", number_or_null(r.mean_rate)},
                    {"stderr", number_or_null(r.std_error)},
                    {"n_trials", r.n_trials},
                    {"n_failures", r.n_failures},
                    {"mean_iters", number_or_null(r.mean_iters)},
                    {"mean_ms", number_or_null(r.mean_ms)},
                    {"snapshot_means", samples}});
  }
  const json doc = {
      {"version", result.version}, {"config", config_json(result.config)}, {"results", rows}};
  out << doc.dump(2) << '\n';
}

BenchResult read_json(std::istream& in) {
  const json doc = json::parse(in);
  BenchResult result;
  result.version = doc.at("version").get<std::string>();
  result.config = config_from(doc.at("config"));
  for (const auto& j : doc.at("results")) {
    MethodStats r;
    j.at("P_T_dbm").get_to(r.point.P_T_dbm);
    j.at("N").get_to(r.point.N);
    j.at("xi_db").get_to(r.point.xi_db);
    j.at("L_I").get_to(r.point.L_I);
    j.at("method").get_to(r.method);
    j.at("feasible_set").get_to(r.feasible_set);
    r.mean_rate = number_from(j.at("mean_rate_bpshz"));
    r.std_error = number_from(j.at("stderr"));
    j.at("n_trials").get_to(r.n_trials);
    j.at("n_failures").get_to(r.n_failures);
    r.mean_iters = number_from(j.at("mean_iters"));
    r.mean_ms = number_from(j.at("mean_ms"));
    j.at("snapshot_means").get_to(r.snapshot_means);
    result.rows.push_back(std::move(r));
  }
  return result;
}

void emit_results(const BenchResult& result, OutputFormat format, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  if (format == OutputFormat::Csv) {
    write_csv(result, out);
  } else {
    write_json(result, out);
  }
  out.flush();
  if (!out) throw std::runtime_error("error writing '" + path + "'");
}

BenchResult load_results_json(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "' for reading");
  try {
    return read_json(in);
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("malformed results file '" + path + "': " + e.what());
  }
}

}  // namespace irsbeam
