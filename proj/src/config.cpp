// SPDX-License-Identifier: Apache-2.0
#include "irsbeam/config.hpp"

#include <yaml-cpp/yaml.h>

#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace irsbeam {

namespace {

std::string join(const std::string& prefix, const std::string& key) {
  return prefix.empty() ? key : prefix + "." + key;
}

template <typename T>
T scalar(const YAML::Node& node, const std::string& key, const char* expected) {
  if (!node.IsScalar()) throw ConfigError(key + ": expected " + expected);
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    throw ConfigError(key + ": expected " + expected + ", got '" + node.Scalar() + "'");
  }
}

template <typename T>
std::vector<T> list(const YAML::Node& node, const std::string& key, const char* expected) {
  if (node.IsScalar()) return {scalar<T>(node, key, expected)};
  if (!node.IsSequence()) throw ConfigError(key + ": expected a list of " + expected);
  std::vector<T> out;
  for (std::size_t i = 0; i < node.size(); ++i) {
    out.push_back(scalar<T>(node[i], key + "[" + std::to_string(i) + "]", expected));
  }
  return out;
}

using Handler = std::function<void(const YAML::Node&, const std::string&)>;

/// Dispatches each key of a mapping to its handler; unknown keys are errors.
void visit(const YAML::Node& node, const std::string& prefix,
           const std::map<std::string, Handler>& handlers) {
  if (!node || node.IsNull()) return;
  if (!node.IsMap()) throw ConfigError((prefix.empty() ? "<root>" : prefix) + ": expected a mapping");
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    const auto it = handlers.find(key);
    if (it == handlers.end()) throw ConfigError("unknown key '" + join(prefix, key) + "'");
    it->second(kv.second, join(prefix, key));
  }
}

template <typename T>
Handler set(T& target, const char* expected) {
  return [&target, expected](const YAML::Node& n, const std::string& key) {
    target = scalar<T>(n, key, expected);
  };
}

template <typename T>
Handler set_list(std::vector<T>& target, const char* expected) {
  return [&target, expected](const YAML::Node& n, const std::string& key) {
    target = list<T>(n, key, expected);
  };
}

void apply(const YAML::Node& root, BenchConfig& c) {
  auto& s = c.scenario;
  auto& o = c.optimizer;
  const char* real = "a number";
  const char* integer = "an integer";
  const char* boolean = "true or false";

  visit(root, "",
        {{"scenario",
          [&](const YAML::Node& n, const std::string& p) {
            visit(n, p,
                  {{"M", set(s.M, integer)},
                   {"K", set(s.K, integer)},
                   {"N", set(s.N, integer)},
                   {"L_I", set(s.L_I, real)},
                   {"irs_y", set(s.irs_y, real)},
                   {"cluster_x", set(s.cluster_x, real)},
                   {"cluster_y", set(s.cluster_y, real)},
                   {"cluster_radius", set(s.cluster_radius, real)},
                   {"P_T_dbm", set(s.P_T_dbm, real)},
                   {"noise_psd_dbm_hz", set(s.noise_psd_dbm_hz, real)},
                   {"bandwidth_hz", set(s.bandwidth_hz, real)},
                   {"ref_loss_db", set(s.ref_loss_db, real)},
                   {"rho_D", set(s.rho_D, real)},
                   {"rho_I", set(s.rho_I, real)},
                   {"xi_db", set(s.xi_db, real)},
                   {"eta", set(s.eta, real)},
                   {"omega", set_list(s.omega, real)}});
          }},
         {"sweep",
          [&](const YAML::Node& n, const std::string& p) {
            visit(n, p,
                  {{"P_T_dbm", set_list(c.P_T_dbm, real)},
                   {"N", set_list(c.N, integer)},
                   {"xi_db", set_list(c.xi_db, real)},
                   {"L_I", set_list(c.L_I, real)}});
          }},
         {"methods",
          [&](const YAML::Node& n, const std::string& p) {
            visit(n, p,
                  {{"feasible_sets",
                    [&](const YAML::Node& v, const std::string& key) {
                      c.feasible_sets.clear();
                      for (const auto& name : list<std::string>(v, key, "feasible set names")) {
                        try {
                          c.feasible_sets.push_back(FeasibleSet::parse(name));
                        } catch (const std::invalid_argument& e) {
                          throw ConfigError(key + ": " + e.what());
                        }
                      }
                    }},
                   {"rc_solvers",
                    [&](const YAML::Node& v, const std::string& key) {
                      c.rc_solvers.clear();
                      for (const auto& name : list<std::string>(v, key, "solver names")) {
                        try {
                          c.rc_solvers.push_back(parse_rc_solver(name));
                        } catch (const std::invalid_argument& e) {
                          throw ConfigError(key + ": " + e.what());
                        }
                      }
                    }},
                   {"baselines", [&](const YAML::Node& v, const std::string& key) {
                      visit(v, key,
                            {{"no_irs", set(c.baseline_no_irs, boolean)},
                             {"random_theta", set(c.baseline_random_theta, boolean)}});
                    }}});
          }},
         {"trials",
          [&](const YAML::Node& n, const std::string& p) {
            visit(n, p,
                  {{"snapshots", set(c.snapshots, integer)},
                   {"realizations", set(c.realizations, integer)},
                   {"master_seed", set(c.master_seed, "a nonnegative integer")},
                   {"jobs", set(c.jobs, integer)},
                   {"record_timing", set(c.record_timing, boolean)}});
          }},
         {"optimizer", [&](const YAML::Node& n, const std::string& p) {
            visit(n, p,
                  {{"max_outer_iter", set(o.max_outer_iter, integer)},
                   {"rel_tol", set(o.rel_tol, real)},
                   {"npp_inner",
                    [&](const YAML::Node& v, const std::string& key) {
                      try {
                        o.npp_inner = parse_convex_solver(scalar<std::string>(v, key, "a solver name"));
                      } catch (const std::invalid_argument& e) {
                        throw ConfigError(key + ": " + e.what());
                      }
                    }},
                   {"max_inner_iter", set(o.inner_opts.max_iter, integer)},
                   {"inner_tol", set(o.inner_opts.tol, real)},
                   {"ellipsoid_tol", set(o.inner_opts.ellipsoid_tol, real)},
                   {"ellipsoid_max_iter", set(o.inner_opts.ellipsoid_max_iter, integer)},
                   {"admm_mu",
                    [&](const YAML::Node& v, const std::string& key) {
                      if (v.IsNull()) {
                        o.inner_opts.admm_mu_override.reset();
                      } else {
                        o.inner_opts.admm_mu_override = scalar<double>(v, key, real);
                      }
                    }},
                   {"power_tol", set(o.power_opts.tol, real)},
                   {"power_max_iter", set(o.power_opts.max_iter, integer)},
                   {"max_consecutive_rejections", set(o.max_consecutive_rejections, integer)},
                   {"monotone_slack", set(o.monotone_slack, real)}});
          }}});
}

}  // namespace

BenchConfig parse_config(std::string_view yaml) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(yaml));
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("malformed YAML: ") + e.what());
  }
  BenchConfig c;
  apply(root, c);
  try {
    c.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return c;
}

BenchConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  try {
    return parse_config(text.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

std::string default_config_yaml() {
  return R"(# irsbeam benchmark configuration; every key is optional.
scenario:
  M: 4                    # BS antennas
  K: 4                    # users
  N: 10                   # IRS elements
  L_I: 100                # IRS x-coordinate, m (IRS at (L_I, irs_y))
  irs_y: 50
  cluster_x: 200          # user disk center and radius, m
  cluster_y: 0
  cluster_radius: 10
  P_T_dbm: 0
  noise_psd_dbm_hz: -170
  bandwidth_hz: 200000
  ref_loss_db: -30        # path loss at 1 m
  rho_D: 3.5              # direct-link exponent
  rho_I: 2.0              # IRS-link exponent
  xi_db: 10               # relative reflection gain
  eta: 0.8                # reflection efficiency
  omega: []               # user weights; empty means all 1
sweep:                    # empty list means the scenario value
  P_T_dbm: []
  N: []
  xi_db: []
  L_I: []
methods:
  feasible_sets: [continuous]   # ideal, continuous, discrete:<levels>
  rc_solvers: [icu]             # npp, icu, admm
  baselines:
    no_irs: true
    random_theta: true
trials:
  snapshots: 20
  realizations: 10        # per snapshot
  master_seed: 1
  jobs: 1
  record_timing: true
optimizer:
  max_outer_iter: 500
  rel_tol: 1.0e-6
  npp_inner: icu          # convex solver behind npp: ldd, icu, admm
  max_inner_iter: 2000
  inner_tol: 1.0e-8
  ellipsoid_tol: 1.0e-9
  ellipsoid_max_iter: 500000
  admm_mu: null           # null selects mu from the spectral norm of U
  power_tol: 1.0e-8
  power_max_iter: 200
  max_consecutive_rejections: 5
  monotone_slack: 1.0e-9
)";
}

}  // namespace irsbeam
