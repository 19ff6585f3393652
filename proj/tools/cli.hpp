#pragma once

// Command-line front end. Every report is a JSON document (or CSV for gap
// sweeps) that embeds the resolved configuration; identical configurations
// produce byte-identical output.

#include <cstdint>
#include <cstdlib>
#include <optional>
#include <algorithm>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sbfe/sbfe.hpp"

namespace sbfe::cli {

inline constexpr int kSchemaVersion = 1;
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitBudget = 3;

struct RunConfig {
  std::string command;
  std::string instance_path;
  std::string policy;     // eval: 1-based list, empty = input order
  std::string method;     // opt-na: brute|ptas|ptas-guided; opt-adaptive: ratio|dp
  double eps_target = 0.5;
  std::string eps_int;    // overrides the eps_target mapping when set
  std::uint64_t seed = 1;
  std::int64_t trials = 0;
  std::optional<double> budget;  // --budget, else SBFE_BUDGET, else the default
  std::string format = "json";
  bool case_override = false;
  std::string reference = "extreme";  // extreme|brute|1-based list
  std::string t_list = "1";
  int m = 1000;
  double gap_eps = 1e-6;
  int a = 0;
  int a_prime = 0;
  std::string v;
  std::string vstar;
  int n = 0;  // dominate: universe size, 0 = largest index given
};

struct RunOutput {
  int status = kExitOk;
  std::string out;
  std::string err;
};

namespace detail {

using nlohmann::json;

inline double resolved_budget(const RunConfig& cfg) {
  if (cfg.budget) return *cfg.budget;
  if (const char* env = std::getenv("SBFE_BUDGET"); env && *env) {
    try {
      std::size_t used = 0;
      const double b = std::stod(env, &used);
      if (used == std::string(env).size() && b > 0.0) return b;
    } catch (const std::exception&) {
    }
    throw ValidationError(std::string("SBFE_BUDGET is not a positive number: ") + env);
  }
  return ptas::kDefaultBudget;
}

inline Epsilon resolved_eps(const RunConfig& cfg) {
  if (!cfg.eps_int.empty()) return io::parse_epsilon(cfg.eps_int);
  return ptas::internal_epsilon(cfg.eps_target);
}

inline std::string eps_text(Epsilon e) { return "1/" + std::to_string(e.inverse()); }

inline json config_json(const RunConfig& cfg) {
  json c;
  c["command"] = cfg.command;
  c["instance"] = cfg.instance_path;
  c["policy"] = cfg.policy;
  c["method"] = cfg.method;
  c["eps_target"] = cfg.eps_target;
  c["eps_int_override"] = cfg.eps_int;
  c["eps_int"] = nullptr;  // filled in by commands that derive it
  c["seed"] = cfg.seed;
  c["trials"] = cfg.trials;
  c["budget"] = resolved_budget(cfg);
  c["format"] = cfg.format;
  c["case_override"] = cfg.case_override;
  c["reference"] = cfg.reference;
  c["t_list"] = cfg.t_list;
  c["m"] = cfg.m;
  c["gap_eps"] = cfg.gap_eps;
  c["a"] = cfg.a;
  c["a_prime"] = cfg.a_prime;
  c["v"] = cfg.v;
  c["vstar"] = cfg.vstar;
  c["n"] = cfg.n;
  return c;
}

inline std::string dump(const json& result, const json& config) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["config"] = config;
  j["result"] = result;
  return j.dump(2) + "\n";
}

inline json simulation_json(const SimulationResult& r) { return json{{"mean", r.mean}, {"half_width_95", r.half_width}}; }

inline PartialPolicy reference_policy(const RunConfig& cfg, const io::LoadedInstance& li) {
  if (cfg.reference == "extreme") return ptas::extreme_first_policy(li.instance);
  if (cfg.reference == "brute") return oracle::opt_na_bruteforce(li.instance).best_policy;
  auto pi = io::from_external(io::parse_index_list(cfg.reference), li.index_map);
  require_fits(pi, li.instance);
  return pi;
}

inline json run_eval(const RunConfig& cfg, json& config) {
  const auto li = io::load_instance(cfg.instance_path);
  const int n = li.instance.n();
  PartialPolicy pi;
  if (cfg.policy.empty()) {
    std::vector<int> input_order;
    for (int i = 1; i <= n; ++i) input_order.push_back(i);
    pi = io::from_external(input_order, li.index_map);
  } else {
    pi = io::from_external(io::parse_index_list(cfg.policy), li.index_map);
  }
  const auto tail = cost_tail(li.instance, pi);
  json r;
  r["policy"] = io::to_external(pi, li.index_map);
  r["expected"] = tail.expected;
  r["undetermined_probability"] = tail.undetermined;
  r["tail"] = tail.tail;
  if (cfg.trials > 0) r["simulation"] = simulation_json(simulate(li.instance, fixed_order_strategy(pi), cfg.trials, cfg.seed));
  (void)config;
  return r;
}

inline json levels_json(const ptas::PtasResult& res) {
  json levels = json::array();
  for (const auto& l : res.levels) {
    json e{{"a", l.lower}, {"a_prime", l.upper}, {"case", ptas::case_tag(l.kind)}, {"score", l.score},
           {"candidates", l.candidates}};
    if (l.certification) e["pass"] = l.certification->pass;
    levels.push_back(e);
  }
  return levels;
}

inline json run_opt_na(const RunConfig& cfg, json& config) {
  const auto li = io::load_instance(cfg.instance_path);
  json r;
  r["method"] = cfg.method;
  if (cfg.method == "brute") {
    const auto best = oracle::opt_na_bruteforce(li.instance);
    r["policy"] = io::to_external(best.best_policy, li.index_map);
    r["expected"] = best.best_cost;
    return r;
  }
  if (cfg.method != "ptas" && cfg.method != "ptas-guided") throw ValidationError("unknown opt-na method: " + cfg.method);
  ptas::PtasOptions opt;
  opt.eps = resolved_eps(cfg);
  opt.enumeration.budget = resolved_budget(cfg);
  opt.enumeration.force_bucket_cases = cfg.case_override;
  config["eps_int"] = eps_text(opt.eps);
  if (cfg.method == "ptas-guided") {
    opt.reference = reference_policy(cfg, li);
    r["reference_policy"] = io::to_external(*opt.reference, li.index_map);
    r["reference_expected"] = expected_cost(li.instance, *opt.reference);
    r["chain_factor"] = ptas::guided_chain_factor(opt.eps);
  }
  const auto res = ptas::ptas(li.instance, opt);
  r["policy"] = io::to_external(res.policy, li.index_map);
  r["expected"] = res.expected;
  r["shift"] = res.shift;
  r["levels"] = levels_json(res);
  if (opt.reference) r["certified"] = res.certified;
  return r;
}

inline json run_opt_adaptive(const RunConfig& cfg, json&) {
  const auto li = io::load_instance(cfg.instance_path);
  json r;
  r["method"] = cfg.method;
  if (cfg.method == "ratio") {
    r["expected"] = adaptive::adaptive_expected_cost(li.instance);
    adaptive::AdaptiveState start;
    for (Index i = 0; i < li.instance.n(); ++i) start.remaining.push_back(i);
    r["first_test"] = li.index_map[static_cast<std::size_t>(adaptive::ratio_prefix_choice(li.instance, start))] + 1;
    if (cfg.trials > 0) {
      r["simulation"] = simulation_json(simulate(li.instance, adaptive::ratio_prefix_strategy(), cfg.trials, cfg.seed));
    }
  } else if (cfg.method == "dp") {
    r["expected"] = oracle::opt_adaptive_dp(li.instance);
  } else {
    throw ValidationError("unknown opt-adaptive method: " + cfg.method);
  }
  return r;
}

inline std::vector<gapbench::GapRecord> gap_records(const RunConfig& cfg) {
  const auto ts = io::parse_index_list(cfg.t_list);
  if (ts.empty()) throw ValidationError("--t-list must name at least one t");
  return gapbench::gap_table(ts, cfg.m, cfg.gap_eps);
}

inline json run_gap(const RunConfig& cfg, json&) {
  const auto records = gap_records(cfg);
  json rows = json::array();
  for (const auto& rec : records) {
    json row{{"t", rec.t},
             {"m", rec.m},
             {"eps", rec.eps},
             {"e_adaptive", rec.e_adaptive},
             {"e_nonadaptive", rec.e_nonadaptive},
             {"ratio", rec.ratio},
             {"limit", rec.limit}};
    if (cfg.trials > 0) {
      const gapbench::GapParams g{rec.m, rec.t, rec.eps};
      const auto inst = gapbench::build_L(g);
      row["simulation_adaptive"] = simulation_json(simulate(inst, gapbench::adaptive_L_strategy(g), cfg.trials, cfg.seed));
      const auto na = gapbench::economical_policy(g, gapbench::alternating_paid_order(g));
      row["simulation_nonadaptive"] = simulation_json(simulate(inst, fixed_order_strategy(na), cfg.trials, cfg.seed));
    }
    rows.push_back(row);
  }
  return json{{"rows", rows}};
}

inline json run_certify(const RunConfig& cfg, json& config) {
  const auto li = io::load_instance(cfg.instance_path);
  if (cfg.eps_int.empty()) throw ValidationError("certify needs --eps-int");
  const Epsilon eps = io::parse_epsilon(cfg.eps_int);
  config["eps_int"] = eps_text(eps);
  const auto reference = reference_policy(cfg, li);
  const auto cert = ptas::certify_bounded(li.instance, reference, ptas::BoundedSpec{cfg.a, cfg.a_prime, eps});
  json r;
  r["case"] = ptas::case_tag(cert.plan.kind);
  r["bucket_sizes"] = cert.plan.sizes;
  r["policy"] = io::to_external(cert.policy, li.index_map);
  r["reference_policy"] = io::to_external(reference, li.index_map);
  r["sizes_ok"] = cert.sizes_ok;
  r["dominance_ok"] = cert.dominance_ok;
  json rows = json::array();
  for (const auto& row : cert.rows) {
    rows.push_back(json{{"level", row.level}, {"policy_tail", row.policy_tail}, {"reference_tail", row.reference_tail}});
  }
  r["rows"] = rows;
  r["pass"] = cert.pass;
  return r;
}

inline json run_dominate(const RunConfig& cfg, json&) {
  auto to_set = [](const std::string& text) {
    std::vector<Index> v;
    for (int i : io::parse_index_list(text)) {
      if (i < 1) throw ValidationError("set members are 1-based: " + std::to_string(i));
      v.push_back(i - 1);
    }
    return IndexSet(std::move(v));
  };
  const auto v = to_set(cfg.v);
  const auto vstar = to_set(cfg.vstar);
  int largest = 0;
  for (Index i : v) largest = std::max(largest, i + 1);
  for (Index i : vstar) largest = std::max(largest, i + 1);
  if (cfg.n != 0 && cfg.n < largest) throw ValidationError("--n is smaller than the largest set member");
  const int n = cfg.n != 0 ? cfg.n : largest;
  const auto left = left_dominates(v, vstar);
  const auto right = right_dominates(v, vstar);
  return json{{"n", n}, {"left", left}, {"right", right}, {"dominates", left && right}};
}

}  // namespace detail

/// Runs one subcommand and serializes its report.
inline RunOutput run(const RunConfig& cfg) {
  RunOutput out;
  try {
    if (cfg.format != "json" && cfg.format != "csv") throw ValidationError("--format must be json or csv");
    if (cfg.format == "csv" && cfg.command != "gap") throw ValidationError("csv output is only available for gap");
    if (cfg.trials < 0) throw ValidationError("--trials must be nonnegative");
    auto config = detail::config_json(cfg);
    if (cfg.command == "gap" && cfg.format == "csv") {
      const auto records = detail::gap_records(cfg);
      std::ostringstream os;
      os << "# sbfe gap schema_version=" << kSchemaVersion << " t_list=" << cfg.t_list << " m=" << cfg.m
         << " eps=" << cfg.gap_eps << '\n'
         << gapbench::to_csv(records);
      out.out = os.str();
      return out;
    }
    nlohmann::json result;
    if (cfg.command == "eval") {
      result = detail::run_eval(cfg, config);
    } else if (cfg.command == "opt-na") {
      result = detail::run_opt_na(cfg, config);
    } else if (cfg.command == "opt-adaptive") {
      result = detail::run_opt_adaptive(cfg, config);
    } else if (cfg.command == "gap") {
      result = detail::run_gap(cfg, config);
    } else if (cfg.command == "certify") {
      result = detail::run_certify(cfg, config);
    } else if (cfg.command == "dominate") {
      result = detail::run_dominate(cfg, config);
    } else {
      throw ValidationError("unknown command: " + cfg.command);
    }
    out.out = detail::dump(result, config);
  } catch (const CapExceeded& e) {
    out.status = kExitValidation;
    out.err = std::string("error: size cap exceeded: ") + e.what() + "\n";
  } catch (const ValidationError& e) {
    out.status = kExitValidation;
    out.err = std::string("error: invalid input: ") + e.what() + "\n";
  } catch (const BudgetExceeded& e) {
    out.status = kExitBudget;
    out.err = std::string("error: enumeration budget exceeded: ") + e.what() + "\n";
  }
  return out;
}

/// Parses argv-style arguments (without the program name) and runs.
inline RunOutput run_args(const std::vector<std::string>& args) {
  RunConfig cfg;
  CLI::App app{"Stochastic k-of-n evaluation: exact costs, optimal policies, approximation scheme, gap benchmark"};
  app.require_subcommand(1);
  std::string budget_text;

  auto add_instance = [&](CLI::App* sub) {
    sub->add_option("--instance", cfg.instance_path, "Instance JSON file")->required();
  };
  auto add_sim = [&](CLI::App* sub) {
    sub->add_option("--trials", cfg.trials, "Monte Carlo trials (0 = none)");
    sub->add_option("--seed", cfg.seed, "Simulation seed");
  };

  auto* eval = app.add_subcommand("eval", "Exact cost distribution of a test order");
  add_instance(eval);
  eval->add_option("--policy", cfg.policy, "1-based test order, comma separated (default: input order)");
  add_sim(eval);

  auto* opt_na = app.add_subcommand("opt-na", "Optimal or approximate non-adaptive order");
  add_instance(opt_na);
  opt_na->add_option("--method", cfg.method, "brute | ptas | ptas-guided")
      ->check(CLI::IsMember({"brute", "ptas", "ptas-guided"}))
      ->required();
  opt_na->add_option("--eps", cfg.eps_target, "Target approximation error in (0, 1]");
  opt_na->add_option("--eps-int", cfg.eps_int, "Internal eps as 1/E (overrides --eps)");
  opt_na->add_option("--budget", budget_text, "Enumeration budget (also SBFE_BUDGET)");
  opt_na->add_option("--reference", cfg.reference, "Guided reference: extreme | brute | 1-based list");
  opt_na->add_flag("--case-override", cfg.case_override, "Use bucket cases whenever defined (testing)");

  auto* opt_ad = app.add_subcommand("opt-adaptive", "Optimal adaptive expected cost");
  add_instance(opt_ad);
  opt_ad->add_option("--method", cfg.method, "ratio | dp")->check(CLI::IsMember({"ratio", "dp"}))->required();
  add_sim(opt_ad);

  auto* gap = app.add_subcommand("gap", "Adaptivity-gap table on the lower-bound family");
  gap->add_option("--t-list", cfg.t_list, "Comma-separated t values");
  gap->add_option("--m", cfg.m, "Free-variable pairs");
  gap->add_option("--eps", cfg.gap_eps, "Paid-variable bias eps in (0, 1/2)");
  gap->add_option("--format", cfg.format, "json | csv")->check(CLI::IsMember({"json", "csv"}));
  add_sim(gap);

  auto* certify = app.add_subcommand("certify", "Build and certify one window policy against a reference");
  add_instance(certify);
  certify->add_option("--a", cfg.a, "Window start a")->required();
  certify->add_option("--a',--a-prime", cfg.a_prime, "Window end a'")->required();
  certify->add_option("--eps-int", cfg.eps_int, "Internal eps as 1/E")->required();
  certify->add_option("--reference", cfg.reference, "extreme | brute | 1-based list");

  auto* dominate = app.add_subcommand("dominate", "Two-sided dominance between index sets");
  dominate->add_option("--v", cfg.v, "1-based members of V")->required();
  dominate->add_option("--vstar", cfg.vstar, "1-based members of V*")->required();
  dominate->add_option("--n", cfg.n, "Universe size (default: largest member)");

  RunOutput out;
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out.out = app.help();
    for (auto* sub : app.get_subcommands()) out.out = sub->help();
    return out;
  } catch (const CLI::CallForAllHelp&) {
    out.out = app.help("", CLI::AppFormatMode::All);
    return out;
  } catch (const CLI::ParseError& e) {
    out.status = kExitValidation;
    out.err = std::string("error: invalid arguments: ") + e.what() + "\n";
    return out;
  }
  for (auto* sub : app.get_subcommands()) cfg.command = sub->get_name();
  if (!budget_text.empty()) {
    try {
      std::size_t used = 0;
      const double b = std::stod(budget_text, &used);
      if (used != budget_text.size() || !(b > 0.0)) throw std::invalid_argument("budget");
      cfg.budget = b;
    } catch (const std::exception&) {
      out.status = kExitValidation;
      out.err = "error: invalid input: --budget must be a positive number\n";
      return out;
    }
  }
  return run(cfg);
}

}  // namespace sbfe::cli
