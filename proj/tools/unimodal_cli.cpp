// unimodal — command-line driver.
//
// Subcommands: cascade, branches, telemann, summability, audit-prop31, mane,
// density, lyapunov, classify, sweep.  JSON is the canonical report format;
// CSV exists only for `sweep`.  Output is byte-identical for fixed flags+seed.
// Exit codes: 0 success, 2 invalid flags / domain error, 3 numerical failure.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <unimodal/geometry.hpp>
#include <unimodal/serialize.hpp>

namespace {

using nlohmann::json;
using namespace unimodal;

// ---------------------------------------------------------------------------
// JSON config files: {"subcommand": {"flag": value, ...}, "flag": value}.
// Command-line flags override config values (CLI11 precedence).
// ---------------------------------------------------------------------------
class JsonConfig : public CLI::Config {
 public:
  std::string to_config(const CLI::App* app, bool default_also, bool, std::string) const override {
    return app_to_json(app, default_also).dump(2) + "\n";
  }

  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    json j;
    try {
      input >> j;
    } catch (const json::parse_error& e) {
      throw CLI::FileError(std::string("config is not valid JSON: ") + e.what());
    }
    std::vector<CLI::ConfigItem> items;
    walk(j, {}, items);
    return items;
  }

 private:
  static json app_to_json(const CLI::App* app, bool default_also) {
    json j = json::object();
    for (const CLI::Option* opt : app->get_options({})) {
      if (opt->get_lnames().empty() || !opt->get_configurable()) continue;
      const std::string& name = opt->get_lnames()[0];
      if (opt->count() > 0) {
        j[name] = opt->results().size() == 1 ? json(opt->results()[0]) : json(opt->results());
      } else if (default_also && !opt->get_default_str().empty()) {
        j[name] = opt->get_default_str();
      }
    }
    for (const CLI::App* sub : app->get_subcommands({})) {
      json s = app_to_json(sub, default_also);
      if (!s.empty()) j[sub->get_name()] = s;
    }
    return j;
  }

  static void walk(const json& j, std::vector<std::string> parents,
                   std::vector<CLI::ConfigItem>& out) {
    if (!j.is_object()) throw CLI::FileError("config root must be a JSON object");
    for (const auto& [key, val] : j.items()) {
      if (val.is_object()) {
        auto deeper = parents;
        deeper.push_back(key);
        walk(val, deeper, out);
        continue;
      }
      CLI::ConfigItem item;
      item.parents = parents;
      item.name = key;
      if (val.is_array()) {
        for (const auto& v : val) item.inputs.push_back(scalar(v));
      } else {
        item.inputs.push_back(scalar(val));
      }
      out.push_back(item);
    }
  }

  static std::string scalar(const json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    return v.dump();
  }
};

// ---------------------------------------------------------------------------
// Shared flags
// ---------------------------------------------------------------------------
struct Common {
  double t = std::numeric_limits<double>::quiet_NaN();
  double alpha = 2.0;
  std::uint64_t seed = 1;
  std::string out;
  std::string format;
  std::string map_file;
};

void add_common(CLI::App* cmd, Common& c, const std::string& format_default) {
  c.format = format_default;
  // let --config (a root option) be written after the subcommand name
  cmd->fallthrough();
  cmd->add_option("--t", c.t, "parameter t of the family -2t|x|^a + 2t - 1");
  cmd->add_option("--alpha", c.alpha, "critical exponent")->capture_default_str();
  cmd->add_option("--seed", c.seed, "RNG seed")->capture_default_str();
  cmd->add_option("--out", c.out, "output path (default: stdout)");
  cmd->add_option("--format", c.format, "report format")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  cmd->add_option("--map-file", c.map_file, "JSON map descriptor (replaces --t/--alpha)");
}

struct CapsFlags {
  int depth = 12;
  double u_floor = 1e-12;
  long return_cap = 1000000;
  int grid = 4096;
  int nice_check = 1000;
};

void add_caps(CLI::App* cmd, CapsFlags& f) {
  cmd->add_option("--depth", f.depth, "cascade depth cap")->capture_default_str();
  cmd->add_option("--u-floor", f.u_floor, "stop when u_n falls below this")->capture_default_str();
  cmd->add_option("--return-cap", f.return_cap, "first-return iteration cap")
      ->capture_default_str();
  cmd->add_option("--scan-grid", f.grid, "branch-scan grid size")->capture_default_str();
  cmd->add_option("--nice-check", f.nice_check, "nice-point verification steps")
      ->capture_default_str();
}

CascadeCaps to_caps(const CapsFlags& f) {
  CascadeCaps c;
  c.depth = f.depth;
  c.u_floor = f.u_floor;
  c.return_cap = f.return_cap;
  c.grid = f.grid;
  c.nice_check = f.nice_check;
  return c;
}

UnimodalMap resolve_map(const Common& c) {
  if (!c.map_file.empty()) {
    std::ifstream in(c.map_file);
    if (!in) throw domain_error("cannot open map file: " + c.map_file);
    json j;
    try {
      in >> j;
    } catch (const json::parse_error& e) {
      throw domain_error(std::string("map file is not valid JSON: ") + e.what());
    }
    return map_from_json(j);
  }
  if (std::isnan(c.t)) throw domain_error("--t is required (or supply --map-file)");
  return UnimodalMap::quadratic(c.t, c.alpha);
}

void stamp_map(json& j, const UnimodalMap& m) {
  if (m.kind() == UnimodalMap::Kind::quadratic_family) j["t"] = m.t();
  j["alpha"] = m.alpha();
}

void require_json(const Common& c) {
  if (c.format != "json")
    throw domain_error("--format csv is only available for sweep");
}

void emit(const std::string& payload, const std::string& out) {
  if (out.empty()) {
    std::cout << payload;
    return;
  }
  std::ofstream f(out, std::ios::binary);
  if (!f) throw domain_error("cannot open output path: " + out);
  f << payload;
}

std::string dump_report(const json& j) { return j.dump(2) + "\n"; }

// Build a cascade and hand back u_level, with the depth cap raised to reach it.
CentralCascade cascade_to_level(const UnimodalMap& map, int level, CapsFlags caps_flags) {
  if (level < 1) throw domain_error("--level must be >= 1");
  caps_flags.depth = std::max(caps_flags.depth, level);
  CentralCascade c = build_cascade(map, std::nullopt, to_caps(caps_flags));
  if (static_cast<int>(c.depth_reached()) < level)
    throw cascade_too_shallow("cascade reached depth " + std::to_string(c.depth_reached()) +
                              " < requested level " + std::to_string(level) + " (" +
                              to_string(c.termination) + ")");
  return c;
}

// ---------------------------------------------------------------------------
// sweep
// ---------------------------------------------------------------------------
struct SweepParams {
  double t_min = 0.0;
  double t_max = 0.0;
  long grid = 10;
  int jobs = 1;
  long kmax = 2000;
  long lyap_iters = 100000;
  long lyap_burn = 1000;
};

struct SweepRow {
  double t = 0.0;
  std::string cls;
  long n_central_returns = 0;
  long depth_reached = 0;
  double sigma_last = std::numeric_limits<double>::quiet_NaN();
  double scaling_sum = std::numeric_limits<double>::quiet_NaN();
  double summability_partial = std::numeric_limits<double>::quiet_NaN();
  double lyapunov_value = std::numeric_limits<double>::quiet_NaN();
};

SweepRow sweep_row(double t, const Common& common, const SweepParams& p, const CapsFlags& caps) {
  SweepRow row;
  row.t = t;
  UnimodalMap map = UnimodalMap::quadratic(t, common.alpha);

  ClassifyBudget budget;
  budget.caps = to_caps(caps);
  budget.kmax = p.kmax;
  budget.lyap_iters = p.lyap_iters;
  budget.lyap_burn = p.lyap_burn;
  row.cls = to_string(classify(map, budget).cls);

  try {
    CentralCascade c = build_cascade(map, std::nullopt, to_caps(caps));
    row.depth_reached = static_cast<long>(c.depth_reached());
    row.n_central_returns =
        std::count(c.central_return.begin(), c.central_return.end(), true);
    if (!c.sigma.empty()) row.sigma_last = c.sigma.back();
    row.scaling_sum = scaling_summability(c, map.alpha()).sum;
  } catch (const error&) {
    // no cascade at this parameter: zeros/NaN columns stand
  }

  try {
    row.summability_partial = summability(map, p.kmax).partial_sums.back();
  } catch (const error&) {
  }

  try {
    row.lyapunov_value = lyapunov(map, 1.0 / 3.0, p.lyap_iters, p.lyap_burn);
  } catch (const error&) {
  }
  return row;
}

std::vector<SweepRow> run_sweep(const Common& common, const SweepParams& p,
                                const CapsFlags& caps) {
  if (p.grid < 1) throw domain_error("--grid must be >= 1");
  if (p.t_max < p.t_min) throw domain_error("--t-max must be >= --t-min");
  std::vector<double> ts(p.grid);
  for (long i = 0; i < p.grid; ++i) {
    ts[i] = p.grid == 1 ? p.t_min
                        : p.t_min + (p.t_max - p.t_min) * static_cast<double>(i) /
                                        static_cast<double>(p.grid - 1);
  }

  std::vector<SweepRow> rows(p.grid);
  const int jobs = std::max(1, std::min<int>(p.jobs, static_cast<int>(p.grid)));
  std::atomic<long> next{0};
  std::vector<std::string> worker_errors(jobs);
  auto work = [&](int w) {
    for (long i = next.fetch_add(1); i < p.grid; i = next.fetch_add(1)) {
      try {
        rows[i] = sweep_row(ts[i], common, p, caps);
      } catch (const std::exception& e) {
        if (worker_errors[w].empty()) worker_errors[w] = e.what();
        rows[i].t = ts[i];
        rows[i].cls = "Budget";
      }
    }
  };
  if (jobs == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(jobs);
    for (int w = 0; w < jobs; ++w) pool.emplace_back(work, w);
    for (auto& th : pool) th.join();
  }
  for (const auto& msg : worker_errors)
    if (!msg.empty()) throw domain_error("sweep worker failed: " + msg);
  return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows, std::uint64_t seed) {
  std::string out =
      "t,class,n_central_returns,depth_reached,sigma_last,scaling_sum,"
      "summability_partial,lyapunov,seed\n";
  for (const SweepRow& r : rows) {
    out += format_double(r.t);
    out += ',';
    out += r.cls;
    out += ',';
    out += std::to_string(r.n_central_returns);
    out += ',';
    out += std::to_string(r.depth_reached);
    out += ',';
    out += format_double(r.sigma_last);
    out += ',';
    out += format_double(r.scaling_sum);
    out += ',';
    out += format_double(r.summability_partial);
    out += ',';
    out += format_double(r.lyapunov_value);
    out += ',';
    out += std::to_string(seed);
    out += '\n';
  }
  return out;
}

json sweep_json(const std::vector<SweepRow>& rows, std::uint64_t seed) {
  json arr = json::array();
  for (const SweepRow& r : rows) {
    arr.push_back(json{{"t", r.t},
                       {"class", r.cls},
                       {"n_central_returns", r.n_central_returns},
                       {"depth_reached", r.depth_reached},
                       {"sigma_last", r.sigma_last},
                       {"scaling_sum", r.scaling_sum},
                       {"summability_partial", r.summability_partial},
                       {"lyapunov", r.lyapunov_value},
                       {"seed", seed}});
  }
  return arr;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"unimodal interval dynamics: central cascades, return maps, "
               "derivative summability, and parameter classification"};
  app.config_formatter(std::make_shared<JsonConfig>());
  app.set_config("--config", "", "JSON config file; command-line flags override");
  app.require_subcommand(1);

  std::function<void()> action;

  // ---- cascade ----
  {
    auto* cmd = app.add_subcommand("cascade", "central-interval cascade u_n, q_n, sigma_n");
    auto common = std::make_shared<Common>();
    auto caps = std::make_shared<CapsFlags>();
    auto u1 = std::make_shared<double>(std::numeric_limits<double>::quiet_NaN());
    add_common(cmd, *common, "json");
    add_caps(cmd, *caps);
    cmd->add_option("--u1", *u1, "nice-point override for u_1 (default: positive fixed point)");
    cmd->callback([&action, common, caps, u1] {
      action = [common, caps, u1] {
        require_json(*common);
        UnimodalMap map = resolve_map(*common);
        std::optional<double> u1_opt;
        if (!std::isnan(*u1)) u1_opt = *u1;
        json j = build_cascade(map, u1_opt, to_caps(*caps));
        stamp_map(j, map);
        emit(dump_report(j), common->out);
      };
    });
  }

  // ---- branches ----
  {
    auto* cmd = app.add_subcommand("branches", "first-return branch decomposition of U_n");
    auto common = std::make_shared<Common>();
    auto caps = std::make_shared<CapsFlags>();
    auto level = std::make_shared<int>(1);
    auto u_override = std::make_shared<double>(std::numeric_limits<double>::quiet_NaN());
    auto time_cap = std::make_shared<long>(1000);
    add_common(cmd, *common, "json");
    add_caps(cmd, *caps);
    cmd->add_option("--level", *level, "cascade level n of U_n")->capture_default_str();
    cmd->add_option("--u", *u_override, "explicit nice point u (skips the cascade)");
    cmd->add_option("--time-cap", *time_cap, "enumerate branches with return time <= this")
        ->capture_default_str();
    cmd->callback([&action, common, caps, level, u_override, time_cap] {
      action = [common, caps, level, u_override, time_cap] {
        require_json(*common);
        UnimodalMap map = resolve_map(*common);
        double u;
        if (!std::isnan(*u_override)) {
          u = *u_override;
          if (!nice_point_check(map, u, caps->nice_check))
            throw not_nice_point("supplied --u fails the nice-point check");
        } else {
          u = cascade_to_level(map, *level, *caps).u[*level - 1];
        }
        json j = return_branches(map, u, *time_cap, to_caps(*caps));
        j["level"] = std::isnan(*u_override) ? json(*level) : json();
        stamp_map(j, map);
        emit(dump_report(j), common->out);
      };
    });
  }

  // ---- telemann ----
  {
    auto* cmd = app.add_subcommand(
        "telemann", "per-level decomposition of Df^k(f(0)) with chain-rule residual");
    auto common = std::make_shared<Common>();
    auto caps = std::make_shared<CapsFlags>();
    auto k = std::make_shared<long>(0);
    auto n0 = std::make_shared<int>(2);
    auto inj_kmax = std::make_shared<long>(0);
    add_common(cmd, *common, "json");
    add_caps(cmd, *caps);
    cmd->add_option("--k", *k, "orbit time to decompose")->required();
    cmd->add_option("--n0", *n0, "base level of the decomposition")->capture_default_str();
    cmd->add_option("--injectivity-kmax", *inj_kmax,
                    "also check signature injectivity for all k' <= this (0 = off)")
        ->capture_default_str();
    cmd->callback([&action, common, caps, k, n0, inj_kmax] {
      action = [common, caps, k, n0, inj_kmax] {
        require_json(*common);
        UnimodalMap map = resolve_map(*common);
        CentralCascade cascade = build_cascade(map, std::nullopt, to_caps(*caps));
        TelemannDecomposition dec = decompose(map, cascade, *k, *n0);
        json j = dec;
        j["residual"] = chain_rule_residual(map, dec);
        if (*inj_kmax >= 2) j["injectivity"] = signature_injectivity(map, cascade, *inj_kmax, *n0);
        stamp_map(j, map);
        emit(dump_report(j), common->out);
      };
    });
  }

  // ---- summability ----
  {
    auto* cmd = app.add_subcommand(
        "summability", "partial sums of the derivative summability series along the critical orbit");
    auto common = std::make_shared<Common>();
    auto kmax = std::make_shared<long>(2000);
    add_common(cmd, *common, "json");
    cmd->add_option("--kmax", *kmax, "number of terms")->capture_default_str();
    cmd->callback([&action, common, kmax] {
      action = [common, kmax] {
        require_json(*common);
        UnimodalMap map = resolve_map(*common);
        json j = summability(map, *kmax);
        stamp_map(j, map);
        emit(dump_report(j), common->out);
      };
    });
  }

  // ---- audit-prop31 ----
  {
    auto* cmd = app.add_subcommand(
        "audit-prop31", "sampled escape-growth audit of the expansion estimate at level n");
    auto common = std::make_shared<Common>();
    auto caps = std::make_shared<CapsFlags>();
    auto level = std::make_shared<int>(3);
    auto samples = std::make_shared<long>(1000);
    auto s_max = std::make_shared<int>(10);
    add_common(cmd, *common, "json");
    add_caps(cmd, *caps);
    cmd->add_option("--level", *level, "cascade level n")->capture_default_str();
    cmd->add_option("--samples", *samples, "sample count in U_{n+1}")->capture_default_str();
    cmd->add_option("--s-max", *s_max, "longest return chain recorded")->capture_default_str();
    cmd->callback([&action, common, caps, level, samples, s_max] {
      action = [common, caps, level, samples, s_max] {
        require_json(*common);
        UnimodalMap map = resolve_map(*common);
        CentralCascade cascade = build_cascade(map, std::nullopt, to_caps(*caps));
        Prop31Audit audit = prop31_audit(map, cascade, *level, *samples, *s_max, common->seed);
        json j = audit;
        // single-level summability constant from the fitted C, theta
        j["a_constant_single_level"] =
            audit.growth ? a_constant({audit.rho_n}, map.alpha(), std::exp(audit.lnC),
                                      std::exp(-audit.ln_inv_theta))
                         : std::numeric_limits<double>::quiet_NaN();
        stamp_map(j, map);
        emit(dump_report(j), common->out);
      };
    });
  }

  // ---- mane ----
  {
    auto* cmd = app.add_subcommand(
        "mane", "hyperbolicity estimate on orbits avoiding U_n0 (envelope fit)");
    auto common = std::make_shared<Common>();
    auto caps = std::make_shared<CapsFlags>();
    auto level = std::make_shared<int>(1);
    auto u_override = std::make_shared<double>(std::numeric_limits<double>::quiet_NaN());
    auto r_max = std::make_shared<long>(30);
    auto samples = std::make_shared<long>(10000);
    add_common(cmd, *common, "json");
    add_caps(cmd, *caps);
    cmd->add_option("--level", *level, "cascade level n0 defining the avoided interval")
        ->capture_default_str();
    cmd->add_option("--u", *u_override, "explicit u_n0 (skips the cascade)");
    cmd->add_option("--r-max", *r_max, "longest avoidance prefix recorded")->capture_default_str();
    cmd->add_option("--samples", *samples, "sample count in [-1,1]")->capture_default_str();
    cmd->callback([&action, common, caps, level, u_override, r_max, samples] {
      action = [common, caps, level, u_override, r_max, samples] {
        require_json(*common);
        UnimodalMap map = resolve_map(*common);
        double u;
        if (!std::isnan(*u_override)) {
          u = *u_override;
        } else if (*level == 1) {
          u = fixed_point_positive(map);
        } else {
          u = cascade_to_level(map, *level, *caps).u[*level - 1];
        }
        json j = mane_estimate(map, u, *r_max, *samples, common->seed);
        stamp_map(j, map);
        emit(dump_report(j), common->out);
      };
    });
  }

  // ---- density ----
  {
    auto* cmd = app.add_subcommand("density", "invariant-density histogram from a long orbit");
    auto common = std::make_shared<Common>();
    auto iters = std::make_shared<long>(1000000);
    auto bins = std::make_shared<long>(200);
    auto burn = std::make_shared<long>(1000);
    auto x0 = std::make_shared<double>(0.3);
    add_common(cmd, *common, "json");
    cmd->add_option("--iters", *iters, "orbit length")->capture_default_str();
    cmd->add_option("--bins", *bins, "histogram bins over [-1,1]")->capture_default_str();
    cmd->add_option("--burn", *burn, "burn-in iterates")->capture_default_str();
    cmd->add_option("--x0", *x0, "orbit start")->capture_default_str();
    cmd->callback([&action, common, iters, bins, burn, x0] {
      action = [common, iters, bins, burn, x0] {
        require_json(*common);
        UnimodalMap map = resolve_map(*common);
        json j = invariant_density(map, *iters, *bins, *burn, *x0);
        j["x0"] = *x0;
        stamp_map(j, map);
        emit(dump_report(j), common->out);
      };
    });
  }

  // ---- lyapunov ----
  {
    auto* cmd = app.add_subcommand("lyapunov", "Lyapunov exponent by orbit averaging");
    auto common = std::make_shared<Common>();
    auto iters = std::make_shared<long>(1000000);
    auto burn = std::make_shared<long>(1000);
    auto x0 = std::make_shared<double>(0.3);
    add_common(cmd, *common, "json");
    cmd->add_option("--iters", *iters, "orbit length")->capture_default_str();
    cmd->add_option("--burn", *burn, "burn-in iterates")->capture_default_str();
    cmd->add_option("--x0", *x0, "orbit start")->capture_default_str();
    cmd->callback([&action, common, iters, burn, x0] {
      action = [common, iters, burn, x0] {
        require_json(*common);
        UnimodalMap map = resolve_map(*common);
        json j{{"lambda", lyapunov(map, *x0, *iters, *burn)},
               {"x0", *x0},
               {"iters", *iters},
               {"burn_in", *burn}};
        stamp_map(j, map);
        emit(dump_report(j), common->out);
      };
    });
  }

  // ---- classify ----
  {
    auto* cmd = app.add_subcommand("classify", "P / R / I_unknown / M_candidate label");
    auto common = std::make_shared<Common>();
    auto caps = std::make_shared<CapsFlags>();
    auto budget = std::make_shared<ClassifyBudget>();
    add_common(cmd, *common, "json");
    add_caps(cmd, *caps);
    cmd->add_option("--attractor-budget", budget->attractor_budget,
                    "orbit budget for periodic-attractor detection")
        ->capture_default_str();
    cmd->add_option("--p-max", budget->p_max, "largest renormalization period tried")
        ->capture_default_str();
    cmd->add_option("--nest-threshold", budget->nest_threshold,
                    "renormalization nest depth that yields class R")
        ->capture_default_str();
    cmd->add_option("--kmax", budget->kmax, "summability terms")->capture_default_str();
    cmd->add_option("--lyap-iters", budget->lyap_iters, "Lyapunov orbit length")
        ->capture_default_str();
    cmd->add_option("--lyap-burn", budget->lyap_burn, "Lyapunov burn-in")->capture_default_str();
    cmd->callback([&action, common, caps, budget] {
      action = [common, caps, budget] {
        require_json(*common);
        UnimodalMap map = resolve_map(*common);
        ClassifyBudget b = *budget;
        b.caps = to_caps(*caps);
        json j = classify(map, b);
        stamp_map(j, map);
        emit(dump_report(j), common->out);
      };
    });
  }

  // ---- sweep ----
  {
    auto* cmd = app.add_subcommand("sweep", "parameter sweep over t (CSV rows sorted by t)");
    auto common = std::make_shared<Common>();
    auto caps = std::make_shared<CapsFlags>();
    auto params = std::make_shared<SweepParams>();
    add_common(cmd, *common, "csv");
    add_caps(cmd, *caps);
    cmd->add_option("--t-min", params->t_min, "sweep start")->required();
    cmd->add_option("--t-max", params->t_max, "sweep end")->required();
    cmd->add_option("--grid", params->grid, "number of parameters")->capture_default_str();
    cmd->add_option("--jobs", params->jobs, "worker threads")->capture_default_str();
    cmd->add_option("--kmax", params->kmax, "summability terms per row")->capture_default_str();
    cmd->add_option("--lyap-iters", params->lyap_iters, "Lyapunov orbit length per row")
        ->capture_default_str();
    cmd->add_option("--lyap-burn", params->lyap_burn, "Lyapunov burn-in per row")
        ->capture_default_str();
    cmd->callback([&action, common, caps, params] {
      action = [common, caps, params] {
        std::vector<SweepRow> rows = run_sweep(*common, *params, *caps);
        if (common->format == "csv") {
          emit(sweep_csv(rows, common->seed), common->out);
        } else {
          emit(dump_report(sweep_json(rows, common->seed)), common->out);
        }
      };
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << json{{"error", "InvalidFlags"}, {"message", e.what()}}.dump() << "\n";
    return 2;
  }

  try {
    action();
    return 0;
  } catch (const error& e) {
    std::cerr << error_json(e).dump() << "\n";
    return e.cls() == error_class::domain ? 2 : 3;
  } catch (const std::exception& e) {
    std::cerr << json{{"error", "Internal"}, {"message", e.what()}}.dump() << "\n";
    return 3;
  }
}
