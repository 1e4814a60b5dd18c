#include "stackopt/config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include <json.hpp>

#include "stackopt/error.hpp"

namespace stackopt {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw Error(ErrorKind::Config, path + ": " + what);
}

// Walks one JSON object, tracking the field path for diagnostics and
// rejecting keys nobody asked for.
class Reader {
 public:
  Reader(const json& node, std::string path) : node_(node), path_(std::move(path)) {
    if (!node_.is_object()) fail(path_.empty() ? "<root>" : path_, "expected an object");
  }
  ~Reader() noexcept(false) {
    if (std::uncaught_exceptions() > 0) return;
    for (const auto& [key, value] : node_.items()) {
      if (!seen_.count(key)) fail(field(key), "unknown key");
    }
  }

  std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  const json* find(const std::string& key) {
    seen_.insert(key);
    auto it = node_.find(key);
    return it == node_.end() ? nullptr : &*it;
  }

  void number(const std::string& key, double& out) {
    if (const json* v = find(key)) {
      if (!v->is_number()) fail(field(key), "expected a number");
      out = v->get<double>();
    }
  }
  // null means unbounded.
  void bound(const std::string& key, double& out) {
    if (const json* v = find(key)) {
      if (v->is_null()) {
        out = lp::kInf;
      } else {
        if (!v->is_number()) fail(field(key), "expected a number or null");
        out = v->get<double>();
      }
    }
  }
  void count(const std::string& key, std::size_t& out) {
    if (const json* v = find(key)) {
      if (!v->is_number_integer() || v->get<long long>() < 0) fail(field(key), "expected a non-negative integer");
      out = v->get<std::size_t>();
    }
  }
  void flag(const std::string& key, bool& out) {
    if (const json* v = find(key)) {
      if (!v->is_boolean()) fail(field(key), "expected true or false");
      out = v->get<bool>();
    }
  }
  void text(const std::string& key, std::string& out) {
    if (const json* v = find(key)) {
      if (!v->is_string()) fail(field(key), "expected a string");
      out = v->get<std::string>();
    }
  }
  void path(const std::string& key, std::optional<std::filesystem::path>& out) {
    if (const json* v = find(key)) {
      if (v->is_null()) {
        out.reset();
      } else {
        if (!v->is_string()) fail(field(key), "expected a path string or null");
        out = v->get<std::string>();
      }
    }
  }
  void numbers(const std::string& key, std::vector<double>& out) {
    if (const json* v = find(key)) {
      if (!v->is_array()) fail(field(key), "expected an array of numbers");
      out.clear();
      for (std::size_t i = 0; i < v->size(); ++i) {
        if (!(*v)[i].is_number()) fail(field(key) + "[" + std::to_string(i) + "]", "expected a number");
        out.push_back((*v)[i].get<double>());
      }
    }
  }
  void strings(const std::string& key, std::vector<std::string>& out) {
    if (const json* v = find(key)) {
      if (!v->is_array()) fail(field(key), "expected an array of strings");
      out.clear();
      for (std::size_t i = 0; i < v->size(); ++i) {
        if (!(*v)[i].is_string()) fail(field(key) + "[" + std::to_string(i) + "]", "expected a string");
        out.push_back((*v)[i].get<std::string>());
      }
    }
  }
  void object(const std::string& key, const std::function<void(Reader&)>& body) {
    if (const json* v = find(key)) {
      Reader sub(*v, field(key));
      body(sub);
    }
  }

 private:
  const json& node_;
  std::string path_;
  std::set<std::string> seen_;
};

LowerBoundMode parse_lower_bound(const std::string& s, const std::string& path) {
  if (s == "current") return LowerBoundMode::Current;
  if (s == "literal") return LowerBoundMode::Literal;
  if (s == "off") return LowerBoundMode::Off;
  fail(path, "expected one of current, literal, off");
}

const char* to_text(LowerBoundMode m) {
  switch (m) {
    case LowerBoundMode::Current: return "current";
    case LowerBoundMode::Literal: return "literal";
    case LowerBoundMode::Off: return "off";
  }
  return "current";
}

LcohMode parse_lcoh_mode(const std::string& s, const std::string& path) {
  if (s == "averaged") return LcohMode::Averaged;
  if (s == "literal_sum") return LcohMode::LiteralSum;
  fail(path, "expected averaged or literal_sum");
}

json bound_json(double v) { return std::isinf(v) ? json(nullptr) : json(v); }

void require(bool ok, const std::string& path, const std::string& what) {
  if (!ok) fail(path, what);
}

bool finite_nonneg(double v) { return std::isfinite(v) && v >= 0.0; }
bool positive_or_inf(double v) { return v > 0.0; }

}  // namespace

RunConfig default_run_config() {
  RunConfig c;
  c.ppa = {
      {Source::Onshore, 0.0729, std::nullopt, 11, lp::kInf},
      {Source::Offshore, 0.0883, std::nullopt, 12, lp::kInf},
      {Source::Solar, 0.0555, std::nullopt, 13, lp::kInf},
  };
  return c;
}

void RunConfig::validate() const {
  require(horizon >= 1, "horizon.hours", "must be >= 1");
  require(std::isfinite(dt) && dt > 0.0, "horizon.dt", "must be > 0");
  require(std::isfinite(hours_per_year) && hours_per_year > 0.0, "horizon.hours_per_year", "must be > 0");
  require(!ppa.empty(), "ppa", "needs at least one source");
  std::set<Source> seen;
  for (std::size_t i = 0; i < ppa.size(); ++i) {
    const std::string p = "ppa[" + std::to_string(i) + "]";
    require(seen.insert(ppa[i].source).second, p + ".source", "duplicate source");
    require(finite_nonneg(ppa[i].price), p + ".price", "must be >= 0");
    require(positive_or_inf(ppa[i].max_booking), p + ".max_booking", "must be > 0 or null");
    if (ppa[i].series) {
      const auto full = base_dir / *ppa[i].series;
      if (!std::filesystem::exists(full)) throw Error(ErrorKind::FileNotFound, p + ".series: no such file " + full.string());
    }
  }
  require(finite_nonneg(demand_rate), "demand.rate_kg_per_h", "must be >= 0");
  if (demand_series) {
    const auto full = base_dir / *demand_series;
    if (!std::filesystem::exists(full)) throw Error(ErrorKind::FileNotFound, "demand.series: no such file " + full.string());
  }
  require(finite_nonneg(storage.capacity_fee), "storage.capacity_fee", "must be >= 0");
  require(finite_nonneg(storage.turnover_fee), "storage.turnover_fee", "must be >= 0");
  require(positive_or_inf(storage.max_in), "storage.max_in", "must be > 0 or null");
  require(positive_or_inf(storage.max_out), "storage.max_out", "must be > 0 or null");
  require(positive_or_inf(storage.max_capacity), "storage.max_capacity", "must be > 0 or null");
  require(finite_nonneg(grid.sale_price), "grid.sale_price", "must be >= 0");
  require(finite_nonneg(grid.purchase_price), "grid.purchase_price", "must be >= 0");
  require(std::isfinite(electrolyzer.p_nom) && electrolyzer.p_nom > 0.0, "electrolyzer.p_nom", "must be > 0");
  require(std::isfinite(electrolyzer.eps_nom) && electrolyzer.eps_nom > 0.0, "electrolyzer.eps_nom", "must be > 0");
  require(electrolyzer.partload_gain >= 0.0 && electrolyzer.partload_gain < 0.1, "electrolyzer.partload_gain",
          "must lie in [0, 0.1)");
  require(electrolyzer.j_points >= 2, "electrolyzer.j_points", "must be >= 2");
  if (custom_scenario) {
    require(finite_nonneg(custom_scenario->rho0), "degradation.custom.rho0", "must be >= 0");
    require(std::isfinite(custom_scenario->rho1) && custom_scenario->rho1 >= custom_scenario->rho0,
            "degradation.custom.rho1", "must be >= rho0");
    require(custom_scenario->pi_infl >= 0.0 && custom_scenario->pi_infl <= 1.0, "degradation.custom.pi_infl",
            "must lie in [0, 1]");
  } else {
    try {
      scenario_preset(scenario);
    } catch (const Error&) {
      fail("degradation.scenario", "unknown preset '" + scenario + "'");
    }
  }
  require(alpha >= 0.0 && alpha <= 1.0, "degradation.alpha", "must lie in [0, 1]");
  require(finite_nonneg(economics.capex), "economics.capex", "must be >= 0");
  require(finite_nonneg(economics.opex_fix), "economics.opex_fix", "must be >= 0");
  require(economics.share_peri >= 0.0 && economics.share_peri <= 1.0, "economics.share_peri", "must lie in [0, 1]");
  require(std::fabs(economics.share_peri + economics.share_stacks - 1.0) <= 1e-9, "economics.share_stacks",
          "must equal 1 - share_peri");
  require(std::isfinite(economics.t_dep_peri) && economics.t_dep_peri >= 1.0, "economics.t_dep_peri", "must be >= 1");
  require(finite_nonneg(economics.interest), "economics.interest", "must be >= 0");
  require(finite_nonneg(economics.water_cost), "economics.water_cost", "must be >= 0");
  require(finite_nonneg(economics.water_per_kg), "economics.water_per_kg", "must be >= 0");
  require(std::isfinite(threshold) && threshold > 0.0, "lifecycle.threshold_percent", "must be > 0");
  require(max_years >= 1, "lifecycle.max_years", "must be >= 1");
  try {
    sweep.validate();
  } catch (const Error& e) {
    fail("sweep", e.what());
  }
  require(solver.kind == "embedded" || solver.kind == "external", "solver.kind", "expected embedded or external");
  require(std::isfinite(solver.tol) && solver.tol > 0.0, "solver.tol", "must be > 0");
  if (solver.kind == "external") {
    require(solver.command.find("{in}") != std::string::npos && solver.command.find("{out}") != std::string::npos,
            "solver.command", "must contain {in} and {out}");
  }
}

RunConfig parse_config(const std::string& json_text, const std::filesystem::path& base_dir) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::Config, std::string("<root>: invalid JSON: ") + e.what());
  }
  RunConfig c = default_run_config();
  c.base_dir = base_dir;
  {
    Reader r(root, "");
    r.object("horizon", [&](Reader& h) {
      h.count("hours", c.horizon);
      h.number("dt", c.dt);
      h.number("hours_per_year", c.hours_per_year);
      h.count("start_hour", c.start_hour);
    });
    if (const json* list = r.find("ppa")) {
      if (!list->is_array()) fail("ppa", "expected an array");
      c.ppa.clear();
      for (std::size_t i = 0; i < list->size(); ++i) {
        const std::string p = "ppa[" + std::to_string(i) + "]";
        Reader e((*list)[i], p);
        PpaConfig pc;
        std::string source;
        e.text("source", source);
        try {
          pc.source = parse_source(source);
        } catch (const Error&) {
          fail(p + ".source", "expected onshore, offshore or solar");
        }
        e.number("price", pc.price);
        e.path("series", pc.series);
        std::size_t seed = pc.seed;
        e.count("seed", seed);
        pc.seed = seed;
        e.bound("max_booking", pc.max_booking);
        c.ppa.push_back(pc);
      }
    }
    r.object("demand", [&](Reader& d) {
      d.number("rate_kg_per_h", c.demand_rate);
      d.path("series", c.demand_series);
    });
    r.object("storage", [&](Reader& s) {
      s.flag("enabled", c.storage.enabled);
      s.number("capacity_fee", c.storage.capacity_fee);
      s.number("turnover_fee", c.storage.turnover_fee);
      s.bound("max_in", c.storage.max_in);
      s.bound("max_out", c.storage.max_out);
      s.bound("max_capacity", c.storage.max_capacity);
    });
    r.object("grid", [&](Reader& g) {
      g.number("sale_price", c.grid.sale_price);
      g.flag("allow_arbitrage", c.grid.allow_arbitrage);
      g.flag("purchase_enabled", c.grid.purchase_enabled);
      g.number("purchase_price", c.grid.purchase_price);
    });
    r.object("electrolyzer", [&](Reader& e) {
      e.number("p_nom", c.electrolyzer.p_nom);
      e.number("eps_nom", c.electrolyzer.eps_nom);
      e.number("partload_gain", c.electrolyzer.partload_gain);
      e.count("j_points", c.electrolyzer.j_points);
    });
    r.object("degradation", [&](Reader& d) {
      d.text("scenario", c.scenario);
      d.number("alpha", c.alpha);
      d.flag("operating_hours_only", c.operating_hours_only);
      if (const json* custom = d.find("custom")) {
        if (custom->is_null()) {
          c.custom_scenario.reset();
        } else {
          Reader cs(*custom, d.field("custom"));
          DegradationScenario s{"custom", 7.5, 7.5, 1.0, 0.4125};
          cs.text("name", s.name);
          cs.number("rho0", s.rho0);
          s.rho1 = s.rho0;
          cs.number("rho1", s.rho1);
          cs.number("pi_infl", s.pi_infl);
          c.custom_scenario = s;
        }
      }
    });
    r.object("economics", [&](Reader& e) {
      e.number("capex", c.economics.capex);
      e.number("share_peri", c.economics.share_peri);
      c.economics.share_stacks = 1.0 - c.economics.share_peri;
      e.number("share_stacks", c.economics.share_stacks);
      e.number("opex_fix", c.economics.opex_fix);
      e.number("t_dep_peri", c.economics.t_dep_peri);
      e.number("interest", c.economics.interest);
      e.number("water_cost", c.economics.water_cost);
      e.number("water_per_kg", c.economics.water_per_kg);
    });
    r.object("lifecycle", [&](Reader& l) {
      l.number("threshold_percent", c.threshold);
      l.count("max_years", c.max_years);
      std::string mode;
      l.text("lower_bound", mode);
      if (!mode.empty()) c.lower_bound_mode = parse_lower_bound(mode, l.field("lower_bound"));
      mode.clear();
      l.text("lcoh_mode", mode);
      if (!mode.empty()) c.lcoh_mode = parse_lcoh_mode(mode, l.field("lcoh_mode"));
    });
    r.object("sweep", [&](Reader& s) {
      s.numbers("thresholds", c.sweep.thresholds);
      s.numbers("capex", c.sweep.capex);
      s.numbers("alphas", c.sweep.alphas);
      s.strings("scenarios", c.sweep.scenarios);
      s.count("parallelism", c.sweep.parallelism);
    });
    r.object("solver", [&](Reader& s) {
      s.text("kind", c.solver.kind);
      s.number("tol", c.solver.tol);
      s.count("max_iters", c.solver.max_iters);
      s.text("command", c.solver.command);
      std::optional<std::filesystem::path> wd;
      s.path("work_dir", wd);
      if (wd) c.solver.work_dir = *wd;
    });
    std::optional<std::filesystem::path> out;
    r.path("output_dir", out);
    if (out) c.output_dir = *out;
  }
  c.validate();
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::FileNotFound, "cannot open config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.parent_path().empty() ? "." : path.parent_path());
}

std::string config_to_json(const RunConfig& c) {
  json j;
  j["horizon"] = {{"hours", c.horizon}, {"dt", c.dt}, {"hours_per_year", c.hours_per_year}, {"start_hour", c.start_hour}};
  j["ppa"] = json::array();
  for (const auto& p : c.ppa) {
    j["ppa"].push_back({{"source", std::string(to_string(p.source))},
                        {"price", p.price},
                        {"series", p.series ? json(p.series->string()) : json(nullptr)},
                        {"seed", p.seed},
                        {"max_booking", bound_json(p.max_booking)}});
  }
  j["demand"] = {{"rate_kg_per_h", c.demand_rate},
                 {"series", c.demand_series ? json(c.demand_series->string()) : json(nullptr)}};
  j["storage"] = {{"enabled", c.storage.enabled},
                  {"capacity_fee", c.storage.capacity_fee},
                  {"turnover_fee", c.storage.turnover_fee},
                  {"max_in", bound_json(c.storage.max_in)},
                  {"max_out", bound_json(c.storage.max_out)},
                  {"max_capacity", bound_json(c.storage.max_capacity)}};
  j["grid"] = {{"sale_price", c.grid.sale_price},
               {"allow_arbitrage", c.grid.allow_arbitrage},
               {"purchase_enabled", c.grid.purchase_enabled},
               {"purchase_price", c.grid.purchase_price}};
  j["electrolyzer"] = {{"p_nom", c.electrolyzer.p_nom},
                       {"eps_nom", c.electrolyzer.eps_nom},
                       {"partload_gain", c.electrolyzer.partload_gain},
                       {"j_points", c.electrolyzer.j_points}};
  json custom = nullptr;
  if (c.custom_scenario) {
    custom = {{"name", c.custom_scenario->name},
              {"rho0", c.custom_scenario->rho0},
              {"rho1", c.custom_scenario->rho1},
              {"pi_infl", c.custom_scenario->pi_infl}};
  }
  j["degradation"] = {
      {"scenario", c.scenario}, {"alpha", c.alpha}, {"operating_hours_only", c.operating_hours_only}, {"custom", custom}};
  j["economics"] = {{"capex", c.economics.capex},           {"share_peri", c.economics.share_peri},
                    {"share_stacks", c.economics.share_stacks}, {"opex_fix", c.economics.opex_fix},
                    {"t_dep_peri", c.economics.t_dep_peri}, {"interest", c.economics.interest},
                    {"water_cost", c.economics.water_cost}, {"water_per_kg", c.economics.water_per_kg}};
  j["lifecycle"] = {{"threshold_percent", c.threshold},
                    {"max_years", c.max_years},
                    {"lower_bound", to_text(c.lower_bound_mode)},
                    {"lcoh_mode", c.lcoh_mode == LcohMode::Averaged ? "averaged" : "literal_sum"}};
  j["sweep"] = {{"thresholds", c.sweep.thresholds},
                {"capex", c.sweep.capex},
                {"alphas", c.sweep.alphas},
                {"scenarios", c.sweep.scenarios},
                {"parallelism", c.sweep.parallelism}};
  j["solver"] = {{"kind", c.solver.kind},
                 {"tol", c.solver.tol},
                 {"max_iters", c.solver.max_iters},
                 {"command", c.solver.command},
                 {"work_dir", c.solver.work_dir.string()}};
  j["output_dir"] = c.output_dir.string();
  return j.dump(2) + "\n";
}

std::filesystem::path default_config_path() {
  if (const char* env = std::getenv("STACKOPT_CONFIG"); env && *env) return env;
  return "config/default_config.json";
}

DegradationScenario resolve_scenario(const RunConfig& config) {
  DegradationScenario s = config.custom_scenario ? *config.custom_scenario : scenario_preset(config.scenario);
  s.alpha = config.alpha;
  s.validate();
  return s;
}

LifecycleConfig build_lifecycle_config(const RunConfig& config) {
  config.validate();
  LifecycleConfig lc;
  lc.electrolyzer = config.electrolyzer;
  lc.economics = config.economics;
  lc.lower_bound_mode = config.lower_bound_mode;
  lc.lcoh_mode = config.lcoh_mode;
  lc.operating_hours_only = config.operating_hours_only;
  lc.max_years = config.max_years;
  DispatchInputs& d = lc.dispatch;
  d.dt = config.dt;
  d.hours_per_year = config.hours_per_year;
  d.storage = config.storage;
  d.grid = config.grid;
  for (const auto& p : config.ppa) {
    auto factors = p.series ? load_capacity_factors(config.base_dir / *p.series, p.source, config.horizon, config.dt)
                            : synthetic_capacity_factors(p.source, config.horizon, p.seed, config.start_hour, config.dt);
    d.ppa.push_back({std::move(factors), p.price, p.max_booking});
  }
  d.demand = config.demand_series ? load_demand(config.base_dir / *config.demand_series, config.horizon)
                                  : constant_demand(config.demand_rate, config.horizon);
  return lc;
}

std::unique_ptr<lp::Solver> make_solver(const RunConfig& config) {
  if (config.solver.kind == "external") {
    return std::make_unique<lp::ExternalSolver>(config.solver.command, config.solver.work_dir);
  }
  lp::SolverOptions opts;
  opts.tol = config.solver.tol;
  opts.max_iters = config.solver.max_iters;
  return std::make_unique<lp::EmbeddedSolver>(opts);
}

}  // namespace stackopt
