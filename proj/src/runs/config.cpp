#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "radwave/runs.hpp"

namespace radwave::runs {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& key, const std::string& why) {
  throw ConfigError(key + ": " + why);
}

// Runs f and prefixes any configuration error with the key, keeping its type.
template <typename F>
void at_key(const std::string& key, F&& f) {
  try {
    f();
  } catch (const AdmissibilityError& e) {
    throw AdmissibilityError(key + ": " + e.what());
  } catch (const BandError& e) {
    throw BandError(key + ": " + e.what());
  } catch (const DomainOfDependenceError& e) {
    throw DomainOfDependenceError(key + ": " + e.what());
  } catch (const ConfigError& e) {
    throw ConfigError(key + ": " + e.what());
  }
}

void reject_unknown(const json& obj, const std::string& where,
                    const std::set<std::string>& allowed) {
  for (const auto& [k, _] : obj.items())
    if (!allowed.count(k))
      fail(where.empty() ? k : where + "." + k, "unknown key");
}

double number(const json& obj, const std::string& key, const std::string& path,
              std::optional<double> fallback = {}) {
  if (!obj.contains(key)) {
    if (fallback) return *fallback;
    fail(path, "missing required key");
  }
  const auto& v = obj.at(key);
  if (!v.is_number()) fail(path, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) fail(path, "must be finite");
  return x;
}

std::int64_t integer(const json& obj, const std::string& key,
                     const std::string& path, std::int64_t fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_number_integer()) fail(path, "expected an integer");
  return v.get<std::int64_t>();
}

std::vector<int> parse_js(const json& v) {
  std::vector<int> js;
  auto one = [&](const json& x, const std::string& path) {
    if (!x.is_number_integer()) fail(path, "expected an integer");
    const auto j = x.get<std::int64_t>();
    if (j < 0 || j > 60) fail(path, "J must lie in [0, 60]");
    js.push_back(static_cast<int>(j));
  };
  if (v.is_array()) {
    if (v.empty()) fail("J", "empty J list");
    for (std::size_t i = 0; i < v.size(); ++i)
      one(v[i], "J[" + std::to_string(i) + "]");
  } else {
    one(v, "J");
  }
  return js;
}

DataSpec parse_data(const json& d) {
  if (!d.is_object()) fail("data", "expected an object");
  reject_unknown(d, "data",
                 {"kind", "seed", "amplitude", "center", "width", "mode",
                  "delta", "taper", "velocity"});
  DataSpec spec;
  if (d.contains("kind")) {
    if (!d["kind"].is_string()) fail("data.kind", "expected a string");
    at_key("data.kind",
           [&] { spec.kind = data_kind(d["kind"].get<std::string>()); });
  }
  const auto seed = integer(d, "seed", "data.seed", 0);
  if (seed < 0) fail("data.seed", "must be non-negative");
  spec.seed = static_cast<std::uint64_t>(seed);
  spec.amplitude = number(d, "amplitude", "data.amplitude", 1.0);
  spec.bump.center = number(d, "center", "data.center", spec.bump.center);
  spec.bump.width = number(d, "width", "data.width", spec.bump.width);
  if (!(spec.bump.width > 0)) fail("data.width", "must be positive");
  spec.mode = integer(d, "mode", "data.mode", 1);
  spec.delta = number(d, "delta", "data.delta", spec.delta);
  if (!(spec.delta >= 0)) fail("data.delta", "must be non-negative");
  spec.taper = number(d, "taper", "data.taper", 0.0);
  if (!(spec.taper >= 0)) fail("data.taper", "must be non-negative");
  spec.velocity = number(d, "velocity", "data.velocity", 0.0);
  return spec;
}

// Runs every module precondition that can fail before compute.
void validate(const RunConfig& cfg) {
  at_key("dt", [&] { cfg.stepper().validate(); });
  for (int J : cfg.js) {
    const ParameterSet ps = cfg.params_for(J);
    at_key(ps.p >= 3 && ps.p <= 5 ? "s" : "p", [&] { ps.require_launchable(); });
  }
  auto grid = cfg.grid();
  for (std::size_t i = 0; i < cfg.js.size(); ++i) {
    const std::string key =
        cfg.js.size() > 1 ? "J[" + std::to_string(i) + "]" : "J";
    at_key(key, [&] {
      detail::require_in_band(*grid, std::ldexp(1.0, cfg.js[i]), 0);
    });
  }
  std::pair<RadialField<double>, RadialField<double>> data;
  at_key("data", [&] { data = make_data(grid, cfg.data, cfg.params.s); });
  double longest = 0;
  for (int J : cfg.js) longest = std::max(longest, cfg.horizon_for(J));
  at_key("T", [&] {
    check_domain_of_dependence(data.first, data.second, longest, cfg.stepper());
  });
}

}  // namespace

ParameterSet RunConfig::params_for(int J) const {
  ParameterSet ps = params;
  ps.J = J;
  return ps;
}

double RunConfig::horizon_for(int J) const {
  return horizon ? *horizon : t_window(params_for(J));
}

StepperConfig<double> RunConfig::stepper() const {
  StepperConfig<double> c;
  c.dt = dt;
  c.boundary_tolerance = boundary_tolerance;
  c.guard_margin = guard_margin;
  return c;
}

GridPtr<double> RunConfig::grid() const { return make_grid(length, nodes); }

RunConfig default_config() {
  RunConfig cfg;
  cfg.params.J = cfg.js.front();
  cfg.echo = json::object();
  return cfg;
}

RunConfig parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("parse error: ") + e.what());
  }
  if (!doc.is_object()) fail("(root)", "expected an object");
  reject_unknown(doc, "",
                 {"p", "s", "J", "grid", "dt", "T", "data", "stride", "out",
                  "boundary_tolerance", "guard_margin", "checkpoint_every",
                  "workers", "trials", "seed", "decay"});
  RunConfig cfg;
  cfg.echo = doc;
  cfg.params.p = number(doc, "p", "p");
  cfg.params.s = number(doc, "s", "s");
  if (doc.contains("J")) cfg.js = parse_js(doc["J"]);
  cfg.params.J = cfg.js.front();

  if (doc.contains("grid")) {
    const auto& g = doc["grid"];
    if (!g.is_object()) fail("grid", "expected an object");
    reject_unknown(g, "grid", {"L", "N"});
    cfg.length = number(g, "L", "grid.L", cfg.length);
    cfg.nodes = integer(g, "N", "grid.N", cfg.nodes);
  }
  if (!(cfg.length > 0)) fail("grid.L", "must be positive");
  if (cfg.nodes < 2) fail("grid.N", "must be at least 2");

  cfg.dt = number(doc, "dt", "dt", cfg.dt);
  if (!(cfg.dt > 0)) fail("dt", "must be positive");
  if (doc.contains("T")) {
    const auto& t = doc["T"];
    if (t.is_string()) {
      if (t.get<std::string>() != "auto") fail("T", "expected \"auto\" or a number");
    } else {
      cfg.horizon = number(doc, "T", "T");
      if (!(*cfg.horizon > 0)) fail("T", "must be positive");
    }
  }
  if (doc.contains("data")) cfg.data = parse_data(doc["data"]);

  cfg.stride = integer(doc, "stride", "stride", 1);
  if (cfg.stride < 1) fail("stride", "must be at least 1");
  if (doc.contains("out")) {
    if (!doc["out"].is_string() || doc["out"].get<std::string>().empty())
      fail("out", "expected a non-empty string");
    cfg.out = doc["out"].get<std::string>();
  }
  cfg.boundary_tolerance =
      number(doc, "boundary_tolerance", "boundary_tolerance", 1e-6);
  if (!(cfg.boundary_tolerance > 0)) fail("boundary_tolerance", "must be positive");
  cfg.guard_margin = number(doc, "guard_margin", "guard_margin", 1.0);
  if (!(cfg.guard_margin >= 0)) fail("guard_margin", "must be non-negative");
  cfg.checkpoint_every = integer(doc, "checkpoint_every", "checkpoint_every", 0);
  if (cfg.checkpoint_every < 0) fail("checkpoint_every", "must be non-negative");
  const auto workers = integer(doc, "workers", "workers", 1);
  if (workers < 1 || workers > 256) fail("workers", "must lie in [1, 256]");
  cfg.workers = static_cast<unsigned>(workers);
  cfg.trials = integer(doc, "trials", "trials", 200);
  if (cfg.trials < 1) fail("trials", "must be at least 1");
  const auto seed = integer(doc, "seed", "seed", 0);
  if (seed < 0) fail("seed", "must be non-negative");
  cfg.seed = static_cast<std::uint64_t>(seed);

  if (doc.contains("decay")) {
    const auto& d = doc["decay"];
    if (!d.is_object()) fail("decay", "expected an object");
    reject_unknown(d, "decay", {"times"});
    if (d.contains("times")) {
      const auto& ts = d["times"];
      if (!ts.is_array() || ts.size() < 3)
        fail("decay.times", "expected an array of at least three times");
      for (std::size_t i = 0; i < ts.size(); ++i) {
        const std::string path = "decay.times[" + std::to_string(i) + "]";
        if (!ts[i].is_number()) fail(path, "expected a number");
        const double t = ts[i].get<double>();
        if (!(t > 0) || !std::isfinite(t)) fail(path, "must be positive");
        cfg.decay_times.push_back(t);
      }
    }
  }

  validate(cfg);
  return cfg;
}

RunConfig load_config(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw ConfigError(file.string() + ": cannot open config file");
  std::ostringstream os;
  os << in.rdbuf();
  return parse_config(os.str());
}

}  // namespace radwave::runs
