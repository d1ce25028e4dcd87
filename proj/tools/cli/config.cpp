#include "cli/config.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace spinwire::cli {

std::string_view to_string(Experiment e) {
  switch (e) {
    case Experiment::Trace: return "trace";
    case Experiment::Contour: return "contour";
    case Experiment::Ensemble: return "ensemble";
    case Experiment::Threshold: return "threshold";
    case Experiment::Scaling: return "scaling";
    case Experiment::OracleCheck: return "oracle-check";
  }
  return "?";
}

Experiment parse_experiment(std::string_view name) {
  for (auto e : {Experiment::Trace, Experiment::Contour, Experiment::Ensemble, Experiment::Threshold,
                 Experiment::Scaling, Experiment::OracleCheck})
    if (to_string(e) == name) return e;
  throw ConfigError("experiment: unknown kind '" + std::string(name) +
                    "' (expected trace, contour, ensemble, threshold, scaling or oracle-check)");
}

const Json& schema_defaults() {
  static const Json defaults = Json::parse(R"({
    "experiment": "trace",
    "name": "run",
    "convention": "modulus",
    "chain": {
      "n_sites": 130,
      "profile": {
        "kind": "weak_limit",
        "j": 1.0,
        "j0": 0.05,
        "theta": 0.0,
        "bonds": [],
        "mirror": false,
        "ramp": null,
        "couplings": [],
        "case": null
      },
      "onsite": null,
      "sender": null,
      "receiver": null
    },
    "disorder": {"gamma": 0.0, "epsilon": 0.0, "eta": 0.0, "tau": 0.1, "seed": 0},
    "window": {"t_max": 1000.0, "step": 0.0},
    "contour": {"parameter": "chain.profile.j0", "values": []},
    "ensemble": {"realizations": 100, "max_total_intervals": 5000000},
    "threshold": {
      "parameter": "chain.profile.j0",
      "target": 0.9,
      "lo": 0.05,
      "hi": 0.3,
      "tol": 0.001,
      "scan_points": 25,
      "realizations": 1
    },
    "scaling": {"j0_values": [0.02, 0.04, 0.06, 0.08, 0.10], "window_factor": 10.0},
    "oracle": {"specs": 20, "min_sites": 2, "max_sites": 8, "t_max": 20.0, "seed": 7, "tolerance": 1e-8}
  })");
  return defaults;
}

namespace {

void overlay(Json& target, const Json& source, const Json& schema, const std::string& prefix) {
  if (!source.is_object()) throw ConfigError((prefix.empty() ? std::string("config") : prefix) + ": expected an object");
  for (const auto& [key, value] : source.items()) {
    const std::string path = prefix.empty() ? key : prefix + "." + key;
    if (!schema.contains(key)) throw ConfigError(path + ": unknown key");
    const Json& expected = schema.at(key);
    if (expected.is_object()) {
      overlay(target[key], value, expected, path);
      continue;
    }
    const bool ok = expected.is_null() ? !value.is_object()
                    : expected.is_number() ? value.is_number()
                    : expected.is_string() ? value.is_string()
                    : expected.is_boolean() ? value.is_boolean()
                    : expected.is_array() ? value.is_array()
                                          : false;
    if (!ok) throw ConfigError(path + ": expected " + std::string(expected.type_name()) + ", got " + value.type_name());
    target[key] = value;
  }
}

std::vector<std::string> split_path(std::string_view path) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (start <= path.size()) {
    const std::size_t dot = path.find('.', start);
    const std::size_t end = dot == std::string_view::npos ? path.size() : dot;
    parts.emplace_back(path.substr(start, end - start));
    if (dot == std::string_view::npos) break;
    start = dot + 1;
  }
  return parts;
}

const Json& at(const Json& doc, const std::string& path) { return get_path(doc, path); }

double number(const Json& doc, const std::string& path) {
  const Json& v = at(doc, path);
  if (!v.is_number()) throw ConfigError(path + ": expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError(path + ": must be finite");
  return x;
}

std::int64_t integer(const Json& doc, const std::string& path) {
  const Json& v = at(doc, path);
  if (!v.is_number_integer() && !(v.is_number_float() && std::floor(v.get<double>()) == v.get<double>()))
    throw ConfigError(path + ": expected an integer");
  return v.is_number_integer() ? v.get<std::int64_t>() : static_cast<std::int64_t>(v.get<double>());
}

std::size_t positive_count(const Json& doc, const std::string& path) {
  const std::int64_t v = integer(doc, path);
  if (v < 1) throw ConfigError(path + ": must be >= 1");
  return static_cast<std::size_t>(v);
}

std::vector<double> numbers(const Json& doc, const std::string& path) {
  const Json& v = at(doc, path);
  if (!v.is_array()) throw ConfigError(path + ": expected an array");
  std::vector<double> out;
  for (const auto& x : v) {
    if (!x.is_number()) throw ConfigError(path + ": expected an array of numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

std::string text(const Json& doc, const std::string& path) {
  const Json& v = at(doc, path);
  if (!v.is_string()) throw ConfigError(path + ": expected a string");
  return v.get<std::string>();
}

// Re-tags library validation errors with the config section they came from.
template <class F>
auto guarded(const std::string& section, F&& f) {
  try {
    return f();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(section + ": " + e.what());
  }
}

CouplingProfile profile_from(const Json& doc, std::size_t n_sites, std::optional<EndPatternCase>& fig_case) {
  const std::string base = "chain.profile";
  const std::string kind = text(doc, base + ".kind");
  const double j = number(doc, base + ".j");
  const double j0 = number(doc, base + ".j0");
  if (kind == "uniform") return profile::Uniform{j};
  if (kind == "weak_limit") return profile::WeakLimit{j, j0};
  if (kind == "triangle") return profile::Triangle{j};
  if (kind == "parabola") return profile::Parabola{j};
  if (kind == "exponent") return profile::Exponent{j};
  if (kind == "pst") return profile::PST{j};
  if (kind == "trapezia") {
    profile::Trapezia t{j, std::nullopt};
    if (!at(doc, base + ".ramp").is_null()) {
      const std::int64_t r = integer(doc, base + ".ramp");
      if (r < 1) throw ConfigError(base + ".ramp: must be >= 1");
      t.ramp = static_cast<std::size_t>(r);
    }
    return t;
  }
  if (kind == "interpolation") return profile::Interpolation{j, j0, number(doc, base + ".theta")};
  if (kind == "end_pattern") {
    profile::EndPattern e{j, j0, {}, false};
    for (double b : numbers(doc, base + ".bonds")) {
      if (b < 1 || std::floor(b) != b) throw ConfigError(base + ".bonds: entries must be positive integers");
      e.bonds.push_back(static_cast<std::size_t>(b));
    }
    const Json& mirror = at(doc, base + ".mirror");
    e.mirror = mirror.get<bool>();
    return e;
  }
  if (kind == "custom") return profile::Custom{numbers(doc, base + ".couplings")};
  if (kind == "case") {
    if (at(doc, base + ".case").is_null()) throw ConfigError(base + ".case: required when kind is 'case'");
    const auto which = static_cast<int>(integer(doc, base + ".case"));
    fig_case = guarded(base + ".case", [&] { return end_pattern_case(which, n_sites, j, j0); });
    return fig_case->pattern;
  }
  throw ConfigError(base + ".kind: unknown profile '" + kind + "'");
}

}  // namespace

Json resolve(const Json& user) {
  Json out = schema_defaults();
  overlay(out, user, schema_defaults(), "");
  return out;
}

const Json& get_path(const Json& doc, std::string_view path) {
  const Json* node = &doc;
  for (const auto& part : split_path(path)) {
    if (!node->is_object() || !node->contains(part)) throw ConfigError(std::string(path) + ": unknown key");
    node = &node->at(part);
  }
  return *node;
}

void set_path(Json& doc, std::string_view path, const Json& value) {
  const auto parts = split_path(path);
  const Json* schema = &schema_defaults();
  for (const auto& part : parts) {
    if (!schema->is_object() || !schema->contains(part)) throw ConfigError(std::string(path) + ": unknown key");
    schema = &schema->at(part);
  }
  if (schema->is_object()) throw ConfigError(std::string(path) + ": cannot assign a whole section");
  Json* node = &doc;
  for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
    if (!node->contains(parts[i])) (*node)[parts[i]] = Json::object();
    node = &(*node)[parts[i]];
  }
  (*node)[parts.back()] = value;
}

void apply_override(Json& doc, std::string_view assignment) {
  const std::size_t eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0)
    throw ConfigError("--set: expected path=value, got '" + std::string(assignment) + "'");
  const std::string_view path = assignment.substr(0, eq);
  const std::string raw(assignment.substr(eq + 1));
  Json value = Json::parse(raw, nullptr, /*allow_exceptions=*/false);
  if (value.is_discarded()) value = raw;
  set_path(doc, path, value);
}

ChainSpec chain_from(const Json& doc) {
  const std::size_t n = positive_count(doc, "chain.n_sites");
  if (n < 2) throw ConfigError("chain.n_sites: must be >= 2");
  std::optional<EndPatternCase> fig_case;
  const CouplingProfile recipe = profile_from(doc, n, fig_case);

  ChainSpec spec;
  spec.n_sites = n;
  spec.couplings = guarded("chain.profile", [&] { return build_profile(recipe, n); });
  const Json& onsite = at(doc, "chain.onsite");
  if (onsite.is_null()) {
    spec.onsite.assign(n, 0.0);
  } else {
    spec.onsite = numbers(doc, "chain.onsite");
    if (spec.onsite.size() != n)
      throw ConfigError("chain.onsite: expected " + std::to_string(n) + " entries, got " +
                        std::to_string(spec.onsite.size()));
  }
  spec.sender = fig_case ? fig_case->sender : 1;
  spec.receiver = fig_case ? fig_case->receiver : n;
  if (!at(doc, "chain.sender").is_null()) spec.sender = positive_count(doc, "chain.sender");
  if (!at(doc, "chain.receiver").is_null()) spec.receiver = positive_count(doc, "chain.receiver");
  guarded("chain", [&] {
    spec.validate();
    return 0;
  });
  return spec;
}

DisorderSpec disorder_from(const Json& doc) {
  DisorderSpec d;
  d.gamma = number(doc, "disorder.gamma");
  d.epsilon = number(doc, "disorder.epsilon");
  d.eta = number(doc, "disorder.eta");
  d.tau = number(doc, "disorder.tau");
  const std::int64_t seed = integer(doc, "disorder.seed");
  if (seed < 0) throw ConfigError("disorder.seed: must be >= 0");
  d.master_seed = static_cast<std::uint64_t>(seed);
  guarded("disorder", [&] {
    d.validate();
    return 0;
  });
  return d;
}

ResolvedRun prepare(const Json& user) {
  ResolvedRun run{resolve(user), Experiment::Trace, {}, kDefaultConvention, {}, {}, 0.0, 0.0};
  const Json& doc = run.config;
  run.experiment = parse_experiment(text(doc, "experiment"));
  run.name = text(doc, "name");
  if (run.name.empty() || run.name.find('/') != std::string::npos)
    throw ConfigError("name: must be a non-empty file-name-safe string");
  run.convention = guarded("convention", [&] { return parse_convention(text(doc, "convention")); });
  run.t_max = number(doc, "window.t_max");
  run.step = number(doc, "window.step");
  if (!(run.t_max > 0.0)) throw ConfigError("window.t_max: must be > 0");
  if (run.step < 0.0 || run.step > run.t_max) throw ConfigError("window.step: must lie in [0, t_max] (0 = T/20000)");

  if (run.experiment == Experiment::OracleCheck) {
    const std::size_t lo = positive_count(doc, "oracle.min_sites");
    const std::size_t hi = positive_count(doc, "oracle.max_sites");
    positive_count(doc, "oracle.specs");
    if (lo < 2 || hi > 10 || lo > hi) throw ConfigError("oracle.min_sites/max_sites: need 2 <= min <= max <= 10");
    if (!(number(doc, "oracle.t_max") > 0.0)) throw ConfigError("oracle.t_max: must be > 0");
    if (!(number(doc, "oracle.tolerance") > 0.0)) throw ConfigError("oracle.tolerance: must be > 0");
    if (integer(doc, "oracle.seed") < 0) throw ConfigError("oracle.seed: must be >= 0");
    return run;
  }

  run.chain = chain_from(doc);
  run.disorder = disorder_from(doc);

  switch (run.experiment) {
    case Experiment::Contour: {
      const std::string param = text(doc, "contour.parameter");
      get_path(schema_defaults(), param);
      if (at(doc, "contour.values").empty()) throw ConfigError("contour.values: must not be empty");
      break;
    }
    case Experiment::Ensemble:
      positive_count(doc, "ensemble.realizations");
      positive_count(doc, "ensemble.max_total_intervals");
      break;
    case Experiment::Threshold: {
      const std::string param = text(doc, "threshold.parameter");
      get_path(schema_defaults(), param);
      const double lo = number(doc, "threshold.lo");
      const double hi = number(doc, "threshold.hi");
      if (!(lo < hi)) throw ConfigError("threshold.lo/hi: need lo < hi");
      if (!(number(doc, "threshold.tol") > 0.0)) throw ConfigError("threshold.tol: must be > 0");
      number(doc, "threshold.target");
      positive_count(doc, "threshold.realizations");
      integer(doc, "threshold.scan_points");
      // both endpoint configurations must build
      for (double x : {lo, hi}) {
        Json probe = doc;
        set_path(probe, param, x);
        chain_from(probe);
        disorder_from(probe);
      }
      break;
    }
    case Experiment::Scaling: {
      const auto j0 = numbers(doc, "scaling.j0_values");
      if (j0.size() < 4) throw ConfigError("scaling.j0_values: need at least 4 values");
      for (double v : j0)
        if (!(v > 0.0)) throw ConfigError("scaling.j0_values: values must be > 0");
      if (!(number(doc, "scaling.window_factor") > 0.0)) throw ConfigError("scaling.window_factor: must be > 0");
      break;
    }
    default: break;
  }
  return run;
}

Json load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  Json doc = Json::parse(buf.str(), nullptr, /*allow_exceptions=*/false, /*ignore_comments=*/true);
  if (doc.is_discarded()) throw ConfigError("config: '" + path + "' is not valid JSON");
  return doc;
}

// ---------------------------------------------------------------------------

namespace {

Json range_values(double start, double stop, std::size_t count) {
  Json values = Json::array();
  for (std::size_t k = 0; k < count; ++k)
    values.push_back(start + (stop - start) * static_cast<double>(k) / static_cast<double>(count - 1));
  return values;
}

std::vector<Preset> build_presets() {
  std::vector<Preset> out;
  auto add = [&](std::string name, std::string description, std::string body) {
    Json doc = Json::parse(body);
    doc["name"] = name;
    out.push_back({std::move(name), std::move(description), std::move(doc)});
  };

  add("fig1", "Fig. 1: contour of F over t and J0/J for the weak-coupling limit, N=130, J=1",
      R"({"experiment": "contour",
          "chain": {"profile": {"kind": "weak_limit"}},
          "window": {"t_max": 1000.0, "step": 0.1},
          "contour": {"parameter": "chain.profile.j0", "values": []}})");
  {
    Json values = Json::array();
    for (int k = 1; k <= 30; ++k) values.push_back(0.01 * k);
    out.back().config["contour"]["values"] = values;
  }
  add("fig2b", "Fig. 2(b): F(t) for end-pattern cases 1-4, J0=0.05J",
      R"({"experiment": "contour",
          "chain": {"profile": {"kind": "case", "case": 1}},
          "window": {"t_max": 1000.0, "step": 0.1},
          "contour": {"parameter": "chain.profile.case", "values": [1, 2, 3, 4]}})");
  add("fig2c", "Fig. 2(c): F(t) for interior sender/receiver cases 5 and 6, J0=0.05J",
      R"({"experiment": "contour",
          "chain": {"profile": {"kind": "case", "case": 5}},
          "window": {"t_max": 1000.0, "step": 0.1},
          "contour": {"parameter": "chain.profile.case", "values": [5, 6]}})");
  add("fig3b", "Fig. 3(b): F(t) for triangle, parabola, exponent, PST and trapezia profiles",
      R"({"experiment": "contour",
          "chain": {"profile": {"kind": "pst"}},
          "window": {"t_max": 260.0, "step": 0.05},
          "contour": {"parameter": "chain.profile.kind",
                      "values": ["triangle", "parabola", "exponent", "pst", "trapezia"]}})");
  add("fig3c", "Fig. 3(c): contour of F over t and theta for the PST / weak-limit interpolation",
      R"({"experiment": "contour",
          "chain": {"profile": {"kind": "interpolation"}},
          "window": {"t_max": 1000.0, "step": 0.1},
          "contour": {"parameter": "chain.profile.theta", "values": []}})");
  out.back().config["contour"]["values"] = range_values(0.0, std::numbers::pi / 2.0, 11);
  add("fig4a", "Fig. 4(a): weak-coupling limit, static coupling defects gamma=0.1J",
      R"({"experiment": "ensemble",
          "chain": {"profile": {"kind": "weak_limit"}},
          "disorder": {"gamma": 0.1, "seed": 2012},
          "window": {"t_max": 1000.0}})");
  add("fig4b", "Fig. 4(b): weak-coupling limit, static on-site defects epsilon=0.1J",
      R"({"experiment": "ensemble",
          "chain": {"profile": {"kind": "weak_limit"}},
          "disorder": {"epsilon": 0.1, "seed": 2012},
          "window": {"t_max": 1000.0}})");
  add("fig4c", "Fig. 4(c): PST, static coupling defects gamma=0.1J",
      R"({"experiment": "ensemble",
          "chain": {"profile": {"kind": "pst"}},
          "disorder": {"gamma": 0.1, "seed": 2012},
          "window": {"t_max": 130.0}})");
  add("fig4d", "Fig. 4(d): PST, static on-site defects epsilon=0.1J",
      R"({"experiment": "ensemble",
          "chain": {"profile": {"kind": "pst"}},
          "disorder": {"epsilon": 0.1, "seed": 2012},
          "window": {"t_max": 130.0}})");
  add("fig4c-dynamic", "Fig. 4 text: PST under time-dependent coupling noise eta=0.1J, tau=0.1",
      R"({"experiment": "ensemble",
          "chain": {"profile": {"kind": "pst"}},
          "disorder": {"eta": 0.1, "tau": 0.1, "seed": 2012},
          "window": {"t_max": 130.0}})");
  add("thresholds", "Weak-coupling threshold: largest J0/J with F_max >= 0.9, scanned on the Fig. 1 J0 axis (step 0.01J)",
      R"({"experiment": "threshold",
          "chain": {"profile": {"kind": "weak_limit"}},
          "window": {"t_max": 1000.0},
          "threshold": {"parameter": "chain.profile.j0", "target": 0.9, "lo": 0.05, "hi": 0.3,
                        "tol": 0.001, "scan_points": 25}})");
  add("scaling", "Fig. 1 trend: power-law fit of t_MF against J0 (windows 10/J0)",
      R"({"experiment": "scaling",
          "chain": {"profile": {"kind": "weak_limit"}},
          "scaling": {"j0_values": [0.02, 0.04, 0.06, 0.08, 0.10], "window_factor": 10.0}})");
  add("oracle", "Validation: single-excitation amplitudes against the full 2^N Hilbert space",
      R"({"experiment": "oracle-check"})");
  return out;
}

}  // namespace

const std::vector<Preset>& presets() {
  static const std::vector<Preset> all = build_presets();
  return all;
}

const Preset& find_preset(std::string_view name) {
  for (const auto& p : presets())
    if (p.name == name) return p;
  throw ConfigError("preset: unknown preset '" + std::string(name) + "' (see `spinwire presets`)");
}

}  // namespace spinwire::cli
