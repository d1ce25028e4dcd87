#pragma once

// Run configuration: a JSON document checked against a schema of defaults.
// Every key a user supplies must exist in the schema; missing keys take the
// schema default. The fully resolved document is what the manifest records.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "spinwire/chain.hpp"
#include "spinwire/dynamics.hpp"

namespace spinwire::cli {

using Json = nlohmann::ordered_json;

/// Invalid configuration; the message names the offending key.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Experiment { Trace, Contour, Ensemble, Threshold, Scaling, OracleCheck };

std::string_view to_string(Experiment e);
Experiment parse_experiment(std::string_view name);

/// The schema document: every key with its default value.
const Json& schema_defaults();

/// Overlay `user` onto the defaults, rejecting unknown keys and type mismatches.
Json resolve(const Json& user);

/// Apply "a.b.c=value" to a (user or resolved) document. The value is parsed
/// as JSON when possible and kept as a string otherwise.
void apply_override(Json& doc, std::string_view assignment);

/// Set a dotted path that must exist in the schema.
void set_path(Json& doc, std::string_view path, const Json& value);
const Json& get_path(const Json& doc, std::string_view path);

struct ResolvedRun {
  Json config;  // resolved document
  Experiment experiment;
  std::string name;
  FidelityConvention convention;
  ChainSpec chain;
  DisorderSpec disorder;
  double t_max;
  double step;  // 0 -> default T / 20000
};

/// Chain described by a resolved document.
ChainSpec chain_from(const Json& resolved);
DisorderSpec disorder_from(const Json& resolved);

/// Resolve and validate everything needed before computing.
ResolvedRun prepare(const Json& user);

/// Load a config file (JSON).
Json load_file(const std::string& path);

struct Preset {
  std::string name;
  std::string description;
  Json config;  // user-level document
};

const std::vector<Preset>& presets();
const Preset& find_preset(std::string_view name);

}  // namespace spinwire::cli
