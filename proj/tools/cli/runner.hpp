#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "cli/config.hpp"

namespace spinwire::cli {

inline constexpr const char* kToolVersion = "0.1.0";

/// Failure writing an artifact.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum ExitCode : int { kExitOk = 0, kExitConfig = 1, kExitNumerical = 2, kExitIo = 3 };

struct RunOptions {
  std::vector<std::string> overrides;  // "path=value"
  std::size_t jobs = 0;                // 0 -> logical CPU count
  std::optional<std::filesystem::path> out_dir;
  std::optional<std::uint64_t> seed;  // replaces disorder.seed and oracle.seed
};

/// Output directory: --out, else $SPINWIRE_OUT/<name>, else ./spinwire-out/<name>.
std::filesystem::path output_directory(const RunOptions& options, const std::string& name);

/// Fold options into the user document, resolve it and validate.
ResolvedRun prepare_run(Json user, const RunOptions& options);

/// Run a prepared configuration and write its artifacts plus manifest.json.
/// Returns the manifest.
Json execute(const ResolvedRun& run, const std::filesystem::path& out_dir, std::size_t jobs, std::ostream& log);

/// Full pipeline with error-to-exit-code mapping.
int run_and_report(const Json& user, const RunOptions& options, std::ostream& log, std::ostream& err);

/// Oracle comparison report for the `oracle` config section.
Json oracle_report(const Json& oracle_section);

/// Formats a double with 17 significant digits.
std::string format_number(double x);

std::string sha256_hex(const std::string& bytes);

}  // namespace spinwire::cli
