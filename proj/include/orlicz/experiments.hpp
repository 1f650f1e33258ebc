#pragma once

// Config-driven experiment runner behind the orlicz-lab CLI.  A config is a
// JSON object {"schema_version": 1, "kind": <kind>, "seed": n, "params": {...}};
// see docs/config.md for the per-kind parameters.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace orlicz::lab {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr int kSchemaVersion = 1;

/// Malformed config, unknown kind, bad N-function spec or unusable output directory.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

const std::vector<std::string>& experiment_kinds();

nlohmann::json load_config(const std::filesystem::path& path);

/// FNV-1a over the canonical config dump and the effective seed, as 16 hex digits.
std::string config_hash(const nlohmann::json& config, std::uint64_t seed);

struct RunOptions {
  std::filesystem::path out_dir = "out";
  std::optional<std::uint64_t> seed;  ///< overrides the config seed
  bool plots = false;
  std::optional<std::string> expected_kind;  ///< set by kind-specific subcommands
};

struct RunReport {
  std::string kind;
  std::string hash;
  std::vector<std::filesystem::path> files;
  nlohmann::json summary;
};

/// Runs one experiment.  Throws ValidationError for config problems and
/// NonConvergenceError for numerical failures.
RunReport run_experiment(const nlohmann::json& config, const RunOptions& options);

/// 0 on success, 2 on validation errors, 3 on non-convergence, 1 otherwise.
/// Diagnostics go to stderr.
int run_and_report(const std::filesystem::path& config_path, const RunOptions& options);

}  // namespace orlicz::lab
