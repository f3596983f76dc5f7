#pragma once

// Experiment configs and the sweep runner behind the command-line tool.
//
// Config syntax: `key = value` lines, `[section]` headers that prefix the
// following keys with `section.`, `#` comments, comma-separated lists.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "zrdelay/types.hpp"

namespace zrdelay {

inline constexpr std::string_view kToolVersion = "1.0.0";
inline constexpr int kTableSchemaVersion = 1;

enum class ScenarioMode { TransmitSweep, ReflectSweep, RadialSweep, LarmorSweep, SingleShot };

[[nodiscard]] std::string_view to_string(ScenarioMode mode) noexcept;

struct Scenario {
  std::string name;
  std::string description;
  ScenarioMode mode = ScenarioMode::TransmitSweep;
  PotentialSpec potential;

  double p = 1.0;
  std::vector<Dispersion> laws;
  /// Launch position: fixed value, or start_over_width * dx when unset.
  std::optional<double> start_fixed;
  double start_over_width = -3.0;

  /// Packet widths (delay modes) or pointer widths (Larmor mode).
  std::vector<double> widths;

  /// Separation factor K: launch clearance |x_I| >= K dx, and the
  /// completed-event time unless time_fixed is set.
  double separation = 3.0;
  std::optional<double> time_fixed;

  double grid_scale = 1.0;
  bool refine = true;

  /// Widths whose initial and final densities go to the wave dump.
  std::vector<double> dump_widths;

  std::uint64_t config_hash = 0;
};

struct ConfigIssue {
  std::string key;
  std::string message;
};

/// Invalid configuration; carries every offending field.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<ConfigIssue> issues);
  [[nodiscard]] const std::vector<ConfigIssue>& issues() const noexcept { return issues_; }

 private:
  std::vector<ConfigIssue> issues_;
};

struct Validation {
  std::optional<Scenario> scenario;
  std::vector<ConfigIssue> errors;
  /// Unknown keys when not strict.
  std::vector<ConfigIssue> warnings;
};

/// Parses and checks a config, including the physics preconditions of every
/// sweep point that can be decided without computation. Unknown keys are
/// errors when strict, warnings otherwise.
[[nodiscard]] Validation validate_scenario(std::string_view text, bool strict);

/// Same, reading from a file; throws ConfigError on any error.
[[nodiscard]] Scenario load_scenario(const std::filesystem::path& path, bool strict);

/// 64-bit FNV-1a of the raw config text.
[[nodiscard]] std::uint64_t config_hash(std::string_view text) noexcept;

/// per_decade log-spaced values from lo to hi inclusive.
[[nodiscard]] std::vector<double> log_sweep(double lo, double hi, int per_decade);

struct RunOptions {
  std::filesystem::path out_dir = ".";
  /// Multiplies the config's grid scale.
  double grid_scale = 1.0;
  unsigned jobs = 1;
};

struct RunSummary {
  std::size_t rows = 0;
  std::size_t ok = 0;
  std::size_t flagged = 0;
  std::size_t skipped = 0;
  std::size_t unconverged = 0;
  std::vector<std::filesystem::path> files;
};

/// Executes every sweep point, writes one CSV per channel, the manifest and
/// (when requested) the wave dump. Rows keep input order.
RunSummary run_scenario(const Scenario& scenario, const RunOptions& options);

}  // namespace zrdelay
