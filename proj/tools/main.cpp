#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "zrdelay/kernels.hpp"
#include "zrdelay/scenario.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitConvergence = 2;

std::vector<fs::path> config_dirs(const char* argv0) {
  std::vector<fs::path> dirs;
  if (const char* env = std::getenv("ZRDELAY_CONFIG_DIR")) dirs.emplace_back(env);
  dirs.emplace_back("configs");
  std::error_code ec;
  const auto exe = fs::weakly_canonical(fs::path(argv0), ec);
  if (!ec) dirs.push_back(exe.parent_path().parent_path() / "configs");
#ifdef ZRDELAY_CONFIG_DIR
  dirs.emplace_back(ZRDELAY_CONFIG_DIR);
#endif
  return dirs;
}

void print_issues(const std::vector<zrdelay::ConfigIssue>& issues, const char* label) {
  for (const auto& issue : issues) std::cerr << label << ": " << issue.key << ": " << issue.message << "\n";
}

// Reads and validates; prints every issue. Empty optional on error.
std::optional<zrdelay::Scenario> read_config(const fs::path& path, bool strict) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    std::cerr << "error: " << path.string() << ": cannot open config file\n";
    return std::nullopt;
  }
  std::stringstream buf;
  buf << in.rdbuf();
  auto v = zrdelay::validate_scenario(buf.str(), strict);
  print_issues(v.warnings, "warning");
  print_issues(v.errors, "error");
  return v.scenario;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Centre-of-mass and Larmor-clock delays for zero-range scatterers"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(zrdelay::kToolVersion));

  bool strict = false;
  fs::path out_dir = "out";
  double grid_scale = 1.0;
  unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
  std::string config;

  auto* run = app.add_subcommand("run", "Execute a scenario and write tables, manifest and wave dumps");
  run->add_option("config", config, "Scenario config file")->required();
  run->add_option("--out", out_dir, "Output directory")->capture_default_str();
  run->add_option("--grid-scale", grid_scale, "Multiply grid point counts (>= 1)")
      ->check(CLI::Range(1.0, 1024.0))
      ->capture_default_str();
  run->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
  run->add_flag("--strict", strict, "Reject unknown config keys");

  auto* validate = app.add_subcommand("validate", "Check a scenario config without computing");
  validate->add_option("config", config, "Scenario config file")->required();
  validate->add_flag("--strict", strict, "Reject unknown config keys");

  auto* list = app.add_subcommand("list-scenarios", "List the shipped reference configs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  if (*list) {
    std::vector<fs::path> found;
    for (const auto& dir : config_dirs(argv[0])) {
      std::error_code ec;
      if (!fs::is_directory(dir, ec)) continue;
      for (const auto& entry : fs::directory_iterator(dir))
        if (entry.path().extension() == ".cfg") found.push_back(entry.path());
      if (!found.empty()) break;
    }
    std::sort(found.begin(), found.end());
    if (found.empty()) {
      std::cerr << "no scenario configs found (set ZRDELAY_CONFIG_DIR)\n";
      return kExitConfig;
    }
    for (const auto& path : found) {
      std::ifstream in(path, std::ios::binary);
      std::stringstream buf;
      buf << in.rdbuf();
      const auto v = zrdelay::validate_scenario(buf.str(), true);
      if (v.scenario) {
        std::printf("%-14s %-15s %s\n", path.filename().string().c_str(),
                    std::string(zrdelay::to_string(v.scenario->mode)).c_str(), v.scenario->description.c_str());
      } else {
        std::printf("%-14s %-15s %s\n", path.filename().string().c_str(), "invalid", path.string().c_str());
      }
    }
    return kExitOk;
  }

  const auto scenario = read_config(config, strict);
  if (!scenario) return kExitConfig;

  if (*validate) {
    std::printf("%s: valid (%s, %zu widths)\n", scenario->name.c_str(),
                std::string(zrdelay::to_string(scenario->mode)).c_str(), scenario->widths.size());
    return kExitOk;
  }

  zrdelay::RunOptions options;
  options.out_dir = out_dir;
  options.grid_scale = grid_scale;
  options.jobs = jobs;
  zrdelay::RunSummary summary;
  try {
    summary = zrdelay::run_scenario(*scenario, options);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  std::fprintf(stderr, "%s: %zu rows (%zu ok, %zu flagged, %zu skipped, %zu unconverged) [%s]\n",
               scenario->name.c_str(), summary.rows, summary.ok, summary.flagged, summary.skipped,
               summary.unconverged, std::string(zrdelay::kernels::to_string(zrdelay::kernels::active_isa())).c_str());
  for (const auto& f : summary.files) std::fprintf(stderr, "  wrote %s\n", f.string().c_str());
  return summary.unconverged > 0 ? kExitConvergence : kExitOk;
}
