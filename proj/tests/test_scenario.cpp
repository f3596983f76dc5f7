#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <unistd.h>

#include "doctest.h"
#include "json.hpp"
#include "zrdelay/scenario.hpp"

using namespace zrdelay;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path fresh_dir(const std::string& tag) {
  const auto dir = fs::temp_directory_path() / ("zrdelay_test_" + tag + "_" + std::to_string(::getpid()));
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

bool mentions(const std::vector<ConfigIssue>& issues, const std::string& key, const std::string& fragment = "") {
  for (const auto& i : issues)
    if (i.key == key && i.message.find(fragment) != std::string::npos) return true;
  return false;
}

const char* kSmall = R"(name = small
description = two widths, both laws
mode = transmit_sweep
[potential]
kind = zero_range
omega = 1.0
[packet]
p = 1.0
laws = quadratic, linear
[sweep]
widths = 4, 12
[output]
wave_dump = 8
)";

}  // namespace

TEST_SUITE("scenario") {

TEST_CASE("shipped configs validate") {
  for (const char* name : {"fig4.cfg", "fig6.cfg", "radial.cfg", "larmor.cfg"}) {
    INFO(name);
    const auto text = slurp(fs::path(ZRDELAY_CONFIG_DIR) / name);
    const auto v = validate_scenario(text, true);
    CHECK(v.errors.empty());
    CHECK(v.warnings.empty());
    REQUIRE(v.scenario);
    CHECK_FALSE(v.scenario->widths.empty());
  }
}

TEST_CASE("singular completion time is a config error") {
  const std::string text = R"(name = bad
mode = transmit_sweep
[potential]
kind = zero_range
omega = 1
[packet]
p = 1
laws = quadratic
[sweep]
widths = 6
[time]
separation = 3
)";
  const auto v = validate_scenario(text, true);
  CHECK_FALSE(v.scenario);
  CHECK(mentions(v.errors, "sweep.widths", "t(p, dk, K)"));
  // The dispersionless law has no such singularity.
  std::string linear = text;
  linear.replace(linear.find("laws = quadratic"), 16, "laws = linear");
  CHECK(validate_scenario(linear, true).errors.empty());
}

TEST_CASE("field errors are collected") {
  const std::string text = R"(name = bad
mode = transmit_sweep
[potential]
kind = zero_range
omega = 1
[packet]
p = -1
laws = cubic
[sweep]
widths = -2, 5
[grid]
scale = 0.5
)";
  const auto v = validate_scenario(text, false);
  CHECK_FALSE(v.scenario);
  CHECK(mentions(v.errors, "packet.p"));
  CHECK(mentions(v.errors, "packet.laws", "cubic"));
  CHECK(mentions(v.errors, "sweep.widths", "> 0"));
  CHECK(mentions(v.errors, "grid.scale"));
  CHECK_THROWS_AS((void)load_scenario("/nonexistent/zrdelay.cfg", false), ConfigError);
}

TEST_CASE("unknown keys: error when strict, warning otherwise") {
  const std::string text = std::string(kSmall) + "[extra]\ncolour = blue\n";
  const auto lax = validate_scenario(text, false);
  CHECK(lax.scenario);
  CHECK(mentions(lax.warnings, "extra.colour"));
  const auto strict = validate_scenario(text, true);
  CHECK_FALSE(strict.scenario);
  CHECK(mentions(strict.errors, "extra.colour"));
}

TEST_CASE("sweep helpers and hashing") {
  const auto s = log_sweep(1.0, 1000.0, 24);
  REQUIRE(s.size() == 73);
  CHECK(s.front() == 1.0);
  CHECK(s.back() == 1000.0);
  for (std::size_t j = 1; j < s.size(); ++j) CHECK(s[j] / s[j - 1] == doctest::Approx(std::pow(10.0, 1.0 / 24)));
  CHECK(log_sweep(5.0, 5.0, 8) == std::vector<double>{5.0});
  CHECK(config_hash("abc") == config_hash("abc"));
  CHECK(config_hash("abc") != config_hash("abd"));
  CHECK(config_hash("") == 0xcbf29ce484222325ULL);
}

TEST_CASE("dump widths join the sweep") {
  const auto v = validate_scenario(kSmall, true);
  REQUIRE(v.scenario);
  CHECK(v.scenario->widths == std::vector<double>{4.0, 8.0, 12.0});
  CHECK(v.scenario->dump_widths == std::vector<double>{8.0});
}

TEST_CASE("empty sweep writes an empty table and a manifest") {
  std::string text = kSmall;
  text.replace(text.find("widths = 4, 12"), 14, "widths =");
  text.replace(text.find("wave_dump = 8"), 13, "");
  const auto v = validate_scenario(text, true);
  REQUIRE(v.scenario);
  const auto dir = fresh_dir("empty");
  const auto summary = run_scenario(*v.scenario, {dir, 1.0, 1});
  CHECK(summary.rows == 0);
  CHECK(fs::exists(dir / "small_transmitted.csv"));
  const auto manifest = nlohmann::json::parse(slurp(dir / "small_manifest.json"));
  CHECK(manifest["rows"]["total"] == 0);
  fs::remove_all(dir);
}

TEST_CASE("runs are deterministic and skipped rows say why") {
  const auto v = validate_scenario(kSmall, true);
  REQUIRE(v.scenario);
  const auto a = fresh_dir("run_a");
  const auto b = fresh_dir("run_b");
  const auto first = run_scenario(*v.scenario, {a, 1.0, 1});
  const auto second = run_scenario(*v.scenario, {b, 1.0, 3});
  CHECK(first.rows == 6);
  CHECK(first.skipped == 1);
  CHECK(second.rows == first.rows);
  for (const char* f : {"small_transmitted.csv", "small_waves.csv", "small_manifest.json"}) {
    INFO(f);
    CHECK(slurp(a / f) == slurp(b / f));
  }
  const auto table = slurp(a / "small_transmitted.csv");
  CHECK(table.find("skipped") != std::string::npos);
  CHECK(table.find("p > K*dk") != std::string::npos);
  const auto manifest = nlohmann::json::parse(slurp(a / "small_manifest.json"));
  CHECK(manifest["config_hash"].get<std::string>().size() == 16);
  CHECK(manifest["rows"]["skipped"] == 1);
  CHECK(slurp(a / "small_waves.csv").find("panel,x,density") != std::string::npos);
  fs::remove_all(a);
  fs::remove_all(b);
}

}  // TEST_SUITE
