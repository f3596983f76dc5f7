#include "zrdelay/scenario.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "zrdelay/larmor.hpp"
#include "zrdelay/observables.hpp"
#include "zrdelay/weakvalues.hpp"

namespace zrdelay {

std::string_view to_string(ScenarioMode mode) noexcept {
  switch (mode) {
    case ScenarioMode::TransmitSweep: return "transmit_sweep";
    case ScenarioMode::ReflectSweep: return "reflect_sweep";
    case ScenarioMode::RadialSweep: return "radial_sweep";
    case ScenarioMode::LarmorSweep: return "larmor_sweep";
    case ScenarioMode::SingleShot: return "single_shot";
  }
  return "?";
}

namespace {

std::string describe(const std::vector<ConfigIssue>& issues) {
  std::string out = "invalid configuration:";
  for (const auto& issue : issues) out += "\n  " + issue.key + ": " + issue.message;
  return out;
}

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "name",           "description",       "mode",         "potential.kind", "potential.omega",
      "potential.height", "potential.left",  "potential.right", "potential.alpha", "packet.p",
      "packet.laws",    "packet.speed",      "packet.start", "packet.start_over_width", "sweep.widths",
      "sweep.min",      "sweep.max",         "sweep.per_decade", "time.separation", "time.fixed",
      "grid.scale",     "grid.refine",       "output.wave_dump"};
  return keys;
}

struct RawEntry {
  std::string value;
  int line = 0;
};

class Reader {
 public:
  Reader(std::map<std::string, RawEntry> entries, std::vector<ConfigIssue>& errors)
      : entries_(std::move(entries)), errors_(errors) {}

  bool has(const std::string& key) const { return entries_.count(key) != 0; }

  std::optional<std::string> text(const std::string& key) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) return std::nullopt;
    return it->second.value;
  }

  std::optional<double> number(const std::string& key) {
    auto raw = text(key);
    if (!raw) return std::nullopt;
    auto v = parse_number(*raw);
    if (!v) errors_.push_back({key, "expected a finite number, got '" + *raw + "'"});
    return v;
  }

  std::optional<std::vector<double>> numbers(const std::string& key) {
    auto raw = text(key);
    if (!raw) return std::nullopt;
    std::vector<double> out;
    std::stringstream ss(*raw);
    std::string item;
    while (std::getline(ss, item, ',')) {
      const auto t = trim(item);
      if (t.empty()) continue;
      auto v = parse_number(t);
      if (!v) {
        errors_.push_back({key, "expected a list of finite numbers, got '" + t + "'"});
        return std::nullopt;
      }
      out.push_back(*v);
    }
    return out;
  }

  std::vector<std::string> words(const std::string& key) const {
    std::vector<std::string> out;
    auto raw = text(key);
    if (!raw) return out;
    std::stringstream ss(*raw);
    std::string item;
    while (std::getline(ss, item, ',')) {
      auto t = trim(item);
      if (!t.empty()) out.push_back(t);
    }
    return out;
  }

  std::optional<bool> flag(const std::string& key) {
    auto raw = text(key);
    if (!raw) return std::nullopt;
    if (*raw == "true" || *raw == "yes" || *raw == "1") return true;
    if (*raw == "false" || *raw == "no" || *raw == "0") return false;
    errors_.push_back({key, "expected true or false, got '" + *raw + "'"});
    return std::nullopt;
  }

 private:
  static std::optional<double> parse_number(const std::string& s) {
    double v = 0.0;
    const char* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc{} || ptr != end || !std::isfinite(v)) return std::nullopt;
    return v;
  }

  std::map<std::string, RawEntry> entries_;
  std::vector<ConfigIssue>& errors_;
};

std::map<std::string, RawEntry> tokenize(std::string_view text, std::vector<ConfigIssue>& errors) {
  std::map<std::string, RawEntry> entries;
  std::string section;
  std::istringstream in{std::string(text)};
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto body = trim(line);
    if (body.empty()) continue;
    const std::string where = "line " + std::to_string(number);
    if (body.front() == '[') {
      if (body.back() != ']' || body.size() < 3) {
        errors.push_back({where, "malformed section header '" + body + "'"});
        continue;
      }
      section = trim(std::string_view(body).substr(1, body.size() - 2));
      continue;
    }
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      errors.push_back({where, "expected 'key = value', got '" + body + "'"});
      continue;
    }
    const auto key = trim(std::string_view(body).substr(0, eq));
    if (key.empty()) {
      errors.push_back({where, "missing key before '='"});
      continue;
    }
    const std::string full = section.empty() ? key : section + "." + key;
    if (entries.count(full) != 0) {
      errors.push_back({full, "duplicate key (first set on line " + std::to_string(entries[full].line) + ")"});
      continue;
    }
    entries[full] = {trim(std::string_view(body).substr(eq + 1)), number};
  }
  return entries;
}

std::optional<ScenarioMode> parse_mode(const std::string& s) {
  for (auto m : {ScenarioMode::TransmitSweep, ScenarioMode::ReflectSweep, ScenarioMode::RadialSweep,
                 ScenarioMode::LarmorSweep, ScenarioMode::SingleShot})
    if (to_string(m) == s) return m;
  return std::nullopt;
}

bool valid_name(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) {
    return std::isalnum(c) != 0 || c == '_' || c == '-';
  });
}

bool same_width(double a, double b) { return std::abs(a - b) <= 1e-9 * std::max(std::abs(a), std::abs(b)); }

}  // namespace

ConfigError::ConfigError(std::vector<ConfigIssue> issues)
    : std::runtime_error(describe(issues)), issues_(std::move(issues)) {}

std::uint64_t config_hash(std::string_view text) noexcept {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::vector<double> log_sweep(double lo, double hi, int per_decade) {
  if (!(lo > 0.0) || !(hi >= lo) || per_decade < 1) throw DomainError("log sweep needs 0 < lo <= hi, per_decade >= 1");
  const double decades = std::log10(hi / lo);
  const auto steps = static_cast<int>(std::llround(decades * per_decade));
  std::vector<double> out;
  if (steps == 0) return {lo};
  for (int i = 0; i <= steps; ++i) out.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / steps));
  out.back() = hi;
  return out;
}

Validation validate_scenario(std::string_view text, bool strict) {
  Validation result;
  auto& errors = result.errors;
  auto entries = tokenize(text, errors);
  for (const auto& [key, entry] : entries) {
    if (known_keys().count(key) != 0) continue;
    ConfigIssue issue{key, "unknown key (line " + std::to_string(entry.line) + ")"};
    (strict ? errors : result.warnings).push_back(issue);
  }
  Reader cfg(std::move(entries), errors);
  Scenario sc;
  sc.config_hash = config_hash(text);

  sc.name = cfg.text("name").value_or("");
  if (!valid_name(sc.name)) errors.push_back({"name", "required; letters, digits, '_' and '-' only"});
  sc.description = cfg.text("description").value_or("");

  const auto mode_text = cfg.text("mode");
  const auto mode = mode_text ? parse_mode(*mode_text) : std::nullopt;
  if (!mode) {
    errors.push_back({"mode", "required; one of transmit_sweep, reflect_sweep, radial_sweep, larmor_sweep, single_shot"});
  } else {
    sc.mode = *mode;
  }

  // Potential.
  const auto kind = cfg.text("potential.kind").value_or("");
  auto need = [&](const std::string& key) {
    auto v = cfg.number(key);
    if (!v && !cfg.has(key)) errors.push_back({key, "required for potential.kind = " + kind});
    return v.value_or(0.0);
  };
  if (kind == "zero_range") {
    sc.potential = PotentialSpec::zero_range(need("potential.omega"));
  } else if (kind == "rectangular") {
    const double height = need("potential.height");
    const double left = need("potential.left");
    const double right = need("potential.right");
    sc.potential = PotentialSpec::rectangular(height, left, right);
  } else if (kind == "radial") {
    sc.potential = PotentialSpec::radial(need("potential.alpha"));
  } else {
    errors.push_back({"potential.kind", "required; one of zero_range, rectangular, radial"});
  }
  if (!kind.empty()) {
    try {
      sc.potential.validate();
    } catch (const DomainError& e) {
      errors.push_back({"potential", e.what()});
    }
  }
  if (mode) {
    const bool radial_mode = sc.mode == ScenarioMode::RadialSweep;
    const bool radial_kind = sc.potential.kind == PotentialKind::RadialZeroRange;
    if (radial_mode != radial_kind && (kind == "radial" || radial_mode))
      errors.push_back({"potential.kind", "radial_sweep and the radial potential go together"});
    if (sc.mode == ScenarioMode::LarmorSweep && kind != "rectangular")
      errors.push_back({"potential.kind", "larmor_sweep needs a rectangular region"});
  }

  // Packet.
  sc.p = cfg.number("packet.p").value_or(0.0);
  if (!(sc.p > 0.0)) errors.push_back({"packet.p", "required; must be > 0"});
  const double speed = cfg.number("packet.speed").value_or(1.0);
  if (!(speed > 0.0)) errors.push_back({"packet.speed", "must be > 0"});
  auto law_names = cfg.words("packet.laws");
  if (law_names.empty()) law_names = {"quadratic"};
  for (const auto& name : law_names) {
    if (name == "quadratic") {
      sc.laws.push_back(Dispersion::quadratic());
    } else if (name == "linear") {
      sc.laws.push_back(Dispersion::linear(speed));
    } else {
      errors.push_back({"packet.laws", "unknown dispersion law '" + name + "' (quadratic, linear)"});
    }
  }
  const bool radial_mode = mode && sc.mode == ScenarioMode::RadialSweep;
  sc.start_over_width = radial_mode ? 3.0 : -3.0;
  if (cfg.has("packet.start") && cfg.has("packet.start_over_width"))
    errors.push_back({"packet.start", "give either packet.start or packet.start_over_width, not both"});
  if (auto v = cfg.number("packet.start")) sc.start_fixed = *v;
  if (auto v = cfg.number("packet.start_over_width")) sc.start_over_width = *v;
  if (mode && sc.mode != ScenarioMode::LarmorSweep) {
    const double start = sc.start_fixed.value_or(sc.start_over_width);
    if (radial_mode && !(start > 0.0))
      errors.push_back({"packet.start", "radial packets start at r_I > 0"});
    if (!radial_mode && !(start < 0.0))
      errors.push_back({"packet.start", "packets are launched from the left: start must be < 0"});
  }

  // Sweep.
  if (cfg.has("sweep.widths")) {
    if (cfg.has("sweep.min") || cfg.has("sweep.max"))
      errors.push_back({"sweep.widths", "give either sweep.widths or sweep.min/max, not both"});
    sc.widths = cfg.numbers("sweep.widths").value_or(std::vector<double>{});
  } else if (cfg.has("sweep.min") || cfg.has("sweep.max")) {
    const auto lo = cfg.number("sweep.min");
    const auto hi = cfg.number("sweep.max");
    const double per = cfg.number("sweep.per_decade").value_or(24.0);
    if (!lo || !hi) {
      errors.push_back({"sweep.min", "sweep.min and sweep.max go together"});
    } else if (!(*lo > 0.0) || !(*hi >= *lo)) {
      errors.push_back({"sweep.min", "need 0 < sweep.min <= sweep.max"});
    } else if (!(per >= 1.0) || per != std::floor(per)) {
      errors.push_back({"sweep.per_decade", "must be a positive integer"});
    } else {
      sc.widths = log_sweep(*lo, *hi, static_cast<int>(per));
    }
  } else {
    errors.push_back({"sweep.widths", "required: sweep.widths (possibly empty) or sweep.min/max"});
  }
  // Dump widths join the sweep so their rows exist in the table.
  sc.dump_widths = cfg.numbers("output.wave_dump").value_or(std::vector<double>{});
  for (double w : sc.dump_widths) {
    const bool found = std::any_of(sc.widths.begin(), sc.widths.end(), [&](double x) { return same_width(x, w); });
    if (!found) sc.widths.push_back(w);
  }
  std::sort(sc.widths.begin(), sc.widths.end());
  for (double w : sc.widths)
    if (!(w > 0.0)) errors.push_back({"sweep.widths", "widths must be > 0, got " + format_number(w)});

  // Time.
  sc.separation = cfg.number("time.separation").value_or(3.0);
  if (!(sc.separation > 0.0)) errors.push_back({"time.separation", "must be > 0"});
  if (auto v = cfg.number("time.fixed")) {
    sc.time_fixed = *v;
    if (!(*v >= 0.0)) errors.push_back({"time.fixed", "must be >= 0"});
  }
  if (mode && sc.mode != ScenarioMode::LarmorSweep && !sc.time_fixed && sc.p > 0.0) {
    for (const auto& law : sc.laws) {
      if (!law.dispersive()) continue;
      for (double w : sc.widths) {
        const double two_k = 2.0 * sc.separation;
        if (std::abs(sc.p * w - two_k) <= 1e-12 * two_k)
          errors.push_back({"sweep.widths", "p*dx = 2K = " + format_number(two_k) + " at dx = " + format_number(w) +
                                                ": t(p, dk, K) = 2pK dx / (p^2 - K^2 dk^2) is singular"});
      }
    }
  }

  // Grid and output.
  sc.grid_scale = cfg.number("grid.scale").value_or(1.0);
  if (!(sc.grid_scale >= 1.0)) errors.push_back({"grid.scale", "must be >= 1"});
  sc.refine = cfg.flag("grid.refine").value_or(true);
  if (mode && sc.mode == ScenarioMode::LarmorSweep && !sc.dump_widths.empty())
    errors.push_back({"output.wave_dump", "wave dumps are not available for larmor_sweep"});

  if (errors.empty()) result.scenario = std::move(sc);
  return result;
}

Scenario load_scenario(const std::filesystem::path& path, bool strict) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError({{path.string(), "cannot open config file"}});
  std::stringstream buf;
  buf << in.rdbuf();
  auto v = validate_scenario(buf.str(), strict);
  if (!v.scenario) throw ConfigError(std::move(v.errors));
  return *v.scenario;
}

namespace {

enum class RowStatus { Ok, Flagged, Skipped, Unconverged };

std::string_view to_string(RowStatus s) {
  switch (s) {
    case RowStatus::Ok: return "ok";
    case RowStatus::Flagged: return "flagged";
    case RowStatus::Skipped: return "skipped";
    case RowStatus::Unconverged: return "unconverged";
  }
  return "?";
}

struct Task {
  Dispersion law;
  double width = 0.0;
  Channel channel = Channel::Transmitted;
};

struct Row {
  Task task;
  RowStatus status = RowStatus::Ok;
  std::string reason;
  std::vector<std::string> cells;
};

// Inverse length setting the dimensionless groups of the table.
double strength(const PotentialSpec& potential) {
  switch (potential.kind) {
    case PotentialKind::ZeroRange: return potential.omega;
    case PotentialKind::Rectangular: return potential.height * potential.width();
    case PotentialKind::RadialZeroRange: return 1.0 / std::abs(potential.alpha);
  }
  return 0.0;
}

std::vector<std::string> delay_columns(Channel channel) {
  std::vector<std::string> cols = {"law",           "dx",         "x_start",       "t",
                                   "omega_dx",      "omega_x_start", "omega_vt",   "delay",
                                   "delay_spectral", "delay_scaled", "asymptote"};
  if (channel == Channel::Reflected) cols.push_back("asymptote_narrow");
  for (const char* c : {"filtering_term", "norm", "scatterer_leak", "refinement_residual", "status", "reason"})
    cols.emplace_back(c);
  return cols;
}

const std::vector<std::string>& larmor_columns() {
  static const std::vector<std::string> cols = {"df",          "df_over_tau0",  "mean_reading",
                                                "re_complex_time", "im_complex_time", "reading_minus_re_time",
                                                "transmitted_weight", "status",   "reason"};
  return cols;
}

double launch_position(const Scenario& sc, double width) {
  return sc.start_fixed.value_or(sc.start_over_width * width);
}

Row run_delay_task(const Scenario& sc, const Task& task, double grid_scale) {
  Row row;
  row.task = task;
  const std::size_t n_cols = delay_columns(task.channel).size() - 2;
  auto skip = [&](RowStatus status, const std::string& why) {
    row.status = status;
    row.reason = why;
    row.cells.assign(n_cols, "");
    row.cells[0] = std::string(to_string(task.law.law));
    row.cells[1] = format_number(task.width);
    return row;
  };
  const double start = launch_position(sc, task.width);
  // Packet spec in launch coordinates: radial packets are given by r_I > 0.
  PacketSpec packet{sc.p, task.width, start, task.law};
  PacketSpec mirror = packet;
  if (task.channel == Channel::Radial) mirror.x_start = -start;
  double t = 0.0;
  try {
    mirror.check_separation(sc.separation);
    t = sc.time_fixed ? *sc.time_fixed : completed_event_time(packet, sc.separation);
  } catch (const DomainError& e) {
    return skip(RowStatus::Skipped, e.what());
  }
  DelayMeasurement m;
  try {
    m = measure_delay(packet, sc.potential, task.channel, t, {grid_scale, sc.refine});
  } catch (const ConvergenceError& e) {
    return skip(RowStatus::Unconverged, e.what());
  } catch (const DomainError& e) {
    return skip(RowStatus::Skipped, e.what());
  }
  const double s = strength(sc.potential);
  auto& c = row.cells;
  c.emplace_back(to_string(task.law.law));
  c.push_back(format_number(task.width));
  c.push_back(format_number(start));
  c.push_back(format_number(t));
  c.push_back(format_number(s * task.width));
  c.push_back(format_number(s * start));
  c.push_back(format_number(s * task.law.velocity(sc.p) * t));
  c.push_back(format_number(m.real_space.delay));
  c.push_back(format_number(m.spectral.delay));
  c.push_back(format_number(s * m.real_space.delay));
  c.push_back(format_number(m.real_space.asymptote));
  if (task.channel == Channel::Reflected) {
    c.push_back(sc.potential.kind == PotentialKind::ZeroRange && sc.potential.omega != 0.0
                    ? format_number(asymptote_reflection_narrow(sc.potential.omega))
                    : "");
  }
  c.push_back(format_number(m.filtering_term));
  c.push_back(format_number(m.real_space.norm));
  c.push_back(format_number(m.scatterer_leak));
  c.push_back(m.refinement_residual >= 0.0 ? format_number(m.refinement_residual) : "");
  if (m.refinement_residual > kRefinementTolerance) {
    row.status = RowStatus::Unconverged;
    row.reason = "grid refinement changed the delay by " + format_number(m.refinement_residual);
  } else if (!m.completed) {
    row.status = RowStatus::Flagged;
    row.reason = "event not completed: leak " + format_number(m.scatterer_leak);
  } else if (!m.methods_agree()) {
    row.status = RowStatus::Flagged;
    row.reason = "real-space and spectral COM disagree";
  }
  return row;
}

Row run_larmor_task(const Scenario& sc, const Task& task) {
  Row row;
  row.task = task;
  const double tau0 = sc.potential.width() / sc.p;
  try {
    const PointerSpec pointer{task.width};
    const auto tau = complex_time(sc.p, sc.potential).value;
    const double reading = mean_pointer_reading(pointer, sc.p, sc.potential);
    const double weight = transmitted_weight(pointer, sc.p, sc.potential);
    row.cells = {format_number(task.width),  format_number(task.width / tau0), format_number(reading),
                 format_number(tau.real()),  format_number(tau.imag()),        format_number(reading - tau.real()),
                 format_number(weight)};
  } catch (const ConvergenceError& e) {
    row.status = RowStatus::Unconverged;
    row.reason = e.what();
  } catch (const DomainError& e) {
    row.status = RowStatus::Skipped;
    row.reason = e.what();
  }
  if (row.cells.empty()) row.cells = {format_number(task.width), "", "", "", "", "", ""};
  return row;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

std::string hex_hash(std::uint64_t h) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void write_table(const std::filesystem::path& path, const Scenario& sc, std::string_view channel,
                 const std::vector<std::string>& columns, const std::vector<const Row*>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "# zrdelay " << kToolVersion << "\n";
  out << "# schema " << kTableSchemaVersion << "\n";
  out << "# scenario " << sc.name << "\n";
  out << "# config_hash " << hex_hash(sc.config_hash) << "\n";
  out << "# channel " << channel << "\n";
  for (std::size_t i = 0; i < columns.size(); ++i) out << (i ? "," : "") << columns[i];
  out << "\n";
  for (const Row* row : rows) {
    for (const auto& cell : row->cells) out << csv_escape(cell) << ",";
    out << to_string(row->status) << "," << csv_escape(row->reason) << "\n";
  }
}

// Initial and final densities for one packet, plus the narrow-packet
// limiting shape for dispersionless reflection.
void append_wave_panels(std::ostream& out, const Scenario& sc, const Task& task, double grid_scale) {
  const double start = launch_position(sc, task.width);
  PacketSpec packet{sc.p, task.width, task.channel == Channel::Radial ? -start : start, task.law};
  const double t = sc.time_fixed ? *sc.time_fixed : completed_event_time(packet, sc.separation);
  const std::string tag = std::string(to_string(task.law.law)) + "_dx=" + format_number(task.width) + "_";
  auto emit = [&](const std::string& panel, const SpatialGrid& grid, const std::function<double(std::size_t)>& rho) {
    const std::size_t stride = std::max<std::size_t>(1, (grid.n + 1999) / 2000);
    const double flip = task.channel == Channel::Radial && panel.find("initial") != std::string::npos ? -1.0 : 1.0;
    for (std::size_t j = 0; j < grid.n; j += stride)
      out << tag << panel << "," << format_number(flip * grid.at(j)) << "," << format_number(rho(j)) << "\n";
  };

  const auto free_plan = plan_grid(packet, sc.potential, Channel::Free, 0.0, grid_scale);
  const auto spectral0 = gaussian_spectral(packet, free_plan.n_k);
  const auto initial = synthesize_free(spectral0, 0.0, free_plan.grid);
  emit("initial", initial.grid, [&](std::size_t j) { return std::norm(initial.values[j]); });

  const auto plan = plan_grid(packet, sc.potential, task.channel, t, grid_scale);
  const auto spectral = gaussian_spectral(packet, plan.n_k);
  const auto wave = synthesize_channel(spectral, sc.potential, task.channel, t, plan.grid);
  emit(std::string("final_") + std::string(to_string(task.channel)), wave.grid,
       [&](std::size_t j) { return std::norm(wave.values[j]); });

  if (task.channel == Channel::Reflected && !task.law.dispersive() &&
      sc.potential.kind == PotentialKind::ZeroRange && sc.potential.omega != 0.0) {
    const double om = sc.potential.omega;
    const double mirror_center = channel_reference_center(packet, Channel::Reflected, t);
    const double side = om > 0.0 ? 1.0 : -1.0;
    emit("narrow_limit", wave.grid, [&](std::size_t j) {
      const double d = side * (wave.grid.at(j) - mirror_center);
      return d < 0.0 ? 0.0 : std::sqrt(2.0 * kPi) * task.width * om * om * std::exp(-2.0 * std::abs(om) * d);
    });
  }
}

}  // namespace

RunSummary run_scenario(const Scenario& sc, const RunOptions& options) {
  if (!(options.grid_scale >= 1.0)) throw DomainError("grid scale override must be >= 1");
  const double grid_scale = sc.grid_scale * options.grid_scale;

  std::vector<Channel> channels;
  switch (sc.mode) {
    case ScenarioMode::TransmitSweep: channels = {Channel::Transmitted}; break;
    case ScenarioMode::ReflectSweep: channels = {Channel::Reflected}; break;
    case ScenarioMode::RadialSweep: channels = {Channel::Radial}; break;
    case ScenarioMode::LarmorSweep: channels = {Channel::Free}; break;
    case ScenarioMode::SingleShot: channels = {Channel::Transmitted, Channel::Reflected}; break;
  }
  const bool larmor = sc.mode == ScenarioMode::LarmorSweep;
  std::vector<Task> tasks;
  for (Channel ch : channels) {
    if (larmor) {
      for (double w : sc.widths) tasks.push_back({Dispersion::quadratic(), w, ch});
      continue;
    }
    for (const auto& law : sc.laws)
      for (double w : sc.widths) tasks.push_back({law, w, ch});
  }

  std::vector<Row> rows(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++)
      rows[i] = larmor ? run_larmor_task(sc, tasks[i]) : run_delay_task(sc, tasks[i], grid_scale);
  };
  const unsigned jobs = std::max(1u, std::min<unsigned>(options.jobs, static_cast<unsigned>(tasks.size())));
  std::vector<std::thread> pool;
  for (unsigned j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  std::filesystem::create_directories(options.out_dir);
  RunSummary summary;
  summary.rows = rows.size();
  for (const auto& r : rows) {
    switch (r.status) {
      case RowStatus::Ok: ++summary.ok; break;
      case RowStatus::Flagged: ++summary.flagged; break;
      case RowStatus::Skipped: ++summary.skipped; break;
      case RowStatus::Unconverged: ++summary.unconverged; break;
    }
  }

  for (Channel ch : channels) {
    std::vector<const Row*> selected;
    for (const auto& r : rows)
      if (r.task.channel == ch) selected.push_back(&r);
    const std::string label = larmor ? "larmor" : std::string(to_string(ch));
    const auto path = options.out_dir / (sc.name + "_" + label + ".csv");
    write_table(path, sc, label, larmor ? larmor_columns() : delay_columns(ch), selected);
    summary.files.push_back(path);
  }

  if (!sc.dump_widths.empty()) {
    const auto path = options.out_dir / (sc.name + "_waves.csv");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << "# zrdelay " << kToolVersion << "\n# scenario " << sc.name << "\n# config_hash "
        << hex_hash(sc.config_hash) << "\npanel,x,density\n";
    for (const auto& task : tasks) {
      const bool wanted =
          std::any_of(sc.dump_widths.begin(), sc.dump_widths.end(), [&](double w) { return same_width(w, task.width); });
      if (!wanted) continue;
      try {
        append_wave_panels(out, sc, task, grid_scale);
      } catch (const DomainError&) {
        // Skipped sweep points have nothing to dump; their rows say why.
      }
    }
    summary.files.push_back(path);
  }

  nlohmann::ordered_json manifest;
  manifest["tool"] = "zrdelay";
  manifest["version"] = kToolVersion;
  manifest["schema"] = kTableSchemaVersion;
  manifest["config_hash"] = hex_hash(sc.config_hash);
  auto& s = manifest["scenario"];
  s["name"] = sc.name;
  s["description"] = sc.description;
  s["mode"] = to_string(sc.mode);
  auto& pot = s["potential"];
  pot["kind"] = to_string(sc.potential.kind);
  switch (sc.potential.kind) {
    case PotentialKind::ZeroRange: pot["omega"] = sc.potential.omega; break;
    case PotentialKind::Rectangular:
      pot["height"] = sc.potential.height;
      pot["left"] = sc.potential.left;
      pot["right"] = sc.potential.right;
      break;
    case PotentialKind::RadialZeroRange: pot["alpha"] = sc.potential.alpha; break;
  }
  s["p"] = sc.p;
  s["laws"] = nlohmann::ordered_json::array();
  for (const auto& law : sc.laws) {
    nlohmann::ordered_json l;
    l["law"] = to_string(law.law);
    if (!law.dispersive()) {
      l["speed"] = law.speed;
      if (sc.potential.kind == PotentialKind::ZeroRange) l["omega_over_c"] = sc.potential.omega / law.speed;
      l["mc_over_p"] = law.speed / sc.p;
    }
    s["laws"].push_back(l);
  }
  if (sc.start_fixed) {
    s["start"] = *sc.start_fixed;
  } else {
    s["start_over_width"] = sc.start_over_width;
  }
  s["widths"] = sc.widths;
  if (sc.time_fixed) {
    s["time"] = *sc.time_fixed;
  } else {
    s["separation"] = sc.separation;
  }
  s["grid_scale"] = grid_scale;
  s["refine"] = sc.refine;
  auto& tol = manifest["tolerances"];
  tol["refinement_residual"] = kRefinementTolerance;
  tol["completed_leak"] = kCompletedLeakTolerance;
  tol["method_agreement_relative"] = 1e-6;
  tol["method_agreement_absolute"] = 1e-9;
  auto& counts = manifest["rows"];
  counts["total"] = summary.rows;
  counts["ok"] = summary.ok;
  counts["flagged"] = summary.flagged;
  counts["skipped"] = summary.skipped;
  counts["unconverged"] = summary.unconverged;
  manifest["outputs"] = nlohmann::ordered_json::array();
  for (const auto& f : summary.files) manifest["outputs"].push_back(f.filename().string());

  const auto manifest_path = options.out_dir / (sc.name + "_manifest.json");
  std::ofstream mout(manifest_path, std::ios::binary);
  if (!mout) throw std::runtime_error("cannot write " + manifest_path.string());
  mout << manifest.dump(2) << "\n";
  summary.files.push_back(manifest_path);
  return summary;
}

}  // namespace zrdelay
