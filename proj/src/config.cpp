#include "hullcap/config.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <functional>
#include <limits>
#include <map>
#include <sstream>

#include "hullcap/field_io.hpp"
#include "hullcap/study.hpp"
#include "hullcap/warped_radial.hpp"

namespace hullcap {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  if (trim(s).empty()) return out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  return out;
}

double to_double(const std::string& s) {
  double v = 0.0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size()) throw std::invalid_argument("expected a number, got '" + s + "'");
  return v;
}

long long to_int(const std::string& s) {
  long long v = 0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size()) throw std::invalid_argument("expected an integer, got '" + s + "'");
  return v;
}

std::uint64_t to_uint(const std::string& s) {
  std::uint64_t v = 0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size()) {
    throw std::invalid_argument("expected a nonnegative integer, got '" + s + "'");
  }
  return v;
}

bool to_bool(const std::string& s) {
  if (s == "true" || s == "yes" || s == "on" || s == "1") return true;
  if (s == "false" || s == "no" || s == "off" || s == "0") return false;
  throw std::invalid_argument("expected true or false, got '" + s + "'");
}

template <typename T>
std::string join(const std::vector<T>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    if constexpr (std::is_same_v<T, double>) {
      out += format_double(v[i]);
    } else if constexpr (std::is_same_v<T, std::string>) {
      out += v[i];
    } else {
      out += std::to_string(v[i]);
    }
  }
  return out;
}

struct Binding {
  SchemaEntry meta;
  std::function<void(RunConfig&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};

template <typename Get>
Binding bind(std::string section, std::string key, std::string doc, Get access) {
  using T = std::remove_reference_t<decltype(access(std::declval<RunConfig&>()))>;
  Binding b;
  b.meta.section = std::move(section);
  b.meta.key = std::move(key);
  b.meta.doc = std::move(doc);
  if constexpr (std::is_same_v<T, std::string>) {
    b.meta.type = "string";
    b.set = [access](RunConfig& c, const std::string& v) { access(c) = v; };
    b.get = [access](const RunConfig& c) { return access(const_cast<RunConfig&>(c)); };
  } else if constexpr (std::is_same_v<T, bool>) {
    b.meta.type = "bool";
    b.set = [access](RunConfig& c, const std::string& v) { access(c) = to_bool(v); };
    b.get = [access](const RunConfig& c) { return std::string(access(const_cast<RunConfig&>(c)) ? "true" : "false"); };
  } else if constexpr (std::is_same_v<T, int>) {
    b.meta.type = "int";
    b.set = [access](RunConfig& c, const std::string& v) {
      const long long x = to_int(v);
      if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max()) {
        throw std::invalid_argument("integer out of range");
      }
      access(c) = static_cast<int>(x);
    };
    b.get = [access](const RunConfig& c) { return std::to_string(access(const_cast<RunConfig&>(c))); };
  } else if constexpr (std::is_same_v<T, std::uint64_t>) {
    b.meta.type = "uint";
    b.set = [access](RunConfig& c, const std::string& v) { access(c) = to_uint(v); };
    b.get = [access](const RunConfig& c) { return std::to_string(access(const_cast<RunConfig&>(c))); };
  } else if constexpr (std::is_same_v<T, double>) {
    b.meta.type = "real";
    b.set = [access](RunConfig& c, const std::string& v) { access(c) = to_double(v); };
    b.get = [access](const RunConfig& c) { return format_double(access(const_cast<RunConfig&>(c))); };
  } else if constexpr (std::is_same_v<T, std::vector<double>>) {
    b.meta.type = "real list";
    b.set = [access](RunConfig& c, const std::string& v) {
      std::vector<double> out;
      for (const auto& s : split_list(v)) out.push_back(to_double(s));
      access(c) = out;
    };
    b.get = [access](const RunConfig& c) { return join(access(const_cast<RunConfig&>(c))); };
  } else if constexpr (std::is_same_v<T, std::vector<int>>) {
    b.meta.type = "int list";
    b.set = [access](RunConfig& c, const std::string& v) {
      std::vector<int> out;
      for (const auto& s : split_list(v)) out.push_back(static_cast<int>(to_int(s)));
      access(c) = out;
    };
    b.get = [access](const RunConfig& c) { return join(access(const_cast<RunConfig&>(c))); };
  } else if constexpr (std::is_same_v<T, std::vector<std::string>>) {
    b.meta.type = "string list";
    b.set = [access](RunConfig& c, const std::string& v) { access(c) = split_list(v); };
    b.get = [access](const RunConfig& c) { return join(access(const_cast<RunConfig&>(c))); };
  } else if constexpr (std::is_same_v<T, Point3>) {
    b.meta.type = "real list";
    b.set = [access](RunConfig& c, const std::string& v) {
      const auto parts = split_list(v);
      if (parts.size() < 2 || parts.size() > 3) throw std::invalid_argument("expected 2 or 3 coordinates");
      Point3 p{0.0, 0.0, 0.0};
      for (std::size_t i = 0; i < parts.size(); ++i) p[i] = to_double(parts[i]);
      access(c) = p;
    };
    b.get = [access](const RunConfig& c) {
      const Point3& p = access(const_cast<RunConfig&>(c));
      return join(std::vector<double>{p[0], p[1], p[2]});
    };
  }
  b.meta.default_value = b.get(RunConfig{});
  return b;
}

#define HC_KEY(section, key, doc, expr) bind(section, key, doc, [](RunConfig& c) -> auto& { return expr; })

const std::vector<Binding>& bindings() {
  static const std::vector<Binding> all = {
      HC_KEY("run", "command", "hull, pcap, limit, radial, iso-profile, symmetrize, eigen or verify", c.command),
      HC_KEY("run", "output", "output directory", c.output),
      HC_KEY("run", "seed", "base seed for randomised steps", c.seed),
      HC_KEY("run", "deterministic", "omit wall time from the manifest", c.deterministic),
      HC_KEY("run", "threads", "worker threads for independent solves", c.threads),
      HC_KEY("domain", "dim", "2 or 3", c.dim),
      HC_KEY("domain", "grid", "cells per axis", c.grid),
      HC_KEY("domain", "lo", "lower corner coordinate on every axis", c.lo),
      HC_KEY("domain", "extent", "box side length", c.extent),
      HC_KEY("domain", "profile", "warped profile for radial runs", c.profile),
      HC_KEY("domain", "profile_a", "slope of the cone profiles", c.profile_a),
      HC_KEY("obstacle", "shape", "preset name", c.shape.name),
      HC_KEY("obstacle", "center", "preset centre", c.shape.center),
      HC_KEY("obstacle", "radius", "preset radius", c.shape.radius),
      HC_KEY("obstacle", "points", "star points", c.shape.points),
      HC_KEY("obstacle", "amplitude", "star indentation", c.shape.amplitude),
      HC_KEY("obstacle", "rotation", "star rotation (radians)", c.shape.rotation),
      HC_KEY("obstacle", "gap", "dumbbell gap", c.shape.gap),
      HC_KEY("obstacle", "bar_width", "dumbbell bar width", c.shape.bar_width),
      HC_KEY("obstacle", "side", "dumbbell square side", c.shape.side),
      HC_KEY("obstacle", "arm_length", "cross arm length", c.shape.arm_length),
      HC_KEY("obstacle", "arm_width", "cross arm width", c.shape.arm_width),
      HC_KEY("obstacle", "fourier", "blob cosine coefficients", c.shape.fourier),
      HC_KEY("obstacle", "mask_file", "binary mask replacing the preset", c.mask_file),
      HC_KEY("solver", "max_iters", "primal-dual iteration cap", c.max_iters),
      HC_KEY("solver", "gap_tol", "relative primal-dual gap target", c.gap_tol),
      HC_KEY("solver", "box_padding", "empty cell layers required around the obstacle", c.box_padding),
      HC_KEY("solver", "threshold", "level of the relaxed minimiser taken as the hull", c.threshold),
      HC_KEY("plaplace", "p", "exponent for pcap", c.p),
      HC_KEY("plaplace", "p_schedule", "decreasing exponents for limit", c.p_schedule),
      HC_KEY("plaplace", "epsilon_schedule", "decreasing gradient regularisation", c.epsilon_schedule),
      HC_KEY("plaplace", "radii", "increasing truncation radii", c.radii),
      HC_KEY("plaplace", "center", "centre of the truncation balls", c.center),
      HC_KEY("plaplace", "inner_tol", "relative energy change per lagged step", c.inner_tol),
      HC_KEY("plaplace", "max_outer", "lagged steps per epsilon", c.max_outer),
      HC_KEY("plaplace", "mirror", "grid is the positive sector of a symmetric problem", c.mirror),
      HC_KEY("plaplace", "multilevel", "coarse-grid warm start", c.multilevel),
      HC_KEY("radial", "rho0", "radius of the inner ball", c.rho0),
      HC_KEY("radial", "p_list", "exponents for radial capacities", c.p_list),
      HC_KEY("iso", "container", "obstacle or hull", c.container),
      HC_KEY("iso", "volume_fractions", "increasing fractions of the container volume", c.volume_fractions),
      HC_KEY("iso", "seeds", "center, corner, wall", c.seeds),
      HC_KEY("iso", "tau_factor", "time step in units of h times the volume radius", c.tau_factor),
      HC_KEY("iso", "max_steps", "flow steps per seed", c.max_steps),
      HC_KEY("iso", "W", "conical profile constant, 0 for the profile default", c.W),
      HC_KEY("symmetrize", "trials", "random fields", c.trials),
      HC_KEY("symmetrize", "t_count", "levels of the distribution function", c.t_count),
      HC_KEY("symmetrize", "C_g", "isoperimetric constant factor", c.C_g),
      HC_KEY("eigen", "avr", "asymptotic volume ratio for the bound", c.avr),
      HC_KEY("eigen", "tol", "relative eigenvalue change", c.eigen_tol),
      HC_KEY("verify", "fast", "reduced resolutions", c.fast),
      HC_KEY("verify", "only", "criteria to run, empty for all", c.only),
  };
  return all;
}

#undef HC_KEY

std::vector<std::string> section_names() {
  std::vector<std::string> out;
  for (const auto& b : bindings()) {
    if (std::find(out.begin(), out.end(), b.meta.section) == out.end()) out.push_back(b.meta.section);
  }
  return out;
}

[[noreturn]] void fail(const std::string& origin, int line, const std::string& msg) {
  throw ConfigError(origin + ":" + (line > 0 ? std::to_string(line) : std::string("?")) + ": " + msg);
}

using LineMap = std::map<std::string, int>;

void validate_impl(const RunConfig& c, const std::string& origin, const LineMap& lines) {
  auto check = [&](bool ok, const std::string& qualified, const std::string& msg) {
    if (ok) return;
    const auto it = lines.find(qualified);
    fail(origin, it == lines.end() ? 0 : it->second, qualified + ": " + msg);
  };
  const auto& cmds = command_names();
  check(std::find(cmds.begin(), cmds.end(), c.command) != cmds.end(), "run.command",
        "unknown command '" + c.command + "'");
  check(!c.output.empty(), "run.output", "must not be empty");
  check(c.threads >= 1, "run.threads", "must be at least 1");
  check(c.dim == 2 || c.dim == 3, "domain.dim", "must be 2 or 3");
  check(c.grid >= 8, "domain.grid", "must be at least 8");
  check(c.extent > 0.0, "domain.extent", "must be positive");
  const auto& profiles = profile_names();
  check(std::find(profiles.begin(), profiles.end(), c.profile) != profiles.end(), "domain.profile",
        "unknown profile '" + c.profile + "'");
  const auto& shapes = shape_names();
  check(std::find(shapes.begin(), shapes.end(), c.shape.name) != shapes.end(), "obstacle.shape",
        "unknown preset '" + c.shape.name + "'");
  check(c.mask_file.empty() || std::filesystem::exists(c.mask_file), "obstacle.mask_file",
        "file '" + c.mask_file + "' does not exist");
  check(c.max_iters > 0, "solver.max_iters", "must be positive");
  check(c.gap_tol > 0.0, "solver.gap_tol", "must be positive");
  check(c.box_padding >= 1, "solver.box_padding", "must be at least 1");
  check(c.threshold > 0.0 && c.threshold < 1.0, "solver.threshold", "must lie in (0, 1)");
  check(c.p > 1.0 && c.p < c.dim, "plaplace.p", "must lie in (1, dim)");
  check(!c.p_schedule.empty(), "plaplace.p_schedule", "must not be empty");
  for (std::size_t i = 0; i < c.p_schedule.size(); ++i) {
    check(c.p_schedule[i] > 1.0 && c.p_schedule[i] < c.dim, "plaplace.p_schedule", "entries must lie in (1, dim)");
    check(i == 0 || c.p_schedule[i] < c.p_schedule[i - 1], "plaplace.p_schedule", "must decrease");
  }
  check(!c.epsilon_schedule.empty(), "plaplace.epsilon_schedule", "must not be empty");
  for (std::size_t i = 0; i < c.epsilon_schedule.size(); ++i) {
    check(c.epsilon_schedule[i] > 0.0, "plaplace.epsilon_schedule", "entries must be positive");
    check(i == 0 || c.epsilon_schedule[i] < c.epsilon_schedule[i - 1], "plaplace.epsilon_schedule", "must decrease");
  }
  check(!c.radii.empty(), "plaplace.radii", "must not be empty");
  for (std::size_t i = 0; i < c.radii.size(); ++i) {
    check(c.radii[i] > 0.0 && (i == 0 || c.radii[i] > c.radii[i - 1]), "plaplace.radii",
          "must be positive and increasing");
  }
  check(c.center.size() == static_cast<std::size_t>(c.dim), "plaplace.center", "needs one coordinate per axis");
  check(c.inner_tol > 0.0, "plaplace.inner_tol", "must be positive");
  check(c.max_outer > 0, "plaplace.max_outer", "must be positive");
  check(c.rho0 > 0.0, "radial.rho0", "must be positive");
  for (double p : c.p_list) check(p > 1.0, "radial.p_list", "entries must exceed 1");
  check(c.container == "obstacle" || c.container == "hull", "iso.container", "must be obstacle or hull");
  for (std::size_t i = 0; i < c.volume_fractions.size(); ++i) {
    const double f = c.volume_fractions[i];
    check(f > 0.0 && f < 1.0 && (i == 0 || f > c.volume_fractions[i - 1]), "iso.volume_fractions",
          "must increase within (0, 1)");
  }
  check(!c.seeds.empty(), "iso.seeds", "must not be empty");
  for (const auto& s : c.seeds) {
    check(s == "center" || s == "corner" || s == "wall", "iso.seeds", "unknown seed '" + s + "'");
  }
  check(c.tau_factor > 0.0, "iso.tau_factor", "must be positive");
  check(c.max_steps > 0, "iso.max_steps", "must be positive");
  check(c.W >= 0.0, "iso.W", "must be nonnegative");
  check(c.trials >= 1, "symmetrize.trials", "must be at least 1");
  check(c.t_count >= 2, "symmetrize.t_count", "must be at least 2");
  check(c.C_g > 0.0 && c.C_g <= 1.0, "symmetrize.C_g", "must lie in (0, 1]");
  check(c.avr > 0.0 && c.avr <= 1.0, "eigen.avr", "must lie in (0, 1]");
  check(c.eigen_tol > 0.0, "eigen.tol", "must be positive");
  for (int k : c.only) check(k >= 1 && k <= 14, "verify.only", "entries must lie in 1..14");
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {"hull", "pcap", "limit", "radial", "iso-profile", "symmetrize",
                                                 "eigen", "verify"};
  return names;
}

const std::vector<SchemaEntry>& config_schema() {
  static const std::vector<SchemaEntry> schema = [] {
    std::vector<SchemaEntry> out;
    for (const auto& b : bindings()) out.push_back(b.meta);
    return out;
  }();
  return schema;
}

std::string nearest_name(const std::string& name, const std::vector<std::string>& candidates) {
  std::string best;
  std::size_t best_d = std::numeric_limits<std::size_t>::max();
  for (const auto& c : candidates) {
    std::vector<std::size_t> row(c.size() + 1);
    for (std::size_t j = 0; j <= c.size(); ++j) row[j] = j;
    for (std::size_t i = 1; i <= name.size(); ++i) {
      std::size_t diag = row[0];
      row[0] = i;
      for (std::size_t j = 1; j <= c.size(); ++j) {
        const std::size_t up = row[j];
        row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (name[i - 1] == c[j - 1] ? 0u : 1u)});
        diag = up;
      }
    }
    if (row[c.size()] < best_d) {
      best_d = row[c.size()];
      best = c;
    }
  }
  const std::size_t limit = std::max<std::size_t>(2, name.size() / 3);
  return best_d <= limit ? best : std::string();
}

RunConfig parse_config_text(const std::string& text, const std::string& origin) {
  RunConfig cfg;
  LineMap lines;
  std::string section;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  const auto sections = section_names();
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = raw;
    const auto hash = line.find_first_of("#;");
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') fail(origin, lineno, "malformed section header '" + line + "'");
      section = trim(std::string_view(line).substr(1, line.size() - 2));
      if (std::find(sections.begin(), sections.end(), section) == sections.end()) {
        const std::string near = nearest_name(section, sections);
        fail(origin, lineno,
             "unknown section [" + section + "]" + (near.empty() ? "" : "; did you mean [" + near + "]?"));
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail(origin, lineno, "expected 'key = value', got '" + line + "'");
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    if (section.empty()) fail(origin, lineno, "key '" + key + "' appears before any [section]");
    const Binding* hit = nullptr;
    std::vector<std::string> keys_here;
    for (const auto& b : bindings()) {
      if (b.meta.section != section) continue;
      keys_here.push_back(b.meta.key);
      if (b.meta.key == key) hit = &b;
    }
    if (!hit) {
      const std::string near = nearest_name(key, keys_here);
      fail(origin, lineno,
           "unknown key '" + key + "' in [" + section + "]" + (near.empty() ? "" : "; did you mean '" + near + "'?"));
    }
    const std::string qualified = section + "." + key;
    if (lines.count(qualified)) {
      fail(origin, lineno, "duplicate key '" + key + "' (first set on line " + std::to_string(lines[qualified]) + ")");
    }
    lines[qualified] = lineno;
    try {
      hit->set(cfg, value);
    } catch (const std::invalid_argument& e) {
      fail(origin, lineno, qualified + ": " + e.what());
    }
  }
  // Centres default to the origin in the configured dimension.
  if (!lines.count("plaplace.center")) cfg.center.assign(cfg.dim, 0.0);
  validate_impl(cfg, origin, lines);
  return cfg;
}

RunConfig parse_config(const std::string& path) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const std::exception& e) {
    throw ConfigError(path + ":0: cannot read config (" + e.what() + ")");
  }
  return parse_config_text(text, path);
}

std::string emit_config(const RunConfig& config) {
  std::string out;
  std::string section;
  for (const auto& b : bindings()) {
    if (b.meta.section != section) {
      if (!section.empty()) out += "\n";
      section = b.meta.section;
      out += "[" + section + "]\n";
    }
    out += b.meta.key + " = " + b.get(config) + "\n";
  }
  return out;
}

void validate_config(const RunConfig& config, const std::string& origin) { validate_impl(config, origin, {}); }

}  // namespace hullcap
