#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hullcap/errors.hpp"
#include "hullcap/shapes.hpp"

namespace hullcap {

/// Config file problem, message prefixed with "file:line: ".
class ConfigError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

/// Every field of an INI run file. Section and key names mirror the members;
/// `config_schema()` lists them with defaults.
struct RunConfig {
  // [run]
  std::string command = "hull";
  std::string output = "out";
  std::uint64_t seed = 0;
  bool deterministic = false;
  int threads = 1;

  // [domain]
  int dim = 2;
  /// Cells per axis.
  int grid = 256;
  double lo = -1.0;
  double extent = 2.0;
  std::string profile = "flat";
  double profile_a = 0.5;

  // [obstacle]
  ShapeSpec shape;
  std::string mask_file;

  // [solver]
  int max_iters = 20000;
  double gap_tol = 1e-3;
  int box_padding = 8;
  double threshold = 0.5;

  // [plaplace]
  double p = 1.5;
  std::vector<double> p_schedule{1.4, 1.2, 1.1, 1.05};
  std::vector<double> epsilon_schedule{1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
  std::vector<double> radii{1.0};
  std::vector<double> center{0.0, 0.0};
  double inner_tol = 1e-7;
  int max_outer = 60;
  bool mirror = false;
  bool multilevel = true;

  // [radial]
  double rho0 = 1.0;
  std::vector<double> p_list{1.2, 1.5, 2.0};

  // [iso]
  std::string container = "obstacle";
  std::vector<double> volume_fractions{0.02, 0.05, 0.1, 0.2, 0.35, 0.5, 0.7, 0.9};
  std::vector<std::string> seeds{"center", "corner"};
  double tau_factor = 2.0;
  int max_steps = 80;
  /// Profile constant for the conical comparison; 0 means AVR of `profile` times |S^{n-1}|.
  double W = 0.0;

  // [symmetrize]
  int trials = 100;
  int t_count = 2048;
  double C_g = 1.0;

  // [eigen]
  double avr = 1.0;
  double eigen_tol = 1e-8;

  // [verify]
  bool fast = false;
  std::vector<int> only;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

const std::vector<std::string>& command_names();

struct SchemaEntry {
  std::string section;
  std::string key;
  std::string type;
  std::string default_value;
  std::string doc;
};

/// All keys in emit order.
const std::vector<SchemaEntry>& config_schema();

RunConfig parse_config_text(const std::string& text, const std::string& origin = "<string>");
RunConfig parse_config(const std::string& path);

/// Normalised INI text; parse_config_text(emit_config(c)) == c.
std::string emit_config(const RunConfig& config);

/// Cross-field checks; throws ConfigError naming the offending key.
void validate_config(const RunConfig& config, const std::string& origin = "<config>");

/// Closest candidate by edit distance, or empty when nothing is close.
std::string nearest_name(const std::string& name, const std::vector<std::string>& candidates);

}  // namespace hullcap
