#pragma once

#include <iosfwd>
#include <string>
#include <string_view>

#include "hullcap/config.hpp"
#include "hullcap/grid.hpp"

namespace hullcap {

inline constexpr const char* kToolVersion = "0.4.0";

/// Command-line overrides applied on top of the config file.
struct RunOptions {
  bool force = false;
  /// Replaces [run] output when non-empty.
  std::string out_override;
  /// Replaces [run] threads when positive.
  int threads_override = 0;
  /// Forces [run] deterministic on.
  bool deterministic = false;
  /// Progress lines; null for silence.
  std::ostream* log = nullptr;
};

struct RunManifest {
  /// manifest.json contents, byte for byte.
  std::string text;
  std::string path;
  bool cache_hit = false;
  bool authoritative = false;
  bool pass = false;
  /// 0 pass, 3 verdict failure.
  int exit_code = 0;
};

/// Dispatches on config.command and writes manifest.json, CSV tables and field
/// dumps under the output directory. A manifest whose config digest matches and
/// whose outputs still hash to the recorded values is returned as is unless
/// `force` is set.
///
/// Errors propagate with the command name prepended (InvalidArgument for bad
/// input, SolverError for failed solves); a non-authoritative manifest is left
/// behind first.
RunManifest run(RunConfig config, const RunOptions& options = {});

/// The grid described by [domain], or the mask file's grid when one is given.
GridPtr config_grid(const RunConfig& config);
/// The [obstacle] preset rasterised on `grid`, or the mask file.
RegionMask config_obstacle(const RunConfig& config, const GridPtr& grid);

std::string sha256_hex(std::string_view bytes);
std::string sha256_file(const std::string& path);

}  // namespace hullcap
