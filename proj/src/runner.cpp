#include "hullcap/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include <json.hpp>
#include <openssl/evp.h>

#include "hullcap/acceptance.hpp"
#include "hullcap/cap_limit.hpp"
#include "hullcap/errors.hpp"
#include "hullcap/field_core.hpp"
#include "hullcap/field_io.hpp"
#include "hullcap/hull_solver.hpp"
#include "hullcap/isoperimetry.hpp"
#include "hullcap/p_laplace.hpp"
#include "hullcap/shapes.hpp"
#include "hullcap/symmetrization.hpp"
#include "hullcap/warped_radial.hpp"

namespace hullcap {

namespace fs = std::filesystem;
using json = nlohmann::json;

std::string sha256_hex(std::string_view bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1) {
    throw SolverError("sha256: digest failed");
  }
  std::ostringstream os;
  for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << int(md[i]);
  return os.str();
}

std::string sha256_file(const std::string& path) { return sha256_hex(read_file(path)); }

GridPtr config_grid(const RunConfig& config) {
  if (!config.mask_file.empty()) return read_mask(config.mask_file).grid;
  return make_box_grid(config.dim, config.grid, config.lo, config.extent);
}

RegionMask config_obstacle(const RunConfig& config, const GridPtr& grid) {
  if (!config.mask_file.empty()) {
    RegionMask m = read_mask(config.mask_file);
    require(m.grid->same_shape(*grid), "mask file grid differs from the run grid");
    return RegionMask(grid, std::move(m.cells));
  }
  return rasterize(config.shape, grid);
}

namespace {

struct Outputs {
  fs::path dir;
  std::vector<std::string> files;

  void text(const std::string& name, const std::string& contents) {
    write_file((dir / name).string(), contents);
    files.push_back(name);
  }
  void field(const std::string& name, const ScalarField& f) {
    write_field((dir / name).string(), f);
    files.push_back(name);
  }
  void mask(const std::string& name, const RegionMask& m) {
    write_mask((dir / name).string(), m);
    files.push_back(name);
  }
};

struct Verdict {
  bool pass = false;
  json summary = json::object();
};

TvParams tv_params(const RunConfig& c) { return TvParams{.max_iters = c.max_iters, .gap_tol = c.gap_tol}; }

PLaplaceConfig potential_config(const RunConfig& c) {
  PLaplaceConfig pc;
  pc.p = c.p;
  pc.epsilon_schedule = c.epsilon_schedule;
  pc.radii_schedule = c.radii;
  pc.inner_tol = c.inner_tol;
  pc.max_outer = c.max_outer;
  pc.mirror = c.mirror;
  pc.multilevel = c.multilevel;
  for (std::size_t a = 0; a < c.center.size() && a < 3; ++a) pc.center[a] = c.center[a];
  return pc;
}

// Truncated closed form when the obstacle is a preset disk centred on the truncation balls.
std::function<double(double)> disk_oracle(const RunConfig& c) {
  if (!c.mask_file.empty() || c.shape.name != "disk") return {};
  for (int a = 0; a < c.dim; ++a) {
    if (std::abs(c.shape.center[a] - c.center[a]) > 1e-12) return {};
  }
  const WarpedProfile flat = preset_profile("flat", c.dim);
  const double r0 = c.shape.radius;
  const double R = c.radii.back();
  return [flat, r0, R](double p) { return radial_relative_capacity(flat, r0, R, p); };
}

json report_json(const SolveReport& r) {
  return json{{"solver", r.solver},       {"iterations", r.iterations}, {"objective", r.objective},
              {"gap", r.gap},             {"residual", r.residual},     {"converged", r.converged},
              {"notes", r.notes}};
}

Verdict run_hull(const RunConfig& c, Outputs& out) {
  const GridPtr grid = config_grid(c);
  const RegionMask obstacle = config_obstacle(c, grid);
  ObstacleProblem pb{grid, obstacle, c.box_padding, tv_params(c)};
  const HullResult h = compute_hull(pb, c.threshold);
  const double p_obstacle = mollified_perimeter(obstacle);
  StudyTable t({"obstacle_perimeter", "hull_perimeter", "hull_volume", "cap1_estimate", "outward_gap"});
  const double gap = p_obstacle > 0.0 ? (p_obstacle - h.hull_perimeter) / p_obstacle : 0.0;
  t.add_row({p_obstacle, h.hull_perimeter, h.hull_volume, h.cap1_estimate, gap});
  out.text("hull.csv", t.to_csv());
  out.field("relaxed.field", h.relaxed);
  out.mask("hull.mask", h.hull);
  Verdict v;
  v.pass = h.report.converged;
  v.summary = {{"hull_perimeter", h.hull_perimeter}, {"outward_gap", gap}, {"report", report_json(h.report)}};
  return v;
}

Verdict run_pcap(const RunConfig& c, Outputs& out) {
  const GridPtr grid = config_grid(c);
  const RegionMask obstacle = config_obstacle(c, grid);
  const PotentialResult r = solve_potential(grid, obstacle, potential_config(c));
  out.text("per_radius.csv", r.per_radius.to_csv());
  out.text("trace.csv", r.trace.to_csv());
  out.field("potential.field", r.potential);
  Verdict v;
  v.pass = r.report.converged;
  v.summary = {{"p", c.p}, {"capacity", r.capacity}, {"report", report_json(r.report)}};
  if (auto oracle = disk_oracle(c)) {
    const double o = oracle(c.p);
    v.summary["oracle"] = o;
    v.summary["oracle_gap"] = std::abs(r.capacity - o) / o;
  }
  return v;
}

Verdict run_limit(const RunConfig& c, Outputs& out) {
  const GridPtr grid = config_grid(c);
  const RegionMask obstacle = config_obstacle(c, grid);
  LimitStudyConfig lc;
  lc.p_schedule = c.p_schedule;
  lc.hull = ObstacleProblem{nullptr, {}, c.box_padding, tv_params(c)};
  lc.potential = potential_config(c);
  lc.oracle = disk_oracle(c);
  lc.threads = c.threads;
  const LimitStudy st = run_limit_study(grid, obstacle, lc);
  out.text("capacities.csv", st.capacities.to_csv());
  out.mask("hull.mask", st.hull.hull);
  Verdict v;
  v.pass = st.chain_ok;
  v.summary = {{"chain_ok", st.chain_ok},          {"hull_perimeter", st.hull_perimeter},
               {"cap1_estimate", st.cap1_estimate}, {"limit_gap", st.limit_gap},
               {"flags", st.flags},                 {"extrapolated_limit", extrapolate_limit(st.capacities)}};
  return v;
}

Verdict run_radial(const RunConfig& c, Outputs& out) {
  const WarpedProfile prof = preset_profile(c.profile, c.dim, c.profile_a);
  const RadialVerdict rv = radial_hull(prof, c.rho0);
  const AvrResult a = avr(prof);
  const RadialImcf im = radial_imcf(prof, c.rho0);
  StudyTable t({"p", "capacity", "parabolic", "integral"});
  t.metadata["profile"] = prof.name;
  t.metadata["verdict"] = to_string(rv.kind);
  for (double p : c.p_list) {
    const RadialCapacity rc = radial_p_capacity(prof, c.rho0, p);
    t.add_row({p, rc.capacity, rc.parabolic ? 1.0 : 0.0, rc.integral});
  }
  out.text("radial.csv", t.to_csv());
  Verdict v;
  v.pass = true;
  v.summary = {{"verdict", to_string(rv.kind)},
               {"witness_radius", rv.witness_radius},
               {"inf_area", rv.inf_area},
               {"avr", a.value},
               {"avr_converged", a.converged},
               {"imcf_sup", std::isfinite(im.sup) ? json(im.sup) : json("inf")},
               {"proper_but_bounded", im.proper_but_bounded}};
  if (!rv.note.empty()) v.summary["note"] = rv.note;
  return v;
}

Verdict run_iso(const RunConfig& c, Outputs& out) {
  const GridPtr grid = config_grid(c);
  RegionMask container = config_obstacle(c, grid);
  if (c.container == "hull") {
    container = compute_hull(ObstacleProblem{grid, container, c.box_padding, tv_params(c)}, c.threshold).hull;
  }
  const double vol = measure(container).volume;
  std::vector<double> volumes;
  for (double f : c.volume_fractions) volumes.push_back(f * vol);
  IsoConfig ic;
  ic.seeds = c.seeds;
  ic.tau_factor = c.tau_factor;
  ic.max_steps = c.max_steps;
  const IsoProfile prof = iso_profile(container, volumes, ic, c.threads);
  const double W = c.W > 0.0 ? c.W : avr(preset_profile(c.profile, c.dim, c.profile_a)).value * unit_sphere_area(c.dim);
  StudyTable t = prof.table();
  t.metadata["W"] = format_double(W);
  t.metadata["container_volume"] = format_double(vol);
  Verdict v;
  v.summary = {{"W", W}, {"container_volume", vol}};
  if (volumes.size() >= 8) {
    const DiniResult d = dini_comparison(prof, W);
    t.metadata["dini_monotone"] = d.monotone_ok ? "true" : "false";
    v.pass = d.monotone_ok;
    v.summary["dini_monotone"] = d.monotone_ok;
    v.summary["dini_increments"] = d.increments;
  } else {
    v.pass = true;
    v.summary["dini_monotone"] = "not evaluated (fewer than 8 volumes)";
  }
  out.text("iso_profile.csv", t.to_csv());
  return v;
}

Verdict run_symmetrize(const RunConfig& c, Outputs& out) {
  const GridPtr grid = config_grid(c);
  const CampaignResult r = polya_szego_campaign(grid, c.trials, c.seed, c.t_count, c.threads, c.C_g);
  out.text("campaign.csv", r.table.to_csv());
  Verdict v;
  v.pass = r.held == r.trials;
  v.summary = {{"trials", r.trials}, {"held", r.held}, {"max_l2_defect", r.max_l2_defect}};
  return v;
}

Verdict run_eigen(const RunConfig& c, Outputs& out) {
  const GridPtr grid = config_grid(c);
  const RegionMask support = config_obstacle(c, grid);
  const Eigenpair e = first_eigenvalue(support, c.eigen_tol);
  const double volume = measure(support).volume;
  const double bound = std::pow(c.avr, 2.0 / c.dim) * ball_first_eigenvalue(c.dim, volume);
  StudyTable t({"lambda1", "volume", "bound", "avr"});
  t.add_row({e.lambda1, volume, bound, c.avr});
  out.text("eigen.csv", t.to_csv());
  out.field("eigenfield.field", e.eigenfield);
  Verdict v;
  v.pass = e.lambda1 >= bound * (1.0 - 1e-2);
  v.summary = {{"lambda1", e.lambda1}, {"bound", bound}, {"report", report_json(e.report)}};
  return v;
}

Verdict run_verify(const RunConfig& c, Outputs& out, std::ostream* log) {
  AcceptanceOptions ao;
  ao.fast = c.fast;
  ao.only = c.only;
  ao.threads = c.threads;
  ao.seed = c.seed;
  ao.scratch_dir = (out.dir / "scratch").string();
  ao.deterministic = c.deterministic;
  ao.log = log;
  const auto results = run_acceptance(ao);
  fs::remove_all(ao.scratch_dir);
  out.text("verify.csv", results_csv(results));
  Verdict v;
  v.pass = acceptance_ok(results);
  json rows = json::array();
  for (const auto& r : results) {
    rows.push_back({{"id", r.id}, {"pass", r.pass}, {"expected_failure", r.expected_failure}});
  }
  v.summary = {{"criteria", rows}};
  return v;
}

json outputs_json(const Outputs& out) {
  json files = json::array();
  for (const auto& f : out.files) {
    const std::string bytes = read_file((out.dir / f).string());
    files.push_back({{"file", f}, {"sha256", sha256_hex(bytes)}, {"bytes", bytes.size()}});
  }
  return files;
}

// Cached manifest if it matches the digest and every recorded output still hashes the same.
std::optional<RunManifest> cached(const fs::path& path, const std::string& digest) {
  if (!fs::exists(path)) return std::nullopt;
  RunManifest m;
  m.text = read_file(path.string());
  json j = json::parse(m.text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) return std::nullopt;
  if (j.value("config_digest", std::string()) != digest || !j.value("authoritative", false)) return std::nullopt;
  for (const auto& f : j.value("outputs", json::array())) {
    const fs::path p = path.parent_path() / f.value("file", std::string());
    if (!fs::exists(p) || sha256_file(p.string()) != f.value("sha256", std::string())) return std::nullopt;
  }
  m.path = path.string();
  m.cache_hit = true;
  m.authoritative = true;
  m.pass = j.value("pass", false);
  m.exit_code = m.pass ? 0 : 3;
  return m;
}

}  // namespace

RunManifest run(RunConfig config, const RunOptions& options) {
  if (!options.out_override.empty()) config.output = options.out_override;
  if (options.threads_override > 0) config.threads = options.threads_override;
  if (options.deterministic) config.deterministic = true;
  validate_config(config);

  const std::string config_text = emit_config(config);
  const std::string digest = sha256_hex(config_text);
  const fs::path dir(config.output);
  const fs::path manifest_path = dir / "manifest.json";
  if (!options.force) {
    if (auto hit = cached(manifest_path, digest)) {
      if (options.log) *options.log << "cache hit: " << hit->path << "\n";
      return *hit;
    }
  }
  fs::create_directories(dir);

  json m;
  m["tool"] = "hullcap";
  m["version"] = kToolVersion;
  m["command"] = config.command;
  m["config"] = config_text;
  m["config_digest"] = digest;
  m["seed"] = config.seed;
  m["deterministic"] = config.deterministic;
  json inputs = json::array();
  if (!config.mask_file.empty()) {
    inputs.push_back({{"file", config.mask_file}, {"sha256", sha256_file(config.mask_file)}});
  }
  m["inputs"] = inputs;

  auto write_manifest = [&](const json& j) {
    RunManifest rm;
    rm.text = j.dump(2) + "\n";
    rm.path = manifest_path.string();
    write_file(rm.path, rm.text);
    rm.authoritative = j.value("authoritative", false);
    rm.pass = j.value("pass", false);
    rm.exit_code = rm.pass ? 0 : 3;
    return rm;
  };

  Outputs out{dir, {}};
  const auto t0 = std::chrono::steady_clock::now();
  if (options.log) *options.log << "running " << config.command << " -> " << dir.string() << "\n";
  Verdict verdict;
  try {
    const std::string& cmd = config.command;
    if (cmd == "hull") {
      verdict = run_hull(config, out);
    } else if (cmd == "pcap") {
      verdict = run_pcap(config, out);
    } else if (cmd == "limit") {
      verdict = run_limit(config, out);
    } else if (cmd == "radial") {
      verdict = run_radial(config, out);
    } else if (cmd == "iso-profile") {
      verdict = run_iso(config, out);
    } else if (cmd == "symmetrize") {
      verdict = run_symmetrize(config, out);
    } else if (cmd == "eigen") {
      verdict = run_eigen(config, out);
    } else {
      verdict = run_verify(config, out, options.log);
    }
  } catch (const std::exception& e) {
    const std::string msg = config.command + ": " + e.what();
    json fail = m;
    fail["wall_time_s"] = nullptr;
    fail["outputs"] = outputs_json(out);
    fail["verdict"] = {{"error", msg}};
    fail["pass"] = false;
    fail["authoritative"] = false;
    write_manifest(fail);
    if (dynamic_cast<const InvalidArgument*>(&e) || dynamic_cast<const std::invalid_argument*>(&e)) {
      throw InvalidArgument(msg);
    }
    throw SolverError(msg);
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  m["wall_time_s"] = config.deterministic ? json(nullptr) : json(wall);
  m["outputs"] = outputs_json(out);
  m["verdict"] = verdict.summary;
  m["pass"] = verdict.pass;
  m["authoritative"] = true;
  return write_manifest(m);
}

}  // namespace hullcap
