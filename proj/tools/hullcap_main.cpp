#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "hullcap/config.hpp"
#include "hullcap/errors.hpp"
#include "hullcap/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"hullcap: outward-minimising hulls, capacities and comparison geometry"};
  std::string config_path;
  std::string command;
  hullcap::RunOptions opts;
  bool print_schema = false;
  bool quiet = false;
  app.add_option("command", command, "Overrides [run] command")->check(CLI::IsMember(hullcap::command_names()));
  app.add_option("--config", config_path, "INI run file")->check(CLI::ExistingFile);
  app.add_flag("--force", opts.force, "Ignore a cached manifest");
  app.add_option("--out", opts.out_override, "Output directory");
  app.add_option("--threads", opts.threads_override, "Worker threads")->check(CLI::PositiveNumber);
  app.add_flag("--deterministic", opts.deterministic, "Omit wall time; outputs are bit-identical across runs");
  app.add_flag("--print-schema", print_schema, "List every config key with its default and exit");
  app.add_flag("-q,--quiet", quiet, "No progress output");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  if (print_schema) {
    std::string section;
    for (const auto& e : hullcap::config_schema()) {
      if (e.section != section) {
        section = e.section;
        std::cout << "[" << section << "]\n";
      }
      std::cout << "  " << e.key << " (" << e.type << ", default: " << e.default_value << ")  " << e.doc << "\n";
    }
    return 0;
  }

  try {
    hullcap::RunConfig cfg = config_path.empty() ? hullcap::RunConfig{} : hullcap::parse_config(config_path);
    if (!command.empty()) cfg.command = command;
    if (config_path.empty() && command.empty()) {
      std::cerr << "hullcap: give a command or --config (see --help)\n";
      return 1;
    }
    if (!quiet) opts.log = &std::cerr;
    const hullcap::RunManifest m = hullcap::run(cfg, opts);
    std::cout << m.path << (m.cache_hit ? " (cached)" : "") << ": " << (m.pass ? "pass" : "FAIL") << "\n";
    return m.exit_code;
  } catch (const hullcap::InvalidArgument& e) {
    std::cerr << "hullcap: " << e.what() << "\n";
    return 1;
  } catch (const hullcap::SolverError& e) {
    std::cerr << "hullcap: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "hullcap: " << e.what() << "\n";
    return 2;
  }
}
