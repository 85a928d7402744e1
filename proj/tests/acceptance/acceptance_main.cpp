#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hullcap/acceptance.hpp"

int main(int argc, char** argv) {
  CLI::App app{"hullcap acceptance suite"};
  hullcap::AcceptanceOptions opts;
  app.add_flag("--fast", opts.fast, "Coarser grids, fewer trials");
  app.add_option("--only", opts.only, "Criteria to run")->check(CLI::Range(1, hullcap::kCriterionCount));
  app.add_option("--threads", opts.threads, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("--scratch", opts.scratch_dir, "Working directory");
  CLI11_PARSE(app, argc, argv);

  opts.log = &std::cout;
  const auto results = hullcap::run_acceptance(opts);
  std::filesystem::remove_all(opts.scratch_dir);
  int pass = 0, xfail = 0, fail = 0;
  for (const auto& r : results) {
    if (r.pass) {
      ++pass;
    } else if (r.expected_failure) {
      ++xfail;
    } else {
      ++fail;
    }
  }
  std::cout << "summary: " << pass << " pass, " << xfail << " expected failures, " << fail << " failures\n";
  return hullcap::acceptance_ok(results) ? EXIT_SUCCESS : EXIT_FAILURE;
}
