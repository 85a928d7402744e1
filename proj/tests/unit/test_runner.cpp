#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <json.hpp>

#include "hullcap/runner.hpp"

using namespace hullcap;
namespace fs = std::filesystem;

namespace {
RunConfig small_hull(const std::string& out) {
  RunConfig c = parse_config_text("[run]\ncommand = hull\ndeterministic = true\n[domain]\ngrid = 48\n"
                                  "lo = -0.5\nextent = 1\n[obstacle]\nshape = disk\n");
  c.output = out;
  return c;
}
}  // namespace

TEST_CASE("sha256 of known strings") {
  CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("hull run writes a manifest, caches and is reproducible") {
  const fs::path dir = fs::temp_directory_path() / "hullcap_runner_test";
  fs::remove_all(dir);
  const RunManifest a = run(small_hull(dir.string()));
  CHECK_FALSE(a.cache_hit);
  CHECK(a.authoritative);
  CHECK(a.pass);
  CHECK(a.exit_code == 0);
  const auto j = nlohmann::json::parse(a.text);
  CHECK(j["tool"] == "hullcap");
  CHECK(j["wall_time_s"].is_null());
  CHECK(j["outputs"].size() == 3);
  for (const auto& o : j["outputs"]) CHECK(sha256_file((dir / o["file"].get<std::string>()).string()) == o["sha256"]);

  const RunManifest b = run(small_hull(dir.string()));
  CHECK(b.cache_hit);
  CHECK(b.text == a.text);

  RunOptions force;
  force.force = true;
  const RunManifest c = run(small_hull(dir.string()), force);
  CHECK_FALSE(c.cache_hit);
  CHECK(c.text == a.text);

  // A tampered output invalidates the cache.
  std::ofstream(dir / "hull.csv", std::ios::app) << "x\n";
  CHECK_FALSE(run(small_hull(dir.string())).cache_hit);
  fs::remove_all(dir);
}

TEST_CASE("failed runs leave a non-authoritative manifest") {
  const fs::path dir = fs::temp_directory_path() / "hullcap_runner_fail";
  fs::remove_all(dir);
  RunConfig c = small_hull(dir.string());
  c.shape.radius = 0.6;  // does not fit the box
  CHECK_THROWS(run(c));
  std::ifstream in(dir / "manifest.json");
  REQUIRE(in.good());
  const auto j = nlohmann::json::parse(in);
  CHECK(j["authoritative"] == false);
  fs::remove_all(dir);
}
