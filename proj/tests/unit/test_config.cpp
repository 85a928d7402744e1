#include <doctest.h>

#include <string>

#include "hullcap/config.hpp"

using namespace hullcap;

TEST_CASE("defaults survive an empty file and a round trip") {
  const RunConfig d = parse_config_text("");
  CHECK(d == RunConfig{});
  CHECK(parse_config_text(emit_config(d)) == d);
}

TEST_CASE("values are parsed per section") {
  const RunConfig c = parse_config_text(
      "# comment\n"
      "[run]\ncommand = pcap\nseed = 42\ndeterministic = true\n"
      "[domain]\ngrid = 64\nprofile = cigar\n"
      "[obstacle]\nshape = star\ncenter = 0.1, -0.2\npoints = 6\n"
      "[plaplace]\np_schedule = 1.3, 1.1\nmirror = true\n");
  CHECK(c.command == "pcap");
  CHECK(c.seed == 42);
  CHECK(c.deterministic);
  CHECK(c.grid == 64);
  CHECK(c.profile == "cigar");
  CHECK(c.shape.name == "star");
  CHECK(c.shape.center[1] == doctest::Approx(-0.2));
  CHECK(c.shape.points == 6);
  CHECK(c.p_schedule == std::vector<double>{1.3, 1.1});
  CHECK(c.mirror);
  CHECK(parse_config_text(emit_config(c)) == c);
}

TEST_CASE("errors carry the line and a suggestion") {
  try {
    parse_config_text("[run]\n\ncomand = hull\n", "run.ini");
    FAIL("no error");
  } catch (const ConfigError& e) {
    const std::string m = e.what();
    CHECK(m.find("run.ini:3:") == 0);
    CHECK(m.find("did you mean 'command'") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_config_text("[domian]\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("[domain]\ngrid = many\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("[run]\ndeterministic = maybe\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("/nonexistent/run.ini"), ConfigError);
}

TEST_CASE("validation rejects inconsistent values") {
  CHECK_THROWS_AS(parse_config_text("[run]\ncommand = bogus\n"), InvalidArgument);
  CHECK_THROWS_AS(parse_config_text("[domain]\ndim = 4\n"), InvalidArgument);
  CHECK_THROWS_AS(parse_config_text("[plaplace]\np = 0.9\n"), InvalidArgument);
}

TEST_CASE("schema lists every emitted key") {
  const std::string text = emit_config(RunConfig{});
  for (const SchemaEntry& e : config_schema()) CHECK_MESSAGE(text.find(e.key + " =") != std::string::npos, e.key);
  CHECK(nearest_name("hul", command_names()) == "hull");
  CHECK(nearest_name("zzzzzzzz", command_names()).empty());
}
