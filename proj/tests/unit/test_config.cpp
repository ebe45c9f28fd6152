#include <doctest.h>

#include <string>

#include "dfock/config.hpp"
#include "dfock/errors.hpp"

using namespace dfock;

namespace {

ErrorKind kind_of(const auto& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an Error");
  return ErrorKind::Io;
}

}  // namespace

TEST_SUITE("config") {
  TEST_CASE("defaults round-trip through text") {
    const RunConfig def;
    CHECK(parse_config(def.serialize()) == def);
  }

  TEST_CASE("values, comments and ranges") {
    const RunConfig cfg = parse_config(
        "# comment\n"
        "weight = abs_pow:alpha=3\n"
        "domain = -1, -2, 3, 4\n"
        "degree_ladder = 2..5\n"
        "C = 0.75\n"
        "z = 0.5,-1\n"
        "\n"
        "seed = 42\n");
    CHECK(cfg.weight == "abs_pow:alpha=3");
    CHECK(cfg.domain.x0 == -1);
    CHECK(cfg.domain.y1 == 4);
    CHECK(cfg.degree_ladder == std::vector<int>{2, 3, 4, 5});
    REQUIRE(cfg.big_c.has_value());
    CHECK(*cfg.big_c == 0.75);
    CHECK(cfg.z == cplx(0.5, -1));
    CHECK(cfg.seed == 42);
    CHECK(parse_config(cfg.serialize()) == cfg);
    CHECK_FALSE(parse_config("C = auto\n").big_c.has_value());
  }

  TEST_CASE("dashes map to underscores") {
    RunConfig cfg;
    cfg.set_field("n-max", "7");
    cfg.set_field("s-ladder", "1,3");
    CHECK(cfg.n_max == 7);
    CHECK(cfg.s_ladder == std::vector<double>{1, 3});
  }

  TEST_CASE("diagnostics name the line") {
    try {
      parse_config("seed = 1\ndelta = x\n");
      FAIL("expected an Error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::ConfigParseError);
      CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
    CHECK(kind_of([] { parse_config("no equals sign\n"); }) == ErrorKind::ConfigParseError);
    CHECK(kind_of([] { parse_config("bogus = 1\n"); }) == ErrorKind::ConfigParseError);
    CHECK(kind_of([] { parse_config("degree_ladder = 5..2\n"); }) == ErrorKind::ConfigParseError);
    CHECK(kind_of([] { load_config("/nonexistent/dfock.cfg"); }) == ErrorKind::Io);
  }

  TEST_CASE("every key is listed") {
    const auto keys = config_keys();
    const std::string text = RunConfig{}.serialize();
    std::size_t lines = 0;
    for (char ch : text) lines += ch == '\n';
    CHECK(keys.size() == lines);
    CHECK(keys.front() == "weight");
  }
}
