#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>

#include "helpers.hpp"
#include "orbitspace/config.hpp"
#include "orbitspace/errors.hpp"

using namespace orbitspace;
using namespace testutil;

namespace {
const std::string kExampleConfig =
    std::string(ORBITSPACE_SOURCE_DIR) + "/configs/c3v_superconductor.json";
}

TEST_CASE("matrix entry tokens") {
  CHECK(parse_matrix_entry("0") == 0.0);
  CHECK(parse_matrix_entry("1") == 1.0);
  CHECK(parse_matrix_entry("-1/2") == doctest::Approx(-0.5));
  CHECK(parse_matrix_entry("sqrt(3)/2") == doctest::Approx(std::sqrt(3.0) / 2));
  CHECK(parse_matrix_entry("-sqrt(2)") == doctest::Approx(-std::sqrt(2.0)));
  CHECK(parse_matrix_entry("0.25") == doctest::Approx(0.25));
  CHECK(parse_matrix_entry(" +3/4 ") == doctest::Approx(0.75));
  CHECK_THROWS_AS(parse_matrix_entry("sqrt(3"), ConfigError);
  CHECK_THROWS_AS(parse_matrix_entry("abc"), ConfigError);
  CHECK_THROWS_AS(parse_matrix_entry("1/0"), ConfigError);
  CHECK_THROWS_AS(parse_matrix_entry(""), ConfigError);
}

TEST_CASE("the shipped example config matches the programmatic setup") {
  const AnalysisConfig cfg = load_config(kExampleConfig);
  CHECK(cfg.name == "c3v_superconductor");
  CHECK(cfg.seed == 0);
  CHECK(cfg.group.dimension == 4);
  REQUIRE(cfg.group.generators.size() == 3);
  REQUIRE(cfg.group.family.has_value());
  CHECK(cfg.group.family->pairs == std::vector<std::pair<int, int>>{{0, 1}, {2, 3}});

  const GroupPresentation reference = example_group();
  for (size_t i = 0; i < reference.generators.size(); ++i) {
    CHECK((cfg.group.generators[i].matrix - reference.generators[i].matrix)
              .cwiseAbs()
              .maxCoeff() <= 1e-15);
  }

  const MIBSpec reference_mib = example_mib();
  REQUIRE(cfg.mib.polys.size() == 3);
  for (int a = 0; a < 3; ++a) CHECK(cfg.mib.polys[a] == reference_mib.polys[a]);
  CHECK(cfg.mib.weights.degrees == std::vector<int>{6, 4, 2});
  CHECK_NOTHROW(cfg.mib.validate());

  REQUIRE(cfg.potential.has_value());
  CHECK(cfg.potential->allow_unbounded);
  CHECK(cfg.potential->terms.size() == 3);
  REQUIRE(cfg.potential->parameters.size() == 1);
  CHECK(cfg.potential->parameters[0].name == "a1");
  CHECK(cfg.potential->parameters[0].swept);
  CHECK(cfg.potential->parameters[0].steps == 13);
}

TEST_CASE("missing or malformed configs are rejected") {
  CHECK_THROWS_AS(load_config("/nonexistent/path.json"), ConfigError);

  const auto tmp = std::string("/tmp/orbitspace_bad_config.json");
  {
    std::ofstream out(tmp);
    out << "{ \"name\": \"x\" }";
  }
  CHECK_THROWS_AS(load_config(tmp), ConfigError);  // no group

  {
    std::ofstream out(tmp);
    out << R"({"group": {"dimension": 2, "generators": [
      {"name": "g", "matrix": [["2","0"],["0","1"]]}]},
      "mib": {"variables": ["x1","x2"], "degrees": [2],
              "polynomials": ["x1^2 + x2^2"]}})";
  }
  CHECK_THROWS_AS(load_config(tmp), ConfigError);  // non-orthogonal generator
}

TEST_CASE("a structurally broken basis loads but fails validation downstream") {
  const auto tmp = std::string("/tmp/orbitspace_bad_mib.json");
  {
    std::ofstream out(tmp);
    out << R"({"group": {"dimension": 2,
        "generators": [{"name": "m", "matrix": [["-1","0"],["0","1"]]}]},
        "mib": {"variables": ["x1","x2"], "degrees": [2],
                "polynomials": ["x1"]}})";
  }
  const AnalysisConfig cfg = load_config(tmp);  // loads fine
  CHECK_THROWS_AS(cfg.mib.validate(), ConfigError);
}
