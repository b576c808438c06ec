#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "spiralflow/presets.hpp"
#include "spiralflow/runner.hpp"

using namespace spiralflow;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& tag) {
  fs::path p = fs::temp_directory_path() / ("spiralflow_test_" + tag);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json preset_json(const std::string& name) {
  return json::parse(scenario_presets().at(name).second);
}

}  // namespace

TEST_CASE("every preset parses and validates") {
  for (const auto& [name, entry] : scenario_presets()) {
    INFO(name);
    json j = json::parse(entry.second);
    Scenario sc = parse_scenario(j);
    CHECK(sc.name == name);
    // the grid, centers and anisotropies must all build
    RunContext ctx = build_context(sc, fs::temp_directory_path());
    CHECK(ctx.mask->active_count() > 0);
    if (sc.mode != "interlace") CHECK_NOTHROW(sc.anisotropy.build("scenario.anisotropy"));
  }
}

TEST_CASE("scenario validation errors name the offending field") {
  json j = preset_json("unit-triangle");
  SECTION("unknown keys are rejected") {
    j["domain"]["typo"] = 1;
    try {
      parse_scenario(j);
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find("scenario.domain") != std::string::npos);
      CHECK(std::string(e.what()).find("typo") != std::string::npos);
    }
  }
  SECTION("malformed anisotropy: two support vectors") {
    j["anisotropy"] = {{"normals", {{1.0, 0.0}, {1.0, 3.14159}}}};
    Scenario sc = parse_scenario(j);
    try {
      sc.anisotropy.build("scenario.anisotropy");
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find("scenario.anisotropy") != std::string::npos);
    }
  }
  SECTION("centers outside the box are rejected at build") {
    j["centers"][0]["x"] = 2.0;
    Scenario sc = parse_scenario(j);
    CHECK_THROWS_AS(build_context(sc, fs::temp_directory_path()), ConfigError);
  }
  SECTION("interlace winding mismatch is rejected") {
    json ji = preset_json("triangle-interlace");
    ji["centers"][0]["m"] = 3;  // not a multiple of m0 = 2
    Scenario sc = parse_scenario(ji);
    fs::path dir = fresh_dir("ilbad");
    CHECK_THROWS(run_scenario(sc, dir, ji));
  }
}

TEST_CASE("dotted overrides") {
  json j = preset_json("unit-triangle");
  apply_override(j, "time.T", "0.25");
  apply_override(j, "domain.s", "2");
  apply_override(j, "output.dir", "custom");
  Scenario sc = parse_scenario(j);
  CHECK(sc.T == 0.25);
  CHECK(sc.s == 2);
  CHECK(sc.output_dir == "custom");
}

TEST_CASE("short unit-triangle run produces the full artifact set") {
  json j = preset_json("unit-triangle");
  apply_override(j, "time.T", "0.02");
  apply_override(j, "time.snapshots", "[0.0, 0.01, 0.02]");
  Scenario sc = parse_scenario(j);
  fs::path root = fresh_dir("run");
  fs::path dir = run_scenario(sc, root, j);
  CHECK(fs::exists(dir / "manifest.json"));
  CHECK(fs::exists(dir / "metrics.csv"));
  CHECK(fs::exists(dir / "diagnostics.csv"));
  CHECK(fs::exists(dir / "snapshots" / "levelset_000.csv"));
  CHECK(fs::exists(dir / "snapshots" / "levelset_002.csv"));
  CHECK(fs::exists(dir / "snapshots" / "fronttracking_002.csv"));

  SECTION("metrics time column is monotone and A(0) is small") {
    std::ifstream in(dir / "metrics.csv");
    std::string line;
    std::getline(in, line);  // header
    double prev_t = -1, a0 = -1;
    bool first = true;
    while (std::getline(in, line)) {
      std::stringstream ss(line);
      std::string t_s, d_s, a_s;
      std::getline(ss, t_s, ',');
      std::getline(ss, d_s, ',');
      std::getline(ss, a_s, ',');
      double t = std::stod(t_s);
      CHECK(t > prev_t);
      prev_t = t;
      if (first) {
        a0 = std::stod(a_s);
        first = false;
      }
    }
    CHECK(a0 >= 0);
    CHECK(a0 < 0.05);
  }

  SECTION("reruns are byte-identical") {
    fs::path root2 = fresh_dir("run2");
    fs::path dir2 = run_scenario(sc, root2, j);
    CHECK(slurp(dir / "metrics.csv") == slurp(dir2 / "metrics.csv"));
    CHECK(slurp(dir / "diagnostics.csv") == slurp(dir2 / "diagnostics.csv"));
    CHECK(slurp(dir / "snapshots" / "levelset_002.csv") ==
          slurp(dir2 / "snapshots" / "levelset_002.csv"));
  }
}

TEST_CASE("compare mode rejects misaligned initial data") {
  json j = preset_json("unit-triangle");
  apply_override(j, "time.T", "0.01");
  apply_override(j, "initial.u0", "1.0");  // level-set ray no longer matches the chain
  Scenario sc = parse_scenario(j);
  fs::path root = fresh_dir("misaligned");
  CHECK_THROWS_AS(run_scenario(sc, root, j), SolverError);
}

TEST_CASE("cli binary end to end") {
  fs::path root = fresh_dir("cli");
  std::string bin = SPIRALFLOW_CLI_PATH;
  std::string cmd = bin + " run unit-triangle --set time.T=0.01 --set time.snapshots=[0.0,0.01]" +
                    " --out-root " + root.string() + " > " + (root / "stdout.txt").string() +
                    " 2>&1";
  REQUIRE(std::system(cmd.c_str()) == 0);
  CHECK(fs::exists(root / "unit-triangle" / "metrics.csv"));

  CHECK(std::system((bin + " list-presets > " + (root / "presets.txt").string()).c_str()) == 0);
  std::string presets = slurp(root / "presets.txt");
  for (const auto& [name, entry] : scenario_presets())
    CHECK(presets.find(name) != std::string::npos);

  CHECK(std::system((bin + " shrink-test --trials 50 --grid 101 > " +
                     (root / "shrink.txt").string())
                        .c_str()) == 0);
  CHECK(slurp(root / "shrink.txt").find("max objective excess") != std::string::npos);

  SECTION("config errors exit with status 2") {
    int rc = std::system((bin + " run unit-triangle --set domain.s=0 > /dev/null 2>&1").c_str());
    CHECK(WEXITSTATUS(rc) == 2);
  }
}

TEST_CASE("shipped scenario files match the embedded presets") {
  fs::path dir = fs::path(SPIRALFLOW_SOURCE_DIR) / "scenarios";
  REQUIRE(fs::exists(dir));
  for (const auto& [name, entry] : scenario_presets()) {
    fs::path file = dir / (name + std::string(".json"));
    INFO(file.string());
    REQUIRE(fs::exists(file));
    CHECK(json::parse(slurp(file)) == json::parse(entry.second));
  }
}
