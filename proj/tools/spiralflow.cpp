// Command-line front end: scenario runs, the shrinkage brute-force check and
// the preset listing.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "spiralflow/runner.hpp"

namespace fs = std::filesystem;
using namespace spiralflow;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitSolver = 3;
constexpr int kExitIo = 4;

json load_scenario_json(const std::string& name_or_path) {
  const auto& presets = scenario_presets();
  auto it = presets.find(name_or_path);
  if (it != presets.end()) return json::parse(it->second.second);
  std::ifstream in(name_or_path);
  if (!in) throw std::runtime_error("scenario not found (neither a preset nor a file): " +
                                    name_or_path);
  json j = json::parse(in, nullptr, false);
  if (j.is_discarded()) throw ConfigError("scenario file is not valid JSON: " + name_or_path);
  return j;
}

int cmd_run(const std::string& scenario, const std::vector<std::string>& overrides,
            std::string out_root) {
  json j;
  try {
    j = load_scenario_json(scenario);
    for (const std::string& kv : overrides) {
      std::size_t eq = kv.find('=');
      if (eq == std::string::npos)
        throw ConfigError("--set expects key.path=value, got '" + kv + "'");
      apply_override(j, kv.substr(0, eq), kv.substr(eq + 1));
    }
    Scenario sc = parse_scenario(j);
    if (out_root.empty()) {
      const char* env = std::getenv("SPIRALFLOW_OUT_ROOT");
      out_root = env ? env : ".";
    }
    fs::path dir = run_scenario(sc, out_root, j);
    std::cout << "artifacts written to " << dir.string() << "\n";
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const SolverError& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return kExitSolver;
  } catch (const std::ios_base::failure& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

PolyhedralAnisotropy anisotropy_by_name(const std::string& name) {
  AnisoSpec spec;
  spec.preset = name;
  return spec.build("anisotropy");
}

int cmd_shrink_test(const std::string& aniso, int trials, long seed, int grid_n,
                    std::vector<double> mus) {
  try {
    PolyhedralAnisotropy a = anisotropy_by_name(aniso);
    if (mus.empty()) mus = {1.0};
    std::mt19937_64 rng(static_cast<std::uint64_t>(seed));
    std::uniform_real_distribution<double> coord(-3.0, 3.0);
    double max_obj_gap = 0;    // shrink objective minus brute-force minimum
    double max_proj_diff = 0;  // against the projection identity
    for (int t = 0; t < trials; ++t) {
      Vec2 y{coord(rng), coord(rng)};
      Vec2 z{coord(rng), coord(rng)};
      double mu = mus[t % mus.size()];
      Vec2 x = a.shrink(y, z, mu);
      auto obj = [&](Vec2 q) { return a.gamma(q - z) / mu + 0.5 * (q - y).norm2(); };

      // brute force over a grid centered at z covering the reachable set
      const double half = (y - z).norm() + a.lambda_bound() / mu + 1e-9;
      const double cell = 2 * half / (grid_n - 1);
      double best = obj(z);
      for (int j = 0; j < grid_n; ++j)
        for (int i = 0; i < grid_n; ++i)
          best = std::min(best, obj({z.x - half + i * cell, z.y - half + j * cell}));
      max_obj_gap = std::max(max_obj_gap, obj(x) - best);

      Vec2 w = y - z;
      Vec2 proj = a.scaled(1.0 / mu).wulff_project(w);
      max_proj_diff = std::max(max_proj_diff, (x - (y - proj)).norm());
    }
    std::cout << "shrink-test: anisotropy=" << aniso << " trials=" << trials
              << " grid=" << grid_n << "x" << grid_n << "\n"
              << "  max objective excess over brute force: " << max_obj_gap << "\n"
              << "  max |shrink - (y - P_W(y-z))|:          " << max_proj_diff << "\n";
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

int cmd_list_presets() {
  for (const auto& [name, entry] : scenario_presets())
    std::cout << name << "\t" << entry.first << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spiralflow: crystalline spiral growth by level-set minimizing movements"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "run a scenario (preset name or JSON file)");
  std::string scenario;
  std::vector<std::string> overrides;
  std::string out_root;
  run->add_option("scenario", scenario, "preset name or path to a scenario JSON")->required();
  run->add_option("--set", overrides, "override a config value, e.g. --set time.T=0.2");
  run->add_option("--out-root", out_root,
                  "output root directory (default: $SPIRALFLOW_OUT_ROOT or .)");

  auto* shrink =
      app.add_subcommand("shrink-test", "compare the shrinkage operator against brute force");
  std::string aniso = "square";
  int trials = 1000;
  long seed = 1;
  int grid_n = 401;
  std::vector<double> mus;
  shrink->add_option("--anisotropy", aniso, "square|triangle|pentagon|hexagon-asym(a)");
  shrink->add_option("--trials", trials, "number of random (y, z) samples");
  shrink->add_option("--seed", seed, "rng seed");
  shrink->add_option("--grid", grid_n, "brute-force candidate grid size per side");
  shrink->add_option("--mu", mus, "penalty values cycled over the trials");

  auto* list = app.add_subcommand("list-presets", "list built-in scenario presets");

  CLI11_PARSE(app, argc, argv);

  if (run->parsed()) return cmd_run(scenario, overrides, out_root);
  if (shrink->parsed()) return cmd_shrink_test(aniso, trials, seed, grid_n, mus);
  if (list->parsed()) return cmd_list_presets();
  return 1;
}
