#pragma once

// Built-in scenario presets. The same JSON text is shipped under scenarios/;
// the embedded copies make `run <name>` work from any directory.

#include <map>
#include <string>

namespace spiralflow {

inline const std::map<std::string, std::pair<const char*, const char*>>& scenario_presets() {
  static const std::map<std::string, std::pair<const char*, const char*>> presets = {
      {"unit-triangle",
       {"single triangular spiral, V = 1 - 0.01 kappa, level set vs front tracking",
        R"json({
  "schema": 1,
  "name": "unit-triangle",
  "mode": "compare",
  "domain": {"box": [-1.5, 1.5], "s": 1, "exclusion_multiple": 2.0},
  "centers": [{"x": 0.0, "y": 0.0, "m": 1}],
  "anisotropy": "triangle",
  "motion": {"v_inf": 1.0, "rho_c": 0.01},
  "initial": {"u0": -1.5707963267948966},
  "time": {"T": 0.8, "h_rule": 0.04, "snapshots": [0.0, 0.4, 0.6, 0.8]},
  "fronttracking": {"dt": 1e-6, "start_dir": 0},
  "output": {"dir": "unit-triangle"},
  "seed": 1
})json"}},
      {"square-corotating",
       {"co-rotating square pair merging, V = 2(1 - 0.1 kappa)",
        R"json({
  "schema": 1,
  "name": "square-corotating",
  "mode": "levelset",
  "domain": {"box": [-1.5, 1.5], "s": 1, "exclusion_multiple": 2.0},
  "centers": [{"x": -0.7, "y": 0.0, "m": 1}, {"x": 0.7, "y": 0.0, "m": 1}],
  "anisotropy": "square",
  "motion": {"v_inf": 2.0, "rho_c": 0.1},
  "initial": {"u0": 0.0},
  "time": {"T": 1.0, "h_rule": 0.04, "snapshots": [0.0, 0.25, 0.39, 0.4, 0.5, 1.0]},
  "output": {"dir": "square-corotating"},
  "seed": 1
})json"}},
      {"triple-spiral",
       {"three square spirals from one center (m = 3), V = 2(1 - 0.04 kappa)",
        R"json({
  "schema": 1,
  "name": "triple-spiral",
  "mode": "levelset",
  "domain": {"box": [-1.5, 1.5], "s": 1, "exclusion_multiple": 2.0},
  "centers": [{"x": 0.0, "y": 0.0, "m": 3}],
  "anisotropy": "square",
  "motion": {"v_inf": 2.0, "rho_c": 0.04},
  "initial": {"u0": 0.0},
  "time": {"T": 1.0, "h_rule": 0.04, "snapshots": [0.0, 0.25, 0.5, 1.0]},
  "output": {"dir": "triple-spiral"},
  "seed": 1
})json"}},
      {"pentagon-merge",
       {"co-rotating pentagonal pair breaking admissibility, V = 3(1 - 0.01 kappa)",
        R"json({
  "schema": 1,
  "name": "pentagon-merge",
  "mode": "levelset",
  "domain": {"box": [-1.5, 1.5], "s": 1, "exclusion_multiple": 2.0},
  "centers": [{"x": -1.0, "y": 0.4, "m": 1}, {"x": 1.0, "y": -0.4, "m": 1}],
  "anisotropy": "pentagon",
  "motion": {"v_inf": 3.0, "rho_c": 0.01},
  "initial": {"u0": 0.0},
  "time": {"T": 0.6, "h_rule": 0.04, "snapshots": [0.0, 0.2, 0.4, 0.6]},
  "output": {"dir": "pentagon-merge"},
  "seed": 1
})json"}},
      {"pentagon-merge-2",
       {"slow pentagonal merge showing the intermediate facet, V = 1 - 0.1 kappa",
        R"json({
  "schema": 1,
  "name": "pentagon-merge-2",
  "mode": "levelset",
  "domain": {"box": [-1.5, 1.5], "s": 1, "exclusion_multiple": 2.0},
  "centers": [{"x": -0.2, "y": 1.0, "m": 1}, {"x": 0.2, "y": -1.0, "m": 1}],
  "anisotropy": "pentagon",
  "motion": {"v_inf": 1.0, "rho_c": 0.1},
  "initial": {"u0": 0.0},
  "time": {"T": 1.0, "h_rule": 0.04, "snapshots": [0.0, 0.25, 0.5, 0.8, 1.0]},
  "output": {"dir": "pentagon-merge-2"},
  "seed": 1
})json"}},
      {"center-facet",
       {"center-facet pinning until the critical length, V = 4(1 - 0.2 kappa)",
        R"json({
  "schema": 1,
  "name": "center-facet",
  "mode": "compare",
  "domain": {"box": [-1.5, 1.5], "s": 1, "exclusion_multiple": 2.0},
  "centers": [{"x": 0.0, "y": 0.0, "m": 1}],
  "anisotropy": "square",
  "motion": {"v_inf": 4.0, "rho_c": 0.2},
  "initial": {"u0": 0.0},
  "time": {"T": 0.25, "h_rule": 0.04,
           "snapshots": [0.0, 0.025, 0.05, 0.075, 0.1, 0.125, 0.15, 0.175, 0.2, 0.225, 0.25]},
  "fronttracking": {"dt": 1e-6, "start_dir": 1},
  "output": {"dir": "center-facet"},
  "seed": 1
})json"}},
      {"pentagon-square-mix",
       {"pentagonal eikonal with square curvature, V_1 = 2(1 - 0.01 kappa_2)",
        R"json({
  "schema": 1,
  "name": "pentagon-square-mix",
  "mode": "mixed",
  "domain": {"box": [-1.5, 1.5], "s": 1, "exclusion_multiple": 2.0},
  "centers": [{"x": 0.0, "y": 0.0, "m": 1}],
  "anisotropy": "pentagon",
  "curvature_anisotropy": "square",
  "motion": {"v_inf": 2.0, "rho_c": 0.01},
  "initial": {"u0": 0.0},
  "time": {"T": 1.0, "h_rule": 0.04, "snapshots": [0.0, 0.25, 0.5, 1.0]},
  "output": {"dir": "pentagon-square-mix"},
  "seed": 1
})json"}},
      {"triangle-interlace",
       {"two triangle layers rotated by pi/2, V = 3(1 - 0.02 kappa), hexagonal bunching",
        R"json({
  "schema": 1,
  "name": "triangle-interlace",
  "mode": "interlace",
  "domain": {"box": [-1.5, 1.5], "s": 1, "exclusion_multiple": 2.0},
  "centers": [{"x": 0.0, "y": 0.0, "m": 2}],
  "interlace": {
    "m0": 2,
    "cutoff_eps": 0.3141592653589793,
    "layers": [
      {"anisotropy": {"normals": [[1.0, 0.5235987755982988], [1.0, 2.6179938779914944], [1.0, 4.71238898038469]]},
       "v_inf": 3.0, "rho_c": 0.02},
      {"anisotropy": {"normals": [[1.0, 2.0943951023931953], [1.0, 4.1887902047863905], [1.0, 0.0]]},
       "v_inf": 3.0, "rho_c": 0.02}
    ]
  },
  "initial": {"u0": 0.0},
  "time": {"T": 1.0, "h_rule": 0.04, "snapshots": [0.0, 0.25, 0.5, 1.0]},
  "output": {"dir": "triangle-interlace"},
  "seed": 1
})json"}},
      {"illusory-loop",
       {"six asymmetric hexagon layers from one m = 6 center: bunches form closed loops",
        R"json({
  "schema": 1,
  "name": "illusory-loop",
  "mode": "interlace",
  "domain": {"box": [-1.5, 1.5], "s": 1, "exclusion_multiple": 2.0},
  "centers": [{"x": 0.0, "y": 0.0, "m": 6}],
  "interlace": {"m0": 6, "cutoff_eps": 0.3141592653589793,
                "illusory": {"a_ratio": 0.5, "v_inf": 3.0, "rho_c": 0.02}},
  "initial": {"u0": -3.141592653589793},
  "time": {"T": 1.0, "h_rule": 0.04, "snapshots": [0.0, 0.25, 0.5, 1.0]},
  "output": {"dir": "illusory-loop"},
  "seed": 1
})json"}},
      {"illusory-spiral",
       {"opposite m = +-6 centers with asymmetric hexagon layers: bunches form a spiral",
        R"json({
  "schema": 1,
  "name": "illusory-spiral",
  "mode": "interlace",
  "domain": {"box": [-1.5, 1.5], "s": 1, "exclusion_multiple": 2.0},
  "centers": [{"x": -0.1, "y": 0.0, "m": 6}, {"x": 0.1, "y": 0.0, "m": -6}],
  "interlace": {"m0": 6, "cutoff_eps": 0.3141592653589793,
                "illusory": {"a_ratio": 0.5, "v_inf": 3.0, "rho_c": 0.02}},
  "initial": {"u0": -3.141592653589793},
  "time": {"T": 1.0, "h_rule": 0.04, "snapshots": [0.0, 0.25, 0.5, 1.0]},
  "output": {"dir": "illusory-spiral"},
  "seed": 1
})json"}},
  };
  return presets;
}

}  // namespace spiralflow
