#pragma once

// Scenario files: a versioned, strictly validated JSON schema describing the
// domain, centers, anisotropies, motion law, solver parameters, time window
// and output location of one run.

#include <cmath>
#include <numbers>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "spiralflow/anisotropy.hpp"
#include "spiralflow/bregman.hpp"
#include "spiralflow/interlace.hpp"

namespace spiralflow {

using json = nlohmann::json;

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

namespace cfg {

inline void check_keys(const json& j, const std::set<std::string>& allowed,
                       const std::string& path) {
  if (!j.is_object()) throw ConfigError(path + ": expected an object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key()))
      throw ConfigError(path + ": unknown key '" + it.key() + "'");
}

inline const json& require(const json& j, const std::string& key, const std::string& path) {
  auto it = j.find(key);
  if (it == j.end()) throw ConfigError(path + ": missing required key '" + key + "'");
  return *it;
}

inline double number(const json& j, const std::string& path) {
  if (!j.is_number()) throw ConfigError(path + ": expected a number");
  return j.get<double>();
}

inline int integer(const json& j, const std::string& path) {
  if (!j.is_number_integer()) throw ConfigError(path + ": expected an integer");
  return j.get<int>();
}

}  // namespace cfg

struct AnisoSpec {
  std::string preset;              // "square", "triangle", "pentagon", "hexagon-asym(a)"
  std::vector<Vec2> normals;       // explicit (r, theta) list when preset empty

  PolyhedralAnisotropy build(const std::string& path) const {
    try {
      if (!preset.empty()) {
        if (preset == "square") return square_anisotropy();
        if (preset == "triangle") return triangle_anisotropy();
        if (preset == "pentagon") return pentagon_anisotropy();
        if (preset.rfind("hexagon-asym(", 0) == 0 && preset.back() == ')') {
          double a = std::stod(preset.substr(13, preset.size() - 14));
          return illusory_anisotropy(a, 0);
        }
        throw ConfigError(path + ": unknown anisotropy preset '" + preset + "'");
      }
      return PolyhedralAnisotropy::from_normals(normals);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(path + ": " + e.what());
    }
  }

  static AnisoSpec parse(const json& j, const std::string& path) {
    AnisoSpec spec;
    if (j.is_string()) {
      spec.preset = j.get<std::string>();
      return spec;
    }
    cfg::check_keys(j, {"normals"}, path);
    const json& list = cfg::require(j, "normals", path);
    if (!list.is_array() || list.empty())
      throw ConfigError(path + ".normals: expected a non-empty array of [r, theta] pairs");
    for (std::size_t k = 0; k < list.size(); ++k) {
      const json& p = list[k];
      std::string ppath = path + ".normals[" + std::to_string(k) + "]";
      if (!p.is_array() || p.size() != 2) throw ConfigError(ppath + ": expected [r, theta]");
      double r = cfg::number(p[0], ppath);
      double th = cfg::number(p[1], ppath);
      spec.normals.push_back(r * unit_dir(th));
    }
    return spec;
  }

  json to_json() const {
    if (!preset.empty()) return preset;
    json list = json::array();
    for (Vec2 n : normals) list.push_back({n.norm(), n.angle()});
    return json{{"normals", list}};
  }
};

struct MotionSpec {
  bool bcf = true;
  double v_inf = 1.0;
  double rho_c = 0.01;
  double f_raw = 1.0;

  double base_scale() const { return bcf ? v_inf * rho_c : 1.0; }

  static MotionSpec parse(const json& j, const std::string& path) {
    MotionSpec m;
    if (j.contains("f")) {
      cfg::check_keys(j, {"f"}, path);
      m.bcf = false;
      m.f_raw = cfg::number(j["f"], path + ".f");
      return m;
    }
    cfg::check_keys(j, {"v_inf", "rho_c"}, path);
    m.v_inf = cfg::number(cfg::require(j, "v_inf", path), path + ".v_inf");
    m.rho_c = cfg::number(cfg::require(j, "rho_c", path), path + ".rho_c");
    if (!(m.v_inf > 0 && m.rho_c > 0))
      throw ConfigError(path + ": v_inf and rho_c must be positive");
    return m;
  }

  json to_json() const {
    if (!bcf) return json{{"f", f_raw}};
    return json{{"v_inf", v_inf}, {"rho_c", rho_c}};
  }

  /// Driving force and scaled density for the minimizing-movement step.
  std::pair<double, PolyhedralAnisotropy> apply(const PolyhedralAnisotropy& a) const {
    if (!bcf) return {f_raw, a};
    BcfScaled s = rescale_bcf(v_inf, rho_c, a);
    return {s.f, s.gamma};
  }
};

struct InterlaceSpec {
  int m0 = 2;
  double cutoff_eps = 0.1 * std::numbers::pi;
  // either explicit layers or the illusory family
  struct LayerCfg {
    AnisoSpec anisotropy;
    MotionSpec motion;
  };
  std::vector<LayerCfg> layers;
  std::optional<double> illusory_a;
  MotionSpec illusory_motion;
};

struct Scenario {
  int schema = 1;
  std::string name;
  std::string mode;  // levelset | fronttracking | compare | interlace | mixed
  // domain
  double box_lo = -1.5, box_hi = 1.5;
  int s = 1;
  std::optional<double> dx_explicit;
  double exclusion_multiple = 2.0;
  std::vector<Center> centers;
  // physics
  AnisoSpec anisotropy;
  AnisoSpec curvature_anisotropy;  // mixed mode only
  MotionSpec motion;
  double u0 = 0.0;
  InterlaceSpec interlace;
  // solver overrides (applied on top of derived defaults)
  json solver_overrides = json::object();
  // time
  double T = 0.1;
  double h_rule = 0.04;
  std::optional<double> h_explicit;
  std::vector<double> snapshots;
  // front tracking
  double ft_dt = 1e-6;
  int ft_start_dir = 0;
  double ft_d1 = 0.0;
  // output
  std::string output_dir = "out";
  long seed = 1;

  double dx() const { return dx_explicit ? *dx_explicit : 0.02 / s; }
  double h() const { return h_explicit ? *h_explicit : h_rule * dx(); }

  SolverParams solver_params(double scale) const {
    SolverParams p;
    p.h = h();
    p.mu = scale;
    p.eps_in = 1e-2 * scale;
    p.eps_out = 1e-5 * scale;
    const json& o = solver_overrides;
    if (o.contains("mu")) p.mu = o["mu"].get<double>();
    if (o.contains("eps_in")) p.eps_in = o["eps_in"].get<double>();
    if (o.contains("eps_out")) p.eps_out = o["eps_out"].get<double>();
    if (o.contains("alpha")) p.alpha = o["alpha"].get<double>();
    if (o.contains("psi_ceiling")) p.psi_ceiling = o["psi_ceiling"].get<double>();
    if (o.contains("sor_omega")) p.sor_omega = o["sor_omega"].get<double>();
    if (o.contains("sor_tol_rel")) p.sor_tol_rel = o["sor_tol_rel"].get<double>();
    if (o.contains("sor_max_iter")) p.sor_max_iter = o["sor_max_iter"].get<int>();
    if (o.contains("max_outer")) p.max_outer = o["max_outer"].get<int>();
    if (o.contains("max_inner")) p.max_inner = o["max_inner"].get<int>();
    if (o.contains("upwind_demote_cross"))
      p.upwind_demote_cross = o["upwind_demote_cross"].get<bool>();
    return p;
  }
};

inline Scenario parse_scenario(const json& j) {
  Scenario sc;
  cfg::check_keys(j,
                  {"schema", "name", "mode", "domain", "centers", "anisotropy",
                   "curvature_anisotropy", "motion", "initial", "interlace", "solver", "time",
                   "fronttracking", "output", "seed"},
                  "scenario");
  sc.schema = cfg::integer(cfg::require(j, "schema", "scenario"), "scenario.schema");
  if (sc.schema != 1) throw ConfigError("scenario.schema: unsupported version");
  sc.name = cfg::require(j, "name", "scenario").get<std::string>();
  sc.mode = cfg::require(j, "mode", "scenario").get<std::string>();
  static const std::set<std::string> modes{"levelset", "fronttracking", "compare", "interlace",
                                           "mixed"};
  if (!modes.count(sc.mode)) throw ConfigError("scenario.mode: unknown mode '" + sc.mode + "'");

  const json& dom = cfg::require(j, "domain", "scenario");
  cfg::check_keys(dom, {"box", "s", "dx", "exclusion_multiple"}, "scenario.domain");
  const json& box = cfg::require(dom, "box", "scenario.domain");
  if (!box.is_array() || box.size() != 2)
    throw ConfigError("scenario.domain.box: expected [lo, hi]");
  sc.box_lo = cfg::number(box[0], "scenario.domain.box");
  sc.box_hi = cfg::number(box[1], "scenario.domain.box");
  if (dom.contains("s")) sc.s = cfg::integer(dom["s"], "scenario.domain.s");
  if (dom.contains("dx")) sc.dx_explicit = cfg::number(dom["dx"], "scenario.domain.dx");
  if (sc.s < 1) throw ConfigError("scenario.domain.s: refinement must be >= 1");
  if (dom.contains("exclusion_multiple"))
    sc.exclusion_multiple = cfg::number(dom["exclusion_multiple"], "scenario.domain.exclusion_multiple");

  const json& cts = cfg::require(j, "centers", "scenario");
  if (!cts.is_array()) throw ConfigError("scenario.centers: expected an array");
  for (std::size_t k = 0; k < cts.size(); ++k) {
    std::string path = "scenario.centers[" + std::to_string(k) + "]";
    cfg::check_keys(cts[k], {"x", "y", "m"}, path);
    Center c;
    c.pos.x = cfg::number(cfg::require(cts[k], "x", path), path + ".x");
    c.pos.y = cfg::number(cfg::require(cts[k], "y", path), path + ".y");
    c.winding = cfg::integer(cfg::require(cts[k], "m", path), path + ".m");
    sc.centers.push_back(c);
  }

  if (sc.mode != "interlace")
    sc.anisotropy = AnisoSpec::parse(cfg::require(j, "anisotropy", "scenario"), "scenario.anisotropy");
  else if (j.contains("anisotropy"))
    throw ConfigError("scenario.anisotropy: interlace mode takes per-layer anisotropies");
  if (sc.mode == "mixed")
    sc.curvature_anisotropy = AnisoSpec::parse(cfg::require(j, "curvature_anisotropy", "scenario"),
                                               "scenario.curvature_anisotropy");
  else if (j.contains("curvature_anisotropy"))
    throw ConfigError("scenario.curvature_anisotropy: only valid in mixed mode");

  if (sc.mode != "interlace")
    sc.motion = MotionSpec::parse(cfg::require(j, "motion", "scenario"), "scenario.motion");

  if (j.contains("initial")) {
    cfg::check_keys(j["initial"], {"u0"}, "scenario.initial");
    sc.u0 = cfg::number(cfg::require(j["initial"], "u0", "scenario.initial"),
                        "scenario.initial.u0");
  }

  if (sc.mode == "interlace") {
    const json& il = cfg::require(j, "interlace", "scenario");
    cfg::check_keys(il, {"m0", "cutoff_eps", "layers", "illusory"}, "scenario.interlace");
    sc.interlace.m0 = cfg::integer(cfg::require(il, "m0", "scenario.interlace"),
                                   "scenario.interlace.m0");
    if (il.contains("cutoff_eps"))
      sc.interlace.cutoff_eps = cfg::number(il["cutoff_eps"], "scenario.interlace.cutoff_eps");
    if (il.contains("illusory")) {
      cfg::check_keys(il["illusory"], {"a_ratio", "v_inf", "rho_c"}, "scenario.interlace.illusory");
      sc.interlace.illusory_a = cfg::number(
          cfg::require(il["illusory"], "a_ratio", "scenario.interlace.illusory"),
          "scenario.interlace.illusory.a_ratio");
      sc.interlace.illusory_motion.bcf = true;
      sc.interlace.illusory_motion.v_inf =
          cfg::number(cfg::require(il["illusory"], "v_inf", "scenario.interlace.illusory"),
                      "scenario.interlace.illusory.v_inf");
      sc.interlace.illusory_motion.rho_c =
          cfg::number(cfg::require(il["illusory"], "rho_c", "scenario.interlace.illusory"),
                      "scenario.interlace.illusory.rho_c");
      if (sc.interlace.m0 != 6)
        throw ConfigError("scenario.interlace: the illusory preset requires m0 = 6");
    } else {
      const json& layers = cfg::require(il, "layers", "scenario.interlace");
      if (!layers.is_array())
        throw ConfigError("scenario.interlace.layers: expected an array");
      for (std::size_t l = 0; l < layers.size(); ++l) {
        std::string lp = "scenario.interlace.layers[" + std::to_string(l) + "]";
        cfg::check_keys(layers[l], {"anisotropy", "v_inf", "rho_c", "f"}, lp);
        InterlaceSpec::LayerCfg layer;
        layer.anisotropy = AnisoSpec::parse(cfg::require(layers[l], "anisotropy", lp),
                                            lp + ".anisotropy");
        json motion_json;
        if (layers[l].contains("f")) motion_json["f"] = layers[l]["f"];
        else {
          motion_json["v_inf"] = cfg::require(layers[l], "v_inf", lp);
          motion_json["rho_c"] = cfg::require(layers[l], "rho_c", lp);
        }
        layer.motion = MotionSpec::parse(motion_json, lp);
        sc.interlace.layers.push_back(std::move(layer));
      }
      if (static_cast<int>(sc.interlace.layers.size()) != sc.interlace.m0)
        throw ConfigError("scenario.interlace: need exactly m0 layers");
    }
  } else if (j.contains("interlace")) {
    throw ConfigError("scenario.interlace: only valid in interlace mode");
  }

  if (j.contains("solver")) {
    cfg::check_keys(j["solver"],
                    {"mu", "eps_in", "eps_out", "alpha", "psi_ceiling", "sor_omega",
                     "sor_tol_rel", "sor_max_iter", "max_outer", "max_inner",
                     "upwind_demote_cross"},
                    "scenario.solver");
    sc.solver_overrides = j["solver"];
  }

  const json& tm = cfg::require(j, "time", "scenario");
  cfg::check_keys(tm, {"T", "h_rule", "h", "snapshots"}, "scenario.time");
  sc.T = cfg::number(cfg::require(tm, "T", "scenario.time"), "scenario.time.T");
  if (tm.contains("h_rule")) sc.h_rule = cfg::number(tm["h_rule"], "scenario.time.h_rule");
  if (tm.contains("h")) sc.h_explicit = cfg::number(tm["h"], "scenario.time.h");
  if (tm.contains("snapshots")) {
    for (const json& t : tm["snapshots"])
      sc.snapshots.push_back(cfg::number(t, "scenario.time.snapshots"));
  }
  if (sc.snapshots.empty()) sc.snapshots = {0.0, sc.T};

  if (j.contains("fronttracking")) {
    cfg::check_keys(j["fronttracking"], {"dt", "start_dir", "d1"}, "scenario.fronttracking");
    const json& ft = j["fronttracking"];
    if (ft.contains("dt")) sc.ft_dt = cfg::number(ft["dt"], "scenario.fronttracking.dt");
    if (ft.contains("start_dir"))
      sc.ft_start_dir = cfg::integer(ft["start_dir"], "scenario.fronttracking.start_dir");
    if (ft.contains("d1")) sc.ft_d1 = cfg::number(ft["d1"], "scenario.fronttracking.d1");
  }

  const json& outj = cfg::require(j, "output", "scenario");
  cfg::check_keys(outj, {"dir"}, "scenario.output");
  sc.output_dir = cfg::require(outj, "dir", "scenario.output").get<std::string>();
  if (j.contains("seed")) sc.seed = j["seed"].get<long>();
  return sc;
}

/// Dotted-path overrides like `time.T=0.1` or `domain.s=2`; values parsed as
/// JSON scalars with a string fallback.
inline void apply_override(json& j, const std::string& key_path, const std::string& value) {
  json* node = &j;
  std::size_t start = 0;
  for (;;) {
    std::size_t dot = key_path.find('.', start);
    std::string key = key_path.substr(start, dot == std::string::npos ? dot : dot - start);
    if (key.empty()) throw ConfigError("override: empty key segment in '" + key_path + "'");
    if (dot == std::string::npos) {
      json parsed = json::parse(value, nullptr, false);
      (*node)[key] = parsed.is_discarded() ? json(value) : parsed;
      return;
    }
    node = &(*node)[key];
    start = dot + 1;
  }
}

}  // namespace spiralflow
