#pragma once

// Front-tracking model of a single polygonal spiral: a chain of facets
// parallel to Wulff facets, evolving by the crystalline ODE system for the
// facet lengths d_j, with a new zero-length facet generated at the center
// whenever the center facet reaches the critical length ell_k / f.

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "spiralflow/anisotropy.hpp"
#include "spiralflow/vec2.hpp"

namespace spiralflow {

struct Polyline {
  std::vector<Vec2> pts;
  bool closed = false;
};

/// Polygonal spiral anchored at the origin. Facet j has tangent T(dir(j))
/// with dir(j) = start_dir + j (extended Wulff index); facet 0 is a half-line,
/// facets 1..k carry lengths d_1..d_k, facet k touches the center. The
/// vertices satisfy y_{j-1} = y_j + d_j T_j with y_k = O.
struct FacetChain {
  PolyhedralAnisotropy wulff;
  double f = 1.0;  // driving force (after any BCF rescale)
  int start_dir = 0;
  std::vector<double> lengths;  // d_1..d_k

  int k() const { return static_cast<int>(lengths.size()); }
  int dir(int j) const { return start_dir + j; }
  double d(int j) const { return lengths[j - 1]; }

  static FacetChain unit_spiral(PolyhedralAnisotropy wulff, double f, int start_dir = 0) {
    FacetChain c;
    c.wulff = std::move(wulff);
    c.f = f;
    c.start_dir = start_dir;
    c.lengths = {0.0};  // k = 1, d_1(0) = 0
    return c;
  }
};

struct FacetCoefficients {
  double b, c_plus, c_minus;
};

namespace detail {
inline double wrap_gap(double g) {
  const double two_pi = 2 * std::numbers::pi;
  g = std::fmod(g, two_pi);
  if (g <= 0) g += two_pi;
  return g;
}
}  // namespace detail

/// ODE coefficients of a facet with the given Wulff direction index, fixed by
/// the requirement that normal translation of the three facet lines keeps the
/// chain closed:
///   b = cot(th_{j+1} - th_j) + cot(th_j - th_{j-1}),
///   c+ = 1 / sin(th_{j+1} - th_j),  c- = 1 / sin(th_j - th_{j-1}).
inline FacetCoefficients facet_coefficients(const PolyhedralAnisotropy& wulff, int dir_index) {
  const double pi = std::numbers::pi;
  double gp = detail::wrap_gap(wulff.wulff_facet_angle(dir_index + 1) -
                               wulff.wulff_facet_angle(dir_index));
  double gm = detail::wrap_gap(wulff.wulff_facet_angle(dir_index) -
                               wulff.wulff_facet_angle(dir_index - 1));
  if (!(gp > 0 && gp < pi) || !(gm > 0 && gm < pi))
    throw std::invalid_argument("facet_coefficients: angle gap outside (0, pi)");
  return FacetCoefficients{1.0 / std::tan(gp) + 1.0 / std::tan(gm), 1.0 / std::sin(gp),
                           1.0 / std::sin(gm)};
}

/// Right side of the crystalline ODE system for d_1..d_k. Facet normal
/// velocities are V_0 = f on the half-line, V_j = f - ell_j / d_j on interior
/// facets, and V_k = 0 on the pinned center facet.
inline std::vector<double> ode_rhs(const FacetChain& c) {
  const int k = c.k();
  std::vector<double> rhs(k, 0.0);
  if (k == 0) return rhs;
  std::vector<double> V(k + 1, 0.0);
  V[0] = c.f;
  for (int j = 1; j < k; ++j) {
    if (!(c.d(j) > 0))
      throw std::invalid_argument("ode_rhs: nonpositive interior facet length d_" +
                                  std::to_string(j));
    V[j] = c.f - c.wulff.wulff_facet_length(c.dir(j)) / c.d(j);
  }
  V[k] = 0.0;  // center facet pinned below the critical length
  for (int j = 1; j <= k; ++j) {
    FacetCoefficients fc = facet_coefficients(c.wulff, c.dir(j));
    double v_next = j + 1 <= k ? V[j + 1] : 0.0;
    rhs[j - 1] = -fc.b * V[j] + fc.c_plus * v_next + fc.c_minus * V[j - 1];
  }
  return rhs;
}

/// Classical RK4 update of the facet lengths. Rejects steps (including
/// internal stages) that drive an interior length nonpositive.
inline FacetChain rk4_step(const FacetChain& c, double dt) {
  if (!(dt > 0)) throw std::invalid_argument("rk4_step: dt must be positive");
  auto shifted = [&](const std::vector<double>& k_vec, double scale) {
    FacetChain tmp = c;
    for (int i = 0; i < c.k(); ++i) tmp.lengths[i] += scale * k_vec[i];
    return tmp;
  };
  std::vector<double> k1 = ode_rhs(c);
  std::vector<double> k2 = ode_rhs(shifted(k1, dt / 2));
  std::vector<double> k3 = ode_rhs(shifted(k2, dt / 2));
  std::vector<double> k4 = ode_rhs(shifted(k3, dt));
  FacetChain next = c;
  for (int i = 0; i < c.k(); ++i)
    next.lengths[i] += dt / 6 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
  for (int j = 1; j < next.k(); ++j)
    if (!(next.d(j) > 0))
      throw std::invalid_argument("rk4_step: step drove interior facet length d_" +
                                  std::to_string(j) + " nonpositive; reduce dt");
  if (next.k() >= 1 && next.lengths.back() < 0)
    throw std::invalid_argument("rk4_step: negative center facet length; reduce dt");
  return next;
}

/// Appends the next zero-length facet when the center facet reaches the
/// critical length ell_k / f, moving the anchor to the new facet.
inline FacetChain maybe_generate_facet(const FacetChain& c) {
  if (c.k() == 0) return c;
  double crit = c.wulff.wulff_facet_length(c.dir(c.k())) / c.f;
  if (c.lengths.back() < crit) return c;
  FacetChain next = c;
  next.lengths.push_back(0.0);
  return next;
}

/// Vertices from the center outward; the trailing half-line facet is clipped
/// to the box [lo, hi]^2.
inline Polyline reconstruct_polygon(const FacetChain& c, double lo, double hi) {
  const int k = c.k();
  std::vector<Vec2> y(k + 1);
  y[k] = Vec2{0, 0};
  for (int j = k; j >= 1; --j) y[j - 1] = y[j] + c.d(j) * c.wulff.wulff_facet_tangent(c.dir(j));
  Polyline out;
  out.pts.reserve(k + 2);
  for (int j = k; j >= 0; --j) out.pts.push_back(y[j]);
  // Clip the half-line y_0 + s T_0 against the box.
  Vec2 t = c.wulff.wulff_facet_tangent(c.dir(0));
  double s_exit = std::numeric_limits<double>::infinity();
  auto hit = [&](double origin, double dir) {
    if (dir > 0) return (hi - origin) / dir;
    if (dir < 0) return (lo - origin) / dir;
    return std::numeric_limits<double>::infinity();
  };
  s_exit = std::min(hit(y[0].x, t.x), hit(y[0].y, t.y));
  if (std::isfinite(s_exit) && s_exit > 0) out.pts.push_back(y[0] + s_exit * t);
  return out;
}

/// Chain snapshot trajectory: interleaves RK4 steps with facet generation and
/// records the chain at the steps nearest to the requested times.
inline std::vector<std::pair<double, FacetChain>> evolve_ft(
    const FacetChain& c0, double T, double dt, const std::vector<double>& snapshot_times) {
  if (!(dt > 0)) throw std::invalid_argument("evolve_ft: dt must be positive");
  const long n_steps = std::lround(T / dt);
  std::vector<long> snap_steps(snapshot_times.size());
  for (std::size_t s = 0; s < snapshot_times.size(); ++s)
    snap_steps[s] = std::clamp(std::lround(snapshot_times[s] / dt), 0L, n_steps);
  std::vector<std::pair<double, FacetChain>> out(snapshot_times.size());
  FacetChain c = c0;
  for (std::size_t s = 0; s < snap_steps.size(); ++s)
    if (snap_steps[s] == 0) out[s] = {0.0, c};
  for (long step = 1; step <= n_steps; ++step) {
    c = rk4_step(c, dt);
    c = maybe_generate_facet(c);
    for (std::size_t s = 0; s < snap_steps.size(); ++s)
      if (snap_steps[s] == step) out[s] = {step * dt, c};
  }
  return out;
}

}  // namespace spiralflow
