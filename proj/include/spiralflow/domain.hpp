#pragma once

// Computational domain W = Omega \ union of exclusion discs around the spiral
// centers, the Cartesian node mask, and branch-safe evaluation of the
// multivalued sheet function theta(x) = sum_j m_j arg(x - a_j). theta is never
// stored as a scalar field; only its gradient and pairwise increments exist.

#include <cmath>
#include <cstdint>
#include <memory>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "spiralflow/vec2.hpp"

namespace spiralflow {

struct Center {
  Vec2 pos;
  int winding = 1;  // m_j, nonzero; sign picks the rotation sense
};

struct SpiralCenters {
  std::vector<Center> items;
  double exclusion_radius = 0.0;  // r of the removed discs B_r(a_j)
};

/// Validates winding numbers, disc containment in the box, and pairwise
/// disjointness of the closed exclusion discs.
inline SpiralCenters make_centers(std::vector<Center> items, double exclusion_radius,
                                  double box_lo, double box_hi) {
  if (exclusion_radius < 0) throw std::invalid_argument("centers: negative exclusion radius");
  for (std::size_t i = 0; i < items.size(); ++i) {
    const Center& c = items[i];
    if (c.winding == 0)
      throw std::invalid_argument("centers: winding number must be nonzero (center " +
                                  std::to_string(i) + ")");
    if (!(c.pos.x - box_lo > exclusion_radius && box_hi - c.pos.x > exclusion_radius &&
          c.pos.y - box_lo > exclusion_radius && box_hi - c.pos.y > exclusion_radius))
      throw std::invalid_argument("centers: exclusion disc of center " + std::to_string(i) +
                                  " is not contained in the domain box");
    for (std::size_t k = 0; k < i; ++k) {
      double d = (items[k].pos - c.pos).norm();
      if (d <= 2 * exclusion_radius)
        throw std::invalid_argument("centers: exclusion discs of centers " + std::to_string(k) +
                                    " and " + std::to_string(i) + " overlap");
    }
  }
  return SpiralCenters{std::move(items), exclusion_radius};
}

/// Single-valued gradient of theta. Rejects evaluation points within
/// 1e-12 * (r/2) of a center (the arg singularity).
inline Vec2 theta_gradient(const SpiralCenters& c, Vec2 x) {
  Vec2 g{};
  const double tol = 5e-13 * c.exclusion_radius;
  for (const Center& ctr : c.items) {
    Vec2 d = x - ctr.pos;
    double r2 = d.norm2();
    if (r2 <= tol * tol)
      throw std::invalid_argument("theta_gradient: evaluation point coincides with a center");
    g += (static_cast<double>(ctr.winding) / r2) * Vec2{-d.y, d.x};
  }
  return g;
}

/// Principal-value sum of the center arguments, a concrete branch of theta.
inline double theta_principal(const SpiralCenters& c, Vec2 x) {
  double s = 0;
  for (const Center& ctr : c.items)
    s += ctr.winding * std::atan2(x.y - ctr.pos.y, x.x - ctr.pos.x);
  return s;
}

namespace detail {
inline double point_segment_distance(Vec2 p, Vec2 a, Vec2 b) {
  Vec2 ab = b - a;
  double len2 = ab.norm2();
  double t = len2 > 0 ? std::clamp((p - a).dot(ab) / len2, 0.0, 1.0) : 0.0;
  return (p - (a + t * ab)).norm();
}
}  // namespace detail

/// Continuous change of theta along the straight segment [xa, xb]. Well
/// defined because the angle subtended by a segment from an external point is
/// below pi. Rejects segments that cross an exclusion disc.
inline double theta_increment(const SpiralCenters& c, Vec2 xa, Vec2 xb) {
  const double two_pi = 2 * std::numbers::pi;
  double inc = 0;
  for (const Center& ctr : c.items) {
    double guard = std::max(c.exclusion_radius * (1.0 - 1e-9), 1e-300);
    if (detail::point_segment_distance(ctr.pos, xa, xb) < guard)
      throw std::invalid_argument("theta_increment: segment crosses an exclusion disc");
    double da = std::atan2(xa.y - ctr.pos.y, xa.x - ctr.pos.x);
    double db = std::atan2(xb.y - ctr.pos.y, xb.x - ctr.pos.x);
    inc += ctr.winding * std::remainder(db - da, two_pi);
  }
  return inc;
}

/// Uniform square grid on [lo, hi]^2 with spacing dx; nodes at lo + i*dx.
struct Grid {
  double lo = -1.5;
  double hi = 1.5;
  double dx = 0.02;
  int n = 151;  // nodes per side

  static Grid from_box(double lo, double hi, double dx) {
    if (!(hi > lo) || !(dx > 0)) throw std::invalid_argument("grid: invalid box or spacing");
    double steps = (hi - lo) / dx;
    int ns = static_cast<int>(std::lround(steps));
    if (std::abs(steps - ns) > 1e-9 * std::max(1.0, steps) || ns < 2)
      throw std::invalid_argument("grid: spacing does not tile the box");
    return Grid{lo, hi, dx, ns + 1};
  }

  int id(int i, int j) const { return j * n + i; }
  bool in_grid(int i, int j) const { return i >= 0 && i < n && j >= 0 && j < n; }
  Vec2 node(int i, int j) const { return {lo + i * dx, lo + j * dx}; }
  int count() const { return n * n; }
};

/// Node mask plus per-node theta data: active nodes are those of Omega at
/// distance >= r from every center (strict < r excludes, which keeps the
/// radius-r ring active). Precomputes the theta gradient at nodes, the theta
/// increments along grid edges, and a principal branch value per node.
struct DomainMask {
  Grid grid;
  SpiralCenters centers;
  std::vector<std::uint8_t> active;
  std::vector<int> active_nodes;  // row-major order
  std::vector<double> tgx, tgy;   // theta gradient at active nodes
  std::vector<double> thx, thy;   // theta increment to the +x / +y neighbour
  std::vector<double> th0;        // principal branch value at active nodes

  bool is_active(int i, int j) const { return grid.in_grid(i, j) && active[grid.id(i, j)]; }
  int active_count() const { return static_cast<int>(active_nodes.size()); }
  double active_area() const { return active_count() * grid.dx * grid.dx; }
};

inline std::shared_ptr<const DomainMask> build_mask(const Grid& grid, const SpiralCenters& centers) {
  auto m = std::make_shared<DomainMask>();
  m->grid = grid;
  m->centers = centers;
  const int n = grid.n;
  // Strict |x - a| < r excludes; the tiny relative guard keeps nodes that sit
  // on the radius-r ring active despite coordinate rounding.
  const double r2 = centers.exclusion_radius * centers.exclusion_radius * (1.0 - 1e-12);
  m->active.assign(grid.count(), 1);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      Vec2 x = grid.node(i, j);
      for (const Center& c : centers.items)
        if ((x - c.pos).norm2() < r2) {
          m->active[grid.id(i, j)] = 0;
          break;
        }
    }
  m->active_nodes.reserve(grid.count());
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      if (m->active[grid.id(i, j)]) m->active_nodes.push_back(grid.id(i, j));

  const double nan = std::numeric_limits<double>::quiet_NaN();
  m->tgx.assign(grid.count(), 0.0);
  m->tgy.assign(grid.count(), 0.0);
  m->th0.assign(grid.count(), 0.0);
  m->thx.assign(grid.count(), nan);
  m->thy.assign(grid.count(), nan);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      int id = grid.id(i, j);
      if (!m->active[id]) continue;
      Vec2 x = grid.node(i, j);
      Vec2 tg = theta_gradient(centers, x);
      m->tgx[id] = tg.x;
      m->tgy[id] = tg.y;
      m->th0[id] = theta_principal(centers, x);
      if (m->is_active(i + 1, j)) m->thx[id] = theta_increment(centers, x, grid.node(i + 1, j));
      if (m->is_active(i, j + 1)) m->thy[id] = theta_increment(centers, x, grid.node(i, j + 1));
    }
  return m;
}

/// Grid-sampled level function u; the spiral is the set where u - theta is a
/// multiple of 2*pi. Values are meaningful on active nodes only.
struct PhaseField {
  std::shared_ptr<const DomainMask> mask;
  std::vector<double> u;
  double t = 0.0;

  static PhaseField constant(std::shared_ptr<const DomainMask> mask, double value) {
    PhaseField f;
    f.u.assign(mask->grid.count(), value);
    f.mask = std::move(mask);
    return f;
  }
};

}  // namespace spiralflow
