#pragma once

// Comparison metrics between the level-set spiral and the front-tracking
// spiral: integer-sheeted surface heights for both representations, the
// normalized interposed-area metric A, and the sup-distance metric
// D = sup { dist(x, Sigma_h) : x on Sigma_d }.

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "spiralflow/contour.hpp"
#include "spiralflow/domain.hpp"
#include "spiralflow/fd.hpp"
#include "spiralflow/front_tracking.hpp"

namespace spiralflow {

struct HeightField {
  std::shared_ptr<const DomainMask> mask;
  FieldBuffer h;
  const char* provenance = "";
};

namespace detail {
// zeta is the integer with 2 pi zeta < z <= 2 pi (zeta + 1).
inline double sheet_floor(double z) {
  const double two_pi = 2 * std::numbers::pi;
  return std::ceil(z / two_pi) - 1.0;
}
}  // namespace detail

/// Surface height of the level-set spiral: H = (theta_hat + 2 pi zeta) / 2 pi
/// with zeta the unique integer putting u - theta_hat in (2 pi zeta, 2 pi (zeta+1)].
inline HeightField height_levelset(const PhaseField& u) {
  const DomainMask& m = *u.mask;
  HeightField out;
  out.mask = u.mask;
  out.provenance = "levelset";
  out.h.assign(m.grid.count(), 0.0);
  const double two_pi = 2 * std::numbers::pi;
  for (int id : m.active_nodes) {
    double zeta = detail::sheet_floor(u.u[id] - m.th0[id]);
    out.h[id] = m.th0[id] / two_pi + zeta;
  }
  return out;
}

/// Height at an arbitrary point, with u interpolated bilinearly. Used by the
/// unit-jump checks across extracted contours.
inline double height_levelset_at(const PhaseField& u, Vec2 x) {
  const DomainMask& m = *u.mask;
  const Grid& g = m.grid;
  double fi = (x.x - g.lo) / g.dx;
  double fj = (x.y - g.lo) / g.dx;
  int i = std::clamp(static_cast<int>(std::floor(fi)), 0, g.n - 2);
  int j = std::clamp(static_cast<int>(std::floor(fj)), 0, g.n - 2);
  double s = fi - i, t = fj - j;
  if (!(m.active[g.id(i, j)] && m.active[g.id(i + 1, j)] && m.active[g.id(i + 1, j + 1)] &&
        m.active[g.id(i, j + 1)]))
    throw std::invalid_argument("height_levelset_at: cell touches an inactive node");
  double uv = (1 - s) * (1 - t) * u.u[g.id(i, j)] + s * (1 - t) * u.u[g.id(i + 1, j)] +
              s * t * u.u[g.id(i + 1, j + 1)] + (1 - s) * t * u.u[g.id(i, j + 1)];
  double th = theta_principal(m.centers, x);
  const double two_pi = 2 * std::numbers::pi;
  return th / two_pi + detail::sheet_floor(uv - th);
}

/// Surface height of a front-tracking spiral anchored at the origin: the
/// branch of arg cut along the half-line of the center facet, minus one full
/// sheet on every terrace region D_j^c cap D_{j-1}.
inline HeightField height_fronttracking(const FacetChain& c,
                                        std::shared_ptr<const DomainMask> mask) {
  const DomainMask& m = *mask;
  const double two_pi = 2 * std::numbers::pi;
  const int k = c.k();
  std::vector<Vec2> y(k + 1);
  y[k] = Vec2{0, 0};
  for (int j = k; j >= 1; --j) y[j - 1] = y[j] + c.d(j) * c.wulff.wulff_facet_tangent(c.dir(j));
  std::vector<Vec2> normals(k + 1);
  for (int j = 0; j <= k; ++j) normals[j] = c.wulff.wulff_facet_normal(c.dir(j));
  const double theta_star = c.wulff.wulff_facet_angle(c.dir(k)) - std::numbers::pi / 2;

  HeightField out;
  out.mask = mask;
  out.provenance = "fronttracking";
  out.h.assign(m.grid.count(), 0.0);
  for (int id : m.active_nodes) {
    Vec2 x = m.grid.node(id % m.grid.n, id / m.grid.n);
    double phi = std::atan2(x.y, x.x);
    double wrapped = theta_star - phi;
    wrapped = std::fmod(wrapped, two_pi);
    if (wrapped < 0) wrapped += two_pi;  // in [0, 2 pi)
    double big_theta = theta_star - wrapped;  // branch in (theta_star - 2 pi, theta_star]
    int terraces = 0;
    for (int j = 1; j <= k; ++j)
      if ((x - y[j]).dot(normals[j]) <= 0 && (x - y[j - 1]).dot(normals[j - 1]) > 0) ++terraces;
    out.h[id] = (big_theta - two_pi * terraces) / two_pi;
  }
  return out;
}

/// A = (1/|W|) int |H1 - H2| over the active nodes.
inline double area_A(const HeightField& h1, const HeightField& h2) {
  if (h1.mask.get() != h2.mask.get())
    throw std::invalid_argument("area_A: height fields live on different grids");
  const DomainMask& m = *h1.mask;
  double sum = 0;
  for (int id : m.active_nodes) sum += std::abs(h1.h[id] - h2.h[id]);
  return sum / m.active_count();
}

namespace detail {

// Uniform bucket index over segments for exact nearest-segment queries.
class SegmentIndex {
 public:
  SegmentIndex(const std::vector<ContourSegment>& segs, double lo, double hi, double cell)
      : segs_(segs), lo_(lo), cell_(cell) {
    nb_ = std::max(1, static_cast<int>(std::ceil((hi - lo) / cell)));
    buckets_.resize(static_cast<std::size_t>(nb_) * nb_);
    for (int s = 0; s < static_cast<int>(segs.size()); ++s) {
      int i0, j0, i1, j1;
      locate(segs[s].a, i0, j0);
      locate(segs[s].b, i1, j1);
      for (int j = std::min(j0, j1); j <= std::max(j0, j1); ++j)
        for (int i = std::min(i0, i1); i <= std::max(i0, i1); ++i)
          buckets_[j * nb_ + i].push_back(s);
    }
  }

  bool empty() const { return segs_.empty(); }

  double nearest_distance(Vec2 p) const {
    int pi, pj;
    locate(p, pi, pj);
    double best = std::numeric_limits<double>::infinity();
    for (int ring = 0; ring <= nb_; ++ring) {
      // A bucket at Chebyshev ring r is at least (r-1)*cell away from p.
      if (best < (ring - 1) * cell_) break;
      for (int j = pj - ring; j <= pj + ring; ++j) {
        if (j < 0 || j >= nb_) continue;
        for (int i = pi - ring; i <= pi + ring; ++i) {
          if (i < 0 || i >= nb_) continue;
          if (std::max(std::abs(i - pi), std::abs(j - pj)) != ring) continue;
          for (int s : buckets_[j * nb_ + i])
            best = std::min(best, point_segment_distance(p, segs_[s].a, segs_[s].b));
        }
      }
    }
    return best;
  }

 private:
  void locate(Vec2 p, int& i, int& j) const {
    i = std::clamp(static_cast<int>((p.x - lo_) / cell_), 0, nb_ - 1);
    j = std::clamp(static_cast<int>((p.y - lo_) / cell_), 0, nb_ - 1);
  }

  const std::vector<ContourSegment>& segs_;
  double lo_, cell_;
  int nb_;
  std::vector<std::vector<int>> buckets_;
};

}  // namespace detail

/// D = sup over points of `reference` (densified at dx/2, clipped to the box)
/// of the exact Euclidean distance to the `test` contour.
inline double distance_D(const std::vector<Polyline>& reference, const ContourSet& test,
                         const Grid& grid) {
  if (test.segments.empty()) throw std::invalid_argument("distance_D: empty test contour");
  bool have_ref = false;
  for (const Polyline& pl : reference) have_ref = have_ref || pl.pts.size() >= 1;
  if (!have_ref) throw std::invalid_argument("distance_D: empty reference curve");

  detail::SegmentIndex index(test.segments, grid.lo, grid.hi, std::max(grid.dx, 1e-12));
  const double step = grid.dx / 2;
  double d_sup = 0;
  auto visit = [&](Vec2 p) {
    if (p.x < grid.lo || p.x > grid.hi || p.y < grid.lo || p.y > grid.hi) return;
    d_sup = std::max(d_sup, index.nearest_distance(p));
  };
  for (const Polyline& pl : reference) {
    const std::size_t np = pl.pts.size();
    if (np == 0) continue;
    visit(pl.pts[0]);
    const std::size_t limbs = pl.closed ? np : np - 1;
    for (std::size_t v = 0; v < limbs; ++v) {
      Vec2 a = pl.pts[v];
      Vec2 b = pl.pts[(v + 1) % np];
      double len = (b - a).norm();
      int pieces = std::max(1, static_cast<int>(std::ceil(len / step)));
      for (int q = 1; q <= pieces; ++q) visit(a + (static_cast<double>(q) / pieces) * (b - a));
    }
  }
  return d_sup;
}

}  // namespace spiralflow
