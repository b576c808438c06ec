#pragma once

// Piecewise-linear (crystalline) surface energy densities gamma(p) = max_j n_j.p,
// their polar duals, Wulff polygons, and the pointwise shrinkage operator
// x* = argmin gamma(x-z)/mu + |x-y|^2/2 that backs the split Bregman d-step.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "spiralflow/vec2.hpp"

namespace spiralflow {

/// Which region of the scaled Wulff geometry a shrinkage minimizer landed in.
struct ShrinkCase {
  enum class Tag { inside, edge, facet };
  Tag tag = Tag::inside;
  int index = -1;     // edge/facet sector index
  double lambda = 0;  // subdifferential weight, edge case only
  Vec2 xi{};          // y - x* for the edge case
};

/// Crystalline surface energy density given by a minimal set of support
/// vectors: gamma(p) = max_j n_j.p with angle gaps in (0, pi) over one turn.
/// The Wulff polygon {gamma_polar <= 1} is exactly the convex hull of the
/// support vectors, so its vertex cycle coincides with `normals()`.
class PolyhedralAnisotropy {
 public:
  /// Builds from support vectors; sorts by angle and verifies that the set is
  /// minimal, free of duplicate directions, and has all angle gaps below pi.
  static PolyhedralAnisotropy from_normals(std::vector<Vec2> raw) {
    PolyhedralAnisotropy a;
    a.init(std::move(raw));
    return a;
  }

  /// Builds the primal density whose Frank polygon {gamma <= 1} is the convex
  /// hull of `frank_vertices`. Used by anisotropies specified through their
  /// dual (e.g. the asymmetric hexagon family).
  static PolyhedralAnisotropy from_dual_vertices(std::vector<Vec2> frank_vertices) {
    // The given vertices are the support vectors of gamma_polar; intersecting
    // its consecutive support lines yields the primal support vectors.
    PolyhedralAnisotropy polar_side = from_normals(std::move(frank_vertices));
    return from_normals(polar_side.dual_vertices());
  }

  double gamma(Vec2 p) const {
    double best = -std::numeric_limits<double>::infinity();
    for (Vec2 n : normals_) best = std::max(best, n.dot(p));
    return best;
  }

  double polar(Vec2 p) const {
    double best = -std::numeric_limits<double>::infinity();
    for (Vec2 q : duals_) best = std::max(best, q.dot(p));
    return best;
  }

  /// Euclidean projection onto the Wulff polygon {gamma_polar <= 1}.
  Vec2 wulff_project(Vec2 x) const {
    if (polar(x) <= 1.0 + kInsideTol) return x;
    const int n = size();
    Vec2 best{};
    double best_d2 = std::numeric_limits<double>::infinity();
    for (int j = 0; j < n; ++j) {
      Vec2 a = normals_[j];
      Vec2 b = normals_[(j + 1) % n];
      Vec2 ab = b - a;
      double t = (x - a).dot(ab) / ab.norm2();
      t = std::clamp(t, 0.0, 1.0);
      Vec2 c = a + t * ab;
      double d2 = (x - c).norm2();
      if (d2 < best_d2) {
        best_d2 = d2;
        best = c;
      }
    }
    return best;
  }

  /// Minimizer of gamma(x-z)/mu + |x-y|^2/2 via the edge/facet case analysis
  /// of the scaled Wulff geometry; total in (y, z, mu > 0).
  Vec2 shrink(Vec2 y, Vec2 z, double mu, ShrinkCase* out = nullptr) const {
    if (!(mu > 0)) throw std::invalid_argument("shrink: mu must be positive");
    const Vec2 w = y - z;
    // Scaled density gamma/mu has polar mu*gamma_polar.
    if (mu * polar(w) <= 1.0 + kInsideTol) {
      if (out) *out = ShrinkCase{ShrinkCase::Tag::inside, -1, 0.0, Vec2{}};
      return z;
    }
    const int n = size();
    std::vector<double> lambda(n);
    std::vector<Vec2> xi(n);
    for (int i = 0; i < n; ++i) {
      Vec2 mi = normals_[i] / mu;
      Vec2 mj = normals_[(i + 1) % n] / mu;
      Vec2 diff = mi - mj;
      lambda[i] = (w.dot(diff) - mi.dot(mj) + mj.norm2()) / diff.norm2();
      xi[i] = lambda[i] * mi + (1.0 - lambda[i]) * mj;
    }
    constexpr double tol = 1e-12;
    auto edge_ok = [&](int i) {
      return lambda[i] >= -tol && lambda[i] <= 1.0 + tol &&
             (w - xi[i]).dot(xi[i]) >= -tol * (1.0 + xi[i].norm2());
    };
    auto facet_ok = [&](int i) {
      int prev = (i + n - 1) % n;
      return lambda[i] > 1.0 - tol && lambda[prev] < tol;
    };
    auto objective = [&](Vec2 x) { return gamma(x - z) / mu + 0.5 * (x - y).norm2(); };

    bool any_edge = false, any_facet = false;
    for (int i = 0; i < n; ++i) {
      any_edge = any_edge || edge_ok(i);
      any_facet = any_facet || facet_ok(i);
    }
    // Scheme cases: when exactly one family admits candidates, search it; when
    // both do (boundary configurations), compare objectives across both. If
    // the tolerance windows leave no candidate, score every formula.
    bool use_edges = any_edge || !any_facet;
    bool use_facets = any_facet || !any_edge;
    bool unconditional = !any_edge && !any_facet;

    Vec2 best{};
    double best_obj = std::numeric_limits<double>::infinity();
    ShrinkCase best_case;
    if (use_edges) {
      for (int i = 0; i < n; ++i) {
        if (!unconditional && !edge_ok(i)) continue;
        Vec2 cand = y - xi[i];
        double obj = objective(cand);
        if (obj < best_obj) {
          best_obj = obj;
          best = cand;
          best_case = ShrinkCase{ShrinkCase::Tag::edge, i, lambda[i], xi[i]};
        }
      }
    }
    if (use_facets) {
      for (int i = 0; i < n; ++i) {
        if (!unconditional && !facet_ok(i)) continue;
        Vec2 cand = y - normals_[i] / mu;
        double obj = objective(cand);
        if (obj < best_obj) {
          best_obj = obj;
          best = cand;
          best_case = ShrinkCase{ShrinkCase::Tag::facet, i, lambda[i], Vec2{}};
        }
      }
    }
    if (out) *out = best_case;
    return best;
  }

  /// Same density multiplied by c > 0 (support vectors scaled by c).
  PolyhedralAnisotropy scaled(double c) const {
    if (!(c > 0)) throw std::invalid_argument("anisotropy scale must be positive");
    std::vector<Vec2> s(normals_);
    for (Vec2& v : s) v = v * c;
    return from_normals(std::move(s));
  }

  int size() const { return static_cast<int>(normals_.size()); }
  const std::vector<Vec2>& normals() const { return normals_; }
  const std::vector<Vec2>& dual_vertices() const { return duals_; }
  /// Vertices of the Wulff polygon in counterclockwise order. For a minimal
  /// support set these are the support vectors themselves.
  const std::vector<Vec2>& wulff_vertices() const { return normals_; }

  /// max of gamma on the unit circle.
  double lambda_bound() const { return lambda_; }

  // Wulff facet bookkeeping for front tracking. Facet j of the Wulff polygon
  // carries outer normal dual_vertices[j]/|.|; it spans the vertex pair
  // (normals[j-1], normals[j]). The facet angle extends over j in Z with
  // theta(j + n N) = theta(j) + 2 pi n, which keeps the height-function
  // branch anchored across facet generations.
  double wulff_facet_angle(int j) const {
    const int n = size();
    int q = j >= 0 ? j / n : -((-j + n - 1) / n);
    return dual_angles_[j - q * n] + 2 * std::numbers::pi * q;
  }
  Vec2 wulff_facet_normal(int j) const {
    Vec2 q = duals_[mod(j)];
    return q / q.norm();
  }
  Vec2 wulff_facet_tangent(int j) const { return wulff_facet_normal(j).rot_cw(); }
  double wulff_facet_length(int j) const {
    int jj = mod(j);
    int prev = (jj + size() - 1) % size();
    return (normals_[jj] - normals_[prev]).norm();
  }

 private:
  static constexpr double kInsideTol = 1e-12;

  int mod(int j) const {
    int n = size();
    int r = j % n;
    return r < 0 ? r + n : r;
  }

  static Vec2 support_line_intersection(Vec2 a, Vec2 b) {
    double det = a.x * b.y - a.y * b.x;
    if (std::abs(det) < 1e-300) throw std::invalid_argument("anisotropy: parallel support lines");
    return {(b.y - a.y) / det, (a.x - b.x) / det};
  }

  void init(std::vector<Vec2> raw) {
    const double pi = std::numbers::pi;
    if (raw.size() < 3)
      throw std::invalid_argument("anisotropy: at least 3 support vectors required, got " +
                                  std::to_string(raw.size()));
    for (Vec2 v : raw)
      if (v.norm2() == 0.0) throw std::invalid_argument("anisotropy: zero support vector");
    std::sort(raw.begin(), raw.end(), [](Vec2 a, Vec2 b) { return a.angle() < b.angle(); });
    const int n = static_cast<int>(raw.size());
    for (int j = 0; j < n; ++j) {
      double gap = raw[(j + 1) % n].angle() - raw[j].angle();
      if (j + 1 == n) gap += 2 * pi;
      if (gap < 1e-12)
        throw std::invalid_argument("anisotropy: duplicate support direction at index " +
                                    std::to_string(j));
      if (gap >= pi)
        throw std::invalid_argument("anisotropy: support angle gap >= pi after index " +
                                    std::to_string(j));
    }
    // Minimality: a support vector is redundant when it does not rise above
    // the corner formed by its two neighbours.
    for (int j = 0; j < n; ++j) {
      Vec2 prev = raw[(j + n - 1) % n];
      Vec2 next = raw[(j + 1) % n];
      double span = next.angle() - prev.angle();
      if (span <= 0) span += 2 * pi;
      if (span >= pi - 1e-9) continue;  // corner open (or degenerate); always essential
      Vec2 corner = support_line_intersection(prev, next);
      double reach = raw[j].dot(corner);
      if (reach <= 1.0 + 1e-9 * std::max(1.0, raw[j].norm() * corner.norm()))
        throw std::invalid_argument("anisotropy: redundant support vector at index " +
                                    std::to_string(j));
    }
    normals_ = std::move(raw);
    duals_.resize(n);
    for (int j = 0; j < n; ++j)
      duals_[j] = support_line_intersection(normals_[(j + n - 1) % n], normals_[j]);
    // Canonical facet numbering: rotate so that the dual vertex (Wulff facet
    // normal) of index 0 has the smallest angle in [0, 2 pi). The paper-style
    // presets then get facet 0 pointing along +x.
    int r = 0;
    double best = std::numeric_limits<double>::infinity();
    for (int j = 0; j < n; ++j) {
      double a = duals_[j].angle();
      if (a < -1e-12) a += 2 * pi;  // tolerance keeps a rounded 0- angle at 0
      if (a < best) {
        best = a;
        r = j;
      }
    }
    std::rotate(normals_.begin(), normals_.begin() + r, normals_.end());
    std::rotate(duals_.begin(), duals_.begin() + r, duals_.end());
    dual_angles_.resize(n);
    dual_angles_[0] = duals_[0].angle();
    for (int j = 1; j < n; ++j) {
      double gap = duals_[j].angle() - duals_[j - 1].angle();
      gap = std::fmod(gap, 2 * pi);
      if (gap <= 0) gap += 2 * pi;
      dual_angles_[j] = dual_angles_[j - 1] + gap;
    }
    lambda_ = 0;
    for (Vec2 v : normals_) lambda_ = std::max(lambda_, v.norm());
  }

  std::vector<Vec2> normals_;
  std::vector<Vec2> duals_;
  std::vector<double> dual_angles_;  // increasing over one turn
  double lambda_ = 0;
};

/// Named anisotropy presets used by the scenario files.
inline PolyhedralAnisotropy square_anisotropy() {
  const double pi = std::numbers::pi;
  std::vector<Vec2> n;
  for (int j = 0; j < 4; ++j) n.push_back(std::sqrt(2.0) * unit_dir(pi * (2 * j + 1) / 4));
  return PolyhedralAnisotropy::from_normals(std::move(n));
}

inline PolyhedralAnisotropy triangle_anisotropy() {
  const double pi = std::numbers::pi;
  std::vector<Vec2> n;
  for (int j = 0; j < 3; ++j) n.push_back(2.0 * unit_dir(pi * (2 * j + 1) / 3));
  return PolyhedralAnisotropy::from_normals(std::move(n));
}

inline PolyhedralAnisotropy pentagon_anisotropy() {
  const double pi = std::numbers::pi;
  std::vector<Vec2> n;
  for (int j = 0; j < 5; ++j) n.push_back(unit_dir(pi * (2 * j + 1) / 5));
  return PolyhedralAnisotropy::from_normals(std::move(n));
}

}  // namespace spiralflow
