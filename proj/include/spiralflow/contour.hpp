#pragma once

// Extraction of the spiral set {u - theta = 0 mod 2 pi} from a phase field.
// Per cell, a continuous branch of theta is anchored at one corner, the
// nearest sheet is subtracted, and marching squares runs on the shifted
// values; steep cells get one level of bilinear subdivision. Segments are
// oriented by the level-set normal -grad(u - theta)/|.| and stitched into
// polylines.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <unordered_map>
#include <vector>

#include "spiralflow/domain.hpp"
#include "spiralflow/front_tracking.hpp"  // Polyline

namespace spiralflow {

struct ContourSegment {
  Vec2 a, b;
};

struct ContourSet {
  std::vector<Polyline> lines;
  std::vector<ContourSegment> segments;  // raw oriented marching-squares output

  double total_length() const {
    double s = 0;
    for (const ContourSegment& seg : segments) s += (seg.b - seg.a).norm();
    return s;
  }
};

namespace detail {

// Marching squares on one (sub)cell with corner values v00, v10, v11, v01 at
// positions p00 .. p01 (counterclockwise from the lower-left corner).
// Appends oriented segments; orientation follows the tangent
// rot_ccw(grad v) so that the normal -grad v sits on the left-turn side.
inline void march_cell(Vec2 p00, double v00, Vec2 p10, double v10, Vec2 p11, double v11,
                       Vec2 p01, double v01, std::vector<ContourSegment>& out) {
  auto inside = [](double v) { return v >= 0.0; };
  int code = (inside(v00) ? 1 : 0) | (inside(v10) ? 2 : 0) | (inside(v11) ? 4 : 0) |
             (inside(v01) ? 8 : 0);
  if (code == 0 || code == 15) return;
  auto lerp = [](Vec2 a, double va, Vec2 b, double vb) {
    double t = va / (va - vb);
    return a + t * (b - a);
  };
  Vec2 e_bottom = lerp(p00, v00, p10, v10);
  Vec2 e_right = lerp(p10, v10, p11, v11);
  Vec2 e_top = lerp(p01, v01, p11, v11);
  Vec2 e_left = lerp(p00, v00, p01, v01);

  const double hx = (p10 - p00).norm();
  const double hy = (p01 - p00).norm();
  auto emit = [&](Vec2 a, Vec2 b) {
    Vec2 mid = 0.5 * (a + b);
    double s = std::clamp((mid - p00).dot(p10 - p00) / (hx * hx), 0.0, 1.0);
    double t = std::clamp((mid - p00).dot(p01 - p00) / (hy * hy), 0.0, 1.0);
    double gx = ((v10 - v00) * (1 - t) + (v11 - v01) * t) / hx;
    double gy = ((v01 - v00) * (1 - s) + (v11 - v10) * s) / hy;
    Vec2 tangent{-gy, gx};  // rot_ccw(grad v); normal -grad v
    if ((b - a).dot(tangent) < 0) std::swap(a, b);
    if ((b - a).norm2() > 0) out.push_back({a, b});
  };

  switch (code) {
    case 1: case 14: emit(e_left, e_bottom); break;
    case 2: case 13: emit(e_bottom, e_right); break;
    case 3: case 12: emit(e_left, e_right); break;
    case 4: case 11: emit(e_right, e_top); break;
    case 6: case 9: emit(e_bottom, e_top); break;
    case 7: case 8: emit(e_top, e_left); break;
    case 5: case 10: {
      // Saddle: resolve by the cell-mean sign.
      bool mean_in = inside((v00 + v10 + v11 + v01) / 4);
      if ((code == 5) == mean_in) {
        emit(e_left, e_bottom);
        emit(e_right, e_top);
      } else {
        emit(e_left, e_top);
        emit(e_right, e_bottom);
      }
      break;
    }
    default: break;
  }
}

inline std::int64_t quantize(double v, double q) { return std::llround(v / q); }

struct PointKey {
  std::int64_t x, y;
  bool operator==(const PointKey&) const = default;
};

struct PointKeyHash {
  std::size_t operator()(const PointKey& k) const {
    return std::hash<std::int64_t>()(k.x * 1000003LL + k.y);
  }
};

}  // namespace detail

/// Stitches raw segments into polylines by matching endpoints (tolerance a
/// tiny fraction of dx); marks a polyline closed when it returns to its start.
inline std::vector<Polyline> stitch_segments(const std::vector<ContourSegment>& segments,
                                             double dx) {
  using detail::PointKey;
  const double q = dx * 1e-6;
  auto key = [&](Vec2 p) { return PointKey{detail::quantize(p.x, q), detail::quantize(p.y, q)}; };
  std::unordered_map<PointKey, std::vector<int>, detail::PointKeyHash> at_point;
  for (int s = 0; s < static_cast<int>(segments.size()); ++s) {
    at_point[key(segments[s].a)].push_back(s);
    at_point[key(segments[s].b)].push_back(s);
  }
  std::vector<std::uint8_t> used(segments.size(), 0);
  std::vector<Polyline> lines;
  for (int s0 = 0; s0 < static_cast<int>(segments.size()); ++s0) {
    if (used[s0]) continue;
    used[s0] = 1;
    std::vector<Vec2> chain{segments[s0].a, segments[s0].b};
    auto extend = [&](bool forward) {
      for (;;) {
        Vec2 tip = forward ? chain.back() : chain.front();
        auto it = at_point.find(key(tip));
        if (it == at_point.end()) return;
        int next = -1;
        Vec2 far{};
        for (int cand : it->second) {
          if (used[cand]) continue;
          if (key(segments[cand].a) == key(tip)) far = segments[cand].b;
          else far = segments[cand].a;
          next = cand;
          break;
        }
        if (next < 0) return;
        used[next] = 1;
        if (forward) chain.push_back(far);
        else chain.insert(chain.begin(), far);
      }
    };
    extend(true);
    extend(false);
    bool closed = chain.size() > 3 && key(chain.front()) == key(chain.back());
    if (closed) chain.pop_back();
    lines.push_back(Polyline{std::move(chain), closed});
  }
  return lines;
}

/// Zero set of u - theta mod 2 pi over all cells whose four corners are
/// active. Cells whose branch-shifted corner values still reach magnitude pi
/// are subdivided once bilinearly.
inline ContourSet extract_contour(const PhaseField& u) {
  const DomainMask& m = *u.mask;
  const Grid& g = m.grid;
  const double two_pi = 2 * std::numbers::pi;
  const double pi = std::numbers::pi;
  ContourSet out;
  for (int j = 0; j + 1 < g.n; ++j)
    for (int i = 0; i + 1 < g.n; ++i) {
      const int id00 = g.id(i, j), id10 = g.id(i + 1, j);
      const int id11 = g.id(i + 1, j + 1), id01 = g.id(i, j + 1);
      if (!(m.active[id00] && m.active[id10] && m.active[id11] && m.active[id01])) continue;
      // Continuous branch of theta over the cell, anchored at the ll corner.
      const double t00 = m.th0[id00];
      const double t10 = t00 + m.thx[id00];
      const double t01 = t00 + m.thy[id00];
      const double t11 = t10 + m.thy[id10];
      double v00 = u.u[id00] - t00;
      double v10 = u.u[id10] - t10;
      double v11 = u.u[id11] - t11;
      double v01 = u.u[id01] - t01;
      const Vec2 p00 = g.node(i, j), p10 = g.node(i + 1, j);
      const Vec2 p11 = g.node(i + 1, j + 1), p01 = g.node(i, j + 1);

      auto shift_to_sheet = [&](double& a, double& b, double& c, double& d) {
        double mean = (a + b + c + d) / 4;
        double s = two_pi * std::round(mean / two_pi);
        a -= s; b -= s; c -= s; d -= s;
        return std::max(std::max(std::abs(a), std::abs(b)), std::max(std::abs(c), std::abs(d)));
      };
      double spread = shift_to_sheet(v00, v10, v11, v01);
      if (spread < pi) {
        detail::march_cell(p00, v00, p10, v10, p11, v11, p01, v01, out.segments);
        continue;
      }
      // One bilinear refinement: 3x3 values at half spacing, each subcell
      // re-shifted to its own nearest sheet.
      double vals[3][3] = {{v00, (v00 + v10) / 2, v10},
                           {(v00 + v01) / 2, (v00 + v10 + v11 + v01) / 4, (v10 + v11) / 2},
                           {v01, (v01 + v11) / 2, v11}};
      const double hdx = g.dx / 2;
      for (int sj = 0; sj < 2; ++sj)
        for (int si = 0; si < 2; ++si) {
          double a = vals[sj][si], b = vals[sj][si + 1];
          double c = vals[sj + 1][si + 1], d = vals[sj + 1][si];
          shift_to_sheet(a, b, c, d);
          Vec2 q00 = p00 + Vec2{si * hdx, sj * hdx};
          detail::march_cell(q00, a, q00 + Vec2{hdx, 0}, b, q00 + Vec2{hdx, hdx}, c,
                             q00 + Vec2{0, hdx}, d, out.segments);
        }
    }
  out.lines = stitch_segments(out.segments, g.dx);
  return out;
}

/// Number of intersection points between the contour segments and the probe
/// segment [a, b]. Robust to how segments are stitched.
inline int count_segment_crossings(const ContourSet& cs, Vec2 a, Vec2 b) {
  auto cross = [](Vec2 u, Vec2 v) { return u.x * v.y - u.y * v.x; };
  int count = 0;
  Vec2 ab = b - a;
  for (const ContourSegment& s : cs.segments) {
    Vec2 cd = s.b - s.a;
    double den = cross(ab, cd);
    if (den == 0) continue;
    double t = cross(s.a - a, cd) / den;
    double u = cross(s.a - a, ab) / den;
    if (t >= 0 && t < 1 && u >= 0 && u < 1) ++count;
  }
  return count;
}

/// Length-weighted histogram of segment normal angles in [0, 2 pi).
inline std::vector<double> contour_normal_histogram(const ContourSet& cs, int bins) {
  const double two_pi = 2 * std::numbers::pi;
  std::vector<double> h(bins, 0.0);
  for (const ContourSegment& s : cs.segments) {
    Vec2 t = s.b - s.a;
    double len = t.norm();
    if (len == 0) continue;
    // tangent = rot_cw(normal), so normal = rot_ccw(tangent) = (-t.y, t.x)
    double ang = std::atan2(t.x, -t.y);
    if (ang < 0) ang += two_pi;
    int b = std::min(bins - 1, static_cast<int>(ang / two_pi * bins));
    h[b] += len;
  }
  return h;
}

/// Number of circular clusters of consecutive bins above rel_threshold * max.
inline int count_angular_peaks(const std::vector<double>& hist, double rel_threshold) {
  double mx = 0;
  for (double v : hist) mx = std::max(mx, v);
  if (mx <= 0) return 0;
  const int n = static_cast<int>(hist.size());
  auto above = [&](int i) { return hist[(i % n + n) % n] > rel_threshold * mx; };
  int clusters = 0;
  for (int i = 0; i < n; ++i)
    if (above(i) && !above(i - 1)) ++clusters;
  if (clusters == 0 && above(0)) clusters = 1;  // all bins above threshold
  return clusters;
}

}  // namespace spiralflow
