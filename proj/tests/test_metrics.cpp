#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "spiralflow/contour.hpp"
#include "spiralflow/metrics.hpp"

using namespace spiralflow;
using Catch::Approx;

namespace {
const double pi = std::numbers::pi;

struct Setup {
  std::shared_ptr<const DomainMask> mask;
  Grid grid;
};

Setup unit_center(double half = 1.0, double dx = 0.02, int m = 1) {
  Grid grid = Grid::from_box(-half, half, dx);
  auto centers = make_centers({{{0, 0}, m}}, 2 * dx, -half, half);
  return Setup{build_mask(grid, centers), grid};
}

double point_to_ray_distance(Vec2 p, double angle) {
  Vec2 d = unit_dir(angle);
  double t = std::max(0.0, p.dot(d));
  return (p - t * d).norm();
}
}  // namespace

TEST_CASE("contour of a constant field is a ray") {
  Setup s = unit_center();
  SECTION("u = 0: the ray at angle 0") {
    PhaseField u = PhaseField::constant(s.mask, 0.0);
    ContourSet cs = extract_contour(u);
    REQUIRE(!cs.segments.empty());
    double worst = 0, far = 0;
    for (const ContourSegment& seg : cs.segments) {
      worst = std::max(worst, point_to_ray_distance(seg.a, 0.0));
      far = std::max(far, seg.a.x);
    }
    CHECK(worst < s.grid.dx);
    CHECK(far > 0.9);  // reaches the box boundary
  }
  SECTION("u = c in (0, 2 pi): the ray at angle c") {
    const double c = 2.2;
    PhaseField u = PhaseField::constant(s.mask, c);
    ContourSet cs = extract_contour(u);
    REQUIRE(!cs.segments.empty());
    double worst = 0;
    for (const ContourSegment& seg : cs.segments)
      worst = std::max(worst, point_to_ray_distance(seg.a, c));
    CHECK(worst < s.grid.dx);
  }
  SECTION("adding 2 pi leaves the contour unchanged") {
    PhaseField u = PhaseField::constant(s.mask, 1.1);
    PhaseField u2 = PhaseField::constant(s.mask, 1.1 + 2 * pi);
    ContourSet a = extract_contour(u);
    ContourSet b = extract_contour(u2);
    REQUIRE(a.segments.size() == b.segments.size());
    double worst = 0;
    for (std::size_t k = 0; k < a.segments.size(); ++k)
      worst = std::max(worst, (a.segments[k].a - b.segments[k].a).norm() +
                                  (a.segments[k].b - b.segments[k].b).norm());
    CHECK(worst < 1e-9);
  }
  SECTION("m spiral rays cross a probe circle m times") {
    Setup s3 = unit_center(1.0, 0.02, 3);
    PhaseField u = PhaseField::constant(s3.mask, 0.5);
    ContourSet cs = extract_contour(u);
    int crossings = 0;
    const int np = 720;
    for (int k = 0; k < np; ++k) {
      Vec2 a = 0.5 * unit_dir(2 * pi * k / np);
      Vec2 b = 0.5 * unit_dir(2 * pi * (k + 1) / np);
      crossings += count_segment_crossings(cs, a, b);
    }
    CHECK(crossings == 3);
  }
}

TEST_CASE("distance metric D") {
  Grid grid = Grid::from_box(-1.0, 1.0, 0.02);
  auto make_set = [](std::vector<ContourSegment> segs) {
    ContourSet cs;
    cs.segments = std::move(segs);
    cs.lines = stitch_segments(cs.segments, 0.02);
    return cs;
  };
  Polyline horizontal;
  horizontal.pts = {{-0.5, 0.0}, {0.5, 0.0}};

  SECTION("identical curves give zero") {
    ContourSet cs = make_set({{{-0.5, 0.0}, {0.5, 0.0}}});
    CHECK(distance_D({horizontal}, cs, grid) < 1e-3 * grid.dx);
  }
  SECTION("parallel segments measure their offset") {
    for (double delta : {2 * grid.dx, 4 * grid.dx, 10 * grid.dx}) {
      ContourSet cs = make_set({{{-0.5, delta}, {0.5, delta}}});
      CHECK(distance_D({horizontal}, cs, grid) == Approx(delta).epsilon(0.02));
    }
  }
  SECTION("reference inside the test curve gives zero") {
    ContourSet cs = make_set({{{-0.5, 0.0}, {0.5, 0.0}}});
    Polyline part;
    part.pts = {{-0.1, 0.0}, {0.3, 0.0}};
    CHECK(distance_D({part}, cs, grid) < 1e-3 * grid.dx);
  }
  SECTION("empty contour is an error") {
    ContourSet cs;
    CHECK_THROWS_AS(distance_D({horizontal}, cs, grid), std::invalid_argument);
  }
}

TEST_CASE("level-set height field") {
  Setup s = unit_center();
  SECTION("u = pi at polar angle pi/2 gives H = 1/4") {
    PhaseField u = PhaseField::constant(s.mask, pi);
    HeightField h = height_levelset(u);
    int i = 50, j = 75;  // node (0, 0.5)
    REQUIRE(s.mask->is_active(i, j));
    Vec2 x = s.grid.node(i, j);
    REQUIRE(x.x == Approx(0.0).margin(1e-12));
    REQUIRE(x.y == Approx(0.5).margin(1e-12));
    CHECK(h.h[s.grid.id(i, j)] == Approx(0.25));
  }
  SECTION("u + 2 pi raises H by exactly one sheet") {
    PhaseField u = PhaseField::constant(s.mask, 1.3);
    PhaseField u2 = PhaseField::constant(s.mask, 1.3 + 2 * pi);
    HeightField h1 = height_levelset(u);
    HeightField h2 = height_levelset(u2);
    for (int id : s.mask->active_nodes)
      REQUIRE(h2.h[id] - h1.h[id] == Approx(1.0).margin(1e-12));
    CHECK(area_A(h1, h2) == Approx(1.0).margin(1e-12));
  }
  SECTION("H jumps by one across the extracted contour") {
    PhaseField u = PhaseField::constant(s.mask, 0.7);
    ContourSet cs = extract_contour(u);
    int sampled = 0;
    for (const ContourSegment& seg : cs.segments) {
      Vec2 mid = 0.5 * (seg.a + seg.b);
      if (mid.norm() < 0.3 || mid.norm() > 0.8) continue;
      Vec2 t = seg.b - seg.a;
      Vec2 nrm = Vec2{-t.y, t.x} / t.norm();
      double delta = 0.5 * s.grid.dx;
      double jump = height_levelset_at(u, mid + delta * nrm) -
                    height_levelset_at(u, mid - delta * nrm);
      REQUIRE(std::abs(std::abs(jump) - 1.0) < 0.05);
      if (++sampled >= 50) break;
    }
    REQUIRE(sampled >= 20);
  }
  SECTION("height jumps around a closed loop count the winding") {
    Setup s2 = unit_center(1.0, 0.02, 2);
    PhaseField u = PhaseField::constant(s2.mask, 0.4);
    const int np = 1440;
    double total = 0;
    int jumps = 0;
    for (int k = 0; k < np; ++k) {
      double a0 = 2 * pi * k / np, a1 = 2 * pi * (k + 1) / np;
      double dh = height_levelset_at(u, 0.6 * unit_dir(a1)) -
                  height_levelset_at(u, 0.6 * unit_dir(a0));
      total += dh;
      if (std::abs(dh) > 0.5) ++jumps;
    }
    CHECK(std::abs(total) < 1e-9);  // single-valued around the loop
    CHECK(jumps == 2);              // one unit drop per spiral sheet
  }
}

TEST_CASE("front-tracking height field") {
  Setup s = unit_center();
  SECTION("bare half-line: one cut, plain branch of arg") {
    FacetChain c;
    c.wulff = square_anisotropy();
    c.f = 1.0;
    c.start_dir = 1;  // half-line along T_1 = (1, 0), cut angle theta* = 0
    HeightField h = height_fronttracking(c, s.mask);
    Vec2 x = s.grid.node(75, 25);  // (0.5, -0.5)
    double expect = std::atan2(x.y, x.x);
    if (expect > 0) expect -= 2 * pi;
    CHECK(h.h[s.grid.id(75, 25)] == Approx(expect / (2 * pi)).margin(1e-12));
  }
  SECTION("one facet adds one quarter-plane terrace") {
    // vertical facet x = 0, y in [0, 0.3], then half-line to the right at
    // y = 0.3; the terrace {x >= 0, y > 0.3} sits one sheet lower
    FacetChain c;
    c.wulff = square_anisotropy();
    c.f = 1.0;
    c.start_dir = 1;
    c.lengths = {0.3};
    HeightField h = height_fronttracking(c, s.mask);
    const double theta_star = pi / 2;  // tangent angle of the center facet
    auto branch = [&](Vec2 x) {
      double a = std::atan2(x.y, x.x);
      while (a > theta_star) a -= 2 * pi;
      while (a <= theta_star - 2 * pi) a += 2 * pi;
      return a;
    };
    auto at = [&](int i, int j) { return h.h[s.grid.id(i, j)]; };
    // (0.5, 0.6): inside the terrace
    CHECK(at(75, 80) == Approx((branch({0.5, 0.6}) - 2 * pi) / (2 * pi)).margin(1e-12));
    // (0.5, -0.6): below the half-line, no terrace
    CHECK(at(75, 20) == Approx(branch({0.5, -0.6}) / (2 * pi)).margin(1e-12));
    // (-0.5, 0.6): left of the facet, no terrace
    CHECK(at(25, 80) == Approx(branch({-0.5, 0.6}) / (2 * pi)).margin(1e-12));
  }
}

TEST_CASE("area metric A") {
  Setup s = unit_center();
  PhaseField u = PhaseField::constant(s.mask, 0.0);
  HeightField h1 = height_levelset(u);
  SECTION("identical fields give zero") { CHECK(area_A(h1, h1) == 0.0); }
  SECTION("constant offset of two sheets gives exactly 2") {
    HeightField h2 = h1;
    for (int id : s.mask->active_nodes) h2.h[id] += 2.0;
    CHECK(area_A(h1, h2) == 2.0);
  }
  SECTION("checkerboard half-sheet difference averages to one half") {
    HeightField h2 = h1;
    for (int id : s.mask->active_nodes) {
      int i = id % s.grid.n, j = id / s.grid.n;
      h2.h[id] += ((i + j) % 2 == 0) ? 0.5 : -0.5;
    }
    CHECK(area_A(h1, h2) == 0.5);
  }
  SECTION("mismatched grids are rejected") {
    Setup other = unit_center(1.0, 0.04);
    PhaseField u2 = PhaseField::constant(other.mask, 0.0);
    HeightField h2 = height_levelset(u2);
    CHECK_THROWS_AS(area_A(h1, h2), std::invalid_argument);
  }
  SECTION("level-set and front-tracking heights align for matching rays") {
    // u = 0 puts the level-set curve on the +x axis; the matching chain is
    // the bare half-line along T_1
    FacetChain c;
    c.wulff = square_anisotropy();
    c.f = 1.0;
    c.start_dir = 1;
    HeightField hd = height_fronttracking(c, s.mask);
    CHECK(area_A(h1, hd) < 0.01);
  }
}
