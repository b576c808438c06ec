#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "spiralflow/front_tracking.hpp"
#include "spiralflow/bregman.hpp"

using namespace spiralflow;
using Catch::Approx;

namespace {
const double pi = std::numbers::pi;

PolyhedralAnisotropy hexagon() {
  std::vector<Vec2> n;
  for (int j = 0; j < 6; ++j) n.push_back(unit_dir(pi * (2 * j + 1) / 6));
  return PolyhedralAnisotropy::from_normals(std::move(n));
}

// Independent closure oracle: translate every facet line by V_j * dt, rebuild
// the vertices as line intersections, and measure the new lengths. Facet k
// stays pinned at the origin and the half-line reaches to infinity.
std::vector<double> lengths_after_line_translation(const FacetChain& c, double dt) {
  const int k = c.k();
  std::vector<Vec2> y(k + 1);
  y[k] = Vec2{0, 0};
  for (int j = k; j >= 1; --j) y[j - 1] = y[j] + c.d(j) * c.wulff.wulff_facet_tangent(c.dir(j));
  std::vector<double> offset(k + 1), velocity(k + 1, 0.0);
  for (int j = 0; j <= k; ++j) offset[j] = y[j].dot(c.wulff.wulff_facet_normal(c.dir(j)));
  velocity[0] = c.f;
  for (int j = 1; j < k; ++j) velocity[j] = c.f - c.wulff.wulff_facet_length(c.dir(j)) / c.d(j);
  velocity[k] = 0.0;
  std::vector<Vec2> y_new(k + 1);
  y_new[k] = Vec2{0, 0};
  for (int j = 0; j < k; ++j) {
    // vertex j = intersection of facet lines j and j+1 after translation
    Vec2 n1 = c.wulff.wulff_facet_normal(c.dir(j));
    Vec2 n2 = c.wulff.wulff_facet_normal(c.dir(j + 1));
    double p1 = offset[j] + velocity[j] * dt;
    double p2 = offset[j + 1] + velocity[j + 1] * dt;
    double det = n1.x * n2.y - n1.y * n2.x;
    y_new[j] = Vec2{(p1 * n2.y - p2 * n1.y) / det, (n1.x * p2 - n2.x * p1) / det};
  }
  std::vector<double> lengths(k);
  for (int j = 1; j <= k; ++j)
    lengths[j - 1] = (y_new[j - 1] - y_new[j]).dot(c.wulff.wulff_facet_tangent(c.dir(j)));
  return lengths;
}

FacetChain square_chain(std::vector<double> lengths, double f = 1.0, int start_dir = 0) {
  FacetChain c;
  c.wulff = square_anisotropy();
  c.f = f;
  c.start_dir = start_dir;
  c.lengths = std::move(lengths);
  return c;
}
}  // namespace

TEST_CASE("facet coefficients") {
  SECTION("square Wulff: b = 0, c = 1") {
    auto sq = square_anisotropy();
    for (int j = 0; j < 4; ++j) {
      FacetCoefficients fc = facet_coefficients(sq, j);
      CHECK(fc.b == Approx(0.0).margin(1e-14));
      CHECK(fc.c_plus == Approx(1.0));
      CHECK(fc.c_minus == Approx(1.0));
    }
  }
  SECTION("hexagon: b = 2 cot(pi/3), c = 2/sqrt(3)") {
    auto hex = hexagon();
    FacetCoefficients fc = facet_coefficients(hex, 2);
    CHECK(fc.b == Approx(2.0 / std::sqrt(3.0)));
    CHECK(fc.c_plus == Approx(2.0 / std::sqrt(3.0)));
    CHECK(fc.c_minus == Approx(2.0 / std::sqrt(3.0)));
  }
  SECTION("gap of pi rejected") {
    // a 'slab' anisotropy cannot even be constructed; the coefficient guard is
    // exercised through the anisotropy invariant instead
    REQUIRE_THROWS_AS(PolyhedralAnisotropy::from_normals({{0, 1}, {0.5, 1}, {0, -1}}),
                      std::invalid_argument);
  }
}

TEST_CASE("ode right side") {
  SECTION("interior facets at equilibrium length are stationary") {
    // d_j = ell / f for interior facets of a long chain
    auto sq = square_anisotropy();
    double ell = sq.wulff_facet_length(0);
    double f = 2.0;
    FacetChain c = square_chain({ell / f, ell / f, ell / f, ell / f, ell / f, 0.3}, f);
    std::vector<double> rhs = ode_rhs(c);
    for (int j = 2; j <= c.k() - 2; ++j) CHECK(rhs[j - 1] == Approx(0.0).margin(1e-13));
  }
  SECTION("single interior facet of half the critical length") {
    // k = 2: facets 0 (half line), 1 (interior, d = ell/2), 2 (center);
    // V_1 = 1 - ell/(ell/2) = -1, so dd_1 = c+*0 + c-*f = 1, dd_2 = c-*V_1 = -1
    auto sq = square_anisotropy();
    double ell = sq.wulff_facet_length(0);
    FacetChain c = square_chain({ell / 2, 0.0});
    std::vector<double> rhs = ode_rhs(c);
    CHECK(rhs[0] == Approx(1.0));
    CHECK(rhs[1] == Approx(-1.0));
  }
  SECTION("center facet grows with the neighbour velocity") {
    FacetChain c = square_chain({1.7, 0.2});
    double v1 = c.f - c.wulff.wulff_facet_length(c.dir(1)) / c.d(1);
    std::vector<double> rhs = ode_rhs(c);
    CHECK(rhs[1] == Approx(facet_coefficients(c.wulff, c.dir(2)).c_minus * v1));
  }
  SECTION("nonpositive interior length rejected") {
    FacetChain c = square_chain({-0.1, 0.0});
    REQUIRE_THROWS_AS(ode_rhs(c), std::invalid_argument);
  }
}

TEST_CASE("closure identity pins the coefficients") {
  // moving each facet line normally with its own velocity and intersecting
  // again must reproduce ode_rhs; the vertex motion is affine in t, so the
  // difference quotient matches at machine precision for any dt.
  auto check_chain = [](const FacetChain& c, double dt) {
    std::vector<double> rhs = ode_rhs(c);
    std::vector<double> after = lengths_after_line_translation(c, dt);
    double worst = 0;
    for (int j = 0; j < c.k(); ++j)
      worst = std::max(worst, std::abs((after[j] - c.lengths[j]) / dt - rhs[j]));
    return worst;
  };
  FacetChain sq = square_chain({0.9, 0.5, 1.1, 0.4, 0.2});
  FacetChain hexc = []() {
    FacetChain c;
    c.wulff = hexagon();
    c.f = 3.0;
    c.start_dir = 2;
    c.lengths = {0.8, 0.3, 0.55, 0.1};
    return c;
  }();
  for (double dt : {1e-3, 5e-4}) {
    CHECK(check_chain(sq, dt) < 1e-9);
    CHECK(check_chain(hexc, dt) < 1e-9);
  }
}

TEST_CASE("RK4 stepping") {
  SECTION("zero right side leaves the state unchanged (generic integrator)") {
    // equilibrium interior facets, neighbours of the special rows excluded
    auto sq = square_anisotropy();
    double ell = sq.wulff_facet_length(0);
    FacetChain c = square_chain({ell, ell, ell, ell, ell, 0.1}, 1.0);
    std::vector<double> rhs = ode_rhs(c);
    FacetChain c2 = rk4_step(c, 1e-5);
    for (int j = 2; j <= c.k() - 2; ++j)
      CHECK(c2.d(j) == Approx(c.d(j)).margin(1e-4 * std::abs(rhs[j - 1]) + 1e-15));
  }
  SECTION("order-4 self convergence") {
    FacetChain c = square_chain({0.9, 0.5, 1.1, 0.4, 0.2});
    auto advance = [&](double dt, int steps) {
      FacetChain x = c;
      for (int s = 0; s < steps; ++s) x = rk4_step(x, dt);
      return x;
    };
    const double T = 0.01;
    FacetChain a = advance(T / 8, 8);
    FacetChain b = advance(T / 16, 16);
    FacetChain d = advance(T / 32, 32);
    double e1 = 0, e2 = 0;
    for (int j = 0; j < c.k(); ++j) {
      e1 = std::max(e1, std::abs(a.d(j + 1) - b.d(j + 1)));
      e2 = std::max(e2, std::abs(b.d(j + 1) - d.d(j + 1)));
    }
    double order = std::log2(e1 / e2);
    CHECK(order > 3.7);
    CHECK(order < 4.3);
  }
  SECTION("step that kills an interior facet is rejected") {
    FacetChain c = square_chain({1e-4, 0.0});
    REQUIRE_THROWS_AS(rk4_step(c, 1.0), std::invalid_argument);
  }
}

TEST_CASE("facet generation at the critical length") {
  auto sq = square_anisotropy();
  BcfScaled scaled = rescale_bcf(4.0, 0.2, sq);  // Wulff [-0.8,0.8]^2, f = 4
  FacetChain c;
  c.wulff = scaled.gamma;
  c.f = scaled.f;
  c.start_dir = 1;
  c.lengths = {0.2};
  SECTION("below critical: unchanged") {
    FacetChain c2 = maybe_generate_facet(c);
    CHECK(c2.k() == 1);
  }
  SECTION("critical length 0.4 triggers generation") {
    CHECK(c.wulff.wulff_facet_length(c.dir(1)) / c.f == Approx(0.4));
    c.lengths = {0.4000001};
    FacetChain c2 = maybe_generate_facet(c);
    REQUIRE(c2.k() == 2);
    CHECK(c2.lengths.back() == 0.0);
    // a second call cannot trigger again: the new center facet has length 0
    FacetChain c3 = maybe_generate_facet(c2);
    CHECK(c3.k() == 2);
  }
}

TEST_CASE("polygon reconstruction") {
  SECTION("single facet chain") {
    // facet 1 along T_2 = (0,1) of the square Wulff: start_dir = 1
    FacetChain c = square_chain({0.5}, 1.0, 1);
    Polyline pl = reconstruct_polygon(c, -1.5, 1.5);
    REQUIRE(pl.pts.size() == 3);
    CHECK((pl.pts[0] - Vec2{0, 0}).norm() == 0.0);
    CHECK((pl.pts[1] - Vec2{0, 0.5}).norm() < 1e-14);
    // half-line along T_1 = (1,0), clipped at x = 1.5
    CHECK(pl.pts[2].x == Approx(1.5));
    CHECK(pl.pts[2].y == Approx(0.5));
  }
  SECTION("vertex recursion and tangents hold along a longer chain") {
    FacetChain c = square_chain({0.9, 0.5, 1.1, 0.4, 0.2}, 1.0, 2);
    Polyline pl = reconstruct_polygon(c, -5, 5);
    const int k = c.k();
    REQUIRE(static_cast<int>(pl.pts.size()) == k + 2);
    for (int j = k; j >= 1; --j) {
      Vec2 yj = pl.pts[k - j];
      Vec2 yjm1 = pl.pts[k - j + 1];
      Vec2 t = c.wulff.wulff_facet_tangent(c.dir(j));
      CHECK((yjm1 - (yj + c.d(j) * t)).norm() < 1e-12);
    }
  }
}

TEST_CASE("front-tracking evolution") {
  auto sq = square_anisotropy();
  BcfScaled scaled = rescale_bcf(4.0, 0.2, sq);
  FacetChain c0 = FacetChain::unit_spiral(scaled.gamma, scaled.f, 1);
  SECTION("unit spiral initial data") {
    CHECK(c0.k() == 1);
    CHECK(c0.lengths[0] == 0.0);
  }
  SECTION("facet count is non-decreasing; young facets sit near the critical length") {
    auto traj = evolve_ft(c0, 0.5, 1e-5, {0.1, 0.25, 0.5});
    REQUIRE(traj.size() == 3);
    int prev = 0;
    for (const auto& [t, chain] : traj) {
      CHECK(chain.k() >= prev);
      prev = chain.k();
    }
    const FacetChain& last = traj.back().second;
    REQUIRE(last.k() >= 3);
    double crit = last.wulff.wulff_facet_length(0) / last.f;
    CHECK(last.lengths.back() <= crit * (1 + 1e-6));
    for (int j = 1; j < last.k(); ++j) CHECK(last.d(j) > 0);
  }
  SECTION("first generation happens when d_1 = f t reaches the critical length") {
    // d_1 grows at exactly f for the square Wulff, so t* = crit / f = 0.1
    auto traj = evolve_ft(c0, 0.12, 1e-5, {0.09, 0.12});
    CHECK(traj[0].second.k() == 1);
    CHECK(traj[1].second.k() == 2);
  }
}
