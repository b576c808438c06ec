#pragma once

// Finite-difference kernels on the masked grid: minmod-corrected upwind
// differences of G = u - theta, the eikonal weight psi, and the adjoint
// forward-gradient / backward-divergence pair whose composition is the
// five-point Laplacian with Neumann (copy) ghosts.

#include <cmath>
#include <vector>

#include "spiralflow/anisotropy.hpp"
#include "spiralflow/domain.hpp"

namespace spiralflow {

using FieldBuffer = std::vector<double>;

struct VectorField {
  FieldBuffer x, y;
  static VectorField zeros(int count) {
    VectorField v;
    v.x.assign(count, 0.0);
    v.y.assign(count, 0.0);
    return v;
  }
};

/// sigma(p, q) = p when |p| < q, q otherwise.
inline double minmod_sigma(double p, double q) { return std::abs(p) < q ? p : q; }

enum class Axis { x, y };

namespace detail {

// G-difference to the neighbour `step` nodes away along `axis` (step in
// {-1, +1}), branch-safe via the precomputed edge increments of theta.
inline double g_diff(const DomainMask& m, const FieldBuffer& u, int i, int j, Axis axis,
                     int step) {
  const Grid& g = m.grid;
  int id = g.id(i, j);
  if (axis == Axis::x) {
    if (step > 0) return u[g.id(i + 1, j)] - u[id] - m.thx[id];
    return u[g.id(i - 1, j)] - u[id] + m.thx[g.id(i - 1, j)];
  }
  if (step > 0) return u[g.id(i, j + 1)] - u[id] - m.thy[id];
  return u[g.id(i, j - 1)] - u[id] + m.thy[g.id(i, j - 1)];
}

}  // namespace detail

/// One-sided difference of G = u - theta at an active node. Uses the
/// second-order minmod-corrected formula when the same-side first and second
/// neighbours, the opposite-side neighbour, and (optionally) the same-sign
/// cross neighbour are active; falls back to the plain first-order one-sided
/// difference otherwise. Missing neighbours act as Neumann copies, so the
/// fallback at a wall is 0.
inline double upwind_diff(const DomainMask& m, const FieldBuffer& u, int i, int j, Axis axis,
                          int sign, bool demote_cross = true) {
  const double dx = m.grid.dx;
  const int di = axis == Axis::x ? sign : 0;
  const int dj = axis == Axis::x ? 0 : sign;
  if (!m.is_active(i + di, j + dj)) return 0.0;  // ghost copy: one-sided slope vanishes
  const double d_same = detail::g_diff(m, u, i, j, axis, sign);
  const double first_order = sign * d_same / dx;

  bool hat = m.is_active(i + 2 * di, j + 2 * dj) && m.is_active(i - di, j - dj);
  if (demote_cross) {
    // Cross-direction activity test of the upwind table: the +x stencil also
    // requires the +y neighbour (and symmetrically), else demote.
    const int ci = axis == Axis::x ? 0 : sign;
    const int cj = axis == Axis::x ? sign : 0;
    hat = hat && m.is_active(i + ci, j + cj);
  }
  if (!hat) return first_order;

  const double d_far = detail::g_diff(m, u, i + di, j + dj, axis, sign);
  const double d_opp = detail::g_diff(m, u, i, j, axis, -sign);
  const double curv_same = (d_far - d_same) / (dx * dx);
  const double curv_centered = (d_same + d_opp) / (dx * dx);
  return first_order - sign * 0.5 * dx * minmod_sigma(curv_same, curv_centered);
}

/// q . grad(G) with the one-sided difference per component selected by the
/// sign of that component (>= 0 picks the + side).
inline double eikonal_term(const DomainMask& m, const FieldBuffer& u, int i, int j, Vec2 q,
                           bool demote_cross = true) {
  double r = 0.0;
  if (q.x != 0.0)
    r += q.x * upwind_diff(m, u, i, j, Axis::x, q.x >= 0 ? +1 : -1, demote_cross);
  if (q.y != 0.0)
    r += q.y * upwind_diff(m, u, i, j, Axis::y, q.y >= 0 ? +1 : -1, demote_cross);
  return r;
}

/// psi_{i,j} = max_k (n_k . grad(G))_{i,j}, clamped at 0.
inline FieldBuffer psi_field(const PolyhedralAnisotropy& a, const PhaseField& g,
                             bool demote_cross = true) {
  const DomainMask& m = *g.mask;
  FieldBuffer psi(m.grid.count(), 0.0);
  const int n = m.grid.n;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      int id = m.grid.id(i, j);
      if (!m.active[id]) continue;
      double dxp = upwind_diff(m, g.u, i, j, Axis::x, +1, demote_cross);
      double dxm = upwind_diff(m, g.u, i, j, Axis::x, -1, demote_cross);
      double dyp = upwind_diff(m, g.u, i, j, Axis::y, +1, demote_cross);
      double dym = upwind_diff(m, g.u, i, j, Axis::y, -1, demote_cross);
      double best = 0.0;
      for (Vec2 nk : a.normals()) {
        double v = nk.x * (nk.x >= 0 ? dxp : dxm) + nk.y * (nk.y >= 0 ? dyp : dym);
        if (v > best) best = v;
      }
      psi[id] = best;
    }
  return psi;
}

/// Forward-difference gradient; edges to inactive neighbours contribute 0.
inline void gradient_fwd(const DomainMask& m, const FieldBuffer& w, VectorField& out) {
  const int n = m.grid.n;
  const double dx = m.grid.dx;
  out.x.assign(m.grid.count(), 0.0);
  out.y.assign(m.grid.count(), 0.0);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      int id = m.grid.id(i, j);
      if (!m.active[id]) continue;
      if (m.is_active(i + 1, j)) out.x[id] = (w[m.grid.id(i + 1, j)] - w[id]) / dx;
      if (m.is_active(i, j + 1)) out.y[id] = (w[m.grid.id(i, j + 1)] - w[id]) / dx;
    }
}

/// Negative adjoint of gradient_fwd on the masked grid, so that
/// <grad w, v> = -<w, div v> holds exactly with the dx^2 inner product.
inline void divergence_bwd(const DomainMask& m, const VectorField& v, FieldBuffer& out) {
  const int n = m.grid.n;
  const double dx = m.grid.dx;
  out.assign(m.grid.count(), 0.0);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      int id = m.grid.id(i, j);
      if (!m.active[id]) continue;
      double s = 0.0;
      if (m.is_active(i + 1, j)) s += v.x[id];
      if (m.is_active(i - 1, j)) s -= v.x[m.grid.id(i - 1, j)];
      if (m.is_active(i, j + 1)) s += v.y[id];
      if (m.is_active(i, j - 1)) s -= v.y[m.grid.id(i, j - 1)];
      out[id] = s / dx;
    }
}

/// Five-point Laplacian with Neumann copy ghosts; equals div_bwd(grad_fwd(w)).
inline double laplacian(const DomainMask& m, const FieldBuffer& w, int i, int j) {
  const double dx2 = m.grid.dx * m.grid.dx;
  int id = m.grid.id(i, j);
  double s = 0.0;
  if (m.is_active(i + 1, j)) s += w[m.grid.id(i + 1, j)] - w[id];
  if (m.is_active(i - 1, j)) s += w[m.grid.id(i - 1, j)] - w[id];
  if (m.is_active(i, j + 1)) s += w[m.grid.id(i, j + 1)] - w[id];
  if (m.is_active(i, j - 1)) s += w[m.grid.id(i, j - 1)] - w[id];
  return s / dx2;
}

}  // namespace spiralflow
