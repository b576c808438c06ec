#pragma once

// Extensions of the core step: mixed anisotropies (one density drives the
// eikonal factor, another the curvature), interlace motion where every m0-th
// sheet follows its own law and the layer minimizers are blended by the
// periodic cutoff lambda, and the asymmetric hexagon family behind illusory
// loops and spirals.

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "spiralflow/bregman.hpp"

namespace spiralflow {

/// lambda(sigma) = max{0, min{1, (pi - |sigma|)/eps + 1/2}} with sigma wrapped
/// into [-m0 pi, m0 pi).
inline double lambda_cutoff(double sigma, double eps, int m0) {
  if (!(eps > 0 && eps < std::numbers::pi))
    throw std::invalid_argument("lambda_cutoff: eps must lie in (0, pi)");
  if (m0 < 1) throw std::invalid_argument("lambda_cutoff: m0 must be >= 1");
  const double period = 2 * std::numbers::pi * m0;
  double s = std::fmod(sigma + period / 2, period);
  if (s < 0) s += period;
  s -= period / 2;  // in [-m0 pi, m0 pi)
  double v = (std::numbers::pi - std::abs(s)) / eps + 0.5;
  return std::clamp(v, 0.0, 1.0);
}

struct InterlaceLayer {
  PolyhedralAnisotropy gamma;
  double f = 1.0;
  SolverParams params;
};

struct LayerSpec {
  int m0 = 2;
  double cutoff_eps = 0.1 * std::numbers::pi;
  std::vector<InterlaceLayer> layers;

  void validate(const SpiralCenters& centers) const {
    if (m0 < 1 || static_cast<int>(layers.size()) != m0)
      throw std::invalid_argument("interlace: need exactly m0 layers");
    for (const Center& c : centers.items)
      if (c.winding % m0 != 0)
        throw std::invalid_argument("interlace: every winding number must be a multiple of m0");
  }
};

/// One interlace step: each layer minimizer w*_l is computed by the core step
/// with its own (gamma_l, f_l), then blended node-wise with weights
/// lambda(u_n - theta - 2 pi l). Any branch of theta gives the same weights
/// because the windings are multiples of m0.
inline StepResult interlace_step(const PhaseField& u_n, const LayerSpec& spec) {
  const DomainMask& m = *u_n.mask;
  spec.validate(m.centers);
  const double two_pi = 2 * std::numbers::pi;

  std::vector<FieldBuffer> w_star(spec.layers.size());
  StepDiagnostics diag;
  long total_inner_weighted = 0;
  for (std::size_t l = 0; l < spec.layers.size(); ++l) {
    const InterlaceLayer& layer = spec.layers[l];
    FieldBuffer f_field(m.grid.count(), layer.f);
    try {
      StepResult r = minimize_step(u_n, layer.gamma, layer.gamma, f_field, layer.params);
      w_star[l] = std::move(r.u_next.u);
      diag.outer += r.diag.outer;
      diag.sor_sweeps += r.diag.sor_sweeps;
      diag.final_F += r.diag.final_F;
      total_inner_weighted += std::lround(r.diag.mean_inner * r.diag.outer);
    } catch (const SolverError& e) {
      throw SolverError("interlace layer " + std::to_string(l) + ": " + e.what(), e.residual,
                        e.step_index);
    }
  }
  diag.mean_inner = diag.outer > 0 ? static_cast<double>(total_inner_weighted) / diag.outer : 0;

  StepResult out;
  out.u_next.mask = u_n.mask;
  out.u_next.t = u_n.t + spec.layers.front().params.h;
  out.u_next.u = u_n.u;
  for (int id : m.active_nodes) {
    double phase = u_n.u[id] - m.th0[id];
    double acc = 0;
    for (std::size_t l = 0; l < spec.layers.size(); ++l) {
      double wgt = lambda_cutoff(phase - two_pi * static_cast<double>(l), spec.cutoff_eps, spec.m0);
      if (wgt != 0.0) acc += wgt * w_star[l][id];
    }
    out.u_next.u[id] = acc;
  }
  out.diag = std::move(diag);
  return out;
}

/// Core step with separate eikonal and curvature densities.
inline StepResult mixed_step(const PhaseField& u_n, const PolyhedralAnisotropy& a_eik,
                             const PolyhedralAnisotropy& a_curv, const FieldBuffer& f,
                             const SolverParams& p) {
  return minimize_step(u_n, a_curv, a_eik, f, p);
}

/// Hexagonal anisotropy whose 0-th facet energy is `a_ratio` times the other
/// five, cyclically rotated so that layer l has its cheap facet at direction
/// N_l. Built from the Frank-polygon vertices q_j = N_j scaled by 1/a on the
/// cheap slot.
inline PolyhedralAnisotropy illusory_anisotropy(double a_ratio, int layer) {
  if (!(a_ratio > 0 && a_ratio <= 1))
    throw std::invalid_argument("illusory_anisotropy: a_ratio must lie in (0, 1]");
  const double pi = std::numbers::pi;
  int l = ((layer % 6) + 6) % 6;
  std::vector<Vec2> q(6);
  for (int j = 0; j < 6; ++j) {
    q[j] = unit_dir(pi * j / 3);
    if (j == l) q[j] = q[j] / a_ratio;
  }
  return PolyhedralAnisotropy::from_dual_vertices(std::move(q));
}

}  // namespace spiralflow
