#pragma once

// Minimizing-movements engine. One time step minimizes
//   E(w; g) = int gamma(grad(w - theta)) - int f w + |w - g|^2 / (2 h psi)
// by split Bregman: an outer loop updating the Bregman variable b and an
// inner loop alternating the SOR elliptic solve in w with the pointwise
// polyhedral shrinkage in d. psi = gamma_eik(grad(u_n - theta)) is frozen for
// the whole step; nodes with psi below the cutoff alpha stay at w = g.

#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "spiralflow/anisotropy.hpp"
#include "spiralflow/domain.hpp"
#include "spiralflow/fd.hpp"

namespace spiralflow {

struct SolverParams {
  double h = 8e-4;       // time step
  double mu = 0.01;      // Bregman penalty
  double eps_in = 1e-4;  // inner stopping threshold on |dF|
  double eps_out = 1e-7; // outer stopping threshold on |dF|
  double alpha = 1e-8;   // cutoff floor for the 1/psi weight
  double psi_ceiling = std::numeric_limits<double>::infinity();
  double sor_omega = 1.5;
  double sor_tol_rel = 1e-8;  // tolerance factor: tol = rel * (1 + max|rhs|)
  int sor_max_iter = 10000;
  int max_outer = 500;
  int max_inner = 50;
  bool upwind_demote_cross = true;
  bool record_energy = false;  // keep per-outer energy pairs in diagnostics

  void validate() const {
    if (!(h > 0 && mu > 0 && eps_in > 0 && eps_out > 0 && alpha > 0))
      throw std::invalid_argument("solver params: h, mu, eps_in, eps_out, alpha must be positive");
    if (!(sor_omega > 0 && sor_omega < 2))
      throw std::invalid_argument("solver params: sor_omega must lie in (0, 2)");
  }
};

class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, double residual, int step_index = -1)
      : std::runtime_error(what), residual(residual), step_index(step_index) {}
  double residual = 0;
  int step_index = -1;
};

struct StepDiagnostics {
  int outer = 0;
  double mean_inner = 0.0;
  double final_F = 0.0;
  long sor_sweeps = 0;
  std::vector<double> outer_F_start;  // filled when record_energy
  std::vector<double> outer_F_end;
  FieldBuffer psi;  // the frozen eikonal field of this step
};

struct StepResult {
  PhaseField u_next;
  StepDiagnostics diag;
};

/// BCF-type law V = v_inf (1 - rho_c kappa) rewritten as V = -kappa~ + f~ with
/// f~ = v_inf and gamma~ = v_inf rho_c gamma.
struct BcfScaled {
  double f;
  PolyhedralAnisotropy gamma;
};

inline BcfScaled rescale_bcf(double v_inf, double rho_c, const PolyhedralAnisotropy& a) {
  if (!(v_inf > 0 && rho_c > 0))
    throw std::invalid_argument("rescale_bcf: v_inf and rho_c must be positive");
  return BcfScaled{v_inf, a.scaled(v_inf * rho_c)};
}

/// Solves w - h mu psi Lap(w) = rhs with Neumann closure by lexicographic SOR.
/// Frozen nodes keep their current value and act as fixed neighbours. Returns
/// the number of sweeps; throws SolverError when the residual does not reach
/// tol = sor_tol_rel * (1 + max|rhs|) within sor_max_iter sweeps.
inline int sor_solve(const DomainMask& m, const FieldBuffer& psi,
                     const std::vector<std::uint8_t>& frozen, const FieldBuffer& rhs,
                     const SolverParams& p, FieldBuffer& w) {
  const int n = m.grid.n;
  const double dx2 = m.grid.dx * m.grid.dx;
  const double hmu = p.h * p.mu;
  double rhs_max = 0;
  for (int id : m.active_nodes)
    if (!frozen[id]) rhs_max = std::max(rhs_max, std::abs(rhs[id]));
  const double tol = p.sor_tol_rel * (1.0 + rhs_max);

  for (int sweep = 1; sweep <= p.sor_max_iter; ++sweep) {
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        const int id = m.grid.id(i, j);
        if (!m.active[id] || frozen[id]) continue;
        const double c = hmu * psi[id] / dx2;
        double s = 0;
        int dirs = 0;
        if (m.is_active(i + 1, j)) { s += w[id + 1]; ++dirs; }
        if (m.is_active(i - 1, j)) { s += w[id - 1]; ++dirs; }
        if (m.is_active(i, j + 1)) { s += w[id + n]; ++dirs; }
        if (m.is_active(i, j - 1)) { s += w[id - n]; ++dirs; }
        const double w_gs = (rhs[id] + c * s) / (1.0 + c * dirs);
        w[id] += p.sor_omega * (w_gs - w[id]);
      }
    double res = 0;
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        const int id = m.grid.id(i, j);
        if (!m.active[id] || frozen[id]) continue;
        const double c = hmu * psi[id] / dx2;
        double s = 0;
        int dirs = 0;
        if (m.is_active(i + 1, j)) { s += w[id + 1]; ++dirs; }
        if (m.is_active(i - 1, j)) { s += w[id - 1]; ++dirs; }
        if (m.is_active(i, j + 1)) { s += w[id + n]; ++dirs; }
        if (m.is_active(i, j - 1)) { s += w[id - n]; ++dirs; }
        res = std::max(res, std::abs(w[id] * (1.0 + c * dirs) - c * s - rhs[id]));
      }
    if (res <= tol) return sweep;
  }
  double res = std::numeric_limits<double>::quiet_NaN();
  throw SolverError("SOR failed to reach tolerance " + std::to_string(tol) + " within " +
                        std::to_string(p.sor_max_iter) + " sweeps",
                    res);
}

/// Pointwise shrinkage update d = argmin gamma(d - grad theta) + mu/2 |d - grad w - b|^2.
inline void d_step(const DomainMask& m, const PolyhedralAnisotropy& a_curv,
                   const VectorField& grad_w, const VectorField& b, double mu, VectorField& d) {
  for (int id : m.active_nodes) {
    Vec2 y{grad_w.x[id] + b.x[id], grad_w.y[id] + b.y[id]};
    Vec2 z{m.tgx[id], m.tgy[id]};
    Vec2 r = a_curv.shrink(y, z, mu);
    d.x[id] = r.x;
    d.y[id] = r.y;
  }
}

/// The monitored functional F^k_{mu,alpha}(w, d; g) with the alpha-cutoff in
/// the fidelity weight.
inline double energy_F(const DomainMask& m, const PolyhedralAnisotropy& a_curv,
                       const FieldBuffer& w, const VectorField& d, const VectorField& b,
                       const FieldBuffer& g, const FieldBuffer& f, const FieldBuffer& psi,
                       const SolverParams& p, const VectorField& grad_w) {
  const double dx2 = m.grid.dx * m.grid.dx;
  double sum = 0;
  for (int id : m.active_nodes) {
    Vec2 dv{d.x[id], d.y[id]};
    Vec2 tg{m.tgx[id], m.tgy[id]};
    double fidelity = (w[id] - g[id]) * (w[id] - g[id]) / (2 * p.h * std::max(psi[id], p.alpha));
    Vec2 pen{d.x[id] - grad_w.x[id] - b.x[id], d.y[id] - grad_w.y[id] - b.y[id]};
    sum += a_curv.gamma(dv - tg) - f[id] * w[id] + fidelity + 0.5 * p.mu * pen.norm2();
  }
  return sum * dx2;
}

/// The time-step energy E(w; g) itself (no Bregman terms), with grad w taken
/// by forward differences. Used by descent checks.
inline double energy_E(const DomainMask& m, const PolyhedralAnisotropy& a_curv,
                       const FieldBuffer& w, const FieldBuffer& g, const FieldBuffer& f,
                       const FieldBuffer& psi, const SolverParams& p) {
  VectorField grad_w;
  gradient_fwd(m, w, grad_w);
  const double dx2 = m.grid.dx * m.grid.dx;
  double sum = 0;
  for (int id : m.active_nodes) {
    Vec2 gw{grad_w.x[id] - m.tgx[id], grad_w.y[id] - m.tgy[id]};
    double fidelity = (w[id] - g[id]) * (w[id] - g[id]) / (2 * p.h * std::max(psi[id], p.alpha));
    sum += a_curv.gamma(gw) - f[id] * w[id] + fidelity;
  }
  return sum * dx2;
}

/// One minimizing-movement step with distinct curvature and eikonal densities
/// (they coincide except in mixed-anisotropy runs). Freezes
/// psi = gamma_eik(grad(u_n - theta)), runs the outer/inner loops, and returns
/// u_{n+1} = w together with loop diagnostics.
inline StepResult minimize_step(const PhaseField& u_n, const PolyhedralAnisotropy& a_curv,
                                const PolyhedralAnisotropy& a_eik, const FieldBuffer& f,
                                const SolverParams& p) {
  p.validate();
  const DomainMask& m = *u_n.mask;
  StepResult out;
  StepDiagnostics& diag = out.diag;

  FieldBuffer psi = psi_field(a_eik, u_n, p.upwind_demote_cross);
  if (std::isfinite(p.psi_ceiling))
    for (int id : m.active_nodes) psi[id] = std::min(psi[id], p.psi_ceiling);
  std::vector<std::uint8_t> frozen(m.grid.count(), 0);
  for (int id : m.active_nodes)
    if (psi[id] < p.alpha) frozen[id] = 1;

  const FieldBuffer& g = u_n.u;
  FieldBuffer w = g;
  VectorField d = VectorField::zeros(m.grid.count());
  VectorField b = VectorField::zeros(m.grid.count());
  VectorField grad_w;
  gradient_fwd(m, w, grad_w);
  VectorField db = VectorField::zeros(m.grid.count());
  FieldBuffer divdb(m.grid.count(), 0.0);
  FieldBuffer rhs(m.grid.count(), 0.0);

  long total_inner = 0;
  double F_end = energy_F(m, a_curv, w, d, b, g, f, psi, p, grad_w);
  bool converged = false;
  for (int k = 0; k < p.max_outer; ++k) {
    diag.outer = k + 1;
    const double F_start = F_end;  // F^k at (w^k, d^k) under the current b
    if (p.record_energy) diag.outer_F_start.push_back(F_start);
    double F_prev = F_start;
    for (int l = 0; l < p.max_inner; ++l) {
      for (int id : m.active_nodes) {
        db.x[id] = d.x[id] - b.x[id];
        db.y[id] = d.y[id] - b.y[id];
      }
      divergence_bwd(m, db, divdb);
      for (int id : m.active_nodes)
        rhs[id] = g[id] + p.h * psi[id] * (f[id] - p.mu * divdb[id]);
      diag.sor_sweeps += sor_solve(m, psi, frozen, rhs, p, w);
      gradient_fwd(m, w, grad_w);
      d_step(m, a_curv, grad_w, b, p.mu, d);
      ++total_inner;
      const double F_new = energy_F(m, a_curv, w, d, b, g, f, psi, p, grad_w);
      const bool done = std::abs(F_new - F_prev) < p.eps_in;
      F_prev = F_new;
      if (done) break;
    }
    F_end = F_prev;
    if (p.record_energy) diag.outer_F_end.push_back(F_end);
    for (int id : m.active_nodes) {
      b.x[id] += grad_w.x[id] - d.x[id];
      b.y[id] += grad_w.y[id] - d.y[id];
    }
    if (std::abs(F_end - F_start) < p.eps_out) {
      converged = true;
      break;
    }
    // Entering outer iteration k+1: recompute F under the updated b.
    F_end = energy_F(m, a_curv, w, d, b, g, f, psi, p, grad_w);
  }
  if (!converged)
    throw SolverError("split Bregman: outer loop did not converge within " +
                          std::to_string(p.max_outer) + " iterations",
                      std::abs(F_end));

  diag.mean_inner = diag.outer > 0 ? static_cast<double>(total_inner) / diag.outer : 0.0;
  diag.final_F = F_end;
  diag.psi = std::move(psi);
  out.u_next.mask = u_n.mask;
  out.u_next.u = std::move(w);
  out.u_next.t = u_n.t + p.h;
  return out;
}

inline StepResult minimize_step(const PhaseField& u_n, const PolyhedralAnisotropy& a,
                                const FieldBuffer& f, const SolverParams& p) {
  return minimize_step(u_n, a, a, f, p);
}

/// Remark 2.3 mobility hook: u_{n+1} = u_n + (w* - u_n) / beta(grad(w* - theta)).
inline PhaseField mobility_update(const PhaseField& u_n, const FieldBuffer& w_star,
                                  const std::function<double(Vec2)>& beta) {
  const DomainMask& m = *u_n.mask;
  PhaseField next = u_n;
  VectorField grad_w;
  gradient_fwd(m, w_star, grad_w);
  for (int id : m.active_nodes) {
    Vec2 gw{grad_w.x[id] - m.tgx[id], grad_w.y[id] - m.tgy[id]};
    double bv = std::max(beta(gw), 1e-8);
    next.u[id] = u_n.u[id] + (w_star[id] - u_n.u[id]) / bv;
  }
  return next;
}

/// Time loop: floor(T/h) minimizing-movement steps from u0. Snapshots are the
/// states after the steps nearest to the requested times (0 maps to u0).
/// `on_step` (optional) receives per-step diagnostics.
inline std::vector<PhaseField> evolve(
    const PhaseField& u0, const PolyhedralAnisotropy& a_curv, const PolyhedralAnisotropy& a_eik,
    const FieldBuffer& f, const SolverParams& p, double T, const std::vector<double>& snapshot_times,
    const std::function<void(int, const PhaseField&, const StepDiagnostics&)>& on_step = {}) {
  if (!(T > 0)) throw std::invalid_argument("evolve: T must be positive");
  const int n_steps = static_cast<int>(std::floor(T / p.h + 1e-9));
  std::vector<int> snap_steps(snapshot_times.size());
  for (std::size_t s = 0; s < snapshot_times.size(); ++s)
    snap_steps[s] = std::clamp(static_cast<int>(std::lround(snapshot_times[s] / p.h)), 0, n_steps);

  std::vector<PhaseField> snaps(snapshot_times.size());
  PhaseField u = u0;
  for (std::size_t s = 0; s < snap_steps.size(); ++s)
    if (snap_steps[s] == 0) snaps[s] = u;
  for (int step = 1; step <= n_steps; ++step) {
    try {
      StepResult r = minimize_step(u, a_curv, a_eik, f, p);
      u = std::move(r.u_next);
      if (on_step) on_step(step, u, r.diag);
    } catch (const SolverError& e) {
      throw SolverError(std::string(e.what()) + " (time step " + std::to_string(step) + ")",
                        e.residual, step);
    }
    for (std::size_t s = 0; s < snap_steps.size(); ++s)
      if (snap_steps[s] == step) snaps[s] = u;
  }
  return snaps;
}

}  // namespace spiralflow
