#pragma once

// Conformal Ricci flow on the torus, phi_t = -R/2 = exp(-2 phi) Laplacian0 phi
// (sign flipped for the backward flow), stepped with explicit midpoint RK2.

#include <cmath>
#include <sstream>

#include "flowlab/flows/trajectory.hpp"
#include "flowlab/parallel.hpp"

namespace flowlab::flows {

inline constexpr double kStabilityC = 0.2;

/// Largest stable dt for an explicit step: c h^2 exp(2 min phi).
inline double stable_dt(const ConformalTorus& m, double c = kStabilityC) {
  const double h = std::min(m.shape.hx(), m.shape.hy());
  return c * h * h * std::exp(2.0 * m.min_phi());
}

inline void check_stability(const ConformalTorus& m, double dt) {
  const double bound = stable_dt(m);
  if (dt > bound * (1.0 + 1e-12)) {
    std::ostringstream os;
    os.precision(6);
    os << "dt = " << dt << " violates the stability bound dt <= 0.2 h^2 exp(2 min phi) = " << bound;
    throw Error(ErrorKind::Validation, os.str());
  }
}

namespace detail {

inline double flow_sign(QMode q) {
  return q == QMode::Ricci ? 1.0 : q == QMode::BackwardRicci ? -1.0 : 0.0;
}

/// out = phi + h * sign * exp(-2 phi_eval) Laplacian0 phi_eval; also returns max |R(phi_eval)|.
inline double phi_stage(const GridShape& s, const GridValues& base, const GridValues& eval, double h, double sign,
                        GridValues& out) {
  std::vector<double> rmax(s.ny, 0.0);
  parallel_for(s.ny, [&](int j) {
    for (int i = 0; i < s.nx; ++i) {
      const std::size_t k = s.index(i, j);
      const double lap = std::exp(-2.0 * eval[k]) * geometry2d::laplacian0_2(s, eval, i, j);
      out[k] = base[k] + h * sign * lap;
      rmax[j] = std::max(rmax[j], std::abs(2.0 * lap));
    }
  });
  double r = 0.0;
  for (double v : rmax) r = std::max(r, v);
  return r;
}

}  // namespace detail

/// Integrates the conformal factor over [t0, effective_t1] and records every
/// snapshot_stride-th step plus the final state.
inline FlowTrajectory ricci_flow_run(const ConformalTorus& initial, const AmbientFlowConfig& cfg) {
  cfg.validate();
  initial.validate();
  const double sign = detail::flow_sign(cfg.q_mode);
  if (sign != 0.0) check_stability(initial, cfg.dt);

  FlowTrajectory traj;
  traj.config = cfg;
  traj.provenance = Provenance::Numeric;
  const GridShape& s = initial.shape;
  const double t_end = cfg.effective_t1();

  ConformalTorus cur = initial;
  cur.t = cfg.t0;
  traj.snapshots.push_back({cur.t, cur, {}});

  GridValues mid(s.size()), next(s.size());
  int step = 0;
  while (cur.t < t_end - 1e-12 * std::max(1.0, std::abs(t_end))) {
    const double h = std::min(cfg.dt, t_end - cur.t);
    const double r = detail::phi_stage(s, cur.phi, cur.phi, 0.5 * h, sign, mid);
    detail::phi_stage(s, cur.phi, mid, h, sign, next);
    const double t_next = cur.t + h;
    double change = 0.0, big = 0.0;
    for (std::size_t k = 0; k < next.size(); ++k) {
      if (!std::isfinite(next[k])) throw FlowError(ErrorKind::Instability, t_next, "phi is no longer finite");
      change = std::max(change, std::abs(next[k] - cur.phi[k]));
      big = std::max(big, std::abs(next[k]));
    }
    if (r > 1.0 / (10.0 * cfg.dt)) throw FlowError(ErrorKind::BlowUp, cur.t, "|R| exceeds 1/(10 dt)");
    if (change > 1.0) throw FlowError(ErrorKind::Instability, t_next, "phi changed by more than 1 in one step");
    if (big > 10.0) throw FlowError(ErrorKind::BlowUp, t_next, "max |phi| exceeds 10");
    cur.phi.swap(next);
    cur.t = t_next;
    ++step;
    const bool last = cur.t >= t_end - 1e-12 * std::max(1.0, std::abs(t_end));
    if (step % cfg.snapshot_stride == 0 || last) traj.snapshots.push_back({cur.t, cur, {}});
  }
  return traj;
}

/// Closed-form round-sphere family sampled at the given times.
inline FlowTrajectory sphere_family(double rho0, QMode direction, const std::vector<double>& times,
                                    AmbientFlowConfig cfg = {}) {
  const auto b = AnalyticBackground::round_sphere(rho0, direction);
  if (times.empty()) throw Error(ErrorKind::InsufficientSnapshots, "sphere family needs at least one time");
  FlowTrajectory traj;
  cfg.q_mode = direction;
  cfg.t0 = times.front();
  cfg.t1 = times.back();
  traj.config = cfg;
  traj.provenance = Provenance::ExactFamily;
  traj.family = b;
  for (double t : times) {
    b.check_time(t);
    Snapshot s;
    s.t = t;
    traj.snapshots.push_back(std::move(s));
  }
  traj.validate();
  return traj;
}

/// Evenly spaced times t0, t0 + stride dt, ..., ending exactly at t1.
inline std::vector<double> snapshot_times(double t0, double t1, double dt, int stride) {
  std::vector<double> ts{t0};
  const double step = dt * stride;
  const int n = static_cast<int>(std::ceil((t1 - t0) / step - 1e-9));
  for (int i = 1; i < n; ++i) ts.push_back(t0 + i * step);
  if (t1 > t0) ts.push_back(t1);
  return ts;
}

/// Spatially constant scalar curvature of a sphere-family snapshot.
inline double family_scalar_curvature(const AnalyticBackground& b, double t) {
  b.check_time(t);
  return 2.0 / b.rho_squared(t);
}

}  // namespace flowlab::flows
