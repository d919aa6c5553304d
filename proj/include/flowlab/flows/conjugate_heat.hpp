#pragma once

// Conjugate heat equation u_t = -Laplacian u + K u, integrated forward in
// tau = t1 - t from terminal data at the end of the trajectory. Between
// snapshots phi is interpolated linearly in time.

#include <cmath>

#include "flowlab/flows/ricci_flow.hpp"
#include "flowlab/flows/trajectory.hpp"
#include "flowlab/parallel.hpp"

namespace flowlab::flows {

namespace detail {

inline void check_positive(const GridValues& u, double t) {
  for (double v : u)
    if (!(v > 0.0)) throw FlowError(ErrorKind::PositivityLoss, t, "u lost positivity; dt is too large");
}

/// out = base + h (exp(-2 phi) Laplacian0 u - K(phi) u).
inline void heat_stage(const GridShape& s, const GridValues& phi, const GridValues& base, const GridValues& u,
                       double h, KMode k, QMode q, GridValues& out) {
  parallel_for(s.ny, [&](int j) {
    for (int i = 0; i < s.nx; ++i) {
      const std::size_t n = s.index(i, j);
      const double e = std::exp(-2.0 * phi[n]);
      const double R = k == KMode::Zero ? 0.0 : -2.0 * e * geometry2d::laplacian0_2(s, phi, i, j);
      out[n] = base[n] + h * (e * geometry2d::laplacian0_2(s, u, i, j) - k_value(k, q, R) * u[n]);
    }
  });
}

inline void lerp(const GridValues& a, const GridValues& b, double w, GridValues& out) {
  for (std::size_t n = 0; n < a.size(); ++n) out[n] = (1.0 - w) * a[n] + w * b[n];
}

inline FlowTrajectory solve_family(FlowTrajectory traj, double u_T, KMode k, double dt) {
  const auto& b = *traj.family;
  const QMode q = traj.config.q_mode;
  auto rate = [&](double t) { return k_value(k, q, family_scalar_curvature(b, t)); };
  double u = u_T;
  auto& snaps = traj.snapshots;
  snaps.back().u = {u};
  for (std::size_t i = snaps.size() - 1; i-- > 0;) {
    const double ta = snaps[i].t;
    const double tb = snaps[i + 1].t;
    const int steps = std::max(1, static_cast<int>(std::ceil((tb - ta) / dt - 1e-9)));
    const double h = (tb - ta) / steps;
    double t = tb;
    // du/dtau = -K u with t = tb - (tau - tau_b).
    for (int s = 0; s < steps; ++s) {
      const double k1 = -rate(t) * u;
      const double k2 = -rate(t - 0.5 * h) * (u + 0.5 * h * k1);
      const double k3 = -rate(t - 0.5 * h) * (u + 0.5 * h * k2);
      const double k4 = -rate(t - h) * (u + h * k3);
      u += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      t -= h;
      if (!(u > 0.0)) throw FlowError(ErrorKind::PositivityLoss, t, "u lost positivity");
    }
    snaps[i].u = {u};
  }
  return traj;
}

}  // namespace detail

/// Returns a copy of the trajectory with u filled in at every snapshot.
/// u_T holds one value per grid point, or a single value for constant data.
inline FlowTrajectory conjugate_heat_solve(const FlowTrajectory& traj, const GridValues& u_T, KMode k, double dt = 0.0) {
  traj.validate();
  if (traj.size() < 2) throw Error(ErrorKind::InsufficientSnapshots, "conjugate heat solve needs at least two snapshots");
  if (dt <= 0.0) dt = traj.config.dt;
  if (!(dt > 0.0)) throw Error(ErrorKind::Validation, "dt must be positive");
  for (double v : u_T)
    if (!(v > 0.0) || !std::isfinite(v)) throw Error(ErrorKind::NonpositiveU, "terminal data must be positive");

  if (traj.family) {
    if (u_T.size() != 1) throw Error(ErrorKind::GridMismatch, "sphere family takes spatially constant terminal data");
    auto out = detail::solve_family(traj, u_T.front(), k, dt);
    out.config.k_mode = k;
    return out;
  }

  const GridShape& s = traj.shape();
  GridValues u = u_T.size() == 1 ? GridValues(s.size(), u_T.front()) : u_T;
  if (u.size() != s.size()) throw Error(ErrorKind::GridMismatch, "terminal data does not match the grid");
  for (const auto& snap : traj.snapshots) {
    if (!(snap.metric.shape == s)) throw Error(ErrorKind::GridMismatch, "snapshots use different grids");
    check_stability(snap.metric, dt);
  }

  FlowTrajectory out = traj;
  out.config.k_mode = k;
  const QMode q = traj.config.q_mode;
  auto& snaps = out.snapshots;
  snaps.back().u = u;
  GridValues phi(s.size()), half(s.size()), next(s.size());
  for (std::size_t i = snaps.size() - 1; i-- > 0;) {
    const auto& pa = snaps[i].metric.phi;
    const auto& pb = snaps[i + 1].metric.phi;
    const double ta = snaps[i].t;
    const double tb = snaps[i + 1].t;
    const int steps = std::max(1, static_cast<int>(std::ceil((tb - ta) / dt - 1e-9)));
    const double h = (tb - ta) / steps;
    for (int st = 0; st < steps; ++st) {
      const double t = tb - st * h;  // tau advances by h while t decreases
      detail::lerp(pa, pb, (t - ta) / (tb - ta), phi);
      detail::heat_stage(s, phi, u, u, 0.5 * h, k, q, half);
      detail::lerp(pa, pb, (t - 0.5 * h - ta) / (tb - ta), phi);
      detail::heat_stage(s, phi, u, half, h, k, q, next);
      u.swap(next);
      detail::check_positive(u, t - h);
    }
    snaps[i].u = u;
  }
  return out;
}

/// Default terminal data 1 + a cos x.
inline GridValues cosine_bump(const GridShape& s, double a = 0.5) {
  return geometry2d::sample_grid(s, [a](double x, double) { return 1.0 + a * std::cos(x); });
}

}  // namespace flowlab::flows
