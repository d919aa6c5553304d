#pragma once

// The monitored quantity Theta = tau^{(m-n)/2} int_N u ds along a curve
// (m = 2, n = 1) and the terms of its time derivative, with f = -log u:
//   A = -sqrt(tau) int (k + f_nu)^2 u ds
//   B =  sqrt(tau) int (nabla^2_{nu nu} f + Q(nu, nu) - 1/(2 tau)) u ds
//   C =  sqrt(tau) int (K - tr Q) u ds

#include <functional>
#include <memory>
#include <vector>

#include "flowlab/flows/config.hpp"
#include "flowlab/flows/curve_flow.hpp"
#include "flowlab/flows/trajectory.hpp"
#include "flowlab/geometry2d/curve.hpp"
#include "flowlab/monitor/harnack.hpp"
#include "flowlab/parallel.hpp"

namespace flowlab::monitor {

using flows::KMode;
using geometry2d::CurveState;
using geometry2d::Jet2;

using JetSource = std::function<Jet2(const Point&, double)>;

/// Metric, u and curve on a common list of record times (the curve times).
struct RunBundle {
  JetSource phi;
  JetSource u;
  std::vector<CurveState> curves;
  QMode q_mode = QMode::Static;
  KMode k_mode = KMode::Zero;

  std::size_t size() const { return curves.size(); }
  double time(std::size_t i) const { return curves[i].t; }
};

struct MonotonicityRecord {
  double t = 0.0;
  double tau = 0.0;
  double theta = 0.0;
  double dtheta_dt = 0.0;
  double termA = 0.0;
  double termB = 0.0;
  double termC = 0.0;
  double residual = 0.0;  // dtheta_dt - (A + B + C)
  double relative = 0.0;  // |residual| / max(|A| + |B| + |C|, eps)
};

/// Bundle over a trajectory carrying u; every curve time must be a snapshot time.
inline RunBundle make_bundle(std::shared_ptr<const flows::FlowTrajectory> traj, const std::vector<CurveState>& curves) {
  if (!traj->has_u()) throw Error(ErrorKind::Validation, "trajectory carries no u");
  for (const auto& c : curves)
    if (!traj->find(c.t)) throw Error(ErrorKind::GridMismatch, "curve time " + std::to_string(c.t) + " is not a snapshot time");
  auto jets = std::make_shared<const flows::TrajectoryJets>(traj);
  RunBundle b;
  b.phi = [jets](const Point& p, double t) { return jets->phi(p, t); };
  b.u = [jets](const Point& p, double t) { return jets->u(p, t); };
  b.curves = curves;
  b.q_mode = traj->config.q_mode;
  b.k_mode = traj->config.k_mode;
  return b;
}

/// Bundle with a closed-form background and closed-form u.
inline RunBundle analytic_bundle(const geometry2d::AnalyticBackground& bg, JetSource u,
                                 const std::vector<CurveState>& curves, KMode k) {
  RunBundle b;
  b.phi = [bg](const Point& p, double t) { return bg.phi_jet(p, t); };
  b.u = std::move(u);
  b.curves = curves;
  b.q_mode = bg.direction;
  b.k_mode = k;
  return b;
}

/// Jet of f = -log u.
inline Jet2 minus_log(const Jet2& u) {
  if (!(u.v > 0.0)) throw Error(ErrorKind::NonpositiveU, "u must be positive");
  const double a = 1.0 / u.v;
  return {-std::log(u.v),
          -u.dx * a,
          -u.dy * a,
          -u.dxx * a + u.dx * u.dx * a * a,
          -u.dxy * a + u.dx * u.dy * a * a,
          -u.dyy * a + u.dy * u.dy * a * a};
}

struct BalanceTerms {
  double t = 0.0, tau = 0.0, theta = 0.0, A = 0.0, B = 0.0, C = 0.0;
};

inline BalanceTerms balance_terms(const RunBundle& b, std::size_t i, double T) {
  const CurveState& c = b.curves.at(i);
  const double tau = T - c.t;
  if (!(tau > 0.0)) throw Error(ErrorKind::NonpositiveTau, "tau = T - t must be positive");
  const auto g = geometry2d::geodesic_curvature(c, b.phi);
  const int n = c.size();
  std::vector<double> wu(n), wa(n), wb(n), wc(n);
  const double qs = q_sign(b.q_mode);
  for (int v = 0; v < n; ++v) {
    const Jet2 uj = b.u(c.vertex(v), c.t);
    const Jet2 f = minus_log(uj);
    const auto& nu = g.nu[v];
    const double R = geometry2d::scalar_curvature(g.phi[v]);
    const auto hf = geometry2d::conformal_hessian(g.phi[v], f);
    const double f_nu = nu[0] * f.dx + nu[1] * f.dy;
    double f_nunu = 0.0;
    for (int a = 0; a < 2; ++a)
      for (int d = 0; d < 2; ++d) f_nunu += nu[a] * nu[d] * hf(a, d);
    const double kn = g.k[v] + f_nu;
    wu[v] = uj.v;
    wa[v] = -kn * kn * uj.v;
    wb[v] = (f_nunu + qs * 0.5 * R - 0.5 / tau) * uj.v;
    wc[v] = (flows::k_value(b.k_mode, b.q_mode, R) - flows::trace_q(b.q_mode, R)) * uj.v;
  }
  const double s = std::sqrt(tau);
  return {c.t, tau, s * geometry2d::curve_integral(g, wu), s * geometry2d::curve_integral(g, wa),
          s * geometry2d::curve_integral(g, wb), s * geometry2d::curve_integral(g, wc)};
}

/// Theta = tau^{(m-n)/2} int u ds at record i.
inline double theta(const RunBundle& b, std::size_t i, double T, int m = 2, int n = 1) {
  const CurveState& c = b.curves.at(i);
  const double tau = T - c.t;
  if (!(tau > 0.0)) throw Error(ErrorKind::NonpositiveTau, "tau = T - t must be positive");
  const auto g = geometry2d::geodesic_curvature(c, b.phi);
  std::vector<double> w(c.size());
  for (int v = 0; v < c.size(); ++v) w[v] = b.u(c.vertex(v), c.t).v;
  return std::pow(tau, 0.5 * (m - n)) * geometry2d::curve_integral(g, w);
}

/// Derivative at s of the quadratic through (t_k, y_k), k = 0, 1, 2.
inline double quadratic_slope(const double* t, const double* y, double s) {
  double d = 0.0;
  for (int a = 0; a < 3; ++a) {
    double w = 0.0;
    for (int b = 0; b < 3; ++b) {
      if (b == a) continue;
      double prod = 1.0 / (t[a] - t[b]);
      for (int c = 0; c < 3; ++c)
        if (c != a && c != b) prod *= (s - t[c]) / (t[a] - t[c]);
      w += prod;
    }
    d += w * y[a];
  }
  return d;
}

inline constexpr double kBalanceEps = 1e-12;

/// One record per bundle time. dTheta/dt is the derivative of the quadratic
/// through the record and its neighbours (one-sided at the ends).
inline std::vector<MonotonicityRecord> monotonicity_balance(const RunBundle& b, double T) {
  if (b.size() < 3) throw Error(ErrorKind::InsufficientSnapshots, "need at least three records");
  for (std::size_t i = 1; i < b.size(); ++i)
    if (!(b.time(i) > b.time(i - 1))) throw Error(ErrorKind::GridMismatch, "record times must increase");
  std::vector<BalanceTerms> terms(b.size());
  parallel_for(static_cast<int>(b.size()), [&](int i) { terms[i] = balance_terms(b, i, T); });
  std::vector<MonotonicityRecord> out(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) {
    const std::size_t lo = i == 0 ? 0 : i + 1 == b.size() ? i - 2 : i - 1;
    const double ts[3] = {terms[lo].t, terms[lo + 1].t, terms[lo + 2].t};
    const double ys[3] = {terms[lo].theta, terms[lo + 1].theta, terms[lo + 2].theta};
    auto& r = out[i];
    r.t = terms[i].t;
    r.tau = terms[i].tau;
    r.theta = terms[i].theta;
    r.dtheta_dt = quadratic_slope(ts, ys, r.t);
    r.termA = terms[i].A;
    r.termB = terms[i].B;
    r.termC = terms[i].C;
    r.residual = r.dtheta_dt - (r.termA + r.termB + r.termC);
    r.relative = std::abs(r.residual) / std::max(std::abs(r.termA) + std::abs(r.termB) + std::abs(r.termC), kBalanceEps);
  }
  return out;
}

/// int_M u dV at every snapshot of a compact ambient.
inline std::vector<double> mass_integral(const flows::FlowTrajectory& traj) {
  traj.validate();
  if (!traj.has_u()) throw Error(ErrorKind::Validation, "trajectory carries no u");
  std::vector<double> out;
  if (traj.family) {
    if (!geometry2d::is_compact(traj.family->kind))
      throw Error(ErrorKind::NoncompactAmbient, std::string(geometry2d::to_string(traj.family->kind)) + " is not compact");
    for (const auto& s : traj.snapshots) {
      if (s.u.size() != 1) throw Error(ErrorKind::GridMismatch, "family mass needs spatially constant u");
      out.push_back(4.0 * M_PI * traj.family->rho_squared(s.t) * s.u.front());
    }
    return out;
  }
  for (const auto& s : traj.snapshots) out.push_back(geometry2d::grid_integral(s.metric, s.u));
  return out;
}

/// Closed-form backgrounds have no grid; only the compact ones carry a mass.
inline void require_compact(const geometry2d::AnalyticBackground& b) {
  if (!geometry2d::is_compact(b.kind))
    throw Error(ErrorKind::NoncompactAmbient, std::string(geometry2d::to_string(b.kind)) + " is not compact");
}

}  // namespace flowlab::monitor
