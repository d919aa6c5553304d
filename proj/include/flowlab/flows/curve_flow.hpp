#pragma once

// Curve shortening inside a moving conformal metric. Each step is Heun
// (explicit trapezoid) on x_t = k nu followed by resampling to uniform
// g-arclength with vertex 0 held fixed. Latitude circles on the round-sphere
// family also have an exact reduction dtheta/dt = -cot(theta) / rho(t)^2.

#include <cmath>
#include <limits>
#include <memory>

#include "flowlab/flows/ricci_flow.hpp"
#include "flowlab/flows/trajectory.hpp"
#include "flowlab/geometry2d/curve.hpp"
#include "flowlab/parallel.hpp"

namespace flowlab::flows {

using geometry2d::CurveGeometry;
using geometry2d::CurveState;

struct CurveFlowOptions {
  double cfl = 0.2;  // dt <= cfl * (min g-edge)^2
  double dt_max = std::numeric_limits<double>::infinity();
  bool resample = true;
  bool exact_latitude = true;  // use the latitude ODE when it applies
};

struct CurveTrajectory {
  std::vector<CurveState> states;  // one per reached record time
  bool collapsed = false;
  double collapse_time = 0.0;
  CurveState final_state;  // state at collapse, when collapsed
  std::string message;
};

/// Rebuilds the polygon with vertices equally spaced in g-arclength, starting
/// at vertex 0, by cubic Lagrange interpolation in the arclength parameter.
inline CurveState resample_uniform(const CurveState& c, const CurveGeometry& g) {
  const int n = c.size();
  std::vector<double> s(n + 1, 0.0);
  for (int i = 0; i < n; ++i) s[i + 1] = s[i] + g.edge[i];
  const double L = s[n];
  auto param = [&](int j) {
    if (j < 0) return s[n + j] - L;
    if (j > n) return L + s[j - n];
    return s[j];
  };
  std::vector<geometry2d::Point> v(n);
  v[0] = c.vertices[0];
  int i = 0;
  for (int m = 1; m < n; ++m) {
    const double sigma = L * m / n;
    while (i + 1 < n && s[i + 1] <= sigma) ++i;
    double x = 0.0, y = 0.0;
    for (int a = -1; a <= 2; ++a) {
      double w = 1.0;
      for (int b = -1; b <= 2; ++b)
        if (b != a) w *= (sigma - param(i + b)) / (param(i + a) - param(i + b));
      const auto p = c.vertex(i + a);
      x += w * p[0];
      y += w * p[1];
    }
    v[m] = {x, y};
  }
  return CurveState(std::move(v), c.t, c.period_shift, c.eps_edge);
}

namespace detail {

inline double chart_length(const CurveState& c) {
  double l = 0.0;
  for (int i = 0; i < c.size(); ++i) l += c.chart_edge(i);
  return l;
}

inline CurveState advect(const CurveState& c, const std::vector<geometry2d::Point>& vel, double h, double t) {
  std::vector<geometry2d::Point> v(c.vertices.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = {c.vertices[i][0] + h * vel[i][0], c.vertices[i][1] + h * vel[i][1]};
  return CurveState(std::move(v), t, c.period_shift, c.eps_edge);
}

}  // namespace detail

/// Polyline flow in the metric given by a jet source phi(p, t). Records the
/// curve at each of the increasing times (the first must equal gamma0.t).
template <class PhiJet>
CurveTrajectory curve_flow_polyline(const PhiJet& phi, const CurveState& gamma0, const std::vector<double>& times,
                                    const CurveFlowOptions& opt = {}) {
  if (times.empty() || std::abs(times.front() - gamma0.t) > 1e-12 * std::max(1.0, std::abs(gamma0.t)))
    throw Error(ErrorKind::Validation, "record times must start at the initial curve time");
  for (std::size_t i = 1; i < times.size(); ++i)
    if (!(times[i] > times[i - 1])) throw Error(ErrorKind::Validation, "record times must increase");
  gamma0.check_edges();

  CurveTrajectory out;
  CurveState cur = gamma0;
  // Start from the resampled polygon so that the first step does not carry
  // the tangential jump from chart-uniform to g-uniform spacing.
  if (opt.resample) cur = resample_uniform(cur, geometry2d::geodesic_curvature(cur, phi));
  out.states.push_back(cur);
  auto collapse = [&](const CurveState& c, const std::string& why) {
    out.collapsed = true;
    out.collapse_time = c.t;
    out.final_state = c;
    out.message = why + " (t = " + std::to_string(c.t) + ")";
    return out;
  };
  for (std::size_t r = 1; r < times.size(); ++r) {
    const double target = times[r];
    while (cur.t < target - 1e-13 * std::max(1.0, std::abs(target))) {
      if (detail::chart_length(cur) < 10.0 * cur.eps_edge) return collapse(cur, "curve length fell below 10 eps_edge");
      try {
        const auto g = geometry2d::geodesic_curvature(cur, phi);
        double emin = g.edge[0];
        for (double e : g.edge) emin = std::min(emin, e);
        double h = std::min({opt.cfl * emin * emin, opt.dt_max, target - cur.t});
        if (target - cur.t - h < 1e-3 * h) h = target - cur.t;
        const CurveState pred = detail::advect(cur, g.velocity, h, cur.t + h);
        const auto g2 = geometry2d::geodesic_curvature(pred, phi);
        std::vector<geometry2d::Point> avg(g.velocity.size());
        for (std::size_t i = 0; i < avg.size(); ++i)
          avg[i] = {0.5 * (g.velocity[i][0] + g2.velocity[i][0]), 0.5 * (g.velocity[i][1] + g2.velocity[i][1])};
        CurveState next = detail::advect(cur, avg, h, cur.t + h);
        if (opt.resample) next = resample_uniform(next, geometry2d::geodesic_curvature(next, phi));
        cur = std::move(next);
      } catch (const Error& e) {
        if (e.kind() == ErrorKind::DegenerateCurve) return collapse(cur, "an edge fell below eps_edge");
        throw;
      }
    }
    cur.t = target;
    out.states.push_back(cur);
  }
  return out;
}

namespace detail {

/// RK4 on dtheta/dt = -cot(theta) / rho^2; stops early if a pole is reached
/// and reports the time in *stopped.
inline std::vector<double> latitude_steps(const AnalyticBackground& b, double theta0, const std::vector<double>& times,
                                          double h_max, double* stopped) {
  std::vector<double> out{theta0};
  double th = theta0;
  auto rate = [&](double t, double x) { return -std::cos(x) / std::sin(x) / b.rho_squared(t); };
  for (std::size_t r = 1; r < times.size(); ++r) {
    b.check_time(times[r]);
    const double span = times[r] - times[r - 1];
    const int steps = std::max(1, static_cast<int>(std::ceil(span / h_max - 1e-9)));
    const double h = span / steps;
    double t = times[r - 1];
    for (int s = 0; s < steps; ++s) {
      const double k1 = rate(t, th);
      const double k2 = rate(t + 0.5 * h, th + 0.5 * h * k1);
      const double k3 = rate(t + 0.5 * h, th + 0.5 * h * k2);
      const double k4 = rate(t + h, th + h * k3);
      th += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      t += h;
      if (!(th > 0.0 && th < M_PI) || !std::isfinite(th)) {
        *stopped = t;
        return out;
      }
    }
    out.push_back(th);
  }
  return out;
}

}  // namespace detail

/// Latitude angle at each time under the round-sphere family.
inline std::vector<double> latitude_ode(const AnalyticBackground& b, double theta0, const std::vector<double>& times,
                                        double h_max = 1e-4) {
  double stopped = 0.0;
  auto th = detail::latitude_steps(b, theta0, times, h_max, &stopped);
  if (th.size() < times.size()) throw FlowError(ErrorKind::CurveCollapse, stopped, "latitude reached a pole");
  return th;
}

/// Returns the polar angle if the curve is a latitude circle of the
/// stereographic chart (centred at the origin, constant radius).
inline std::optional<double> latitude_angle(const CurveState& c) {
  if (c.period_shift[0] != 0.0 || c.period_shift[1] != 0.0) return std::nullopt;
  const double r0 = std::hypot(c.vertices[0][0], c.vertices[0][1]);
  for (const auto& p : c.vertices)
    if (std::abs(std::hypot(p[0], p[1]) - r0) > 1e-12 * std::max(1.0, r0)) return std::nullopt;
  return 2.0 * std::atan(r0);
}

/// Curve flow inside a trajectory's metric over the given record times.
inline CurveTrajectory curve_flow_run(std::shared_ptr<const FlowTrajectory> traj, const CurveState& gamma0,
                                      const std::vector<double>& times, const CurveFlowOptions& opt = {}) {
  if (traj->family && traj->family->kind == geometry2d::BackgroundKind::RoundSphere && opt.exact_latitude) {
    if (const auto th0 = latitude_angle(gamma0)) {
      CurveTrajectory out;
      double stopped = 0.0;
      const auto th = detail::latitude_steps(*traj->family, *th0, times, 1e-4, &stopped);
      for (std::size_t i = 0; i < th.size(); ++i) out.states.push_back(CurveState::latitude(th[i], gamma0.size(), times[i]));
      if (th.size() < times.size()) {
        out.collapsed = true;
        out.collapse_time = stopped;
        out.final_state = out.states.back();
        out.message = "latitude reached a pole (t = " + std::to_string(stopped) + ")";
      }
      return out;
    }
  }
  const TrajectoryJets jets(std::move(traj));
  return curve_flow_polyline([&jets](const geometry2d::Point& p, double t) { return jets.phi(p, t); }, gamma0, times, opt);
}

}  // namespace flowlab::flows
