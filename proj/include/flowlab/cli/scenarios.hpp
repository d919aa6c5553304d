#pragma once

// Scenario runners behind the flowlab executable. Each one reads its flat
// config, runs the library and returns a record table plus a JSON summary.
// Randomness is drawn sequentially from the seed before any parallel work,
// so output depends only on (config, seed).

#include <cstdint>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "flowlab/cli/config.hpp"
#include "flowlab/cli/report.hpp"
#include "flowlab/flows/audit.hpp"
#include "flowlab/flows/conjugate_heat.hpp"
#include "flowlab/flows/curve_flow.hpp"
#include "flowlab/flows/ricci_flow.hpp"
#include "flowlab/monitor/harnack.hpp"
#include "flowlab/monitor/monotonicity.hpp"
#include "flowlab/parallel.hpp"
#include "flowlab/tensorlab/identities.hpp"
#include "flowlab/tensorlab/metrics.hpp"

namespace flowlab::cli {

using flows::AmbientFlowConfig;
using flows::FlowTrajectory;
using flows::KMode;
using flows::QMode;
using geometry2d::AnalyticBackground;
using geometry2d::ConformalTorus;
using geometry2d::CurveState;
using geometry2d::GridShape;
using geometry2d::Jet2;
using geometry2d::Point;

struct ScenarioResult {
  Table table;
  Json summary;
};

// ---------------------------------------------------------------------------
// Identity suite

inline const std::vector<std::string>& identity_check_names() {
  static const std::vector<std::string> names{"commutation",       "bianchi",           "ricci_evolution",
                                              "christoffel_evolution", "hessian_laplacian", "h_evolution_ricci",
                                              "h_evolution_backward_ricci"};
  return names;
}

struct IdentityRecord {
  std::string check;
  int dim = 0;
  int point_index = 0;
  double residual = 0.0;
};

namespace detail {

template <int M>
struct IdentityCase {
  tensorlab::TrigMetric<M> g;
  tensorlab::TrigField<M, 1> w1;
  tensorlab::TrigField<M, 2> w2;
  tensorlab::TrigField<M, 0> f;
};

template <int M>
std::vector<double> identity_residuals(const IdentityCase<M>& c, const Vec<double, M>& x) {
  using namespace tensorlab;
  constexpr double T = 1.5;
  const double commutation = std::max(check_commutation_1form<M>(c.g, c.w1, x), check_commutation_2form<M>(c.g, c.w2, x));
  const double bianchi = check_bianchi<M>(c.g, x).max();
  const FirstOrderRicciFamily<M, TrigMetric<M>> fwd{c.g, -1.0};
  const FirstOrderRicciFamily<M, TrigMetric<M>> bwd{c.g, 1.0};
  const auto ef = check_flow_evolutions_exact<M>(fwd, x, 0.0, FlowDirection::Ricci);
  const auto eb = check_flow_evolutions_exact<M>(bwd, x, 0.0, FlowDirection::BackwardRicci);
  return {commutation,
          bianchi,
          std::max({ef.ricci, ef.scalar, eb.ricci, eb.scalar}),
          std::max(ef.christoffel, eb.christoffel),
          check_hessian_laplacian_interchange<M>(c.g, c.f, x),
          check_H_evolution_exact<M>(c.g, c.f, x, T, HarnackMode::Ricci).relative,
          check_H_evolution_exact<M>(c.g, c.f, x, T, HarnackMode::BackwardRicci).relative};
}

template <int M>
std::vector<IdentityRecord> identity_suite_dim(int metrics, int points, std::mt19937_64& rng) {
  using namespace tensorlab;
  std::vector<IdentityCase<M>> cases;
  for (int m = 0; m < metrics; ++m) {
    auto g = random_trig_metric<M>(rng);
    auto w1 = random_trig_field<M, 1>(rng);
    auto w2 = random_trig_field<M, 2>(rng);
    auto f = random_trig_field<M, 0>(rng);
    cases.push_back({std::move(g), std::move(w1), std::move(w2), std::move(f)});
  }
  std::vector<Vec<double, M>> xs;
  for (int p = 0; p < points; ++p) xs.push_back(random_point<M>(rng));
  std::vector<std::vector<double>> res(points);
  // points are spread evenly over the metrics: point p uses metric p * metrics / points
  parallel_for(points, [&](int p) { res[p] = identity_residuals<M>(cases[p * metrics / points], xs[p]); });
  const auto& names = identity_check_names();
  std::vector<IdentityRecord> out;
  for (std::size_t c = 0; c < names.size(); ++c)
    for (int p = 0; p < points; ++p) out.push_back({names[c], M, p, res[p][c]});
  return out;
}

}  // namespace detail

/// Every identity check at `points` random points spread over `metrics`
/// random trigonometric metrics of dimension dim (2 or 3).
inline std::vector<IdentityRecord> identity_suite(int dim, int metrics, int points, std::uint64_t seed) {
  if (metrics < 1 || points < metrics) throw Error(ErrorKind::Validation, "need 1 <= metrics <= points");
  std::mt19937_64 rng(seed);
  if (dim == 2) return detail::identity_suite_dim<2>(metrics, points, rng);
  if (dim == 3) return detail::identity_suite_dim<3>(metrics, points, rng);
  throw Error(ErrorKind::Validation, "identity suite supports dim 2 and 3");
}

inline ScenarioResult run_verify_identities(ConfigReader& r, std::uint64_t seed) {
  const int dim = static_cast<int>(r.integer("dim", 3, 2, 3));
  const int points = static_cast<int>(r.integer("points", 200, 1, 100000));
  const int metrics = static_cast<int>(r.integer("metrics", std::min(20, points), 1, points));
  const double tol = r.positive("tolerance", 1e-7);
  r.finish();
  const auto recs = identity_suite(dim, metrics, points, seed);
  ScenarioResult out;
  out.table.columns = {"check_name", "dim", "point_index", "residual"};
  for (const auto& x : recs) out.table.add({x.check, std::int64_t{x.dim}, std::int64_t{x.point_index}, x.residual});
  Json checks = Json::object();
  double worst = 0.0, total = 0.0;
  for (const auto& name : identity_check_names()) {
    double mx = 0.0, sum = 0.0;
    int count = 0;
    for (const auto& x : recs)
      if (x.check == name) mx = std::max(mx, x.residual), sum += x.residual, ++count;
    checks[name] = {{"max_residual", mx}, {"mean_residual", sum / count}, {"pass", mx <= tol}};
    worst = std::max(worst, mx);
    total += sum;
  }
  out.summary["max_residual"] = worst;
  out.summary["mean_residual"] = total / static_cast<double>(recs.size());
  out.summary["threshold"] = tol;
  out.summary["pass"] = worst <= tol;
  out.summary["checks"] = checks;
  return out;
}

// ---------------------------------------------------------------------------
// Torus runs

struct TorusSetup {
  int n = 128;
  double phi_mean = 0.4;
  double phi_sin = 0.05;  // coefficient of sin x
  double phi_cos = 0.05;  // coefficient of cos y
  double u_amplitude = 0.5;  // terminal data 1 + a cos x
  AmbientFlowConfig cfg;
};

inline GridShape square_grid(int n) { return GridShape{n, n, 2.0 * M_PI, 2.0 * M_PI}; }

inline ConformalTorus torus_initial(const TorusSetup& s) {
  return ConformalTorus::from_function(square_grid(s.n), [s](double x, double y) {
    return s.phi_mean + s.phi_sin * std::sin(x) + s.phi_cos * std::cos(y);
  });
}

/// Ambient run plus conjugate heat solution. Backward Ricci runs are the time
/// reversal of the forward run (the direct backward grid flow is ill-posed).
inline std::shared_ptr<const FlowTrajectory> torus_run(const TorusSetup& s) {
  AmbientFlowConfig cfg = s.cfg;
  const bool backward = cfg.q_mode == QMode::BackwardRicci;
  if (backward) cfg.q_mode = QMode::Ricci;
  FlowTrajectory traj = flows::ricci_flow_run(torus_initial(s), cfg);
  if (backward) traj = flows::reverse_in_time(traj);
  const auto shape = traj.shape();
  const auto u_T = s.u_amplitude == 0.0 ? flows::GridValues{1.0} : flows::cosine_bump(shape, s.u_amplitude);
  return std::make_shared<const FlowTrajectory>(flows::conjugate_heat_solve(traj, u_T, s.cfg.k_mode));
}

inline std::vector<double> trajectory_times(const FlowTrajectory& t) {
  std::vector<double> ts;
  for (const auto& s : t.snapshots) ts.push_back(s.t);
  return ts;
}

namespace detail {

inline AmbientFlowConfig read_flow_config(ConfigReader& r, const char* q_default, double t1_default) {
  AmbientFlowConfig c;
  c.q_mode = parse_q_mode(r.choice("q_mode", q_default, {"ricci", "backward_ricci", "static"}));
  c.k_mode = parse_k_mode(r.choice("k_mode", "trace_Q", {"trace_Q", "scalar_curvature", "zero"}));
  c.T = r.number("T", 1.0, -1e6, 1e6);
  c.t0 = r.number("t0", 0.0, -1e6, 1e6);
  c.t1 = r.number("t1", t1_default, -1e6, 1e6);
  c.dt = r.positive("dt", 1e-4, 1.0);
  c.snapshot_stride = static_cast<int>(r.integer("snapshot_stride", 10, 1, 1000000));
  c.tau_min = r.positive("tau_min", 1e-3);
  c.validate();
  return c;
}

inline TorusSetup read_torus(ConfigReader& r, double t1_default) {
  TorusSetup s;
  s.n = static_cast<int>(r.integer("n", 64, 8, 4096));
  s.phi_mean = r.number("phi_mean", 0.4, -5.0, 5.0);
  s.phi_sin = r.number("phi_sin", 0.05, -5.0, 5.0);
  s.phi_cos = r.number("phi_cos", 0.05, -5.0, 5.0);
  s.u_amplitude = r.number("u_amplitude", 0.5, 0.0, 0.99);
  s.cfg = read_flow_config(r, "ricci", t1_default);
  return s;
}

inline std::vector<Point> random_points(std::mt19937_64& rng, int n, double lo, double hi) {
  std::uniform_real_distribution<double> U(lo, hi);
  std::vector<Point> ps;
  for (int i = 0; i < n; ++i) {
    const double x = U(rng);
    ps.push_back({x, U(rng)});
  }
  return ps;
}

inline Json stats(const std::vector<double>& v) {
  double mx = 0.0, sum = 0.0;
  for (double x : v) mx = std::max(mx, x), sum += x;
  return {{"max", mx}, {"mean", v.empty() ? 0.0 : sum / static_cast<double>(v.size())}};
}

}  // namespace detail

inline ScenarioResult run_flow(ConfigReader& r, std::uint64_t seed) {
  const TorusSetup s = detail::read_torus(r, 0.05);
  const int probes = static_cast<int>(r.integer("audit_points", 8, 0, 1000));
  const double tol = r.positive("tolerance", 1e-2);
  r.finish();
  // the stability bound is a config error, so check it before running
  flows::check_stability(torus_initial(s), s.cfg.dt);

  const auto traj = torus_run(s);
  std::mt19937_64 rng(seed);
  const auto points = detail::random_points(rng, probes, 0.0, 2.0 * M_PI);
  std::vector<std::size_t> mids;
  for (std::size_t i = 1; i + 1 < traj->size(); ++i) mids.push_back(i);

  std::vector<double> flow_res, h_res;
  if (!points.empty() && !mids.empty()) {
    for (const auto& p : flows::audit_flow_evolutions(*traj, points, mids)) flow_res.push_back(p.flow.max());
    if (s.cfg.k_mode == KMode::TraceQ && s.cfg.q_mode != QMode::Static)
      for (const auto& p : flows::audit_H_evolution(*traj, points, mids, s.cfg.T)) h_res.push_back(p.h.relative);
  }
  const auto mass = monitor::mass_integral(*traj);

  ScenarioResult out;
  out.table.columns = {"t", "min_phi", "max_phi", "max_abs_R", "mass"};
  for (std::size_t i = 0; i < traj->size(); ++i) {
    const auto& m = traj->snapshots[i].metric;
    double mx = 0.0;
    for (double R : geometry2d::conformal_scalar_curvature(m)) mx = std::max(mx, std::abs(R));
    out.table.add({traj->snapshots[i].t, m.min_phi(), *std::max_element(m.phi.begin(), m.phi.end()), mx, mass[i]});
  }
  double drift = 0.0;
  for (double v : mass) drift = std::max(drift, std::abs(v / mass.front() - 1.0));
  const auto fs = detail::stats(flow_res);
  const auto hs = detail::stats(h_res);
  const double worst = std::max(fs["max"].get<double>(), hs["max"].get<double>());
  out.summary["provenance"] = flows::to_string(traj->provenance);
  out.summary["snapshots"] = traj->size();
  out.summary["max_residual"] = worst;
  out.summary["mean_residual"] = flow_res.empty() ? 0.0 : fs["mean"].get<double>();
  out.summary["flow_evolution_residual"] = fs;
  out.summary["h_evolution_residual"] = hs;
  out.summary["mass_relative_drift"] = drift;
  out.summary["threshold"] = tol;
  const bool conserving = s.cfg.k_mode == KMode::TraceQ;
  out.summary["pass"] = worst <= tol && (!conserving || drift <= 1e-3);
  return out;
}

// ---------------------------------------------------------------------------
// Monotonicity

inline ScenarioResult monotonicity_table(const std::vector<monitor::MonotonicityRecord>& recs, double tol) {
  ScenarioResult out;
  out.table.columns = {"t", "tau", "theta", "dtheta_dt", "termA", "termB", "termC", "residual"};
  std::vector<double> rel;
  double max_b = 0.0, max_d = -std::numeric_limits<double>::infinity();
  for (const auto& x : recs) {
    out.table.add({x.t, x.tau, x.theta, x.dtheta_dt, x.termA, x.termB, x.termC, x.residual});
    rel.push_back(x.relative);
    max_b = std::max(max_b, std::abs(x.termB));
    max_d = std::max(max_d, x.dtheta_dt);
  }
  const auto st = detail::stats(rel);
  out.summary["records"] = recs.size();
  out.summary["max_residual"] = st["max"];
  out.summary["mean_residual"] = st["mean"];
  out.summary["max_abs_termB"] = max_b;
  out.summary["max_dtheta_dt"] = max_d;
  out.summary["threshold"] = tol;
  out.summary["pass"] = st["max"].get<double>() <= tol;
  return out;
}

inline ScenarioResult run_monotonicity(ConfigReader& r, std::uint64_t /*seed*/) {
  const std::string bg = r.choice("background", "round_sphere", {"round_sphere", "torus"});
  const int vertices = static_cast<int>(r.integer("vertices", 128, 8, 100000));
  if (bg == "torus") {
    const TorusSetup s = detail::read_torus(r, 0.05);
    const double cx = r.number("curve_center_x", M_PI, -100.0, 100.0);
    const double cy = r.number("curve_center_y", M_PI, -100.0, 100.0);
    const double rad = r.positive("curve_radius", 1.0, 100.0);
    const double tol = r.positive("tolerance", 3e-2);
    r.finish();
    flows::check_stability(torus_initial(s), s.cfg.dt);
    const auto traj = torus_run(s);
    const auto ts = trajectory_times(*traj);
    const auto run = flows::curve_flow_run(traj, CurveState::circle({cx, cy}, rad, vertices, ts.front()), ts);
    if (run.collapsed) throw FlowError(ErrorKind::CurveCollapse, run.collapse_time, "curve collapsed");
    auto out = monotonicity_table(monitor::monotonicity_balance(monitor::make_bundle(traj, run.states), s.cfg.T), tol);
    out.summary["provenance"] = flows::to_string(traj->provenance);
    return out;
  }

  const QMode q = parse_q_mode(r.choice("q_mode", "ricci", {"ricci", "backward_ricci", "static"}));
  const double rho0 = r.positive("rho0", std::sqrt(2.0), 1e6);
  const auto family = AnalyticBackground::round_sphere(rho0, q);
  const double T = r.number("T", q == QMode::Ricci ? family.T_max() : 2.0, -1e6, 1e6);
  const double t0 = r.number("t0", 0.0, -1e6, 1e6);
  const double t1 = r.number("t1", q == QMode::Ricci ? 0.4 * family.T_max() : 1.0, -1e6, 1e6);
  const double spacing = r.positive("record_dt", 2e-3);
  const std::string u = r.choice("u", "soliton", {"soliton", "curvature"});
  const double C = r.positive("C", 1.0);
  const double angle = r.number("curve_angle", M_PI / 4, 0.0, M_PI);
  const double tol = r.positive("tolerance", 1e-2);
  r.finish();
  if (!(t1 > t0)) throw Error(ErrorKind::Validation, "t_range must satisfy t0 < t1");
  if (!(T > t1)) throw Error(ErrorKind::Validation, "T must be after t1 so that tau > 0");
  if (q == QMode::Ricci && T > family.T_max()) throw Error(ErrorKind::InvalidTimeOrdering, "T must not exceed T_max");
  if (!(angle > 0.0 && angle < M_PI)) throw Error(ErrorKind::Validation, "curve_angle must lie in (0, pi)");

  const auto ts = flows::snapshot_times(t0, t1, spacing, 1);
  if (ts.size() < 3) throw Error(ErrorKind::Validation, "need at least three records; reduce record_dt");
  const auto fam = flows::sphere_family(rho0, q, ts);
  const auto curve = CurveState::latitude(angle, vertices, t0);
  monitor::RunBundle b;
  std::shared_ptr<const FlowTrajectory> traj;
  if (u == "curvature") {
    if (q != QMode::BackwardRicci) throw Error(ErrorKind::Validation, "u = curvature needs q_mode = backward_ricci");
    traj = std::make_shared<const FlowTrajectory>(fam);
    const monitor::JetSource uj = [family](const Point&, double t) {
      Jet2 j;
      j.v = 2.0 / family.rho_squared(t);
      return j;
    };
    const auto run = flows::curve_flow_run(traj, curve, ts);
    if (run.collapsed) throw FlowError(ErrorKind::CurveCollapse, run.collapse_time, "curve collapsed");
    b = monitor::analytic_bundle(family, uj, run.states, KMode::TraceQ);
  } else {
    // u(t1) = C / (T - t1); on the shrinking soliton with T = T_max this is u = C / tau
    traj = std::make_shared<const FlowTrajectory>(flows::conjugate_heat_solve(fam, {C / (T - t1)}, KMode::TraceQ, 1e-4));
    const auto run = flows::curve_flow_run(traj, curve, ts);
    if (run.collapsed) throw FlowError(ErrorKind::CurveCollapse, run.collapse_time, "curve collapsed");
    b = monitor::make_bundle(traj, run.states);
  }
  auto out = monotonicity_table(monitor::monotonicity_balance(b, T), tol);
  out.summary["provenance"] = flows::to_string(traj->provenance);
  return out;
}

// ---------------------------------------------------------------------------
// Harnack quadratics

inline ScenarioResult run_harnack(ConfigReader& r, std::uint64_t seed) {
  const std::string bg = r.choice("background", "backward_sphere", {"backward_sphere", "round_sphere", "cigar", "flat"});
  const double rho0 = r.positive("rho0", 1.0, 1e6);
  const int samples = static_cast<int>(r.integer("samples", 32, 0, 100000));
  const double T = r.number("T", 2.0, -1e6, 1e6);
  const double t0 = r.number("t0", 0.0, -1e6, 1e6);
  const double t1 = r.number("t1", 1.0, -1e6, 1e6);
  const double radius = r.positive("chart_radius", 2.0, 1e3);
  r.finish();
  if (!(t1 >= t0)) throw Error(ErrorKind::Validation, "t_range must satisfy t0 <= t1");
  if (!(T > t1)) throw Error(ErrorKind::Validation, "T must be after t1 so that tau > 0");

  AnalyticBackground b = bg == "backward_sphere" ? AnalyticBackground::round_sphere(rho0, QMode::BackwardRicci)
                         : bg == "round_sphere"  ? AnalyticBackground::round_sphere(rho0, QMode::Ricci)
                         : bg == "cigar"         ? AnalyticBackground::cigar()
                                                 : AnalyticBackground::flat_plane();
  if (b.kind == geometry2d::BackgroundKind::RoundSphere && b.direction == QMode::Ricci && !(t1 < b.T_max()))
    throw Error(ErrorKind::TimeOutOfRange, "t1 must be before the extinction time");
  // the cigar is a steady soliton of the Ricci flow (moving by diffeomorphisms)
  const QMode q = b.kind == geometry2d::BackgroundKind::Cigar ? QMode::Ricci : b.direction;
  const bool positive_R = b.kind != geometry2d::BackgroundKind::FlatPlane;

  struct Sample {
    double t;
    Point p;
    double a, b, s;  // direction angles and |U| scale
  };
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U01(0.0, 1.0);
  std::vector<Sample> draws;
  for (int i = 0; i < samples; ++i) {
    Sample d;
    d.t = t0 + (t1 - t0) * U01(rng);
    const double rr = radius * std::sqrt(U01(rng));
    const double ang = 2.0 * M_PI * U01(rng);
    d.p = {rr * std::cos(ang), rr * std::sin(ang)};
    d.a = 2.0 * M_PI * U01(rng);
    d.b = 2.0 * M_PI * U01(rng);
    d.s = 2.0 * U01(rng);
    draws.push_back(d);
  }
  const auto g = b.metric_field();
  struct Values {
    double d2 = 0.0, trace = 0.0, matrix = 0.0;
    std::vector<double> residuals;  // against closed forms, where known
  };
  const bool sphere = b.kind == geometry2d::BackgroundKind::RoundSphere;
  std::vector<Values> vals(samples);
  parallel_for(samples, [&](int i) {
    const auto& d = draws[i];
    const double e = std::exp(-b.phi_jet(d.p, d.t).v);
    const Vec<double, 2> nu{e * std::cos(d.a), e * std::sin(d.a)};
    const Vec<double, 2> Uv{d.s * e * std::cos(d.b), d.s * e * std::sin(d.b)};
    const double tau = T - d.t;
    auto& v = vals[i];
    if (positive_R) v.d2 = monitor::dim2_harnack(g, d.p, d.t, nu, tau);
    v.trace = monitor::harnack_trace(geometry2d::background_eval(b, d.p, d.t), nu, tau, q);
    v.matrix = monitor::harnack_matrix<2>(g, d.p, d.t, nu, Uv, tau);
    if (sphere) {
      // constant curvature: Hess R = 0, nabla Ric = 0, Ric = R g / 2 and Hess f = 0
      const double R = flows::family_scalar_curvature(b, d.t);
      const double uu = d.s * d.s, uv = d.s * std::cos(d.a - d.b);
      v.residuals = {std::abs(v.d2 - (0.5 * R + 0.5 / tau)),
                     std::abs(v.trace - (monitor::q_sign(q) * 0.5 * R - 0.5 / tau)),
                     std::abs(v.matrix - (0.5 * R * R + 0.5 * R / tau + R * (uu - uv * uv)))};
    } else if (b.kind == geometry2d::BackgroundKind::FlatPlane) {
      v.residuals = {std::abs(v.trace + 0.5 / tau), std::abs(v.matrix)};
    } else {
      v.residuals = {std::abs(v.trace + 0.5 / tau)};  // steady soliton potential
    }
  });

  ScenarioResult out;
  out.table.columns = {"t", "point_x", "point_y", "kind", "value"};
  std::vector<double> d2s, traces, mats, res;
  for (int i = 0; i < samples; ++i) {
    const auto& d = draws[i];
    if (positive_R) {
      out.table.add({d.t, d.p[0], d.p[1], std::string("dim2_harnack"), vals[i].d2});
      d2s.push_back(vals[i].d2);
    }
    out.table.add({d.t, d.p[0], d.p[1], std::string("harnack_trace"), vals[i].trace});
    out.table.add({d.t, d.p[0], d.p[1], std::string("harnack_matrix"), vals[i].matrix});
    traces.push_back(vals[i].trace);
    mats.push_back(vals[i].matrix);
    res.insert(res.end(), vals[i].residuals.begin(), vals[i].residuals.end());
  }
  auto range = [](const std::vector<double>& v) {
    if (v.empty()) return Json{{"count", 0}};
    return Json{{"count", v.size()},
                {"min", *std::min_element(v.begin(), v.end())},
                {"max", *std::max_element(v.begin(), v.end())}};
  };
  const double tol = 1e-10;
  const bool d2_ok = std::all_of(d2s.begin(), d2s.end(), [](double v) { return v > 0.0; });
  const auto st = detail::stats(res);
  out.summary["dim2_harnack"] = range(d2s);
  out.summary["harnack_trace"] = range(traces);
  out.summary["harnack_matrix"] = range(mats);
  out.summary["dim2_harnack_positive"] = d2_ok;
  out.summary["max_residual"] = st["max"];
  out.summary["mean_residual"] = st["mean"];
  out.summary["threshold"] = tol;
  out.summary["pass"] = d2_ok && st["max"].get<double>() <= tol;
  return out;
}

// ---------------------------------------------------------------------------
// Soliton sign contract

struct SolitonSample {
  monitor::SolitonKind kind;
  int m, n;
  double t, T, T_ext;
};

/// Random admissible samples. Every fifth shrinking sample has T = T_max.
inline std::vector<SolitonSample> soliton_samples(int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-5.0, 5.0), gap(1e-3, 4.0);
  std::uniform_int_distribution<int> dim(2, 8), kind(0, 2);
  std::vector<SolitonSample> out;
  for (int s = 0; s < count; ++s) {
    SolitonSample x;
    x.m = dim(rng);
    x.n = std::uniform_int_distribution<int>(1, x.m - 1)(rng);
    x.t = U(rng);
    x.T = x.t + gap(rng);
    x.T_ext = 0.0;
    x.kind = static_cast<monitor::SolitonKind>(kind(rng));
    if (x.kind == monitor::SolitonKind::Expanding) x.T_ext = x.t - gap(rng);
    if (x.kind == monitor::SolitonKind::Shrinking) x.T_ext = x.T + (s % 5 == 0 ? 0.0 : gap(rng));
    out.push_back(x);
  }
  return out;
}

/// Expanding and steady terms are strictly negative; shrinking ones are
/// non-positive and vanish exactly when T = T_max.
inline bool soliton_sign_ok(const SolitonSample& x, double v) {
  if (x.kind != monitor::SolitonKind::Shrinking) return v < 0.0;
  return x.T == x.T_ext ? v == 0.0 : v < 0.0;
}

inline ScenarioResult run_solitons(ConfigReader& r, std::uint64_t seed) {
  const int count = static_cast<int>(r.integer("samples", 1000, 0, 10000000));
  r.finish();
  ScenarioResult out;
  out.table.columns = {"kind", "m", "n", "t", "T", "T_ext", "value", "sign_ok"};
  int violations = 0, equality = 0;
  for (const auto& x : soliton_samples(count, seed)) {
    const double v = monitor::soliton_trace_term(x.kind, x.m, x.n, x.t, x.T, x.T_ext);
    const bool ok = soliton_sign_ok(x, v);
    violations += ok ? 0 : 1;
    equality += x.kind == monitor::SolitonKind::Shrinking && x.T == x.T_ext ? 1 : 0;
    out.table.add({std::string(monitor::to_string(x.kind)), std::int64_t{x.m}, std::int64_t{x.n}, x.t, x.T, x.T_ext, v,
                   std::int64_t{ok ? 1 : 0}});
  }
  out.summary["samples"] = count;
  out.summary["violations"] = violations;
  out.summary["shrinking_at_T_max"] = equality;
  out.summary["max_residual"] = static_cast<double>(violations);
  out.summary["mean_residual"] = count ? static_cast<double>(violations) / count : 0.0;
  out.summary["pass"] = violations == 0;
  return out;
}

// ---------------------------------------------------------------------------

/// Runs a scenario and returns its records and a summary carrying the
/// resolved config and the seed.
inline ScenarioResult run_scenario(const std::string& scenario, const Json& config, std::uint64_t seed) {
  Json raw = config;
  if (raw.contains("scenario")) {
    if (!raw["scenario"].is_string() || raw["scenario"].get<std::string>() != scenario)
      throw Error(ErrorKind::Validation, "config names a different scenario than the command line");
    raw.erase("scenario");
  }
  raw.erase("seed");    // resolved by the caller
  raw.erase("output");  // likewise
  ConfigReader r(raw);
  ScenarioResult out;
  if (scenario == "verify-identities") out = run_verify_identities(r, seed);
  else if (scenario == "run-flow") out = run_flow(r, seed);
  else if (scenario == "monotonicity") out = run_monotonicity(r, seed);
  else if (scenario == "harnack") out = run_harnack(r, seed);
  else if (scenario == "solitons") out = run_solitons(r, seed);
  else throw Error(ErrorKind::Validation, "unknown scenario '" + scenario + "'");
  Json summary;
  summary["scenario"] = scenario;
  summary["seed"] = seed;
  Json echo = r.resolved();
  echo["scenario"] = scenario;
  echo["seed"] = seed;
  summary["config"] = echo;
  for (auto& [k, v] : out.summary.items()) summary[k] = v;
  out.summary = std::move(summary);
  return out;
}

}  // namespace flowlab::cli
