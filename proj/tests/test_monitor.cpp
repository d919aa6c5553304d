#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "flowlab/flows/conjugate_heat.hpp"
#include "flowlab/flows/curve_flow.hpp"
#include "flowlab/monitor/harnack.hpp"
#include "flowlab/monitor/monotonicity.hpp"

using namespace flowlab;
using namespace flowlab::monitor;
using flows::AmbientFlowConfig;
using flows::FlowTrajectory;
using geometry2d::AnalyticBackground;
using geometry2d::ConformalTorus;
using geometry2d::GridShape;

namespace {

GridShape square(int n) { return GridShape{n, n, 2.0 * M_PI, 2.0 * M_PI}; }

Jet2 flat(const Point&, double) { return Jet2{}; }

JetSource constant_u(double c) {
  return [c](const Point&, double) {
    Jet2 j;
    j.v = c;
    return j;
  };
}

// u = 1 + 0.5 exp(-(T - t)) cos x solves u_t = -Laplacian u on the flat torus.
JetSource cosine_u(double T) {
  return [T](const Point& p, double t) {
    const double e = 0.5 * std::exp(-(T - t));
    return Jet2{1.0 + e * std::cos(p[0]), -e * std::sin(p[0]), 0.0, -e * std::cos(p[0]), 0.0, 0.0};
  };
}

RunBundle flat_bundle(JetSource u, std::vector<CurveState> curves) {
  RunBundle b;
  b.phi = flat;
  b.u = std::move(u);
  b.curves = std::move(curves);
  return b;
}

// Shrinking sphere rho0 = sqrt(2) (T_max = 1), u = C / tau, latitude theta0.
struct SphereSoliton {
  std::shared_ptr<const FlowTrajectory> traj;
  std::vector<CurveState> curves;
};

SphereSoliton sphere_soliton(double C, double theta0, double t1, double spacing) {
  const auto ts = flows::snapshot_times(0.0, t1, spacing, 1);
  auto fam = flows::sphere_family(std::sqrt(2.0), QMode::Ricci, ts);
  SphereSoliton s;
  s.traj = std::make_shared<const FlowTrajectory>(flows::conjugate_heat_solve(fam, {C / (1.0 - t1)}, KMode::TraceQ, 1e-4));
  s.curves = flows::curve_flow_run(s.traj, CurveState::latitude(theta0, 128), ts).states;
  return s;
}

Vec<double, 2> g_unit(double phi, double angle) {
  return {std::exp(-phi) * std::cos(angle), std::exp(-phi) * std::sin(angle)};
}

}  // namespace

TEST(Theta, FlatCircleWithUnitDensity) {
  const double T = 2.0;
  for (double r : {0.3, 1.0, 2.5}) {
    const auto b = flat_bundle(constant_u(1.0), {CurveState::circle({0.0, 0.0}, r, 64, 0.5)});
    EXPECT_NEAR(theta(b, 0, T), std::sqrt(1.5) * 2.0 * M_PI * r, 1e-12 * r);
  }
}

TEST(Theta, ShrinkingSphereSolitonClosedForm) {
  const double C = 0.7;
  const auto s = sphere_soliton(C, M_PI / 4, 0.4, 0.05);
  const auto b = make_bundle(s.traj, s.curves);
  for (std::size_t i = 0; i < b.size(); ++i) {
    const double th = *flows::latitude_angle(s.curves[i]);
    EXPECT_NEAR(theta(b, i, 1.0) / (2.0 * std::sqrt(2.0) * M_PI * C * std::sin(th)), 1.0, 1e-10);
  }
}

TEST(Theta, LinearInDensity) {
  const auto c = CurveState::circle({1.0, 2.0}, 0.8, 48, 0.1);
  const double a = theta(flat_bundle(cosine_u(1.0), {c}), 0, 1.0);
  const auto twice = [](const Point& p, double t) {
    Jet2 j = cosine_u(1.0)(p, t);
    j.v *= 2.0;
    j.dx *= 2.0;
    j.dxx *= 2.0;
    return j;
  };
  EXPECT_NEAR(theta(flat_bundle(twice, {c}), 0, 1.0), 2.0 * a, 1e-13);
}

TEST(Theta, InvariantUnderAmbientIsometry) {
  // u depends on x only, so translating in y is an isometry of the data.
  const auto c0 = CurveState::circle({1.0, 2.0}, 0.8, 48, 0.1);
  auto c1 = c0;
  for (auto& p : c1.vertices) p[1] += 0.37;
  EXPECT_NEAR(theta(flat_bundle(cosine_u(1.0), {c0}), 0, 1.0), theta(flat_bundle(cosine_u(1.0), {c1}), 0, 1.0), 1e-13);
}

TEST(Theta, StableUnderVertexDoubling) {
  auto ellipse = [](int n) {
    std::vector<Point> v(n);
    for (int i = 0; i < n; ++i) {
      const double a = 2.0 * M_PI * i / n;
      v[i] = {1.0 + 0.9 * std::cos(a), 2.0 + 0.5 * std::sin(a)};
    }
    return CurveState(std::move(v), 0.1);
  };
  double prev_theta = theta(flat_bundle(cosine_u(1.0), {ellipse(32)}), 0, 1.0);
  double prev_gap = 0.0;
  for (int n : {64, 128, 256}) {
    const double th = theta(flat_bundle(cosine_u(1.0), {ellipse(n)}), 0, 1.0);
    const double gap = std::abs(th - prev_theta);
    const double h = 2.0 * M_PI / n;
    EXPECT_LE(gap, h * h * th) << n;
    if (prev_gap > 0.0) EXPECT_LE(gap, prev_gap);
    prev_theta = th;
    prev_gap = gap;
  }
}

TEST(Theta, RejectsNonpositiveTau) {
  const auto b = flat_bundle(constant_u(1.0), {CurveState::circle({0.0, 0.0}, 1.0, 16, 1.0)});
  try {
    theta(b, 0, 1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NonpositiveTau);
  }
}

TEST(MonotonicityBalance, ShrinkingSphereSoliton) {
  const double C = 0.7;
  const auto s = sphere_soliton(C, M_PI / 4, 0.4, 2e-3);
  const auto recs = monotonicity_balance(make_bundle(s.traj, s.curves), 1.0);
  ASSERT_EQ(recs.size(), s.curves.size());
  for (std::size_t i = 0; i < recs.size(); ++i) {
    const auto& r = recs[i];
    EXPECT_LE(std::abs(r.termB), 1e-8);
    EXPECT_LE(std::abs(r.termC), 1e-12);
    EXPECT_LE(r.dtheta_dt, 0.0);
    EXPECT_LE(r.relative, 1e-3) << "t = " << r.t;
    // closed form: d/dt of 2 sqrt(2) pi C sin(theta) with dtheta/dt = -cot(theta) / (2 tau)
    const double th = *flows::latitude_angle(s.curves[i]);
    const double exact = -2.0 * std::sqrt(2.0) * M_PI * C * std::cos(th) * std::cos(th) / (std::sin(th) * 2.0 * r.tau);
    EXPECT_NEAR(r.termA / exact, 1.0, 1e-3);
  }
}

TEST(MonotonicityBalance, StaticFlatTorusExactDensity) {
  const double T = 1.0;
  const auto m = ConformalTorus::from_function(square(256), [](double, double) { return 0.0; });
  AmbientFlowConfig cfg;
  cfg.q_mode = QMode::Static;
  cfg.t1 = 0.05;
  cfg.dt = 1e-4;
  cfg.T = T;
  const auto traj = std::make_shared<const FlowTrajectory>(flows::ricci_flow_run(m, cfg));
  std::vector<double> ts;
  for (const auto& s : traj->snapshots) ts.push_back(s.t);
  const auto run = flows::curve_flow_run(traj, CurveState::circle({M_PI, M_PI}, 1.0, 512), ts);
  const auto recs = monotonicity_balance(flat_bundle(cosine_u(T), run.states), T);
  for (const auto& r : recs) {
    EXPECT_LE(r.relative, 1e-2);
    EXPECT_EQ(r.termC, 0.0);
    EXPECT_LT(r.termA, 0.0);
  }
}

TEST(MonotonicityBalance, StraightLoopWithConstantDensity) {
  // A geodesic loop with constant u: no curvature or normal gradient, so only
  // the -1/(2 tau) part of B survives and it is exactly d/dt of sqrt(tau) L u.
  std::vector<CurveState> curves;
  for (int i = 0; i < 5; ++i) curves.push_back(CurveState::straight_loop(1.0, 2.0 * M_PI, 32, 0.1 * i));
  const double T = 1.0;
  const auto recs = monotonicity_balance(flat_bundle(constant_u(2.0), curves), T);
  for (const auto& r : recs) {
    EXPECT_EQ(r.termA, 0.0);
    EXPECT_EQ(r.termC, 0.0);
    EXPECT_NEAR(r.termB, -r.theta / (2.0 * r.tau), 1e-12);
    EXPECT_NEAR(r.residual, 0.0, 1e-2 * std::abs(r.termB));
  }
}

TEST(MonotonicityBalance, EqualityOnGreatCircleOfShrinkingSoliton) {
  // k = 0 and R is constant along a great circle, and B = 0 on the soliton,
  // so both sides of the special-case inequality vanish.
  const auto s = sphere_soliton(1.3, M_PI / 2, 0.5, 0.01);
  const auto recs = monotonicity_balance(make_bundle(s.traj, s.curves), 1.0);
  for (const auto& r : recs) {
    EXPECT_NEAR(r.dtheta_dt, 0.0, 1e-9);
    EXPECT_NEAR(r.termA, 0.0, 1e-9);
    EXPECT_NEAR(r.termB, 0.0, 1e-8);
  }
}

TEST(MonotonicityBalance, RejectsMisalignedCurveTimes) {
  const auto traj = std::make_shared<const FlowTrajectory>(
      flows::conjugate_heat_solve(flows::sphere_family(1.0, QMode::Static, {0.0, 0.1, 0.2}), {1.0}, KMode::Zero));
  try {
    make_bundle(traj, {CurveState::latitude(1.0, 16, 0.05)});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::GridMismatch);
  }
}

TEST(MassIntegral, StaticMetricConstantDensity) {
  const auto s = square(32);
  AmbientFlowConfig cfg;
  cfg.q_mode = QMode::Static;
  cfg.t1 = 0.2;
  cfg.dt = 1e-3;
  const auto m = ConformalTorus::from_function(s, [](double x, double y) { return 0.2 * std::sin(x) * std::cos(y); });
  const auto sol = flows::conjugate_heat_solve(flows::ricci_flow_run(m, cfg), {1.5}, KMode::Zero);
  const double area = geometry2d::grid_integral(m, geometry2d::GridValues(s.size(), 1.0));
  for (double v : mass_integral(sol)) EXPECT_NEAR(v, 1.5 * area, 1e-12 * area);
}

TEST(MassIntegral, SphereFamilyIsExactlyConstant) {
  const double C = 0.4;
  const auto ts = flows::snapshot_times(0.0, 0.9, 1e-3, 100);
  const auto sol = flows::conjugate_heat_solve(flows::sphere_family(std::sqrt(2.0), QMode::Ricci, ts), {C / 0.1},
                                               KMode::TraceQ, 1e-4);
  for (double v : mass_integral(sol)) EXPECT_NEAR(v / (8.0 * M_PI * C), 1.0, 1e-12);
}

TEST(MassIntegral, TorusRicciFlowDriftIsSmall) {
  const auto s = square(64);
  const auto m = ConformalTorus::from_function(s, [](double x, double y) { return 0.2 * std::sin(x) + 0.1 * std::cos(y); });
  AmbientFlowConfig cfg;
  cfg.t1 = 1.0;
  cfg.T = 2.0;
  cfg.dt = 0.5 * flows::stable_dt(m);
  cfg.snapshot_stride = 100;
  const auto sol = flows::conjugate_heat_solve(flows::ricci_flow_run(m, cfg), flows::cosine_bump(s), KMode::TraceQ);
  const auto mass = mass_integral(sol);
  for (double v : mass) EXPECT_NEAR(v / mass.back(), 1.0, 1e-3);
}

TEST(MassIntegral, NoncompactAmbientIsRejected) {
  for (auto bg : {AnalyticBackground::cigar(), AnalyticBackground::flat_plane(), AnalyticBackground::gaussian_expander(0.0)}) {
    FlowTrajectory traj;
    traj.family = bg;
    traj.provenance = flows::Provenance::ExactFamily;
    traj.snapshots = {{1.0, {}, {1.0}}, {2.0, {}, {1.0}}};
    try {
      mass_integral(traj);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::NoncompactAmbient);
    }
  }
}

TEST(SolitonTraceTerm, SpotValues) {
  EXPECT_DOUBLE_EQ(soliton_trace_term(SolitonKind::Steady, 3, 1, 1.0, 3.0), -0.5);
  EXPECT_DOUBLE_EQ(soliton_trace_term(SolitonKind::Expanding, 2, 1, 1.0, 2.0, 0.0), -1.0);
  for (double t : {-3.0, 0.0, 0.4, 0.99}) EXPECT_EQ(soliton_trace_term(SolitonKind::Shrinking, 5, 2, t, 1.0, 1.0), 0.0);
  EXPECT_EQ(soliton_trace_term(SolitonKind::Steady, 2, 2, 0.0, 1.0), 0.0);  // m = n
}

TEST(SolitonTraceTerm, SignContractOnRandomSamples) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> U(-5.0, 5.0), gap(1e-3, 4.0);
  std::uniform_int_distribution<int> dim(2, 8), kind(0, 2);
  int violations = 0;
  for (int s = 0; s < 1000; ++s) {
    const int m = dim(rng);
    const int n = std::uniform_int_distribution<int>(1, m - 1)(rng);
    const double t = U(rng);
    double T = t + gap(rng), ext = 0.0;
    const auto k = static_cast<SolitonKind>(kind(rng));
    if (k == SolitonKind::Expanding) ext = t - gap(rng);
    if (k == SolitonKind::Shrinking) ext = T + gap(rng) * (s % 5 == 0 ? 0.0 : 1.0);  // T <= T_max
    const double v = soliton_trace_term(k, m, n, t, T, ext);
    const bool ok = k == SolitonKind::Shrinking ? v <= 0.0 : v < 0.0;
    violations += ok ? 0 : 1;
  }
  EXPECT_EQ(violations, 0);
}

TEST(SolitonTraceTerm, InvalidOrderings) {
  auto expect_ordering = [](auto fn) {
    try {
      fn();
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::InvalidTimeOrdering);
    }
  };
  expect_ordering([] { soliton_trace_term(SolitonKind::Expanding, 2, 1, 1.0, 2.0, 1.5); });
  expect_ordering([] { soliton_trace_term(SolitonKind::Expanding, 2, 1, 3.0, 2.0, 0.0); });
  expect_ordering([] { soliton_trace_term(SolitonKind::Steady, 2, 1, 2.0, 2.0); });
  expect_ordering([] { soliton_trace_term(SolitonKind::Shrinking, 2, 1, 1.0, 2.0, 0.5); });
}

TEST(HarnackTrace, ShrinkingSolitonVanishes) {
  const auto bg = AnalyticBackground::round_sphere(std::sqrt(2.0), QMode::Ricci);
  for (double t : {0.0, 0.3, 0.8})
    for (Point p : {Point{0.0, 0.0}, Point{0.4, -1.2}, Point{3.0, 2.0}}) {
      const auto s = geometry2d::background_eval(bg, p, t);
      const double phi = bg.phi_jet(p, t).v;
      EXPECT_NEAR(harnack_trace(s, g_unit(phi, 0.7), bg.T_max() - t, QMode::Ricci), 0.0, 1e-12);
    }
}

TEST(HarnackTrace, FlatWithZeroPotential) {
  const auto s = geometry2d::background_eval(AnalyticBackground::flat_plane(), {0.3, 0.1}, 0.0);
  EXPECT_DOUBLE_EQ(harnack_trace(s, g_unit(0.0, 1.1), 0.25, QMode::Static), -2.0);
}

TEST(HarnackTrace, CigarSteadySoliton) {
  const auto bg = AnalyticBackground::cigar();
  for (Point p : {Point{0.0, 0.0}, Point{0.5, -0.3}, Point{2.0, 1.0}}) {
    const auto s = geometry2d::background_eval(bg, p, 0.0);
    const double phi = bg.phi_jet(p, 0.0).v;
    for (double tau : {0.5, 3.0}) EXPECT_NEAR(harnack_trace(s, g_unit(phi, 0.3), tau, QMode::Ricci), -0.5 / tau, 1e-12);
  }
  EXPECT_THROW(harnack_trace(geometry2d::background_eval(bg, {0.0, 0.0}, 0.0), g_unit(0.0, 0.0), 0.0, QMode::Ricci), Error);
}

TEST(HarnackMatrix, FlatIsZero) {
  const auto g = AnalyticBackground::flat_plane().metric_field();
  EXPECT_EQ(harnack_matrix<2>(g, Vec<double, 2>{0.2, 0.4}, 0.0, Vec<double, 2>{1.0, 0.0}, Vec<double, 2>{0.3, -2.0}, 0.5), 0.0);
}

TEST(HarnackMatrix, RoundSphereClosedForms) {
  const auto bg = AnalyticBackground::round_sphere(1.3, QMode::Static);
  const auto g = bg.metric_field();
  const double R = 2.0 / (1.3 * 1.3);
  const double tau = 0.7;
  for (Point p : {Point{0.0, 0.0}, Point{0.6, -0.2}}) {
    const double phi = bg.phi_jet(p, 0.0).v;
    const auto V = g_unit(phi, 0.4);
    const auto U = g_unit(phi, 0.4 + M_PI / 2);
    const Vec<double, 2> zero{0.0, 0.0};
    EXPECT_NEAR(harnack_matrix<2>(g, p, 0.0, V, zero, tau), R * R / 2 + R / (2 * tau), 1e-10);
    EXPECT_NEAR(harnack_matrix<2>(g, p, 0.0, V, U, tau), R * R / 2 + R / (2 * tau) + R, 1e-10);
  }
}

TEST(Dim2Harnack, BackwardSphereFamily) {
  const auto bg = AnalyticBackground::round_sphere(1.0, QMode::BackwardRicci);
  const auto g = bg.metric_field();
  for (double t : {0.0, 0.5, 2.0}) {
    const double R = 2.0 / (1.0 + 2.0 * t);
    const Point p{0.3, 0.8};
    EXPECT_NEAR(dim2_harnack(g, p, t, g_unit(bg.phi_jet(p, t).v, 1.0), 1.5), R / 2 + 1 / 3.0, 1e-10);
  }
}

TEST(Dim2Harnack, CigarAtOrigin) {
  // R = 4 / (1 + r^2), so log R = log 4 - log(1 + r^2) has Hessian -2 delta at
  // the origin, where phi and its gradient vanish.
  const auto g = AnalyticBackground::cigar().metric_field();
  for (double a : {0.0, 0.9, 2.0}) EXPECT_NEAR(dim2_harnack(g, Vec<double, 2>{0.0, 0.0}, 0.0, g_unit(0.0, a), 1.0), 0.5, 1e-12);
}

TEST(Dim2Harnack, FlatIsRejected) {
  const auto g = AnalyticBackground::flat_plane().metric_field();
  try {
    dim2_harnack(g, Vec<double, 2>{0.0, 0.0}, 0.0, Vec<double, 2>{1.0, 0.0}, 1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NonpositiveCurvature);
  }
}

// Backward Ricci flow on the round sphere with u = R and a latitude curve.
TEST(Dim2Harnack, CurvatureWeightedLengthOnBackwardSphere) {
  const auto bg = AnalyticBackground::round_sphere(1.0, QMode::BackwardRicci);
  const double T = 2.0;
  const auto ts = flows::snapshot_times(0.0, 1.0, 0.01, 1);
  const auto th = flows::latitude_ode(bg, 1.0, ts);
  std::vector<CurveState> curves;
  for (std::size_t i = 0; i < ts.size(); ++i) curves.push_back(CurveState::latitude(th[i], 128, ts[i]));
  const JetSource u = [bg](const Point&, double t) {
    Jet2 j;
    j.v = 2.0 / bg.rho_squared(t);
    return j;
  };
  const auto b = analytic_bundle(bg, u, curves, KMode::TraceQ);
  const auto recs = monotonicity_balance(b, T);
  const auto g = bg.metric_field();
  for (std::size_t i = 0; i < recs.size(); ++i) {
    if (i > 0) EXPECT_LE(recs[i].theta, recs[i - 1].theta);
    EXPECT_LE(recs[i].dtheta_dt, 0.0);
    EXPECT_LE(recs[i].relative, 1e-3);
    // termB = -sqrt(tau) int dim2_harnack R ds, with dim2_harnack constant along the latitude
    const auto geo = geometry2d::geodesic_curvature(curves[i], b.phi);
    const Point p = curves[i].vertices[0];
    const double d2 = dim2_harnack(g, p, ts[i], geo.nu[0], recs[i].tau);
    EXPECT_GT(d2, 0.0);
    EXPECT_NEAR(recs[i].termB, -std::sqrt(recs[i].tau) * d2 * u(p, ts[i]).v * geo.length, 1e-9);
  }
}
