#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "flowlab/geometry2d/background.hpp"
#include "flowlab/tensorlab/identities.hpp"
#include "flowlab/tensorlab/metrics.hpp"

using namespace flowlab;
using namespace flowlab::tensorlab;

namespace {

template <int M>
auto random_scalar(std::mt19937_64& rng) {
  return scalar_field<M>([p = random_trig_poly<M>(rng, 3)](const auto& x, const auto&) { return p(x); });
}

auto sphere_chart_phi(double rho0, double sign) {
  return [rho0, sign](const auto& x, const auto& t) {
    using std::log;
    const auto r2 = x[0] * x[0] + x[1] * x[1];
    return 0.5 * log(4.0 * (rho0 * rho0 + sign * 2.0 * t)) - log(1.0 + r2);
  };
}

const auto cigar_phi = [](const auto& x, const auto&) {
  using std::log;
  return -0.5 * log(1.0 + x[0] * x[0] + x[1] * x[1]);
};

}  // namespace

TEST(Christoffel, EuclideanVanishes) {
  const auto G = christoffel<3>(EuclideanMetric<3>{}, Vec<double, 3>{0.3, 1.0, 2.0}, 0.0);
  EXPECT_EQ(max_abs(G), 0.0);
}

TEST(Christoffel, ConformalXXComponentIsPhiX) {
  auto phi = [](const auto& x, const auto&) {
    using std::sin;
    return 0.3 * sin(x[0]) * sin(2.0 * x[1]);
  };
  const Vec<double, 2> p{0.7, 1.1};
  const auto G = christoffel<2>(conformal_metric(phi), p, 0.0);
  EXPECT_NEAR(G(0, 0, 0), 0.3 * std::cos(0.7) * std::sin(2.2), 1e-14);
}

TEST(Christoffel, SpherePolarChart) {
  const double th = 0.9;
  const auto G = christoffel<2>(SpherePolarMetric{1.7}, Vec<double, 2>{th, 0.4}, 0.0);
  EXPECT_NEAR(G(0, 1, 1), -std::sin(th) * std::cos(th), 1e-14);
  EXPECT_NEAR(G(1, 0, 1), std::cos(th) / std::sin(th), 1e-14);
}

TEST(Christoffel, SymmetricInLowerIndices) {
  std::mt19937_64 rng(11);
  const auto g = random_trig_metric<3>(rng);
  const auto G = christoffel<3>(g, random_point<3>(rng), 0.0);
  for (int k = 0; k < 3; ++k)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) EXPECT_EQ(G(k, i, j), G(k, j, i));
}

TEST(Riemann, FlatIsZero) {
  const auto c = curvature<3>(EuclideanMetric<3>{}, Vec<double, 3>{0.1, 0.2, 0.3}, 0.0);
  EXPECT_EQ(max_abs(c.riem), 0.0);
  EXPECT_EQ(c.scal, 0.0);
}

TEST(Riemann, RoundSphereHasPositiveScalarCurvature) {
  for (double rho : {0.5, 1.0, 2.3}) {
    const auto c = curvature<2>(SpherePolarMetric{rho}, Vec<double, 2>{1.2, 0.3}, 0.0);
    EXPECT_GT(c.scal, 0.0);
    EXPECT_NEAR(c.scal, 2.0 / (rho * rho), 1e-12);
  }
}

TEST(Riemann, TwoDimensionalRicciIsHalfScalarTimesMetric) {
  std::mt19937_64 rng(5);
  for (int n = 0; n < 10; ++n) {
    const auto g = random_trig_metric<2>(rng);
    const auto c = curvature<2>(g, random_point<2>(rng), 0.0);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) EXPECT_NEAR(c.ric(i, j), 0.5 * c.scal * c.g(i, j), 1e-9);
  }
}

TEST(Riemann, TwoDimensionalFullTensorIdentity) {
  std::mt19937_64 rng(6);
  for (int n = 0; n < 10; ++n) {
    const auto g = random_trig_metric<2>(rng);
    const auto c = curvature<2>(g, random_point<2>(rng), 0.0);
    for (int i = 0; i < 2; ++i)
      for (int p = 0; p < 2; ++p)
        for (int j = 0; j < 2; ++j)
          for (int q = 0; q < 2; ++q)
            EXPECT_NEAR(c.riem(i, p, j, q), 0.5 * c.scal * (c.g(i, j) * c.g(p, q) - c.g(i, q) * c.g(p, j)), 1e-9);
  }
}

TEST(Riemann, SymmetriesOnRandomThreeMetrics) {
  std::mt19937_64 rng(8);
  for (int n = 0; n < 5; ++n) {
    const auto g = random_trig_metric<3>(rng);
    const auto c = curvature<3>(g, random_point<3>(rng), 0.0);
    double worst = 0.0;
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b)
        for (int e = 0; e < 3; ++e)
          for (int d = 0; d < 3; ++d) {
            const double r = c.riem(a, b, e, d);
            worst = std::max(worst, std::abs(r + c.riem(b, a, e, d)));
            worst = std::max(worst, std::abs(r + c.riem(a, b, d, e)));
            worst = std::max(worst, std::abs(r - c.riem(e, d, a, b)));
            worst = std::max(worst, std::abs(r + c.riem(b, e, a, d) + c.riem(e, a, b, d)));
          }
    EXPECT_LE(worst, 1e-10);
    EXPECT_LE(std::abs(c.ric(0, 1) - c.ric(1, 0)), 1e-10);
  }
}

TEST(CovariantDerivatives, ConstantFunctionHasNoDerivatives) {
  std::mt19937_64 rng(3);
  const auto g = random_trig_metric<3>(rng);
  const auto f = scalar_field<3>([](const auto& x, const auto&) { return 0.0 * x[0] + 2.5; });
  const auto p = random_point<3>(rng);
  EXPECT_EQ(max_abs(nabla<3>(g, f)(p, 0.0)), 0.0);
  EXPECT_EQ(max_abs(nabla<3>(g, nabla<3>(g, f))(p, 0.0)), 0.0);
  EXPECT_EQ(max_abs(nabla<3>(g, nabla<3>(g, nabla<3>(g, f)))(p, 0.0)), 0.0);
}

TEST(CovariantDerivatives, FlatHessianOfXSquared) {
  const auto f = scalar_field<2>([](const auto& x, const auto&) { return x[0] * x[0]; });
  const auto h = nabla<2>(EuclideanMetric2{}, nabla<2>(EuclideanMetric2{}, f))(Vec<double, 2>{0.4, -1.0}, 0.0);
  EXPECT_EQ(h(0, 0), 2.0);
  EXPECT_EQ(h(0, 1), 0.0);
  EXPECT_EQ(h(1, 1), 0.0);
}

TEST(CovariantDerivatives, HessianIsSymmetric) {
  std::mt19937_64 rng(12);
  const auto g = random_trig_metric<3>(rng);
  const auto f = random_scalar<3>(rng);
  const auto h = nabla<3>(g, nabla<3>(g, f))(random_point<3>(rng), 0.0);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) EXPECT_NEAR(h(i, j), h(j, i), 1e-14);
}

TEST(CovariantDerivatives, CigarIsSteadySoliton) {
  const auto g = conformal_metric(cigar_phi);
  const auto f = scalar_field<2>([](const auto& x, const auto&) {
    using std::log;
    return -log(1.0 + x[0] * x[0] + x[1] * x[1]);
  });
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int n = 0; n < 50; ++n) {
    const Vec<double, 2> p{u(rng), u(rng)};
    const auto h = nabla<2>(g, nabla<2>(g, f))(p, 0.0);
    const auto ric = curvature<2>(g, p, 0.0).ric;
    EXPECT_LE(max_abs(h + ric), 1e-12);
  }
}

TEST(Commutation, FlatMetric) {
  std::mt19937_64 rng(1);
  const auto w = random_trig_field<3, 1>(rng);
  EXPECT_LE(check_commutation_1form<3>(EuclideanMetric<3>{}, w, random_point<3>(rng)), 1e-12);
}

TEST(Commutation, RandomThreeMetricOneForm) {
  std::mt19937_64 rng(2);
  for (int n = 0; n < 5; ++n) {
    const auto g = random_trig_metric<3>(rng);
    const auto w = random_trig_field<3, 1>(rng);
    EXPECT_LE(check_commutation_1form<3>(g, w, random_point<3>(rng)), 1e-7);
  }
}

TEST(Commutation, RandomTwoMetricTwoForm) {
  std::mt19937_64 rng(3);
  for (int n = 0; n < 5; ++n) {
    const auto g = random_trig_metric<2>(rng);
    const auto w = random_trig_field<2, 2>(rng);
    EXPECT_LE(check_commutation_2form<2>(g, w, random_point<2>(rng)), 1e-7);
  }
}

TEST(Bianchi, FlatAndSphere) {
  EXPECT_EQ(check_bianchi<3>(EuclideanMetric<3>{}, Vec<double, 3>{0.1, 0.2, 0.3}).max(), 0.0);
  const auto r = check_bianchi<2>(SpherePolarMetric{1.3}, Vec<double, 2>{0.8, 0.1});
  EXPECT_LE(r.div_ric, 1e-12);
  EXPECT_LE(r.max(), 1e-12);
}

TEST(Bianchi, RandomThreeMetrics) {
  std::mt19937_64 rng(9);
  for (int n = 0; n < 5; ++n) {
    const auto g = random_trig_metric<3>(rng);
    const auto r = check_bianchi<3>(g, random_point<3>(rng));
    EXPECT_LE(r.second, 1e-7);
    EXPECT_LE(r.contracted, 1e-7);
    EXPECT_LE(r.div_riem, 1e-7);
    EXPECT_LE(r.div_ric, 1e-7);
  }
}

TEST(HessianLaplacian, FlatMetricCommutes) {
  std::mt19937_64 rng(10);
  const auto f = random_scalar<3>(rng);
  EXPECT_LE(check_hessian_laplacian_interchange<3>(EuclideanMetric<3>{}, f, random_point<3>(rng)), 1e-10);
}

TEST(HessianLaplacian, SphereCosTheta) {
  const auto f = scalar_field<2>([](const auto& x, const auto&) {
    using std::cos;
    return cos(x[0]);
  });
  for (double th : {0.3, 1.0, 2.2})
    EXPECT_LE(check_hessian_laplacian_interchange<2>(SpherePolarMetric{1.4}, f, Vec<double, 2>{th, 0.5}), 1e-8);
}

TEST(HessianLaplacian, RandomThreeMetric) {
  std::mt19937_64 rng(14);
  for (int n = 0; n < 4; ++n) {
    const auto g = random_trig_metric<3>(rng);
    const auto f = random_scalar<3>(rng);
    EXPECT_LE(check_hessian_laplacian_interchange<3>(g, f, random_point<3>(rng)), 1e-7);
  }
}

TEST(FlowEvolutions, FirstOrderFamiliesBothDirections) {
  std::mt19937_64 rng(15);
  for (int n = 0; n < 3; ++n) {
    const auto g0 = random_trig_metric<3>(rng);
    const auto p = random_point<3>(rng);
    const FirstOrderRicciFamily<3, TrigMetric<3>> fwd{g0, -1.0};
    const FirstOrderRicciFamily<3, TrigMetric<3>> bwd{g0, 1.0};
    EXPECT_LE(check_flow_evolutions_exact<3>(fwd, p, 0.0, FlowDirection::Ricci).max(), 1e-9);
    EXPECT_LE(check_flow_evolutions_exact<3>(bwd, p, 0.0, FlowDirection::BackwardRicci).max(), 1e-9);
  }
}

TEST(FlowEvolutions, WrongDirectionIsDetected) {
  std::mt19937_64 rng(16);
  const FirstOrderRicciFamily<3, TrigMetric<3>> fwd{random_trig_metric<3>(rng), -1.0};
  EXPECT_GT(check_flow_evolutions_exact<3>(fwd, random_point<3>(rng), 0.0, FlowDirection::BackwardRicci).ricci, 1e-3);
}

TEST(FlowEvolutions, ExactSphereFamilies) {
  for (double sign : {-1.0, 1.0}) {
    const auto g = conformal_metric(sphere_chart_phi(std::sqrt(2.0), sign));
    const auto dir = sign < 0 ? FlowDirection::Ricci : FlowDirection::BackwardRicci;
    for (double t : {0.0, 0.3})
      EXPECT_LE(check_flow_evolutions_exact<2>(g, Vec<double, 2>{0.3, -0.2}, t, dir).max(), 1e-12);
    // d/dt R = Laplacian R + 2 |Ric|^2 reduces to d/dt (1 / (T - t)) = 1 / (T - t)^2 when shrinking.
    if (sign < 0) {
      const auto dR = ddt(scalar_curvature_field<2>(g))(Vec<double, 2>{0.3, -0.2}, 0.25);
      EXPECT_NEAR(dR.c[0], 1.0 / (0.75 * 0.75), 1e-12);
    }
  }
}

TEST(FlowEvolutions, FlatStaticFamily) {
  const auto r = check_flow_evolutions_exact<2>(EuclideanMetric2{}, Vec<double, 2>{1.0, 2.0}, 0.0, FlowDirection::Ricci);
  EXPECT_EQ(r.max(), 0.0);
}

TEST(FlowEvolutions, SnapshotCentralDifferenceIsSecondOrder) {
  const auto g = conformal_metric(sphere_chart_phi(1.0, -1.0));
  const Vec<double, 2> p{0.4, 0.1};
  const double t = 0.1;
  const auto coarse = check_flow_evolutions_snapshots<2>(g, g, g, p, t - 2e-2, t, t + 2e-2, FlowDirection::Ricci);
  const auto fine = check_flow_evolutions_snapshots<2>(g, g, g, p, t - 1e-2, t, t + 1e-2, FlowDirection::Ricci);
  EXPECT_LE(fine.max(), 1e-3);
  EXPECT_NEAR(coarse.scalar / fine.scalar, 4.0, 0.1);
  // Gamma and Ric of the shrinking sphere do not move in this chart.
  EXPECT_LE(fine.christoffel, 1e-10);
  EXPECT_LE(fine.ricci, 1e-10);
}

TEST(HEvolution, RandomMetricsBothModesAreExact) {
  std::mt19937_64 rng(17);
  for (int n = 0; n < 3; ++n) {
    const auto g3 = random_trig_metric<3>(rng);
    const auto f3 = random_scalar<3>(rng);
    const auto p3 = random_point<3>(rng);
    EXPECT_LE(check_H_evolution_exact<3>(g3, f3, p3, 1.5, HarnackMode::Ricci).relative, 1e-10);
    EXPECT_LE(check_H_evolution_exact<3>(g3, f3, p3, 1.5, HarnackMode::BackwardRicci).relative, 1e-10);
    const auto g2 = random_trig_metric<2>(rng);
    const auto f2 = random_scalar<2>(rng);
    const auto p2 = random_point<2>(rng);
    EXPECT_LE(check_H_evolution_exact<2>(g2, f2, p2, 0.7, HarnackMode::Ricci).relative, 1e-10);
    EXPECT_LE(check_H_evolution_exact<2>(g2, f2, p2, 0.7, HarnackMode::BackwardRicci).relative, 1e-10);
  }
}

TEST(HEvolution, FlatTorusExactSolution) {
  // u = 1 + 0.5 exp(-tau) cos x solves u_t = -u_xx on the static flat torus.
  const double T = 1.0;
  const auto f = scalar_field<2>([T](const auto& x, const auto& t) {
    using std::cos;
    using std::exp;
    using std::log;
    return log(1.0 + 0.5 * exp(t - T) * cos(x[0]) + 0.0 * x[1]);
  });
  for (double t : {0.0, 0.4})
    EXPECT_LE(check_H_evolution_fields<2>(EuclideanMetric2{}, f, Vec<double, 2>{0.9, 0.3}, t, T, HarnackMode::Ricci).relative,
              1e-12);
}

TEST(HEvolution, ShrinkingSphereSolitonBothSidesVanish) {
  const double rho0 = std::sqrt(2.0);  // T_max = 1
  const auto g = conformal_metric(sphere_chart_phi(rho0, -1.0));
  const auto f = scalar_field<2>([](const auto& x, const auto& t) {
    using std::log;
    return log(3.0 / (1.0 - t + 0.0 * x[0]));  // u = C / (T_max - t), C = 3
  });
  for (double t : {0.0, 0.5}) {
    const auto r = check_H_evolution_fields<2>(g, f, Vec<double, 2>{0.2, 0.6}, t, 1.0, HarnackMode::Ricci);
    EXPECT_LE(r.lhs, 1e-8);
    EXPECT_LE(r.rhs, 1e-8);
  }
}

TEST(RandomEnsemble, DrawsArePositiveDefiniteAndReproducible) {
  std::mt19937_64 a(42), b(42);
  const auto g = random_trig_metric<3>(a);
  const auto h = random_trig_metric<3>(b);
  std::mt19937_64 pr(1);
  for (int n = 0; n < 100; ++n) {
    const auto p = random_point<3>(pr);
    EXPECT_GT(min_eigenvalue<3>(g(p, 0.0)), 1e-8);
    EXPECT_EQ(max_abs_diff(g(p, 0.0), h(p, 0.0)), 0.0);
  }
}
