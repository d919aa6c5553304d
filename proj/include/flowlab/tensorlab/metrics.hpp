#pragma once

// Closed-form metrics and test fields for the identity checks: random
// trigonometric-polynomial metrics on the m-torus, standard charts, and the
// first-order (back-)Ricci family through a static metric.

#include <cstdint>
#include <memory>
#include <random>
#include <vector>

#include "flowlab/error.hpp"
#include "flowlab/tensor.hpp"
#include "flowlab/tensorlab/calculus.hpp"

namespace flowlab::tensorlab {

template <int M>
struct TrigMode {
  std::array<int, M> k{};
  double a = 0.0;  // cos coefficient
  double b = 0.0;  // sin coefficient
};

/// c0 + sum a cos(k.x) + b sin(k.x)
template <int M>
struct TrigPoly {
  double c0 = 0.0;
  std::vector<TrigMode<M>> modes;

  template <class S>
  S operator()(const Vec<S, M>& x) const {
    using std::cos;
    using std::sin;
    S r(c0);
    for (const auto& m : modes) {
      S arg(0.0);
      for (int i = 0; i < M; ++i)
        if (m.k[i] != 0) arg += static_cast<double>(m.k[i]) * x[i];
      r += m.a * cos(arg) + m.b * sin(arg);
    }
    return r;
  }
};

/// Random trig polynomial whose coefficients sum (in absolute value) to one,
/// so |p(x)| <= 1 + |c0| everywhere.
template <int M>
TrigPoly<M> random_trig_poly(std::mt19937_64& rng, int n_modes, int max_wave = 3) {
  std::uniform_int_distribution<int> wave(-max_wave, max_wave);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  TrigPoly<M> p;
  double total = 0.0;
  for (int m = 0; m < n_modes; ++m) {
    TrigMode<M> mode;
    bool nonzero = false;
    while (!nonzero) {
      for (int i = 0; i < M; ++i) {
        mode.k[i] = wave(rng);
        nonzero = nonzero || mode.k[i] != 0;
      }
    }
    mode.a = coef(rng);
    mode.b = coef(rng);
    total += std::abs(mode.a) + std::abs(mode.b);
    p.modes.push_back(mode);
  }
  for (auto& m : p.modes) {
    m.a /= total;
    m.b /= total;
  }
  return p;
}

/// g = delta + eps * P(x), P symmetric with trig-polynomial entries.
template <int M>
class TrigMetric {
 public:
  TrigMetric() = default;
  TrigMetric(double eps, std::vector<TrigPoly<M>> comps)
      : data_(std::make_shared<const Data>(Data{eps, std::move(comps)})) {}

  template <class S>
  Mat<S, M> operator()(const Vec<S, M>& x, const S& /*t*/) const {
    Mat<S, M> g;
    int c = 0;
    for (int i = 0; i < M; ++i)
      for (int j = i; j < M; ++j, ++c) {
        S v = data_->eps * data_->comps[c](x);
        if (i == j) v += 1.0;
        g(i, j) = v;
        g(j, i) = v;
      }
    return g;
  }

  double epsilon() const { return data_->eps; }

 private:
  struct Data {
    double eps;
    std::vector<TrigPoly<M>> comps;
  };
  std::shared_ptr<const Data> data_;
};

/// Random point in [0, 2 pi)^M.
template <int M>
Vec<double, M> random_point(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 2.0 * M_PI);
  Vec<double, M> p;
  for (auto& x : p) x = u(rng);
  return p;
}

/// Draws a metric from the random ensemble (eps = 0.1, `modes` modes per
/// component by default), rejecting draws whose smallest eigenvalue falls
/// to 1e-8 or below at any of `probes` random points.
template <int M>
TrigMetric<M> random_trig_metric(std::mt19937_64& rng, double eps = 0.1, int modes = 3, int probes = 64) {
  for (int attempt = 0; attempt < 100; ++attempt) {
    std::vector<TrigPoly<M>> comps;
    for (int c = 0; c < M * (M + 1) / 2; ++c) comps.push_back(random_trig_poly<M>(rng, modes));
    TrigMetric<M> g(eps, std::move(comps));
    bool ok = true;
    for (int p = 0; p < probes && ok; ++p) {
      auto x = random_point<M>(rng);
      ok = min_eigenvalue<M>(g(x, 0.0)) > 1e-8;
    }
    if (ok) return g;
  }
  throw Error(ErrorKind::SingularMetric, "could not draw a positive definite metric");
}

/// Random closed-form tensor field of rank R with trig-polynomial entries.
template <int M, int R>
class TrigField {
 public:
  explicit TrigField(std::vector<TrigPoly<M>> comps)
      : comps_(std::make_shared<const std::vector<TrigPoly<M>>>(std::move(comps))) {}

  template <class S>
  Tensor<S, M, R> operator()(const Vec<S, M>& x, const S& /*t*/) const {
    Tensor<S, M, R> out;
    for (std::size_t f = 0; f < out.count; ++f) out.c[f] = (*comps_)[f](x);
    return out;
  }

 private:
  std::shared_ptr<const std::vector<TrigPoly<M>>> comps_;
};

template <int M, int R>
TrigField<M, R> random_trig_field(std::mt19937_64& rng, int modes = 3) {
  std::vector<TrigPoly<M>> comps;
  for (std::size_t f = 0; f < int_pow(M, R); ++f) comps.push_back(random_trig_poly<M>(rng, modes));
  return TrigField<M, R>(std::move(comps));
}

struct EuclideanMetric2 {
  template <class S>
  Mat<S, 2> operator()(const Vec<S, 2>& /*x*/, const S& /*t*/) const {
    return identity<S, 2>();
  }
};

template <int M>
struct EuclideanMetric {
  template <class S>
  Mat<S, M> operator()(const Vec<S, M>& /*x*/, const S& /*t*/) const {
    return identity<S, M>();
  }
};

/// Round sphere of radius rho in polar chart (theta, varphi).
struct SpherePolarMetric {
  double rho = 1.0;

  template <class S>
  Mat<S, 2> operator()(const Vec<S, 2>& x, const S& /*t*/) const {
    using std::sin;
    Mat<S, 2> g;
    S s = sin(x[0]);
    g(0, 0) = S(rho * rho);
    g(1, 1) = rho * rho * s * s;
    return g;
  }
};

/// g = exp(2 phi(x, t)) delta for any generic scalar callable phi.
template <class Phi>
struct ConformalMetric {
  Phi phi;

  template <class S>
  Mat<S, 2> operator()(const Vec<S, 2>& x, const S& t) const {
    using std::exp;
    S e = exp(2.0 * phi(x, t));
    Mat<S, 2> g;
    g(0, 0) = e;
    g(1, 1) = e;
    return g;
  }
};

template <class Phi>
ConformalMetric<Phi> conformal_metric(Phi phi) {
  return ConformalMetric<Phi>{std::move(phi)};
}

/// g(t) = g0 + 2 s t Ric(g0) with s = -1 (Ricci flow) or +1 (backward Ricci
/// flow). Agrees with the true flow to first order in t, so every time
/// derivative at t = 0 is exact.
template <int M, class Metric>
struct FirstOrderRicciFamily {
  Metric g0;
  double sign = -1.0;

  template <class S>
  Mat<S, M> operator()(const Vec<S, M>& x, const S& t) const {
    auto g = g0(x, t);
    const auto ric = curvature<M>(g0, x, t).ric;
    for (std::size_t f = 0; f < g.count; ++f) g.c[f] += (2.0 * sign) * t * ric.c[f];
    return g;
  }
};

}  // namespace flowlab::tensorlab
