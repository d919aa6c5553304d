#pragma once

// Closed-form 2-D backgrounds, all written in a conformal chart
// g = exp(2 phi) (dx^2 + dy^2):
//   flat_plane, flat_torus   phi = 0
//   round_sphere             stereographic chart, phi = log(2 rho(t) / (1 + r^2));
//                            the point at polar angle theta sits at r = tan(theta / 2)
//   cigar                    phi = -log(1 + r^2) / 2
//   gaussian_expander        phi = 0 with the expanding potential
// Potentials f use the convention u = exp(-f).

#include <cmath>
#include <string>

#include "flowlab/error.hpp"
#include "flowlab/geometry2d/jet.hpp"
#include "flowlab/tensorlab/calculus.hpp"
#include "flowlab/tensorlab/identities.hpp"

namespace flowlab::geometry2d {

enum class BackgroundKind { FlatPlane, FlatTorus, RoundSphere, Cigar, GaussianExpander };

using tensorlab::FlowDirection;

inline const char* to_string(BackgroundKind k) {
  switch (k) {
    case BackgroundKind::FlatPlane: return "flat_plane";
    case BackgroundKind::FlatTorus: return "flat_torus";
    case BackgroundKind::RoundSphere: return "round_sphere";
    case BackgroundKind::Cigar: return "cigar";
    case BackgroundKind::GaussianExpander: return "gaussian_expander";
  }
  return "unknown";
}

inline bool is_compact(BackgroundKind k) { return k == BackgroundKind::FlatTorus || k == BackgroundKind::RoundSphere; }

struct AnalyticBackground {
  BackgroundKind kind = BackgroundKind::FlatPlane;
  double rho0 = 1.0;   // initial sphere radius
  double T_ext = 0.0;  // T_min for the expander; the sphere derives T_max from rho0
  FlowDirection direction = FlowDirection::Static;

  static AnalyticBackground flat_plane() { return {BackgroundKind::FlatPlane, 1.0, 0.0, FlowDirection::Static}; }
  static AnalyticBackground flat_torus() { return {BackgroundKind::FlatTorus, 1.0, 0.0, FlowDirection::Static}; }
  static AnalyticBackground cigar() { return {BackgroundKind::Cigar, 1.0, 0.0, FlowDirection::Static}; }
  static AnalyticBackground round_sphere(double rho0, FlowDirection d) {
    AnalyticBackground b{BackgroundKind::RoundSphere, rho0, 0.0, d};
    if (!(rho0 > 0.0)) throw Error(ErrorKind::Validation, "sphere radius must be positive");
    b.T_ext = d == FlowDirection::Ricci ? 0.5 * rho0 * rho0 : 0.0;
    return b;
  }
  static AnalyticBackground gaussian_expander(double T_min) {
    return {BackgroundKind::GaussianExpander, 1.0, T_min, FlowDirection::Ricci};
  }

  /// Extinction time rho0^2 / 2 of the shrinking sphere.
  double T_max() const { return 0.5 * rho0 * rho0; }

  /// rho(t)^2 on the sphere family.
  double rho_squared(double t) const {
    switch (direction) {
      case FlowDirection::Ricci: return rho0 * rho0 - 2.0 * t;
      case FlowDirection::BackwardRicci: return rho0 * rho0 + 2.0 * t;
      case FlowDirection::Static: return rho0 * rho0;
    }
    return rho0 * rho0;
  }

  void check_time(double t) const {
    if (kind == BackgroundKind::RoundSphere && !(rho_squared(t) > 1e-12 * rho0 * rho0))
      throw Error(ErrorKind::TimeOutOfRange, "sphere radius vanishes at t = " + std::to_string(t));
    if (kind == BackgroundKind::GaussianExpander && !(t > T_ext))
      throw Error(ErrorKind::TimeOutOfRange, "expander is defined only for t > T_min = " + std::to_string(T_ext));
  }

  /// Conformal exponent as a generic scalar callable.
  template <class S, class T>
  S phi(const Vec<S, 2>& x, const T& t) const {
    using std::log;
    const S r2 = x[0] * x[0] + x[1] * x[1];
    switch (kind) {
      case BackgroundKind::RoundSphere: {
        const double sgn = direction == FlowDirection::Ricci ? -2.0 : direction == FlowDirection::BackwardRicci ? 2.0 : 0.0;
        const T rho2 = rho0 * rho0 + sgn * t;
        return 0.5 * log(S(4.0) * rho2) - log(1.0 + r2);
      }
      case BackgroundKind::Cigar: return -0.5 * log(1.0 + r2);
      default: return S(0.0) * r2;
    }
  }

  /// Potential f (u = exp(-f)) as a generic scalar callable.
  template <class S, class T>
  S potential(const Vec<S, 2>& x, const T& t) const {
    using std::log;
    const S r2 = x[0] * x[0] + x[1] * x[1];
    switch (kind) {
      case BackgroundKind::RoundSphere: {
        if (direction == FlowDirection::Ricci) return S(0.0) * r2 + log(S(0.0) * r2 + (T_max() - t));
        if (direction == FlowDirection::BackwardRicci) return S(0.0) * r2 + log(S(0.0) * r2 + 0.5 * (rho0 * rho0 + 2.0 * t));
        return S(0.0) * r2;
      }
      case BackgroundKind::Cigar: return -log(1.0 + r2);
      case BackgroundKind::GaussianExpander: {
        const T s = t - T_ext;
        return -r2 / (4.0 * s) + log(S(0.0) * r2 + s);
      }
      default: return S(0.0) * r2;
    }
  }

  /// Closed-form fields for tensorlab.
  auto metric_field() const {
    const AnalyticBackground b = *this;
    return tensorlab::conformal_metric([b](const auto& x, const auto& t) { return b.phi(x, t); });
  }
  auto potential_field() const {
    const AnalyticBackground b = *this;
    return tensorlab::scalar_field<2>([b](const auto& x, const auto& t) { return b.potential(x, t); });
  }

  Jet2 phi_jet(const Point& p, double t) const {
    check_time(t);
    return jet_of([this](const auto& x, const auto& tt) { return phi(x, tt); }, p, t);
  }
  Jet2 potential_jet(const Point& p, double t) const {
    check_time(t);
    return jet_of([this](const auto& x, const auto& tt) { return potential(x, tt); }, p, t);
  }
};

struct BackgroundSample {
  Mat<double, 2> g;
  double R = 0.0;
  Mat<double, 2> ric;
  double f = 0.0;
  Vec<double, 2> df{};
  Mat<double, 2> hess_f;
};

/// All closed-form quantities at (p, t), computed by tensorlab from phi and f.
inline BackgroundSample background_eval(const AnalyticBackground& b, const Point& p, double t) {
  b.check_time(t);
  const auto g = b.metric_field();
  const auto f = b.potential_field();
  const auto c = tensorlab::curvature<2>(g, p, t);
  BackgroundSample s;
  s.g = c.g;
  s.R = c.scal;
  s.ric = c.ric;
  s.f = f(p, t).c[0];
  const auto df = tensorlab::nabla<2>(g, f)(p, t);
  s.df = {df(0), df(1)};
  s.hess_f = tensorlab::nabla<2>(g, tensorlab::nabla<2>(g, f))(p, t);
  return s;
}

}  // namespace flowlab::geometry2d
