#pragma once

// Second-order jets of scalar functions on a 2-D chart. Every 2-D metric in
// the library is conformal, g = exp(2 phi) (dx^2 + dy^2), so a jet of phi is
// all the geometry a point needs.

#include <cmath>
#include <functional>

#include "flowlab/dual.hpp"
#include "flowlab/tensor.hpp"

namespace flowlab::geometry2d {

using Point = Vec<double, 2>;

struct Jet2 {
  double v = 0.0;
  double dx = 0.0;
  double dy = 0.0;
  double dxx = 0.0;
  double dxy = 0.0;
  double dyy = 0.0;

  double laplacian0() const { return dxx + dyy; }
};

/// A time-dependent scalar given through its jets.
using JetFn = std::function<Jet2(const Point&, double)>;

/// Jet of a generic scalar callable fn(x, t) by nested duals.
template <class Fn>
Jet2 jet_of(const Fn& fn, const Point& p, double t) {
  using D1 = Dual<double, 2>;
  using D2 = Dual<D1, 2>;
  const auto inner = seed(p);
  std::array<D2, 2> x;
  for (int i = 0; i < 2; ++i) {
    x[i].v = inner[i];
    x[i].d[i] = D1(1.0);
  }
  const D2 r = fn(x, D2(t));
  Jet2 j;
  j.v = r.v.v;
  j.dx = r.v.d[0];
  j.dy = r.v.d[1];
  j.dxx = r.d[0].d[0];
  j.dxy = r.d[0].d[1];
  j.dyy = r.d[1].d[1];
  return j;
}

/// d/dt of a generic scalar callable.
template <class Fn>
double time_derivative(const Fn& fn, const Point& p, double t) {
  using D = Dual<double, 1>;
  return fn(lift_point<D>(p), seed_scalar(t)).d[0];
}

/// R = -2 exp(-2 phi) Laplacian_0 phi.
inline double scalar_curvature(const Jet2& phi) { return -2.0 * std::exp(-2.0 * phi.v) * phi.laplacian0(); }

/// Covariant Hessian of w in the metric exp(2 phi) delta:
/// w_ij - Gamma^k_ij w_k with Gamma^k_ij = d_i phi delta_jk + d_j phi delta_ik - d_k phi delta_ij.
inline Mat<double, 2> conformal_hessian(const Jet2& phi, const Jet2& w) {
  Mat<double, 2> h;
  h(0, 0) = w.dxx - (phi.dx * w.dx - phi.dy * w.dy);
  h(1, 1) = w.dyy - (phi.dy * w.dy - phi.dx * w.dx);
  h(0, 1) = w.dxy - (phi.dx * w.dy + phi.dy * w.dx);
  h(1, 0) = h(0, 1);
  return h;
}

}  // namespace flowlab::geometry2d
