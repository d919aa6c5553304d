#pragma once

// Soliton sign terms and the Harnack-type quadratics.

#include <cmath>

#include "flowlab/error.hpp"
#include "flowlab/flows/config.hpp"
#include "flowlab/geometry2d/background.hpp"
#include "flowlab/tensorlab/calculus.hpp"

namespace flowlab::monitor {

using flows::QMode;
using geometry2d::Point;

enum class SolitonKind { Expanding, Steady, Shrinking };

inline const char* to_string(SolitonKind k) {
  switch (k) {
    case SolitonKind::Expanding: return "expanding";
    case SolitonKind::Steady: return "steady";
    case SolitonKind::Shrinking: return "shrinking";
  }
  return "unknown";
}

/// Extra trace term of the monotonicity derivative on a gradient soliton
/// background. T_ext is T_min (expanding) or T_max (shrinking); unused when steady.
inline double soliton_trace_term(SolitonKind kind, int m, int n, double t, double T, double T_ext = 0.0) {
  if (n < 1 || m < n) throw Error(ErrorKind::Validation, "need 1 <= n <= m");
  const double half = 0.5 * (m - n);
  switch (kind) {
    case SolitonKind::Expanding:
      if (!(T_ext < t && t < T)) throw Error(ErrorKind::InvalidTimeOrdering, "expanding needs T_min < t < T");
      return half * (1.0 / (T_ext - t) - 1.0 / (T - t));
    case SolitonKind::Steady:
      if (!(t < T)) throw Error(ErrorKind::InvalidTimeOrdering, "steady needs t < T");
      return -half / (T - t);
    case SolitonKind::Shrinking:
      if (!(t < T && t < T_ext)) throw Error(ErrorKind::InvalidTimeOrdering, "shrinking needs t < min(T, T_max)");
      return half * (1.0 / (T_ext - t) - 1.0 / (T - t));
  }
  return 0.0;
}

/// Sign of Q = +-Ric inside the trace quadratics.
inline double q_sign(QMode q) { return q == QMode::Ricci ? 1.0 : q == QMode::BackwardRicci ? -1.0 : 0.0; }

/// nabla^2_{nu nu} f + Q(nu, nu) - 1/(2 tau) for a g-unit normal nu.
inline double harnack_trace(const Mat<double, 2>& hess_f, const Mat<double, 2>& ric, const Vec<double, 2>& nu,
                            double tau, QMode q) {
  if (!(tau > 0.0)) throw Error(ErrorKind::NonpositiveTau, "tau must be positive");
  double h = 0.0, r = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      h += nu[i] * nu[j] * hess_f(i, j);
      r += nu[i] * nu[j] * ric(i, j);
    }
  return h + q_sign(q) * r - 0.5 / tau;
}

inline double harnack_trace(const geometry2d::BackgroundSample& s, const Vec<double, 2>& nu, double tau, QMode q) {
  return harnack_trace(s.hess_f, s.ric, nu, tau, q);
}

/// (nabla^2_ij R + 2 Ric^2_ij + Ric_ij / tau - 2 nabla_k Ric_ij U^k + 2 R_ipjq U^p U^q) V^i V^j.
template <int M, class Metric>
double harnack_matrix(const Metric& g, const Vec<double, M>& x, double t, const Vec<double, M>& V,
                      const Vec<double, M>& U, double tau) {
  const auto c = tensorlab::curvature<M>(g, x, t);
  const auto hR = tensorlab::nabla<M>(g, tensorlab::nabla<M>(g, tensorlab::scalar_curvature_field<M>(g)))(x, t);
  const auto dric = tensorlab::nabla<M>(g, tensorlab::ricci_field<M>(g))(x, t);  // (k, i, j)
  double out = 0.0;
  for (int i = 0; i < M; ++i)
    for (int j = 0; j < M; ++j) {
      double ric2 = 0.0;
      for (int a = 0; a < M; ++a)
        for (int b = 0; b < M; ++b) ric2 += c.ric(i, a) * c.ginv(a, b) * c.ric(b, j);
      double v = hR(i, j) + 2.0 * ric2 + c.ric(i, j) / tau;
      for (int k = 0; k < M; ++k) v -= 2.0 * dric(k, i, j) * U[k];
      for (int p = 0; p < M; ++p)
        for (int q = 0; q < M; ++q) v += 2.0 * c.riem(i, p, j, q) * U[p] * U[q];
      out += v * V[i] * V[j];
    }
  return out;
}

/// nabla^2_{nu nu} log R + R/2 + 1/(2 tau) for a g-unit nu in two dimensions.
template <class Metric>
double dim2_harnack(const Metric& g, const Vec<double, 2>& x, double t, const Vec<double, 2>& nu, double tau) {
  if (!(tau > 0.0)) throw Error(ErrorKind::NonpositiveTau, "tau must be positive");
  const auto scal = tensorlab::scalar_curvature_field<2>(g);
  const double R = scal(x, t).c[0];
  if (!(R > 0.0)) throw Error(ErrorKind::NonpositiveCurvature, "log R needs R > 0");
  const auto log_r = [scal](const auto& y, const auto& s) {
    using std::log;
    auto r = scal(y, s);
    r.c[0] = log(r.c[0]);
    return r;
  };
  const auto h = tensorlab::nabla<2>(g, tensorlab::nabla<2>(g, log_r))(x, t);
  double v = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) v += nu[i] * nu[j] * h(i, j);
  return v + 0.5 * R + 0.5 / tau;
}

}  // namespace flowlab::monitor
