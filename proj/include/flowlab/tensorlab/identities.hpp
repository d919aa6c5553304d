#pragma once

// Numerical audits of the curvature identities and evolution equations used
// in the monotonicity computations. Every check evaluates both sides with the
// calculus in calculus.hpp and returns the largest componentwise residual.

#include <algorithm>
#include <cmath>

#include "flowlab/tensorlab/calculus.hpp"
#include "flowlab/tensorlab/metrics.hpp"

namespace flowlab::tensorlab {

enum class FlowDirection { Ricci, BackwardRicci, Static };

/// +1 for Ricci flow, -1 for backward Ricci flow, 0 when static.
inline double evolution_sign(FlowDirection d) {
  switch (d) {
    case FlowDirection::Ricci: return 1.0;
    case FlowDirection::BackwardRicci: return -1.0;
    case FlowDirection::Static: return 0.0;
  }
  return 0.0;
}

template <int M, int R>
double max_abs_diff(const Tensor<double, M, R>& a, const Tensor<double, M, R>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.count; ++i) m = std::max(m, std::abs(a.c[i] - b.c[i]));
  return m;
}

/// |a - b|_max / max(|a|_max, |b|_max, scale); zero when both sides vanish.
/// `scale` is the magnitude of the individual terms that make up b, so
/// cancellations on the right-hand side do not inflate the ratio.
template <int M, int R>
double relative_residual(const Tensor<double, M, R>& a, const Tensor<double, M, R>& b, double scale = 0.0) {
  const double d = max_abs_diff(a, b);
  const double s = std::max({max_abs(a), max_abs(b), scale});
  return d == 0.0 ? 0.0 : d / s;
}

/// Value of a right-hand side together with the size of its largest term.
template <int M, int R>
struct Rhs {
  Tensor<double, M, R> value;
  double scale = 0.0;
};

// ---------------------------------------------------------------------------
// Commutation of covariant derivatives

/// nabla_p nabla_q w_i - nabla_q nabla_p w_i - Rm_{pqi}^s w_s for a 1-form.
template <int M, class Metric, class Form>
double check_commutation_1form(const Metric& g, const Form& w, const Vec<double, M>& x, double t = 0.0) {
  const auto nn = nabla<M>(g, nabla<M>(g, w))(x, t);
  const auto wv = w(x, t);
  const auto c = curvature<M>(g, x, t);
  double res = 0.0;
  for (int p = 0; p < M; ++p)
    for (int q = 0; q < M; ++q)
      for (int i = 0; i < M; ++i) {
        double rhs = 0.0;
        for (int s = 0; s < M; ++s)
          for (int l = 0; l < M; ++l) rhs += c.riem(p, q, i, l) * c.ginv(l, s) * wv(s);
        res = std::max(res, std::abs(nn(p, q, i) - nn(q, p, i) - rhs));
      }
  return res;
}

/// Same for a 2-tensor: Rm_{pqi}^s w_{sj} + Rm_{pqj}^s w_{is}.
template <int M, class Metric, class Form>
double check_commutation_2form(const Metric& g, const Form& w, const Vec<double, M>& x, double t = 0.0) {
  const auto nn = nabla<M>(g, nabla<M>(g, w))(x, t);
  const auto wv = w(x, t);
  const auto c = curvature<M>(g, x, t);
  Tensor<double, M, 4> up;  // Rm_{pqi}^s
  for (std::size_t f = 0; f < up.count; ++f) {
    const auto id = decltype(up)::unflat(f);
    double v = 0.0;
    for (int l = 0; l < M; ++l) v += c.riem(id[0], id[1], id[2], l) * c.ginv(l, id[3]);
    up.c[f] = v;
  }
  double res = 0.0;
  for (int p = 0; p < M; ++p)
    for (int q = 0; q < M; ++q)
      for (int i = 0; i < M; ++i)
        for (int j = 0; j < M; ++j) {
          double rhs = 0.0;
          for (int s = 0; s < M; ++s) rhs += up(p, q, i, s) * wv(s, j) + up(p, q, j, s) * wv(i, s);
          res = std::max(res, std::abs(nn(p, q, i, j) - nn(q, p, i, j) - rhs));
        }
  return res;
}

// ---------------------------------------------------------------------------
// Second Bianchi identity and its contractions

struct BianchiResiduals {
  double second = 0.0;      // nabla_s R_ijkl + nabla_l R_ijsk + nabla_k R_ijls
  double contracted = 0.0;  // g^{js} nabla_s R_ijkl - nabla_l Ric_ik + nabla_k Ric_il
  double div_riem = 0.0;    // nabla^j R_jikl - (nabla_k Ric_il - nabla_l Ric_ik)
  double div_ric = 0.0;     // g^{ij} nabla_i Ric_jk - nabla_k R / 2

  double max() const { return std::max({second, contracted, div_riem, div_ric}); }
};

template <int M, class Metric>
BianchiResiduals check_bianchi(const Metric& g, const Vec<double, M>& x, double t = 0.0) {
  const auto dr = nabla<M>(g, riemann_field<M>(g))(x, t);  // (s, i, j, k, l)
  const auto dric = nabla<M>(g, ricci_field<M>(g))(x, t);  // (k, i, l)
  const auto ds = nabla<M>(g, scalar_curvature_field<M>(g))(x, t);
  const auto gi = inverse(g(x, t));
  BianchiResiduals r;
  for (int i = 0; i < M; ++i)
    for (int j = 0; j < M; ++j)
      for (int k = 0; k < M; ++k)
        for (int l = 0; l < M; ++l)
          for (int s = 0; s < M; ++s)
            r.second = std::max(r.second, std::abs(dr(s, i, j, k, l) + dr(l, i, j, s, k) + dr(k, i, j, l, s)));
  for (int i = 0; i < M; ++i)
    for (int k = 0; k < M; ++k)
      for (int l = 0; l < M; ++l) {
        double con = 0.0;
        double div = 0.0;
        for (int j = 0; j < M; ++j)
          for (int s = 0; s < M; ++s) {
            con += gi(j, s) * dr(s, i, j, k, l);
            div += gi(j, s) * dr(s, j, i, k, l);
          }
        r.contracted = std::max(r.contracted, std::abs(con - dric(l, i, k) + dric(k, i, l)));
        r.div_riem = std::max(r.div_riem, std::abs(div - (dric(k, i, l) - dric(l, i, k))));
      }
  for (int k = 0; k < M; ++k) {
    double div = 0.0;
    for (int i = 0; i < M; ++i)
      for (int j = 0; j < M; ++j) div += gi(i, j) * dric(i, j, k);
    r.div_ric = std::max(r.div_ric, std::abs(div - 0.5 * ds(k)));
  }
  return r;
}

// ---------------------------------------------------------------------------
// Interchange of the Laplacian with the Hessian

/// Right-hand side of nabla^2_ij Laplacian f - Laplacian nabla_i nabla_j f:
///   -(nabla_i Ric_jk + nabla_j Ric_ik - nabla_k Ric_ij) nabla^k f
///   - Ric_j^p f_ip - Ric_i^p f_pj - 2 R_ikpj f^kp.
template <int M, class Metric, class Fn>
Mat<double, M> hessian_laplacian_rhs(const Metric& g, const Fn& f, const Vec<double, M>& x, double t) {
  const auto c = curvature<M>(g, x, t);
  const auto dric = nabla<M>(g, ricci_field<M>(g))(x, t);
  const auto df = nabla<M>(g, f)(x, t);
  const auto hf = nabla<M>(g, nabla<M>(g, f))(x, t);
  Vec<double, M> up{};
  for (int k = 0; k < M; ++k)
    for (int l = 0; l < M; ++l) up[k] += c.ginv(k, l) * df(l);
  Mat<double, M> hup;  // f^{kp}
  for (int k = 0; k < M; ++k)
    for (int p = 0; p < M; ++p)
      for (int a = 0; a < M; ++a)
        for (int b = 0; b < M; ++b) hup(k, p) += c.ginv(k, a) * c.ginv(p, b) * hf(a, b);
  Mat<double, M> rhs;
  for (int i = 0; i < M; ++i)
    for (int j = 0; j < M; ++j) {
      double v = 0.0;
      for (int k = 0; k < M; ++k) v -= (dric(i, j, k) + dric(j, i, k) - dric(k, i, j)) * up[k];
      for (int p = 0; p < M; ++p)
        for (int q = 0; q < M; ++q) v -= c.ginv(p, q) * (c.ric(j, p) * hf(i, q) + c.ric(i, p) * hf(q, j));
      for (int k = 0; k < M; ++k)
        for (int p = 0; p < M; ++p) v -= 2.0 * c.riem(i, k, p, j) * hup(k, p);
      rhs(i, j) = v;
    }
  return rhs;
}

template <int M, class Metric, class Fn>
double check_hessian_laplacian_interchange(const Metric& g, const Fn& f, const Vec<double, M>& x, double t = 0.0) {
  const auto lhs = nabla<M>(g, nabla<M>(g, laplacian<M>(g, f)))(x, t) -
                   laplacian<M>(g, nabla<M>(g, nabla<M>(g, f)))(x, t);
  return max_abs_diff(lhs, hessian_laplacian_rhs<M>(g, f, x, t));
}

// ---------------------------------------------------------------------------
// Evolution equations under (backward) Ricci flow. `sign` is +1 for Ricci
// flow and -1 for backward Ricci flow; each right-hand side below is the
// Ricci-flow expression multiplied by sign.

template <int M>
Mat<double, M> ricci_squared(const Curvature<double, M>& c) {
  Mat<double, M> r;
  for (int i = 0; i < M; ++i)
    for (int j = 0; j < M; ++j)
      for (int p = 0; p < M; ++p)
        for (int q = 0; q < M; ++q) r(i, j) += c.ginv(p, q) * c.ric(i, p) * c.ric(q, j);
  return r;
}

/// Ric^{pq} R_{ipjq}
template <int M>
Mat<double, M> ricci_riemann(const Curvature<double, M>& c) {
  Mat<double, M> rup;
  for (int p = 0; p < M; ++p)
    for (int q = 0; q < M; ++q)
      for (int a = 0; a < M; ++a)
        for (int b = 0; b < M; ++b) rup(p, q) += c.ginv(p, a) * c.ginv(q, b) * c.ric(a, b);
  Mat<double, M> r;
  for (int i = 0; i < M; ++i)
    for (int j = 0; j < M; ++j)
      for (int p = 0; p < M; ++p)
        for (int q = 0; q < M; ++q) r(i, j) += rup(p, q) * c.riem(i, p, j, q);
  return r;
}

/// sign * (Laplacian Ric + 2 Ric^{pq} R_ipjq - 2 g^{pq} Ric_ip Ric_qj)
template <int M, class Metric>
Rhs<M, 2> ricci_evolution_rhs(const Metric& g, const Vec<double, M>& x, double t, double sign) {
  const auto c = curvature<M>(g, x, t);
  const auto lap = laplacian<M>(g, ricci_field<M>(g))(x, t);
  const auto rr = ricci_riemann<M>(c);
  const auto r2 = ricci_squared<M>(c);
  Rhs<M, 2> out;
  for (std::size_t f = 0; f < out.value.count; ++f) {
    out.value.c[f] = sign * (lap.c[f] + 2.0 * rr.c[f] - 2.0 * r2.c[f]);
    out.scale = std::max(out.scale, std::abs(lap.c[f]) + 2.0 * std::abs(rr.c[f]) + 2.0 * std::abs(r2.c[f]));
  }
  return out;
}

/// sign * (Laplacian R + 2 |Ric|^2)
template <int M, class Metric>
Rhs<M, 0> scalar_evolution_rhs(const Metric& g, const Vec<double, M>& x, double t, double sign) {
  const auto c = curvature<M>(g, x, t);
  const auto lap = laplacian<M>(g, scalar_curvature_field<M>(g))(x, t);
  const auto r2 = ricci_squared<M>(c);
  double norm2 = 0.0;
  for (int i = 0; i < M; ++i)
    for (int j = 0; j < M; ++j) norm2 += c.ginv(i, j) * r2(i, j);
  Rhs<M, 0> out;
  out.value.c[0] = sign * (lap.c[0] + 2.0 * norm2);
  out.scale = std::abs(lap.c[0]) + 2.0 * std::abs(norm2);
  return out;
}

/// -sign * g^{kl} (nabla_i Ric_jl + nabla_j Ric_il - nabla_l Ric_ij), stored (k, i, j).
/// The scale is floored by |Gamma| |Ric| so that parallel-Ricci metrics,
/// where every term vanishes, still get a meaningful relative residual.
template <int M, class Metric>
Rhs<M, 3> christoffel_evolution_rhs(const Metric& g, const Vec<double, M>& x, double t, double sign) {
  const auto dric = nabla<M>(g, ricci_field<M>(g))(x, t);
  const auto c = curvature<M>(g, x, t);
  const auto G = christoffel<M>(g, x, t);
  Rhs<M, 3> out;
  for (int k = 0; k < M; ++k)
    for (int i = 0; i < M; ++i)
      for (int j = 0; j < M; ++j) {
        double v = 0.0;
        double s = 0.0;
        for (int l = 0; l < M; ++l) {
          v += c.ginv(k, l) * (dric(i, j, l) + dric(j, i, l) - dric(l, i, j));
          s += std::abs(c.ginv(k, l)) * (std::abs(dric(i, j, l)) + std::abs(dric(j, i, l)) + std::abs(dric(l, i, j)));
        }
        out.value(k, i, j) = -sign * v;
        out.scale = std::max(out.scale, s);
      }
  out.scale = std::max(out.scale, max_abs(G) * max_abs(c.ric));
  return out;
}

struct EvolutionResiduals {
  double ricci = 0.0;
  double scalar = 0.0;
  double christoffel = 0.0;

  double max() const { return std::max({ricci, scalar, christoffel}); }
};

/// Evolution-equation residuals for a closed-form metric family g(x, t)
/// whose time derivatives are taken exactly. Residuals are relative.
template <int M, class Family>
EvolutionResiduals check_flow_evolutions_exact(const Family& g, const Vec<double, M>& x, double t,
                                               FlowDirection dir) {
  const double sign = evolution_sign(dir);
  EvolutionResiduals r;
  const auto ric = ricci_evolution_rhs<M>(g, x, t, sign);
  r.ricci = relative_residual(ddt(ricci_field<M>(g))(x, t), ric.value, ric.scale);
  const auto scal = scalar_evolution_rhs<M>(g, x, t, sign);
  r.scalar = relative_residual(ddt(scalar_curvature_field<M>(g))(x, t), scal.value, scal.scale);
  const auto gam = christoffel_evolution_rhs<M>(g, x, t, sign);
  r.christoffel = relative_residual(ddt(christoffel_field<M>(g))(x, t), gam.value, gam.scale);
  return r;
}

/// Derivative at the middle of three samples (possibly unequal spacing),
/// second order in the spacing.
template <class T>
T central_difference(const T& prev, const T& cur, const T& next, double t0, double t1, double t2) {
  const double h0 = t1 - t0;
  const double h1 = t2 - t1;
  const double a = -h1 / (h0 * (h0 + h1));
  const double b = (h1 - h0) / (h0 * h1);
  const double c = h0 / (h1 * (h0 + h1));
  T out = cur;
  for (std::size_t f = 0; f < out.count; ++f) out.c[f] = a * prev.c[f] + b * cur.c[f] + c * next.c[f];
  return out;
}

/// Same residuals with the time derivative replaced by a central difference
/// over three metric snapshots; spatial sides are evaluated on the middle one.
template <int M, class Metric>
EvolutionResiduals check_flow_evolutions_snapshots(const Metric& g0, const Metric& g1, const Metric& g2,
                                                   const Vec<double, M>& x, double t0, double t1, double t2,
                                                   FlowDirection dir) {
  const double sign = evolution_sign(dir);
  EvolutionResiduals r;
  const auto ric = ricci_evolution_rhs<M>(g1, x, t1, sign);
  const auto dric = central_difference(curvature<M>(g0, x, t0).ric, curvature<M>(g1, x, t1).ric,
                                       curvature<M>(g2, x, t2).ric, t0, t1, t2);
  r.ricci = relative_residual(dric, ric.value, ric.scale);
  const auto scal = scalar_evolution_rhs<M>(g1, x, t1, sign);
  const auto dscal = central_difference(make_scalar<double, M>(curvature<M>(g0, x, t0).scal),
                                        make_scalar<double, M>(curvature<M>(g1, x, t1).scal),
                                        make_scalar<double, M>(curvature<M>(g2, x, t2).scal), t0, t1, t2);
  r.scalar = relative_residual(dscal, scal.value, scal.scale);
  const auto gam = christoffel_evolution_rhs<M>(g1, x, t1, sign);
  const auto dgam = central_difference(christoffel<M>(g0, x, t0), christoffel<M>(g1, x, t1),
                                       christoffel<M>(g2, x, t2), t0, t1, t2);
  r.christoffel = relative_residual(dgam, gam.value, gam.scale);
  return r;
}

// ---------------------------------------------------------------------------
// Evolution of the Harnack tensor H_ij along a solution of the conjugate heat
// equation. Here f = log u, so that
//   ricci:          g_t = -2 Ric, u_t = -Laplacian u + R u,
//                   f_t = -Laplacian f - |grad f|^2 + R,  H = tau (f_ij - Ric_ij) + g_ij / 2,
//   backward ricci: g_t = +2 Ric, u_t = -Laplacian u - R u,
//                   f_t = -Laplacian f - |grad f|^2 - R,  H = tau (f_ij + Ric_ij) + g_ij / 2,
// with tau = T - t in both cases.

enum class HarnackMode { Ricci, BackwardRicci };

/// Relative residual of the H identity plus the size of each side, so
/// callers can tell "both sides vanish" apart from "both sides agree".
struct HEvolutionResult {
  double relative = 0.0;
  double lhs = 0.0;  // max |(d/dt + Laplacian) H|
  double rhs = 0.0;  // max |right-hand side|
};

template <int M>
HEvolutionResult h_result(const Tensor<double, M, 2>& lhs, const Rhs<M, 2>& rhs) {
  return {relative_residual(lhs, rhs.value, rhs.scale), max_abs(lhs), max_abs(rhs.value)};
}

/// Sign of Ric inside H: -1 for Ricci flow, +1 for backward Ricci flow.
inline double harnack_ricci_sign(HarnackMode m) { return m == HarnackMode::Ricci ? -1.0 : 1.0; }

/// H_ij as a field of (x, t) for a metric field g and potential field f
/// (a rank-0 field).
template <int M, class Metric, class Pot>
auto h_field(Metric g, Pot f, double T, HarnackMode mode) {
  const double s = harnack_ricci_sign(mode);
  auto hess = nabla<M>(g, nabla<M>(g, f));
  return [g, hess, T, s](const auto& x, const auto& t) {
    using S = std::remove_cvref_t<decltype(t)>;
    const S tau = T - t;
    const auto c = curvature<M>(g, x, t);
    auto h = hess(x, t);
    for (std::size_t k = 0; k < h.count; ++k) h.c[k] = tau * (h.c[k] + s * c.ric.c[k]) + 0.5 * c.g.c[k];
    return h;
  };
}

/// Right-hand side of (d/dt + Laplacian) H_ij from the two computations.
/// For ricci mode:
///   (H - 2 H^2) / tau - 2 nabla_k H_ij nabla^k f - Ric_i^k H_kj - Ric_j^k H_ki - 2 R_ipjq H^pq
///   - tau (2 Laplacian Ric - 2 Ric^2 + 4 Ric^pq R_ipjq - nabla^2 R - Ric / tau)
///   + 2 tau (nabla_i Ric_jk + nabla_j Ric_ik - 2 nabla_k Ric_ij) nabla^k f - 2 tau R_ipjq f^p f^q.
/// For backward ricci mode:
///   -f_ij + tau (Ric_j^q f_iq + Ric_i^q f_qj - 2 R_ipjq f^pq)
///   - tau (2 Ric^pq R_ipjq - 2 Ric^2 + nabla^2 R)
///   - tau (2 f_i^p f_jp + 2 nabla_k f_ij nabla^k f + 2 R_ipjq f^p f^q).
template <int M, class Metric, class Pot>
Rhs<M, 2> h_evolution_rhs(const Metric& g, const Pot& f, const Vec<double, M>& x, double t, double T,
                          HarnackMode mode) {
  const double tau = T - t;
  const auto c = curvature<M>(g, x, t);
  const auto& gi = c.ginv;
  const auto df = nabla<M>(g, f)(x, t);
  const auto hf = nabla<M>(g, nabla<M>(g, f))(x, t);
  const auto d3f = nabla<M>(g, nabla<M>(g, nabla<M>(g, f)))(x, t);  // (k, i, j)
  const auto dric = nabla<M>(g, ricci_field<M>(g))(x, t);           // (k, i, j)
  const auto hR = nabla<M>(g, nabla<M>(g, scalar_curvature_field<M>(g)))(x, t);
  const auto rr = ricci_riemann<M>(c);
  const auto r2 = ricci_squared<M>(c);

  Vec<double, M> up{};
  for (int k = 0; k < M; ++k)
    for (int l = 0; l < M; ++l) up[k] += gi(k, l) * df(l);
  // R_ipjq f^p f^q
  Mat<double, M> rff;
  for (int i = 0; i < M; ++i)
    for (int j = 0; j < M; ++j)
      for (int p = 0; p < M; ++p)
        for (int q = 0; q < M; ++q) rff(i, j) += c.riem(i, p, j, q) * up[p] * up[q];
  // A^k_j = g^{kl} A_lj for a 2-tensor A
  auto mixed = [&](const Mat<double, M>& a) {
    Mat<double, M> r;
    for (int k = 0; k < M; ++k)
      for (int j = 0; j < M; ++j)
        for (int l = 0; l < M; ++l) r(k, j) += gi(k, l) * a(l, j);
    return r;
  };
  auto raise_both = [&](const Mat<double, M>& a) {
    Mat<double, M> r;
    for (int p = 0; p < M; ++p)
      for (int q = 0; q < M; ++q)
        for (int a1 = 0; a1 < M; ++a1)
          for (int b1 = 0; b1 < M; ++b1) r(p, q) += gi(p, a1) * gi(q, b1) * a(a1, b1);
    return r;
  };
  auto riem_contract = [&](const Mat<double, M>& aup) {  // R_ipjq A^pq
    Mat<double, M> r;
    for (int i = 0; i < M; ++i)
      for (int j = 0; j < M; ++j)
        for (int p = 0; p < M; ++p)
          for (int q = 0; q < M; ++q) r(i, j) += c.riem(i, p, j, q) * aup(p, q);
    return r;
  };

  Rhs<M, 2> out;
  if (mode == HarnackMode::Ricci) {
    const auto lapric = laplacian<M>(g, ricci_field<M>(g))(x, t);
    const auto hfield = h_field<M>(g, f, T, mode);
    const auto H = hfield(x, t);
    const auto dH = nabla<M>(g, hfield)(x, t);  // (k, i, j)
    const auto Hm = mixed(H);
    const auto Hup = raise_both(H);
    const auto riemH = riem_contract(Hup);
    for (int i = 0; i < M; ++i)
      for (int j = 0; j < M; ++j) {
        double h2 = 0.0;
        double ricH = 0.0;
        double gradH = 0.0;
        double gradRic = 0.0;
        for (int k = 0; k < M; ++k) {
          h2 += H(i, k) * Hm(k, j);
          gradH += dH(k, i, j) * up[k];
          gradRic += (dric(i, j, k) + dric(j, i, k) - 2.0 * dric(k, i, j)) * up[k];
          for (int l = 0; l < M; ++l) ricH += gi(k, l) * (c.ric(i, k) * H(l, j) + c.ric(j, k) * H(l, i));
        }
        const std::array<double, 9> terms = {
            (H(i, j) - 2.0 * h2) / tau,
            -2.0 * gradH,
            -ricH,
            -2.0 * riemH(i, j),
            -tau * (2.0 * lapric(i, j) - 2.0 * r2(i, j) + 4.0 * rr(i, j)),
            tau * hR(i, j),
            c.ric(i, j),
            2.0 * tau * gradRic,
            -2.0 * tau * rff(i, j),
        };
        double v = 0.0;
        double s = 0.0;
        for (double term : terms) {
          v += term;
          s += std::abs(term);
        }
        out.value(i, j) = v;
        out.scale = std::max(out.scale, s);
      }
  } else {
    const auto fup = raise_both(hf);
    const auto riemf = riem_contract(fup);
    const auto fm = mixed(hf);
    for (int i = 0; i < M; ++i)
      for (int j = 0; j < M; ++j) {
        double ricf = 0.0;
        double ff = 0.0;
        double grad3 = 0.0;
        for (int q = 0; q < M; ++q) {
          grad3 += d3f(q, i, j) * up[q];
          ff += hf(i, q) * fm(q, j);
          for (int l = 0; l < M; ++l) ricf += gi(q, l) * (c.ric(j, l) * hf(i, q) + c.ric(i, l) * hf(q, j));
        }
        const std::array<double, 8> terms = {
            -hf(i, j),
            tau * (ricf - 2.0 * riemf(i, j)),
            -tau * (2.0 * rr(i, j) - 2.0 * r2(i, j)),
            -tau * hR(i, j),
            -2.0 * tau * ff,
            -2.0 * tau * grad3,
            -2.0 * tau * rff(i, j),
            0.0,
        };
        double v = 0.0;
        double s = 0.0;
        for (double term : terms) {
          v += term;
          s += std::abs(term);
        }
        out.value(i, j) = v;
        out.scale = std::max(out.scale, s);
      }
  }
  return out;
}

/// f(t) = f0 + t (-Laplacian f0 - |grad f0|^2 + K) with K = R (ricci) or -R
/// (backward ricci), all evaluated on the static metric g0. Matches the true
/// potential to first order in t.
template <int M, class Metric, class Pot>
auto first_order_potential(Metric g0, Pot f0, HarnackMode mode) {
  const double k = mode == HarnackMode::Ricci ? 1.0 : -1.0;
  auto lap = laplacian<M>(g0, f0);
  auto grad = nabla<M>(g0, f0);
  return [g0, f0, lap, grad, k](const auto& x, const auto& t) {
    const auto c = curvature<M>(g0, x, t);
    const auto d = grad(x, t);
    auto sq = d.c[0] * 0.0;
    for (int i = 0; i < M; ++i)
      for (int j = 0; j < M; ++j) sq += c.ginv(i, j) * d(i) * d(j);
    auto out = f0(x, t);
    out.c[0] += t * (-lap(x, t).c[0] - sq + k * c.scal);
    return out;
  };
}

/// Residual of the H evolution identity at (x, 0) for a closed-form pair
/// (g0, f0) moved to first order by the flow and the conjugate heat equation.
template <int M, class Metric, class Pot>
HEvolutionResult check_H_evolution_exact(const Metric& g0, const Pot& f0, const Vec<double, M>& x, double T,
                               HarnackMode mode) {
  const FirstOrderRicciFamily<M, Metric> gt{g0, mode == HarnackMode::Ricci ? -1.0 : 1.0};
  const auto ft = first_order_potential<M>(g0, f0, mode);
  const auto lhs = ddt(h_field<M>(gt, ft, T, mode))(x, 0.0) + laplacian<M>(g0, h_field<M>(g0, f0, T, mode))(x, 0.0);
  return h_result<M>(lhs, h_evolution_rhs<M>(g0, f0, x, 0.0, T, mode));
}

/// Residual of the H evolution identity for closed-form time-dependent
/// fields g(x, t) and f(x, t) = log u that solve the flow and the conjugate
/// heat equation exactly.
template <int M, class Metric, class Pot>
HEvolutionResult check_H_evolution_fields(const Metric& g, const Pot& f, const Vec<double, M>& x, double t, double T,
                                HarnackMode mode) {
  const auto h = h_field<M>(g, f, T, mode);
  const auto lhs = ddt(h)(x, t) + laplacian<M>(g, h)(x, t);
  return h_result<M>(lhs, h_evolution_rhs<M>(g, f, x, t, T, mode));
}

/// Same identity with d/dt H replaced by a central difference over three
/// snapshots (g_k, f_k) at times t0 < t1 < t2; the rest uses the middle one.
template <int M, class Metric, class Pot>
HEvolutionResult check_H_evolution_snapshots(const std::array<Metric, 3>& g, const std::array<Pot, 3>& f,
                                   const std::array<double, 3>& t, const Vec<double, M>& x, double T,
                                   HarnackMode mode) {
  const auto h0 = h_field<M>(g[0], f[0], T, mode)(x, t[0]);
  const auto h1f = h_field<M>(g[1], f[1], T, mode);
  const auto h2 = h_field<M>(g[2], f[2], T, mode)(x, t[2]);
  const auto lhs = central_difference(h0, h1f(x, t[1]), h2, t[0], t[1], t[2]) + laplacian<M>(g[1], h1f)(x, t[1]);
  return h_result<M>(lhs, h_evolution_rhs<M>(g[1], f[1], x, t[1], T, mode));
}

}  // namespace flowlab::tensorlab
