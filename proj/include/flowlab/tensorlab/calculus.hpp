#pragma once

// Pointwise Riemannian calculus on closed-form data.
//
// A *field* is any callable `F(x, t) -> Tensor<S, M, R>` that is generic in
// the scalar type S, where x is Vec<S, M> and t is S. A metric is a rank-2
// field. Derivatives are taken by re-evaluating a field on nested duals, so
// nabla(g, nabla(g, F)) is again a field and carries no truncation error.
//
// Curvature convention: the Riemann tensor is fixed by the commutator of
// covariant derivatives acting on 1-forms,
//
//   nabla_p nabla_q w_i - nabla_q nabla_p w_i = Rm_{pqi}^s w_s,
//
// which gives Rm_{pqi}^s = d_q G^s_{pi} - d_p G^s_{qi}
//                        + G^k_{pi} G^s_{qk} - G^k_{qi} G^s_{pk},
// R_{pqis} = Rm_{pqi}^l g_{ls}, Ric_{ik} = g^{jl} R_{ijkl}, R = g^{ik} Ric_{ik}.
// With this choice R_{ipip} is the sectional curvature, so round spheres
// have R > 0.

#include <tuple>
#include <type_traits>
#include <utility>

#include "flowlab/dual.hpp"
#include "flowlab/tensor.hpp"

namespace flowlab::tensorlab {

template <class X>
struct point_traits;
template <class S, std::size_t N>
struct point_traits<std::array<S, N>> {
  using scalar = S;
  static constexpr int dim = static_cast<int>(N);
};

/// Value of F at (x, t) together with its coordinate gradient; the gradient
/// carries the derivative index first: grad(p, i...) = d_p F_{i...}.
template <int M, class Field, class S>
auto value_and_gradient(const Field& F, const Vec<S, M>& x, const S& t) {
  using D = Dual<S, M>;
  const auto xd = seed(x);
  const D td = lift<D>(t);
  const auto Fd = F(xd, td);
  using TD = std::remove_cvref_t<decltype(Fd)>;
  constexpr int R = TD::rank;
  constexpr std::size_t n = TD::count;
  Tensor<S, M, R> val;
  Tensor<S, M, R + 1> grad;
  for (std::size_t f = 0; f < n; ++f) {
    val.c[f] = Fd.c[f].v;
    for (int p = 0; p < M; ++p) grad.c[p * n + f] = Fd.c[f].d[p];
  }
  return std::make_pair(val, grad);
}

/// d/dt of a field at (x, t), coordinates held fixed.
template <class Field>
auto ddt(Field F) {
  return [F](const auto& x, const auto& t) {
    using S = std::remove_cvref_t<decltype(t)>;
    const auto Fd = F(lift_point<Dual<S, 1>>(x), seed_scalar(t));
    using TD = std::remove_cvref_t<decltype(Fd)>;
    Tensor<S, TD::dim, TD::rank> out;
    for (std::size_t f = 0; f < TD::count; ++f) out.c[f] = Fd.c[f].d[0];
    return out;
  };
}

/// Christoffel symbols G(k, i, j) = Gamma^k_{ij}.
template <int M, class Metric, class S>
Tensor<S, M, 3> christoffel(const Metric& g, const Vec<S, M>& x, const S& t) {
  const auto [gv, dg] = value_and_gradient<M>(g, x, t);
  const auto gi = inverse(gv);
  Tensor<S, M, 3> G;
  for (int k = 0; k < M; ++k)
    for (int i = 0; i < M; ++i)
      for (int j = i; j < M; ++j) {
        S s(0.0);
        for (int l = 0; l < M; ++l) s += gi(k, l) * (dg(i, j, l) + dg(j, i, l) - dg(l, i, j));
        G(k, i, j) = 0.5 * s;
        G(k, j, i) = G(k, i, j);
      }
  return G;
}

template <int M, class Metric>
auto christoffel_field(Metric g) {
  return [g](const auto& x, const auto& t) { return christoffel<M>(g, x, t); };
}

template <class S, int M>
struct Curvature {
  Mat<S, M> g;
  Mat<S, M> ginv;
  Tensor<S, M, 4> riem;  // all lower: R_{pqis}
  Mat<S, M> ric;
  S scal{};
};

template <int M, class Metric, class S>
Curvature<S, M> curvature(const Metric& g, const Vec<S, M>& x, const S& t) {
  Curvature<S, M> c;
  c.g = g(x, t);
  c.ginv = inverse(c.g);
  const auto [G, dG] = value_and_gradient<M>(christoffel_field<M>(g), x, t);
  // dG(q, s, p, i) = d_q Gamma^s_{pi}
  Tensor<S, M, 4> up;  // Rm_{pqi}^s stored as (p, q, i, s)
  for (int p = 0; p < M; ++p)
    for (int q = 0; q < M; ++q)
      for (int i = 0; i < M; ++i)
        for (int s = 0; s < M; ++s) {
          S v = dG(q, s, p, i) - dG(p, s, q, i);
          for (int k = 0; k < M; ++k) v += G(k, p, i) * G(s, q, k) - G(k, q, i) * G(s, p, k);
          up(p, q, i, s) = v;
        }
  for (int p = 0; p < M; ++p)
    for (int q = 0; q < M; ++q)
      for (int i = 0; i < M; ++i)
        for (int s = 0; s < M; ++s) {
          S v(0.0);
          for (int l = 0; l < M; ++l) v += up(p, q, i, l) * c.g(l, s);
          c.riem(p, q, i, s) = v;
        }
  for (int i = 0; i < M; ++i)
    for (int k = 0; k < M; ++k) {
      S v(0.0);
      for (int j = 0; j < M; ++j)
        for (int l = 0; l < M; ++l) v += c.ginv(j, l) * c.riem(i, j, k, l);
      c.ric(i, k) = v;
    }
  c.scal = S(0.0);
  for (int i = 0; i < M; ++i)
    for (int k = 0; k < M; ++k) c.scal += c.ginv(i, k) * c.ric(i, k);
  return c;
}

template <int M, class Metric>
auto riemann_field(Metric g) {
  return [g](const auto& x, const auto& t) { return curvature<M>(g, x, t).riem; };
}

template <int M, class Metric>
auto ricci_field(Metric g) {
  return [g](const auto& x, const auto& t) { return curvature<M>(g, x, t).ric; };
}

template <int M, class Metric>
auto scalar_curvature_field(Metric g) {
  return [g](const auto& x, const auto& t) {
    using S = std::remove_cvref_t<decltype(t)>;
    return make_scalar<S, M>(curvature<M>(g, x, t).scal);
  };
}

/// Covariant derivative of an all-lower tensor field; the new index is first.
template <int M, class Metric, class Field>
auto nabla(Metric g, Field F) {
  return [g, F](const auto& x, const auto& t) {
    const auto [val, grad] = value_and_gradient<M>(F, x, t);
    const auto G = christoffel<M>(g, x, t);
    using TV = std::remove_cvref_t<decltype(val)>;
    constexpr int R = TV::rank;
    constexpr std::size_t n = TV::count;
    auto out = grad;
    if constexpr (R > 0) {
      for (std::size_t f = 0; f < n; ++f) {
        const auto idx = TV::unflat(f);
        std::size_t stride = n;
        for (int a = 0; a < R; ++a) {
          stride /= M;
          for (int p = 0; p < M; ++p)
            for (int k = 0; k < M; ++k) {
              const std::size_t g2 = f + (static_cast<std::size_t>(k) - static_cast<std::size_t>(idx[a])) * stride;
              out.c[p * n + f] -= G(k, p, idx[a]) * val.c[g2];
            }
        }
      }
    }
    return out;
  };
}

/// Rough Laplacian g^{pq} nabla_p nabla_q F.
template <int M, class Metric, class Field>
auto laplacian(Metric g, Field F) {
  auto second = nabla<M>(g, nabla<M>(g, F));
  return [g, second](const auto& x, const auto& t) {
    const auto hh = second(x, t);
    const auto gi = inverse(g(x, t));
    using TH = std::remove_cvref_t<decltype(hh)>;
    using S = typename TH::scalar_type;
    constexpr int R = TH::rank - 2;
    constexpr std::size_t n = int_pow(M, R);
    Tensor<S, M, R> out;
    for (std::size_t f = 0; f < n; ++f) {
      S v(0.0);
      for (int p = 0; p < M; ++p)
        for (int q = 0; q < M; ++q) v += gi(p, q) * hh.c[(p * M + q) * n + f];
      out.c[f] = v;
    }
    return out;
  };
}

/// Wraps a scalar-valued callable s(x, t) as a rank-0 field.
template <int M, class Fn>
auto scalar_field(Fn fn) {
  return [fn](const auto& x, const auto& t) {
    using S = std::remove_cvref_t<decltype(t)>;
    return make_scalar<S, M>(fn(x, t));
  };
}

}  // namespace flowlab::tensorlab
