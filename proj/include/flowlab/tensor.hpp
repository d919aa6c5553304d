#pragma once

// Small dense tensors of fixed dimension and rank. All indices are stored in
// lower (covariant) position unless a function says otherwise; raising is
// done explicitly with the inverse metric.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <type_traits>

#include "flowlab/dual.hpp"
#include "flowlab/error.hpp"

namespace flowlab {

constexpr std::size_t int_pow(std::size_t base, int exp) {
  std::size_t r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

template <class S, int M>
using Vec = std::array<S, M>;

template <class S, int M, int R>
struct Tensor {
  static constexpr int dim = M;
  static constexpr int rank = R;
  static constexpr std::size_t count = int_pow(M, R);
  using scalar_type = S;

  std::array<S, count> c{};

  template <class... I>
  S& operator()(I... idx) {
    static_assert(sizeof...(I) == R, "wrong number of indices");
    return c[flat(idx...)];
  }
  template <class... I>
  const S& operator()(I... idx) const {
    static_assert(sizeof...(I) == R, "wrong number of indices");
    return c[flat(idx...)];
  }

  template <class... I>
  static constexpr std::size_t flat(I... idx) {
    std::size_t f = 0;
    ((f = f * M + static_cast<std::size_t>(idx)), ...);
    return f;
  }

  /// Index tuple of a flat offset, most significant index first.
  static std::array<int, (R > 0 ? R : 1)> unflat(std::size_t f) {
    std::array<int, (R > 0 ? R : 1)> idx{};
    for (int a = R - 1; a >= 0; --a) {
      idx[a] = static_cast<int>(f % M);
      f /= M;
    }
    return idx;
  }

  Tensor& operator+=(const Tensor& o) {
    for (std::size_t i = 0; i < count; ++i) c[i] += o.c[i];
    return *this;
  }
  Tensor& operator-=(const Tensor& o) {
    for (std::size_t i = 0; i < count; ++i) c[i] -= o.c[i];
    return *this;
  }
  Tensor& operator*=(const S& s) {
    for (auto& x : c) x = x * s;
    return *this;
  }
  friend Tensor operator+(Tensor a, const Tensor& b) { return a += b; }
  friend Tensor operator-(Tensor a, const Tensor& b) { return a -= b; }
  friend Tensor operator*(Tensor a, const S& s) { return a *= s; }
  friend Tensor operator*(const S& s, Tensor a) { return a *= s; }
};

template <class S, int M>
using Scalar = Tensor<S, M, 0>;
template <class S, int M>
using Mat = Tensor<S, M, 2>;

template <class T>
struct tensor_traits;
template <class S, int M, int R>
struct tensor_traits<Tensor<S, M, R>> {
  using scalar = S;
  static constexpr int dim = M;
  static constexpr int rank = R;
};

template <class S, int M>
Scalar<S, M> make_scalar(const S& s) {
  Scalar<S, M> r;
  r.c[0] = s;
  return r;
}

template <class S, int M>
Mat<S, M> identity() {
  Mat<S, M> r;
  for (int i = 0; i < M; ++i) r(i, i) = S(1.0);
  return r;
}

template <class S, int M, int R>
Tensor<double, M, R> values_of(const Tensor<S, M, R>& t) {
  Tensor<double, M, R> r;
  for (std::size_t i = 0; i < t.count; ++i) r.c[i] = value_of(t.c[i]);
  return r;
}

template <int M, int R>
double max_abs(const Tensor<double, M, R>& t) {
  double m = 0.0;
  for (double x : t.c) m = std::max(m, std::abs(x));
  return m;
}

template <class S, int M>
S determinant(const Mat<S, M>& a) {
  static_assert(M == 2 || M == 3, "determinant implemented for dims 2 and 3");
  if constexpr (M == 2) {
    return a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
  } else {
    return a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1)) -
           a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0)) +
           a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0));
  }
}

template <class S, int M>
Mat<S, M> inverse(const Mat<S, M>& a) {
  S det = determinant(a);
  if (std::abs(value_of(det)) < 1e-300) {
    throw Error(ErrorKind::SingularMetric, "metric determinant vanishes");
  }
  S inv = S(1.0) / det;
  Mat<S, M> r;
  if constexpr (M == 2) {
    r(0, 0) = a(1, 1) * inv;
    r(1, 1) = a(0, 0) * inv;
    r(0, 1) = -a(0, 1) * inv;
    r(1, 0) = -a(1, 0) * inv;
  } else {
    r(0, 0) = (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1)) * inv;
    r(0, 1) = (a(0, 2) * a(2, 1) - a(0, 1) * a(2, 2)) * inv;
    r(0, 2) = (a(0, 1) * a(1, 2) - a(0, 2) * a(1, 1)) * inv;
    r(1, 0) = (a(1, 2) * a(2, 0) - a(1, 0) * a(2, 2)) * inv;
    r(1, 1) = (a(0, 0) * a(2, 2) - a(0, 2) * a(2, 0)) * inv;
    r(1, 2) = (a(0, 2) * a(1, 0) - a(0, 0) * a(1, 2)) * inv;
    r(2, 0) = (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0)) * inv;
    r(2, 1) = (a(0, 1) * a(2, 0) - a(0, 0) * a(2, 1)) * inv;
    r(2, 2) = (a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0)) * inv;
  }
  return r;
}

/// Smallest eigenvalue of a symmetric 2x2 or 3x3 matrix.
template <int M>
double min_eigenvalue(const Mat<double, M>& a) {
  if constexpr (M == 2) {
    double m = 0.5 * (a(0, 0) + a(1, 1));
    double d = 0.5 * (a(0, 0) - a(1, 1));
    return m - std::sqrt(d * d + a(0, 1) * a(0, 1));
  } else {
    // Trigonometric solution of the characteristic cubic.
    double p1 = a(0, 1) * a(0, 1) + a(0, 2) * a(0, 2) + a(1, 2) * a(1, 2);
    double q = (a(0, 0) + a(1, 1) + a(2, 2)) / 3.0;
    if (p1 == 0.0) return std::min({a(0, 0), a(1, 1), a(2, 2)});
    double p2 = (a(0, 0) - q) * (a(0, 0) - q) + (a(1, 1) - q) * (a(1, 1) - q) +
                (a(2, 2) - q) * (a(2, 2) - q) + 2.0 * p1;
    double p = std::sqrt(p2 / 6.0);
    Mat<double, 3> b = a;
    for (int i = 0; i < 3; ++i) b(i, i) -= q;
    b *= 1.0 / p;
    double r = std::clamp(determinant(b) / 2.0, -1.0, 1.0);
    double phi = std::acos(r) / 3.0;
    return q + 2.0 * p * std::cos(phi + 2.0 * M_PI / 3.0);
  }
}

}  // namespace flowlab
