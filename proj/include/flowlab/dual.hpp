#pragma once

// Forward-mode dual numbers with an N-component gradient. Nesting
// Dual<Dual<double, M>, M> yields exact second derivatives, and so on; every
// derivative of closed-form data in the library goes through this type.

#include <array>
#include <cmath>
#include <type_traits>

namespace flowlab {

template <class T, int N>
struct Dual {
  using inner_type = T;
  static constexpr int size = N;

  T v{};
  std::array<T, N> d{};

  constexpr Dual() = default;
  constexpr Dual(double c) : v(c) {}  // NOLINT: implicit constants are the point

  static constexpr Dual make(const T& value, const std::array<T, N>& grad) {
    Dual r;
    r.v = value;
    r.d = grad;
    return r;
  }

  Dual& operator+=(const Dual& o) {
    v += o.v;
    for (int i = 0; i < N; ++i) d[i] += o.d[i];
    return *this;
  }
  Dual& operator-=(const Dual& o) {
    v -= o.v;
    for (int i = 0; i < N; ++i) d[i] -= o.d[i];
    return *this;
  }
  Dual& operator*=(const Dual& o) {
    for (int i = 0; i < N; ++i) d[i] = v * o.d[i] + d[i] * o.v;
    v *= o.v;
    return *this;
  }
  Dual& operator*=(double c) {
    v *= c;
    for (int i = 0; i < N; ++i) d[i] *= c;
    return *this;
  }
  Dual& operator+=(double c) {
    v += c;
    return *this;
  }
  Dual& operator-=(double c) {
    v -= c;
    return *this;
  }
  Dual& operator/=(const Dual& o) { return *this = *this / o; }
  Dual& operator/=(double c) { return *this *= (1.0 / c); }

  friend Dual operator-(const Dual& a) {
    Dual r;
    r.v = -a.v;
    for (int i = 0; i < N; ++i) r.d[i] = -a.d[i];
    return r;
  }
  friend Dual operator+(Dual a, const Dual& b) { return a += b; }
  friend Dual operator-(Dual a, const Dual& b) { return a -= b; }
  friend Dual operator*(Dual a, const Dual& b) { return a *= b; }
  friend Dual operator/(const Dual& a, const Dual& b) {
    Dual r;
    r.v = a.v / b.v;
    for (int i = 0; i < N; ++i) r.d[i] = (a.d[i] - r.v * b.d[i]) / b.v;
    return r;
  }

  friend Dual operator+(Dual a, double c) { return a += c; }
  friend Dual operator+(double c, Dual a) { return a += c; }
  friend Dual operator-(Dual a, double c) { return a -= c; }
  friend Dual operator-(double c, const Dual& a) { return (-a) += c; }
  friend Dual operator*(Dual a, double c) { return a *= c; }
  friend Dual operator*(double c, Dual a) { return a *= c; }
  friend Dual operator/(Dual a, double c) { return a /= c; }
  friend Dual operator/(double c, const Dual& a) { return Dual(c) / a; }

  friend Dual sin(const Dual& a) {
    using std::cos;
    using std::sin;
    return chain(a, sin(a.v), cos(a.v));
  }
  friend Dual cos(const Dual& a) {
    using std::cos;
    using std::sin;
    return chain(a, cos(a.v), -sin(a.v));
  }
  friend Dual exp(const Dual& a) {
    using std::exp;
    T e = exp(a.v);
    return chain(a, e, e);
  }
  friend Dual log(const Dual& a) {
    using std::log;
    return chain(a, log(a.v), 1.0 / a.v);
  }
  friend Dual sqrt(const Dual& a) {
    using std::sqrt;
    T s = sqrt(a.v);
    return chain(a, s, 0.5 / s);
  }

 private:
  static Dual chain(const Dual& a, const T& value, const T& slope) {
    Dual r;
    r.v = value;
    for (int i = 0; i < N; ++i) r.d[i] = slope * a.d[i];
    return r;
  }
};

template <class T>
struct is_dual : std::false_type {};
template <class T, int N>
struct is_dual<Dual<T, N>> : std::true_type {};
template <class T>
inline constexpr bool is_dual_v = is_dual<T>::value;

/// Innermost double value of a (possibly nested) dual.
inline double value_of(double x) { return x; }
template <class T, int N>
double value_of(const Dual<T, N>& x) {
  return value_of(x.v);
}

/// Embeds a value of an inner scalar type as a constant of the outer type.
template <class Target, class Source>
Target lift(const Source& s) {
  if constexpr (std::is_same_v<Target, Source>) {
    return s;
  } else if constexpr (std::is_same_v<Source, double>) {
    return Target(s);
  } else {
    static_assert(is_dual_v<Target>, "lift: target is not a dual over the source type");
    Target r;
    r.v = lift<typename Target::inner_type>(s);
    return r;
  }
}

/// Seeds x as the independent variables of a Dual<S, N>.
template <class S, std::size_t N>
std::array<Dual<S, static_cast<int>(N)>, N> seed(const std::array<S, N>& x) {
  constexpr int n = static_cast<int>(N);
  std::array<Dual<S, n>, N> r{};
  for (int i = 0; i < n; ++i) {
    r[i].v = x[i];
    r[i].d[i] = S(1.0);
  }
  return r;
}

template <class Target, class S, std::size_t N>
std::array<Target, N> lift_point(const std::array<S, N>& x) {
  std::array<Target, N> r{};
  for (std::size_t i = 0; i < N; ++i) r[i] = lift<Target>(x[i]);
  return r;
}

/// Single time variable seeded for d/dt.
template <class S>
Dual<S, 1> seed_scalar(const S& t) {
  Dual<S, 1> r;
  r.v = t;
  r.d[0] = S(1.0);
  return r;
}

template <class S>
S ipow(const S& x, int p) {
  S r(1.0);
  for (int i = 0; i < p; ++i) r = r * x;
  return r;
}

}  // namespace flowlab
