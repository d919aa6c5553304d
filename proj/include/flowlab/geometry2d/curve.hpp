#pragma once

// Closed polylines in a conformal chart g = exp(2 phi) delta.
//
// Per vertex, the chart curve is replaced by the circle through the vertex
// and its two neighbours: its curvature vector (Menger curvature) and its
// tangent at the vertex are exact on circles and second order in general.
// Edges are measured along the same circular arcs, with exp(phi) integrated
// by Simpson's rule, so lengths of chart circles are exact when phi is
// constant along them.
//
// Sign convention: nu = exp(-phi) n0 with n0 the left normal of the chart
// tangent, and k = exp(-phi) (kappa0 . n0 - d_{n0} phi). The product k nu does
// not depend on orientation and moving with velocity k nu shrinks convex
// curves in the flat metric.

#include <cmath>
#include <string>
#include <vector>

#include "flowlab/error.hpp"
#include "flowlab/geometry2d/jet.hpp"

namespace flowlab::geometry2d {

struct CurveState {
  std::vector<Point> vertices;
  double t = 0.0;
  // Added to vertex i + n relative to vertex i; nonzero for loops that wrap
  // around a torus.
  Point period_shift{0.0, 0.0};
  double eps_edge = 0.0;

  CurveState() = default;
  CurveState(std::vector<Point> v, double time, Point shift = {0.0, 0.0}, double eps = -1.0)
      : vertices(std::move(v)), t(time), period_shift(shift) {
    if (vertices.size() < 3) throw Error(ErrorKind::Validation, "a closed curve needs at least 3 vertices");
    for (const auto& p : vertices)
      if (!std::isfinite(p[0]) || !std::isfinite(p[1])) throw Error(ErrorKind::Validation, "vertex is not finite");
    eps_edge = eps > 0.0 ? eps : 1e-3 * mean_edge();
    if (!(eps_edge > 0.0)) throw Error(ErrorKind::DegenerateCurve, "all vertices coincide");
  }

  int size() const { return static_cast<int>(vertices.size()); }

  /// Cyclic access with the period shift applied.
  Point vertex(int i) const {
    const int n = size();
    int wraps = 0;
    while (i < 0) {
      i += n;
      --wraps;
    }
    while (i >= n) {
      i -= n;
      ++wraps;
    }
    return {vertices[i][0] + wraps * period_shift[0], vertices[i][1] + wraps * period_shift[1]};
  }

  double chart_edge(int i) const {
    const Point a = vertex(i);
    const Point b = vertex(i + 1);
    return std::hypot(b[0] - a[0], b[1] - a[1]);
  }
  double mean_edge() const {
    double s = 0.0;
    for (int i = 0; i < size(); ++i) s += chart_edge(i);
    return s / size();
  }
  double min_edge() const {
    double m = chart_edge(0);
    for (int i = 1; i < size(); ++i) m = std::min(m, chart_edge(i));
    return m;
  }

  void check_edges() const {
    for (int i = 0; i < size(); ++i)
      if (!(chart_edge(i) >= eps_edge))
        throw Error(ErrorKind::DegenerateCurve, "edge " + std::to_string(i) + " is shorter than eps_edge");
  }

  /// Counter-clockwise circle of chart radius r.
  static CurveState circle(Point center, double r, int n, double time = 0.0) {
    if (!(r > 0.0)) throw Error(ErrorKind::Validation, "circle radius must be positive");
    std::vector<Point> v(n);
    for (int i = 0; i < n; ++i) {
      const double a = 2.0 * M_PI * i / n;
      v[i] = {center[0] + r * std::cos(a), center[1] + r * std::sin(a)};
    }
    return CurveState(std::move(v), time);
  }

  /// Latitude at polar angle theta in the stereographic sphere chart.
  static CurveState latitude(double theta, int n, double time = 0.0) {
    if (!(theta > 0.0 && theta < M_PI)) throw Error(ErrorKind::Validation, "latitude angle must lie in (0, pi)");
    return circle({0.0, 0.0}, std::tan(0.5 * theta), n, time);
  }

  /// Closed straight loop y = y0 wrapping once around a torus of period Lx.
  static CurveState straight_loop(double y0, double Lx, int n, double time = 0.0) {
    std::vector<Point> v(n);
    for (int i = 0; i < n; ++i) v[i] = {Lx * i / n, y0};
    return CurveState(std::move(v), time, {Lx, 0.0});
  }
};

struct CurveGeometry {
  std::vector<double> k;        // geodesic curvature
  std::vector<Point> nu;        // g-unit normal, chart components
  std::vector<Point> tangent;   // g-unit tangent, chart components
  std::vector<Point> velocity;  // k nu, chart components
  std::vector<double> ds;       // trapezoid weights: half of the two adjacent edges
  std::vector<double> edge;     // g-length of edge i -> i + 1
  std::vector<Jet2> phi;        // jet of phi at each vertex
  double length = 0.0;
};

namespace detail {

struct VertexCircle {
  Point kappa{};  // Euclidean curvature vector of the chart curve
  Point tangent{};
  double signed_k = 0.0;
};

inline VertexCircle vertex_circle(const Point& a, const Point& b, const Point& c) {
  const Point u{a[0] - b[0], a[1] - b[1]};
  const Point w{c[0] - b[0], c[1] - b[1]};
  const double lu = std::hypot(u[0], u[1]);
  const double lw = std::hypot(w[0], w[1]);
  const double uu = lu * lu;
  const double ww = lw * lw;
  const double cross = u[0] * w[1] - u[1] * w[0];
  const Point p{uu * w[1] - ww * u[1], ww * u[0] - uu * w[0]};
  const double pp = p[0] * p[0] + p[1] * p[1];
  VertexCircle out;
  out.kappa = {2.0 * cross * p[0] / pp, 2.0 * cross * p[1] / pp};
  Point tg{w[0] * lu / lw - u[0] * lw / lu, w[1] * lu / lw - u[1] * lw / lu};
  const double lt = std::hypot(tg[0], tg[1]);
  out.tangent = {tg[0] / lt, tg[1] / lt};
  out.signed_k = -out.kappa[0] * out.tangent[1] + out.kappa[1] * out.tangent[0];
  return out;
}

}  // namespace detail

/// Geometry of the curve in the metric exp(2 phi) delta at the curve's time.
template <class PhiJet>
CurveGeometry geodesic_curvature(const CurveState& c, const PhiJet& phi) {
  c.check_edges();
  const int n = c.size();
  CurveGeometry g;
  g.k.resize(n);
  g.nu.resize(n);
  g.tangent.resize(n);
  g.velocity.resize(n);
  g.ds.resize(n);
  g.edge.resize(n);
  g.phi.resize(n);
  std::vector<double> signed_k(n);
  for (int i = 0; i < n; ++i) {
    const Point b = c.vertex(i);
    const auto vc = detail::vertex_circle(c.vertex(i - 1), b, c.vertex(i + 1));
    const Jet2 ph = phi(b, c.t);
    const double e = std::exp(-ph.v);
    const Point n0{-vc.tangent[1], vc.tangent[0]};
    const double k = e * (vc.signed_k - (ph.dx * n0[0] + ph.dy * n0[1]));
    g.phi[i] = ph;
    g.k[i] = k;
    g.nu[i] = {e * n0[0], e * n0[1]};
    g.tangent[i] = {e * vc.tangent[0], e * vc.tangent[1]};
    g.velocity[i] = {k * g.nu[i][0], k * g.nu[i][1]};
    signed_k[i] = vc.signed_k;
  }
  for (int i = 0; i < n; ++i) {
    const Point a = c.vertex(i);
    const Point b = c.vertex(i + 1);
    const double chord = std::hypot(b[0] - a[0], b[1] - a[1]);
    const double kbar = 0.5 * (signed_k[i] + signed_k[(i + 1) % n]);
    double arc = chord;
    Point mid{0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])};
    const double z = 0.5 * chord * kbar;
    if (std::abs(z) > 1e-12 && std::abs(z) < 1.0) {
      const double half = std::asin(std::abs(z));
      arc = 2.0 * half / std::abs(kbar);
      // The arc bulges to the right of the chord when the curve turns left.
      const double sag = (1.0 - std::cos(half)) / kbar;
      const Point left{-(b[1] - a[1]) / chord, (b[0] - a[0]) / chord};
      mid = {mid[0] - sag * left[0], mid[1] - sag * left[1]};
    }
    const double em = std::exp(phi(mid, c.t).v);
    g.edge[i] = arc * (std::exp(g.phi[i].v) + 4.0 * em + std::exp(g.phi[(i + 1) % n].v)) / 6.0;
    g.length += g.edge[i];
  }
  for (int i = 0; i < n; ++i) g.ds[i] = 0.5 * (g.edge[i] + g.edge[(i + n - 1) % n]);
  return g;
}

/// Cyclic trapezoidal quadrature of per-vertex samples.
inline double curve_integral(const CurveGeometry& g, const std::vector<double>& w) {
  if (w.size() != g.ds.size()) throw Error(ErrorKind::GridMismatch, "need one sample per vertex");
  double s = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) s += w[i] * g.ds[i];
  return s;
}

}  // namespace flowlab::geometry2d
