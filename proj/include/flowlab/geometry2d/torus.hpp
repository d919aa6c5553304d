#pragma once

// Conformal metrics g = exp(2 phi) (dx^2 + dy^2) sampled on a periodic grid
// over [0, L_x) x [0, L_y), with the stencils used by the flows. Grids are
// stored row-major with x fastest: index = j * n_x + i.

#include <cmath>
#include <string>
#include <vector>

#include "flowlab/error.hpp"
#include "flowlab/geometry2d/jet.hpp"

namespace flowlab::geometry2d {

/// Shape of a periodic grid.
struct GridShape {
  int nx = 0;
  int ny = 0;
  double Lx = 2.0 * M_PI;
  double Ly = 2.0 * M_PI;

  double hx() const { return Lx / nx; }
  double hy() const { return Ly / ny; }
  std::size_t size() const { return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny); }
  double x(int i) const { return i * hx(); }
  double y(int j) const { return j * hy(); }

  std::size_t index(int i, int j) const {
    i %= nx;
    j %= ny;
    if (i < 0) i += nx;
    if (j < 0) j += ny;
    return static_cast<std::size_t>(j) * nx + i;
  }

  friend bool operator==(const GridShape& a, const GridShape& b) {
    return a.nx == b.nx && a.ny == b.ny && a.Lx == b.Lx && a.Ly == b.Ly;
  }

  void validate() const {
    if (nx < 16 || ny < 16 || nx % 2 != 0 || ny % 2 != 0)
      throw Error(ErrorKind::Validation, "grid sizes must be even and at least 16, got " + std::to_string(nx) +
                                             " x " + std::to_string(ny));
    if (!(Lx > 0.0) || !(Ly > 0.0) || !std::isfinite(Lx) || !std::isfinite(Ly))
      throw Error(ErrorKind::Validation, "period lengths must be positive");
  }
};

using GridValues = std::vector<double>;

/// Samples fn(x, y) at the grid nodes.
template <class Fn>
GridValues sample_grid(const GridShape& s, const Fn& fn) {
  GridValues v(s.size());
  for (int j = 0; j < s.ny; ++j)
    for (int i = 0; i < s.nx; ++i) v[s.index(i, j)] = fn(s.x(i), s.y(j));
  return v;
}

struct ConformalTorus {
  GridShape shape;
  GridValues phi;
  double t = 0.0;

  ConformalTorus() = default;
  ConformalTorus(GridShape s, GridValues values, double time = 0.0)
      : shape(s), phi(std::move(values)), t(time) {
    validate();
  }

  template <class Fn>
  static ConformalTorus from_function(GridShape s, const Fn& fn, double time = 0.0) {
    s.validate();
    return ConformalTorus(s, sample_grid(s, fn), time);
  }

  void validate() const {
    shape.validate();
    if (phi.size() != shape.size()) throw Error(ErrorKind::GridMismatch, "phi has the wrong number of values");
    for (double v : phi)
      if (!std::isfinite(v)) throw Error(ErrorKind::Validation, "phi must be finite");
  }

  double operator()(int i, int j) const { return phi[shape.index(i, j)]; }

  double min_phi() const {
    double m = phi.front();
    for (double v : phi) m = std::min(m, v);
    return m;
  }
  double max_abs_phi() const {
    double m = 0.0;
    for (double v : phi) m = std::max(m, std::abs(v));
    return m;
  }
};

// --- stencils -------------------------------------------------------------

/// Flat 5-point Laplacian, second order.
inline double laplacian0_2(const GridShape& s, const GridValues& w, int i, int j) {
  const double c = w[s.index(i, j)];
  const double hx2 = s.hx() * s.hx();
  const double hy2 = s.hy() * s.hy();
  return (w[s.index(i + 1, j)] - 2.0 * c + w[s.index(i - 1, j)]) / hx2 +
         (w[s.index(i, j + 1)] - 2.0 * c + w[s.index(i, j - 1)]) / hy2;
}

/// Fourth-order central derivatives of grid data.
struct Stencil4 {
  const GridShape& s;
  const GridValues& w;

  double at(int i, int j) const { return w[s.index(i, j)]; }

  double dx(int i, int j) const {
    return (-at(i + 2, j) + 8.0 * at(i + 1, j) - 8.0 * at(i - 1, j) + at(i - 2, j)) / (12.0 * s.hx());
  }
  double dy(int i, int j) const {
    return (-at(i, j + 2) + 8.0 * at(i, j + 1) - 8.0 * at(i, j - 1) + at(i, j - 2)) / (12.0 * s.hy());
  }
  double dxx(int i, int j) const {
    return (-at(i + 2, j) + 16.0 * at(i + 1, j) - 30.0 * at(i, j) + 16.0 * at(i - 1, j) - at(i - 2, j)) /
           (12.0 * s.hx() * s.hx());
  }
  double dyy(int i, int j) const {
    return (-at(i, j + 2) + 16.0 * at(i, j + 1) - 30.0 * at(i, j) + 16.0 * at(i, j - 1) - at(i, j - 2)) /
           (12.0 * s.hy() * s.hy());
  }
  double dxy(int i, int j) const {
    auto dxrow = [&](int jj) {
      return (-at(i + 2, jj) + 8.0 * at(i + 1, jj) - 8.0 * at(i - 1, jj) + at(i - 2, jj)) / (12.0 * s.hx());
    };
    return (-dxrow(j + 2) + 8.0 * dxrow(j + 1) - 8.0 * dxrow(j - 1) + dxrow(j - 2)) / (12.0 * s.hy());
  }
  Jet2 jet(int i, int j) const { return {at(i, j), dx(i, j), dy(i, j), dxx(i, j), dxy(i, j), dyy(i, j)}; }
};

/// R at a grid node, second order: -2 exp(-2 phi) Laplacian_0 phi.
inline double conformal_scalar_curvature(const ConformalTorus& m, int i, int j) {
  return -2.0 * std::exp(-2.0 * m(i, j)) * laplacian0_2(m.shape, m.phi, i, j);
}

inline GridValues conformal_scalar_curvature(const ConformalTorus& m) {
  GridValues r(m.shape.size());
  for (int j = 0; j < m.shape.ny; ++j)
    for (int i = 0; i < m.shape.nx; ++i) r[m.shape.index(i, j)] = conformal_scalar_curvature(m, i, j);
  return r;
}

/// R of g = exp(2 phi) delta for a closed-form phi(x, t), exact.
template <class Phi>
double conformal_scalar_curvature(const Phi& phi, const Point& p, double t) {
  return scalar_curvature(jet_of(phi, p, t));
}

/// Laplace-Beltrami exp(-2 phi) Laplacian_0 w, second order.
inline GridValues laplace_beltrami(const ConformalTorus& m, const GridValues& w) {
  if (w.size() != m.shape.size()) throw Error(ErrorKind::GridMismatch, "field and metric grids differ");
  GridValues r(w.size());
  for (int j = 0; j < m.shape.ny; ++j)
    for (int i = 0; i < m.shape.nx; ++i) {
      const std::size_t k = m.shape.index(i, j);
      r[k] = std::exp(-2.0 * m.phi[k]) * laplacian0_2(m.shape, w, i, j);
    }
  return r;
}

/// Riemannian area element sum exp(2 phi) w h_x h_y.
inline double grid_integral(const ConformalTorus& m, const GridValues& w) {
  double s = 0.0;
  for (std::size_t k = 0; k < w.size(); ++k) s += std::exp(2.0 * m.phi[k]) * w[k];
  return s * m.shape.hx() * m.shape.hy();
}

}  // namespace flowlab::geometry2d
