#pragma once

// Off-grid jets of periodic grid data: fourth-order derivative grids,
// evaluated anywhere by 4x4 cubic Lagrange interpolation.

#include <array>
#include <cmath>

#include "flowlab/geometry2d/torus.hpp"

namespace flowlab::geometry2d {

class GridSampler {
 public:
  GridSampler() = default;
  GridSampler(const GridShape& s, const GridValues& w) : shape_(s) {
    if (w.size() != s.size()) throw Error(ErrorKind::GridMismatch, "sample count does not match grid");
    for (auto& g : grids_) g.resize(w.size());
    const Stencil4 st{s, w};
    for (int j = 0; j < s.ny; ++j)
      for (int i = 0; i < s.nx; ++i) {
        const std::size_t k = s.index(i, j);
        const Jet2 jt = st.jet(i, j);
        grids_[0][k] = jt.v;
        grids_[1][k] = jt.dx;
        grids_[2][k] = jt.dy;
        grids_[3][k] = jt.dxx;
        grids_[4][k] = jt.dxy;
        grids_[5][k] = jt.dyy;
      }
  }

  const GridShape& shape() const { return shape_; }

  Jet2 jet(const Point& p) const {
    const double fx = p[0] / shape_.hx();
    const double fy = p[1] / shape_.hy();
    const int i0 = static_cast<int>(std::floor(fx));
    const int j0 = static_cast<int>(std::floor(fy));
    const auto wx = weights(fx - i0);
    const auto wy = weights(fy - j0);
    std::array<double, 6> acc{};
    for (int b = 0; b < 4; ++b)
      for (int a = 0; a < 4; ++a) {
        const double w = wx[a] * wy[b];
        const std::size_t k = shape_.index(i0 - 1 + a, j0 - 1 + b);
        for (int c = 0; c < 6; ++c) acc[c] += w * grids_[c][k];
      }
    return {acc[0], acc[1], acc[2], acc[3], acc[4], acc[5]};
  }

  double value(const Point& p) const { return jet(p).v; }

 private:
  // Lagrange weights for nodes -1, 0, 1, 2 at offset s in [0, 1).
  static std::array<double, 4> weights(double s) {
    return {-s * (s - 1.0) * (s - 2.0) / 6.0, (s + 1.0) * (s - 1.0) * (s - 2.0) / 2.0,
            -(s + 1.0) * s * (s - 2.0) / 2.0, (s + 1.0) * s * (s - 1.0) / 6.0};
  }

  GridShape shape_;
  std::array<GridValues, 6> grids_;
};

}  // namespace flowlab::geometry2d
