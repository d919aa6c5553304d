#pragma once

// Trigonometric interpolation of periodic grid data. The interpolant is the
// unique band-limited function through the samples (Nyquist modes carried as
// cosines). Rather than evaluating the full series on nested duals, a point
// query returns the Taylor polynomial of the interpolant at that point; its
// derivatives there agree with the interpolant's up to the chosen degree,
// which is all the pointwise calculus ever reads.

#include <complex>
#include <vector>

#include "flowlab/geometry2d/torus.hpp"

namespace flowlab::geometry2d {

/// Polynomial sum c_ab (x - x0)^a (y - y0)^b / (a! b!) as a generic scalar
/// callable, so it can stand in for closed-form data in tensorlab.
struct TaylorPoly2 {
  static constexpr int kMaxDegree = 8;
  Point center{};
  int degree = 0;
  // c[a][b] = d^a_x d^b_y f(center)
  std::array<std::array<double, kMaxDegree + 1>, kMaxDegree + 1> c{};

  template <class S, class T>
  S operator()(const Vec<S, 2>& x, const T& /*t*/) const {
    const S dx = x[0] - center[0];
    const S dy = x[1] - center[1];
    // Horner in y inside Horner in x.
    S out(0.0);
    for (int a = degree; a >= 0; --a) {
      S row(0.0);
      for (int b = degree - a; b >= 0; --b) row = row * dy / static_cast<double>(b + 1) + c[a][b];
      out = out * dx / static_cast<double>(a + 1) + row;
    }
    return out;
  }
};

class TrigInterpolant {
 public:
  TrigInterpolant() = default;

  /// filter_order > 0 damps mode k by exp(-36 (|k| / K)^order), K the
  /// Nyquist wavenumber; this removes round-off in the top modes before
  /// high derivatives are taken and leaves well-resolved modes untouched.
  TrigInterpolant(const GridShape& s, const GridValues& v, int filter_order = 0) : shape_(s) {
    if (v.size() != s.size()) throw Error(ErrorKind::GridMismatch, "sample count does not match grid");
    xmodes_ = modes(s.nx, s.Lx, filter_order);
    ymodes_ = modes(s.ny, s.Ly, filter_order);
    const int nx = s.nx;
    const int ny = s.ny;
    // Separable transform: along x for every row, then along y for every column.
    coef_.assign(static_cast<std::size_t>(nx) * ny, 0.0);
    std::vector<cplx> line(std::max(nx, ny)), out(std::max(nx, ny));
    for (int j = 0; j < ny; ++j) {
      for (int i = 0; i < nx; ++i) line[i] = v[s.index(i, j)];
      transform(line.data(), nx, out.data());
      for (int k = 0; k < nx; ++k) coef_[static_cast<std::size_t>(j) * nx + k] = out[k] / static_cast<double>(nx);
    }
    for (int k = 0; k < nx; ++k) {
      for (int j = 0; j < ny; ++j) line[j] = coef_[static_cast<std::size_t>(j) * nx + k];
      transform(line.data(), ny, out.data());
      for (int l = 0; l < ny; ++l) coef_[static_cast<std::size_t>(l) * nx + k] = out[l] / static_cast<double>(ny);
    }
  }

  const GridShape& shape() const { return shape_; }

  /// All derivatives d^a_x d^b_y with a + b <= degree at p.
  TaylorPoly2 taylor(const Point& p, int degree) const {
    if (degree > TaylorPoly2::kMaxDegree) throw Error(ErrorKind::Validation, "Taylor degree too large");
    TaylorPoly2 out;
    out.center = p;
    out.degree = degree;
    const int nx = shape_.nx;
    const int ny = shape_.ny;
    const auto& xs = xmodes_;
    const auto& ys = ymodes_;
    std::vector<cplx> ex(xs.size());
    std::vector<cplx> ey(ys.size());
    for (std::size_t m = 0; m < xs.size(); ++m) ex[m] = std::polar(xs[m].weight, xs[m].k * p[0]);
    for (std::size_t m = 0; m < ys.size(); ++m) ey[m] = std::polar(ys[m].weight, ys[m].k * p[1]);
    // inner[a][l] = sum_k (i kx)^a e^{i kx x} c[k, l]
    std::vector<std::vector<cplx>> inner(degree + 1, std::vector<cplx>(ny, 0.0));
    for (int l = 0; l < ny; ++l)
      for (std::size_t m = 0; m < xs.size(); ++m) {
        const cplx base = coef_[static_cast<std::size_t>(l) * nx + xs[m].index] * ex[m];
        const cplx ik(0.0, xs[m].k);
        cplx pw = 1.0;
        for (int a = 0; a <= degree; ++a) {
          inner[a][l] += base * pw;
          pw *= ik;
        }
      }
    for (int a = 0; a <= degree; ++a) {
      std::vector<cplx> acc(degree - a + 1, 0.0);
      for (std::size_t m = 0; m < ys.size(); ++m) {
        const cplx base = inner[a][ys[m].index] * ey[m];
        const cplx ik(0.0, ys[m].k);
        cplx pw = 1.0;
        for (int b = 0; b <= degree - a; ++b) {
          acc[b] += base * pw;
          pw *= ik;
        }
      }
      for (int b = 0; b <= degree - a; ++b) out.c[a][b] = acc[b].real();
    }
    return out;
  }

  double value(const Point& p) const { return taylor(p, 0).c[0][0]; }

 private:
  using cplx = std::complex<double>;

  /// out[k] = sum_i in[i] exp(-2 pi i k i / n); radix-2 when n is a power of two.
  static void transform(const cplx* in, int n, cplx* out) {
    if ((n & (n - 1)) != 0) {
      for (int k = 0; k < n; ++k) {
        cplx acc = 0.0;
        for (int i = 0; i < n; ++i) acc += in[i] * std::polar(1.0, -2.0 * M_PI * ((static_cast<long>(k) * i) % n) / n);
        out[k] = acc;
      }
      return;
    }
    int bits = 0;
    while ((1 << bits) < n) ++bits;
    for (int i = 0; i < n; ++i) {
      int r = 0;
      for (int b = 0; b < bits; ++b) r |= ((i >> b) & 1) << (bits - 1 - b);
      out[r] = in[i];
    }
    for (int len = 2; len <= n; len <<= 1) {
      for (int i = 0; i < n; i += len)
        for (int k = 0; k < len / 2; ++k) {
          const cplx w = std::polar(1.0, -2.0 * M_PI * k / len);
          const cplx a = out[i + k];
          const cplx b = out[i + k + len / 2] * w;
          out[i + k] = a + b;
          out[i + k + len / 2] = a - b;
        }
    }
  }
  struct Mode {
    int index;  // coefficient slot
    double k;   // angular wavenumber
    double weight;
  };

  // The Nyquist slot appears twice, at +K and -K with half weight each, so
  // the interpolant is real and carries that mode as a cosine.
  static std::vector<Mode> modes(int n, double L, int filter_order) {
    std::vector<Mode> out;
    const double w = 2.0 * M_PI / L;
    auto damp = [&](int i) {
      if (filter_order <= 0) return 1.0;
      const double r = std::abs(static_cast<double>(i)) / (n / 2);
      return std::exp(-36.0 * std::pow(r, filter_order));
    };
    for (int i = 0; i < n; ++i) {
      if (i == n / 2) {
        out.push_back({i, w * i, 0.5 * damp(i)});
        out.push_back({i, -w * i, 0.5 * damp(i)});
      } else {
        const int signed_i = i < n / 2 ? i : i - n;
        out.push_back({i, w * signed_i, damp(signed_i)});
      }
    }
    return out;
  }

  GridShape shape_;
  std::vector<Mode> xmodes_;
  std::vector<Mode> ymodes_;
  std::vector<cplx> coef_;  // coef_[l * nx + k]
};

}  // namespace flowlab::geometry2d
