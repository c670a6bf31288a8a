#pragma once

// Numeric validation oracles.  These never feed exact results; they only
// cross-check the exact tables at stated floating-point tolerances.
//
// massive_green_oracle solves  (m^2 - laplacian) G = delta_0  with zero
// boundary values on the square box [-B, B]^2 and returns G(0) - G(z), which
// converges to the potential kernel a(z) as m -> 0 and B -> infinity.
//
// dirichlet_box_green solves  -laplacian G = delta_w  with zero boundary on a
// rectangular strip of the upper half-plane, for the half-plane reflection
// identity check.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace latvir {

namespace detail {

// Matrix-free conjugate gradients for y = (shift) x - (1/4) sum_nbr x on an
// nx*ny grid with zero (Dirichlet) exterior.  The operator is symmetric
// positive definite for shift >= 1.
class BoxLaplaceSolver {
 public:
  BoxLaplaceSolver(int nx, int ny, double shift) : nx_(nx), ny_(ny), shift_(shift) {}

  std::vector<double> solve(const std::vector<double>& rhs, double rel_tol = 1e-12,
                            int max_iter = 200000) const {
    size_t n = rhs.size();
    std::vector<double> x(n, 0.0), r = rhs, p = rhs, ap(n);
    double rr = dot(r, r);
    double b_norm = std::sqrt(rr);
    if (b_norm == 0.0) return x;
    for (int it = 0; it < max_iter; ++it) {
      apply(p, ap);
      double alpha = rr / dot(p, ap);
      for (size_t i = 0; i < n; ++i) x[i] += alpha * p[i];
      for (size_t i = 0; i < n; ++i) r[i] -= alpha * ap[i];
      double rr_new = dot(r, r);
      if (std::sqrt(rr_new) <= rel_tol * b_norm) return x;
      double beta = rr_new / rr;
      rr = rr_new;
      for (size_t i = 0; i < n; ++i) p[i] = r[i] + beta * p[i];
    }
    throw std::runtime_error("box Laplace solve did not converge");
  }

  size_t idx(int i, int j) const {
    return static_cast<size_t>(j) * static_cast<size_t>(nx_) + static_cast<size_t>(i);
  }

 private:
  void apply(const std::vector<double>& x, std::vector<double>& y) const {
    for (int j = 0; j < ny_; ++j)
      for (int i = 0; i < nx_; ++i) {
        double nbr = 0.0;
        if (i > 0) nbr += x[idx(i - 1, j)];
        if (i + 1 < nx_) nbr += x[idx(i + 1, j)];
        if (j > 0) nbr += x[idx(i, j - 1)];
        if (j + 1 < ny_) nbr += x[idx(i, j + 1)];
        y[idx(i, j)] = shift_ * x[idx(i, j)] - 0.25 * nbr;
      }
  }

  static double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
  }

  int nx_, ny_;
  double shift_;
};

}  // namespace detail

// G_m(0) - G_m(z) on the (2*box_radius+1)^2 box; approximates a(z).
inline double massive_green_oracle(int zx, int zy, double mass, int box_radius) {
  if (mass <= 0) throw std::invalid_argument("massive oracle needs mass > 0");
  int B = box_radius;
  if (std::abs(zx) >= B || std::abs(zy) >= B)
    throw std::invalid_argument("massive oracle: point outside the box");
  int n = 2 * B + 1;
  detail::BoxLaplaceSolver solver(n, n, 1.0 + mass * mass);
  std::vector<double> rhs(static_cast<size_t>(n) * n, 0.0);
  rhs[solver.idx(B, B)] = 1.0;
  std::vector<double> g = solver.solve(rhs);
  return g[solver.idx(B, B)] - g[solver.idx(B + zx, B + zy)];
}

// Dirichlet Green's function G(z, w) of the upper half-plane strip
// x in [-half_width, half_width], y in [1, height]; boundary (including the
// row y = 0) is held at zero.  Coordinates are lattice units.
inline double dirichlet_box_green(int zx, int zy, int wx, int wy, int half_width, int height) {
  int nx = 2 * half_width + 1, ny = height;
  auto inside = [&](int x, int y) {
    return std::abs(x) <= half_width && y >= 1 && y <= height;
  };
  if (!inside(zx, zy) || !inside(wx, wy))
    throw std::invalid_argument("dirichlet box oracle: point outside the strip");
  detail::BoxLaplaceSolver solver(nx, ny, 1.0);
  std::vector<double> rhs(static_cast<size_t>(nx) * ny, 0.0);
  rhs[solver.idx(wx + half_width, wy - 1)] = 1.0;
  std::vector<double> g = solver.solve(rhs);
  return g[solver.idx(zx + half_width, zy - 1)];
}

}  // namespace latvir
