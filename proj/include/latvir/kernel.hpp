#pragma once

// Exact potential kernel of simple random walk on Z^2 and the discrete Cauchy
// kernel K = [dee a].
//
// The potential kernel a : Z^2 -> Q + Q/pi is pinned by a(0) = 0 and
// characterized by [laplacian a] = delta_0 together with logarithmic growth.
// It is computed by propagation over the fundamental octant 0 <= y <= x:
//
//   a(0,0) = 0,  a(1,0) = 1,  a(n,n) = (4/pi) * sum_{j=1..n} 1/(2j-1),
//   a(x+1,y) from the Laplacian relation at (x,y) using dihedral symmetry.
//
// Every produced value is re-verified against the Laplacian identity by the
// test suite, and the diagonal seed is cross-validated against a numeric
// massive Green's function oracle.

#include <fstream>
#include <mutex>
#include <sstream>
#include <string>
#include <vector>

#include "lattice.hpp"
#include "scalar.hpp"

namespace latvir {

class PotentialKernel {
 public:
  PotentialKernel() { ensure_radius(2); }

  // a(x,y) for a vertex site of Z^2 (arguments in lattice units).
  PiScalar at(int x, int y) const {
    x = std::abs(x);
    y = std::abs(y);
    if (y > x) std::swap(x, y);
    ensure_radius(x);
    std::lock_guard<std::mutex> lock(mutex_);
    return octant_[static_cast<size_t>(x)][static_cast<size_t>(y)];
  }

  PiScalar at(Site z) const {
    if (z.cls() != SiteClass::Vertex)
      throw std::domain_error("potential kernel defined on vertices only, got " + z.str());
    return at(z.qx / 4, z.qy / 4);
  }

  // Extension to the diamond graph: a on Z^2, zero on the dual.
  PiScalar diamond(Site z) const {
    SiteClass c = z.cls();
    if (c == SiteClass::Dual) return PiScalar(0);
    if (c == SiteClass::Vertex) return at(z);
    throw std::domain_error("diamond extension defined on vertices and duals, got " + z.str());
  }

  LatticeFunction diamond_function() const {
    return LatticeFunction(DomainMask::diamond(), [this](Site z) { return diamond(z); });
  }

  // Discrete Cauchy kernel K = [dee a] on the medial lattice; purely real on
  // horizontal medials, purely imaginary on vertical ones.
  PiScalar cauchy(Site z) const {
    SiteClass c = z.cls();
    if (c == SiteClass::MedialH)
      return (at(z + Site{2, 0}) - at(z - Site{2, 0})) / PiScalar(2);
    if (c == SiteClass::MedialV)
      return (at(z + Site{0, 2}) - at(z - Site{0, 2})) * PiScalar(GaussianRational(
                 Rational(0), Rational(-1, 2)));
    throw std::domain_error("Cauchy kernel defined on medial sites only, got " + z.str());
  }

  LatticeFunction cauchy_function() const {
    return LatticeFunction(DomainMask::medial(), [this](Site z) { return cauchy(z); });
  }

  int radius() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return static_cast<int>(octant_.size()) - 1;
  }

  void ensure_radius(int r) const {
    std::lock_guard<std::mutex> lock(mutex_);
    extend_locked(r);
  }

  // -------------------------------------------------------------------------
  // Cache persistence: line-oriented text, bit-exact round-trip.
  //   header   POTKERNEL v1 radius=R
  //   lines    x y p1/q1 p2/q2     meaning a(x,y) = p1/q1 + (p2/q2)/pi
  // -------------------------------------------------------------------------

  void save(const std::string& path) const {
    std::lock_guard<std::mutex> lock(mutex_);
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open kernel cache for writing: " + path);
    int r = static_cast<int>(octant_.size()) - 1;
    out << "POTKERNEL v1 radius=" << r << "\n";
    for (int x = 0; x <= r; ++x)
      for (int y = 0; y <= x; ++y) {
        const PiScalar& v = octant_[static_cast<size_t>(x)][static_cast<size_t>(y)];
        out << x << " " << y << " " << to_string(v.coefficient(0).re) << " "
            << to_string(v.coefficient(-2).re) << "\n";
      }
    if (!out) throw std::runtime_error("write failure on kernel cache: " + path);
  }

  void load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open kernel cache: " + path);
    std::string header;
    std::getline(in, header);
    int r = -1;
    if (std::sscanf(header.c_str(), "POTKERNEL v1 radius=%d", &r) != 1 || r < 1)
      throw std::runtime_error("kernel cache has unsupported header: \"" + header + "\"");
    std::vector<std::vector<PiScalar>> table(static_cast<size_t>(r) + 1);
    for (int x = 0; x <= r; ++x) table[static_cast<size_t>(x)].resize(static_cast<size_t>(x) + 1);
    std::string line;
    size_t seen = 0;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      std::istringstream ls(line);
      int x, y;
      std::string p1, p2;
      if (!(ls >> x >> y >> p1 >> p2) || x < 0 || x > r || y < 0 || y > x)
        throw std::runtime_error("corrupt kernel cache line: \"" + line + "\"");
      table[static_cast<size_t>(x)][static_cast<size_t>(y)] =
          PiScalar(rational_from_string(p1)) +
          PiScalar::pi_power(-2, GaussianRational(rational_from_string(p2)));
      ++seen;
    }
    size_t expected = static_cast<size_t>(r + 1) * static_cast<size_t>(r + 2) / 2;
    if (seen != expected)
      throw std::runtime_error("truncated kernel cache: expected " + std::to_string(expected) +
                               " entries, found " + std::to_string(seen));
    if (!(table[0][0] == PiScalar(0)) || !(table[1][0] == PiScalar(1)))
      throw std::runtime_error("kernel cache fails pinning normalization");
    std::lock_guard<std::mutex> lock(mutex_);
    if (table.size() > octant_.size()) octant_ = std::move(table);
  }

 private:
  // Fill columns up to x = r.  Caller holds mutex_.
  void extend_locked(int r) const {
    if (r < 1) r = 1;
    if (static_cast<int>(octant_.size()) > r) return;
    if (octant_.empty()) {
      octant_.push_back({PiScalar(0)});                                   // a(0,0)
      octant_.push_back({PiScalar(1), PiScalar::pi_power(-2, 4)});        // a(1,0), a(1,1)
    }
    for (int c = static_cast<int>(octant_.size()); c <= r; ++c) {
      auto& prev = octant_[static_cast<size_t>(c) - 1];
      auto& prev2 = octant_[static_cast<size_t>(c) - 2];
      std::vector<PiScalar> col(static_cast<size_t>(c) + 1);
      // Laplacian relation at (c-1, y); neighbours below the octant are
      // recovered by the symmetry a(x,-y) = a(x,y), a(x,y) = a(y,x).
      col[0] = PiScalar(4) * prev[0] - prev2[0] - PiScalar(2) * prev[1];
      for (int y = 1; y + 1 <= c - 1; ++y)
        col[static_cast<size_t>(y)] = PiScalar(4) * prev[static_cast<size_t>(y)] -
                                      prev2[static_cast<size_t>(y)] -
                                      prev[static_cast<size_t>(y) + 1] -
                                      prev[static_cast<size_t>(y) - 1];
      col[static_cast<size_t>(c) - 1] =
          PiScalar(2) * prev[static_cast<size_t>(c) - 1] - prev[static_cast<size_t>(c) - 2];
      col[static_cast<size_t>(c)] =
          prev[static_cast<size_t>(c) - 1] +
          PiScalar::pi_power(-2, GaussianRational(Rational(4, 2 * c - 1)));
      octant_.push_back(std::move(col));
    }
  }

  mutable std::mutex mutex_;
  mutable std::vector<std::vector<PiScalar>> octant_;  // octant_[x][y], 0 <= y <= x
};

}  // namespace latvir
