#pragma once

// Geometry of the square lattice Z^2, its dual, the diamond graph and the
// medial lattice, all embedded in (1/4)Z^2 so that every point has integer
// quarter-coordinates.  True position of a Site is (qx/4, qy/4).
//
// Classification (mod 4 on quarter-coordinates):
//   VERTEX   (0,0)   points of Z^2
//   DUAL     (2,2)   points of the dual lattice Z^2 + (1/2,1/2)
//   MEDIAL_H (2,0)   midpoints of horizontal edges
//   MEDIAL_V (0,2)   midpoints of vertical edges
// Contour nodes live on (Z/2 + 1/4)^2, i.e. both quarter-coordinates odd.

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <mutex>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include "scalar.hpp"

namespace latvir {

enum class SiteClass : uint8_t { Vertex, Dual, MedialH, MedialV, ContourNode, Other };

struct Site {
  int qx = 0, qy = 0;  // quarter-lattice units

  Site() = default;
  Site(int x, int y) : qx(x), qy(y) {}

  static Site vertex(int x, int y) { return {4 * x, 4 * y}; }

  SiteClass cls() const {
    auto m4 = [](int v) { return ((v % 4) + 4) % 4; };
    if (qx % 2 != 0 && qy % 2 != 0) return SiteClass::ContourNode;
    int mx = m4(qx), my = m4(qy);
    if (mx == 0 && my == 0) return SiteClass::Vertex;
    if (mx == 2 && my == 2) return SiteClass::Dual;
    if (mx == 2 && my == 0) return SiteClass::MedialH;
    if (mx == 0 && my == 2) return SiteClass::MedialV;
    return SiteClass::Other;
  }

  bool is_medial() const {
    SiteClass c = cls();
    return c == SiteClass::MedialH || c == SiteClass::MedialV;
  }
  bool is_diamond() const {
    SiteClass c = cls();
    return c == SiteClass::Vertex || c == SiteClass::Dual;
  }

  // ||z||_1 in quarter units; the true norm is this / 4.
  int norm1_quarters() const { return std::abs(qx) + std::abs(qy); }
  int norm_inf_quarters() const { return std::max(std::abs(qx), std::abs(qy)); }

  Site operator+(Site o) const { return {qx + o.qx, qy + o.qy}; }
  Site operator-(Site o) const { return {qx - o.qx, qy - o.qy}; }
  Site operator-() const { return {-qx, -qy}; }
  Site conj() const { return {qx, -qy}; }
  Site rot90() const { return {-qy, qx}; }  // multiplication by i
  bool operator==(Site o) const { return qx == o.qx && qy == o.qy; }
  bool operator!=(Site o) const { return !(*this == o); }
  bool operator<(Site o) const { return qx != o.qx ? qx < o.qx : qy < o.qy; }

  // Complex value (qx/4, qy/4) as an exact Gaussian rational.
  GaussianRational value() const { return {make_rational(qx, 4), make_rational(qy, 4)}; }

  std::string str() const {
    auto coord = [](int q) {
      if (q % 4 == 0) return std::to_string(q / 4);
      if (q % 2 == 0) return std::to_string(q / 2) + "/2";
      return std::to_string(q) + "/4";
    };
    return "(" + coord(qx) + "," + coord(qy) + ")";
  }

  uint64_t key() const {
    return (static_cast<uint64_t>(static_cast<uint32_t>(qx)) << 32) |
           static_cast<uint32_t>(qy);
  }
};

inline const char* to_string(SiteClass c) {
  switch (c) {
    case SiteClass::Vertex: return "vertex";
    case SiteClass::Dual: return "dual";
    case SiteClass::MedialH: return "medial_h";
    case SiteClass::MedialV: return "medial_v";
    case SiteClass::ContourNode: return "contour_node";
    default: return "other";
  }
}

// The four quarter-step displacements a in {1/2, -1/2, i/2, -i/2}, as sites.
inline const std::array<Site, 4>& half_steps() {
  static const std::array<Site, 4> steps = {Site{2, 0}, Site{-2, 0}, Site{0, 2}, Site{0, -2}};
  return steps;
}

// Bitmask of site classes a lattice function is defined on.
struct DomainMask {
  uint8_t bits = 0;
  static constexpr uint8_t kVertex = 1, kDual = 2, kMedialH = 4, kMedialV = 8;

  static DomainMask diamond() { return {kVertex | kDual}; }
  static DomainMask medial() { return {kMedialH | kMedialV}; }
  static DomainMask all() { return {kVertex | kDual | kMedialH | kMedialV}; }

  bool contains(SiteClass c) const {
    switch (c) {
      case SiteClass::Vertex: return bits & kVertex;
      case SiteClass::Dual: return bits & kDual;
      case SiteClass::MedialH: return bits & kMedialH;
      case SiteClass::MedialV: return bits & kMedialV;
      default: return false;
    }
  }
};

// A lazily evaluated, memoizing function Site -> PiScalar restricted to a set
// of site classes.  Evaluation outside the domain class is an error; the memo
// admits concurrent readers and idempotent concurrent fills.
class LatticeFunction {
 public:
  LatticeFunction(DomainMask domain, std::function<PiScalar(Site)> eval)
      : domain_(domain), eval_(std::move(eval)) {}

  DomainMask domain() const { return domain_; }

  PiScalar operator()(Site z) const {
    if (!domain_.contains(z.cls()))
      throw std::domain_error("lattice function evaluated outside its domain class at " +
                              z.str());
    {
      std::lock_guard<std::mutex> lock(mutex_);
      auto it = cache_.find(z.key());
      if (it != cache_.end()) return it->second;
    }
    PiScalar v = eval_(z);
    std::lock_guard<std::mutex> lock(mutex_);
    return cache_.emplace(z.key(), std::move(v)).first->second;
  }

 private:
  DomainMask domain_;
  std::function<PiScalar(Site)> eval_;
  mutable std::mutex mutex_;
  mutable std::unordered_map<uint64_t, PiScalar> cache_;
};

// [dee f](z)  = sum_a conj(a) f(z+a),  a in {1/2,-1/2,i/2,-i/2}.
// [dbar f](z) = sum_a a f(z+a).
// Both map diamond functions to medial sites and medial functions to diamond
// sites; the required four neighbours must lie in f's domain class.
namespace detail {

template <typename F>
inline PiScalar half_step_sum(const F& f, Site z, bool conjugate_weights) {
  PiScalar out;
  for (Site a : half_steps()) {
    GaussianRational w = a.value();
    if (conjugate_weights) w = w.conj();
    out.add_mul(PiScalar(w), f(z + a));
  }
  return out;
}

}  // namespace detail

inline PiScalar dee(const LatticeFunction& f, Site z) {
  return detail::half_step_sum(f, z, /*conjugate_weights=*/true);
}

inline PiScalar dbar(const LatticeFunction& f, Site z) {
  return detail::half_step_sum(f, z, /*conjugate_weights=*/false);
}

// [laplacian f](z) = (1/4) sum_xi f(z+xi) - f(z), xi over the four unit steps.
inline PiScalar laplacian(const LatticeFunction& f, Site z) {
  PiScalar s;
  for (Site xi : {Site{4, 0}, Site{-4, 0}, Site{0, 4}, Site{0, -4}}) s += f(z + xi);
  return s / PiScalar(4) - f(z);
}

// Exact check of the transpose identity  sum_m f [dee g] = - sum_d [dee f] g
// (and the dbar analogue) over a window of half-norm `window`; at least one of
// f, g must be supported inside the window for the identity to close.
inline bool transpose_identity_check(const LatticeFunction& f, const LatticeFunction& g,
                                     int window) {
  PiScalar lhs_dee, rhs_dee, lhs_dbar, rhs_dbar;
  int W = 4 * window;
  for (int qx = -W; qx <= W; qx += 2)
    for (int qy = -W; qy <= W; qy += 2) {
      Site z{qx, qy};
      if (z.is_medial()) {
        lhs_dee.add_mul(f(z), dee(g, z));
        lhs_dbar.add_mul(f(z), dbar(g, z));
      } else if (z.is_diamond()) {
        rhs_dee.add_mul(dee(f, z), g(z));
        rhs_dbar.add_mul(dbar(f, z), g(z));
      }
    }
  return lhs_dee == -rhs_dee && lhs_dbar == -rhs_dbar;
}

}  // namespace latvir
