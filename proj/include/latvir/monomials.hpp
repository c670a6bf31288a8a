#pragma once

// Discrete Laurent monomials z^[k] on the diamond and medial lattices.
//
// The family is pinned by  z^[0] = 1,  z^[1] = z  and
//
//   z^[-1] = 2 pi K(z)                        on medial sites,
//   z^[-1] = (pi/2) sum_a K(z - a)            on diamond sites,
//
// with K the discrete Cauchy kernel, and extended in both directions through
// the derivative identity [dee z^[k]] = k z^[k-1]:
//
//   k <= -2 :  z^[k] = [dee z^[k+1]] / (k+1)
//   k >= +2 :  z^[k] is the discrete path integral of k z^[k-1] from a
//              basepoint of the ambient sublattice translate of Z^2.
//
// Basepoint values for k >= 2 are not hard-coded: on the medial sublattices
// they are derived from the paired vanishing conditions at +-1/2 and +-i/2,
// and on the dual sublattice the additive constant is fixed by the four-point
// vanishing sum over the duals nearest the origin.

#include <mutex>
#include <span>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "kernel.hpp"
#include "lattice.hpp"
#include "scalar.hpp"

namespace latvir {

class MonomialFamily {
 public:
  explicit MonomialFamily(const PotentialKernel& kernel) : kernel_(kernel) {}

  PiScalar at(int k, Site z) const {
    if (!z.is_medial() && !z.is_diamond())
      throw std::domain_error("monomial evaluated off the diamond/medial lattices at " +
                              z.str());
    if (k == 0) return PiScalar(1);
    if (k == 1) return PiScalar(z.value());
    {
      std::lock_guard<std::mutex> lock(mutex_);
      auto it = cache_.find(pack(k, z));
      if (it != cache_.end()) return it->second;
    }
    PiScalar v = k < 0 ? negative(k, z) : positive(k, z);
    std::lock_guard<std::mutex> lock(mutex_);
    return cache_.emplace(pack(k, z), std::move(v)).first->second;
  }

  LatticeFunction medial_function(int k) const {
    return LatticeFunction(DomainMask::medial(), [this, k](Site z) { return at(k, z); });
  }
  LatticeFunction diamond_function(int k) const {
    return LatticeFunction(DomainMask::diamond(), [this, k](Site z) { return at(k, z); });
  }
  // The reflected monomial z -> conj(z^[k]); by the conjugation covariance
  // this is the value of the family at the reflected site.
  LatticeFunction conj_medial_function(int k) const {
    return LatticeFunction(DomainMask::medial(),
                           [this, k](Site z) { return at(k, z).conj(); });
  }
  LatticeFunction conj_diamond_function(int k) const {
    return LatticeFunction(DomainMask::diamond(),
                           [this, k](Site z) { return at(k, z).conj(); });
  }

  // Integral of k z^[k-1] along an oriented path of unit edges inside one
  // sublattice translate of Z^2 (primal, dual, horizontal- or vertical-medial).
  PiScalar path_integral(int k, std::span<const Site> nodes) const {
    if (nodes.size() < 2) return PiScalar(0);
    SiteClass cls = nodes.front().cls();
    PiScalar total;
    for (size_t i = 0; i + 1 < nodes.size(); ++i) {
      Site u = nodes[i], v = nodes[i + 1];
      if (u.cls() != cls || v.cls() != cls)
        throw std::domain_error("path integral mixes sublattices at " + v.str());
      Site d = v - u;
      if (d.norm1_quarters() != 4 || (d.qx != 0 && d.qy != 0))
        throw std::domain_error("path step is not a unit edge: " + u.str() + " -> " + v.str());
      Site mid{(u.qx + v.qx) / 2, (u.qy + v.qy) / 2};
      total.add_mul(PiScalar(d.value()) * PiScalar(k), at(k - 1, mid));
    }
    return total;
  }

  // sum over the four duals nearest the origin of z^[k]; zero for every k >= 1.
  PiScalar dual_vanishing_sum(int k) const {
    PiScalar s;
    for (Site d : nearest_duals()) s += at(k, d);
    return s;
  }

  // Additive constant on the dual sublattice for k >= 2 (the value at (1+i)/2).
  PiScalar dual_constant(int k) const {
    if (k < 2) throw std::invalid_argument("dual constant defined for k >= 2");
    {
      std::lock_guard<std::mutex> lock(mutex_);
      auto it = dual_constants_.find(k);
      if (it != dual_constants_.end()) return it->second;
    }
    // Value at each nearest dual is c_k + I(d) with I the staircase integral
    // from (1+i)/2; the four-point vanishing sum fixes c_k.
    PiScalar sum;
    for (Site d : nearest_duals()) sum += staircase_integral(k, Site{2, 2}, d);
    PiScalar c = -(sum / PiScalar(4));
    std::lock_guard<std::mutex> lock(mutex_);
    return dual_constants_.emplace(k, std::move(c)).first->second;
  }

 private:
  static const std::array<Site, 4>& nearest_duals() {
    static const std::array<Site, 4> duals = {Site{2, 2}, Site{-2, 2}, Site{-2, -2},
                                              Site{2, -2}};
    return duals;
  }

  PiScalar negative(int k, Site z) const {
    if (k == -1) {
      if (z.is_medial()) return PiScalar::pi_power(2, 2) * kernel_.cauchy(z);
      PiScalar s;  // diamond: (pi/2) sum_a K(z - a)
      for (Site a : half_steps()) s += kernel_.cauchy(z - a);
      return PiScalar::pi_power(2, GaussianRational(Rational(1, 2))) * s;
    }
    // z^[k] = [dee z^[k+1]] / (k+1)
    PiScalar d;
    for (Site a : half_steps()) d.add_mul(PiScalar(a.value().conj()), at(k + 1, z + a));
    return d / PiScalar(k + 1);
  }

  PiScalar positive(int k, Site z) const {
    switch (z.cls()) {
      case SiteClass::Vertex:
        return staircase_integral(k, Site{0, 0}, z);  // 0^[k] = 0
      case SiteClass::MedialH: {
        // v(1/2) + v(-1/2) = 0 and v(1/2) - v(-1/2) = k * 0^[k-1].
        PiScalar base = PiScalar(k) * at(k - 1, Site{0, 0}) / PiScalar(2);
        return base + staircase_integral(k, Site{2, 0}, z);
      }
      case SiteClass::MedialV: {
        PiScalar base = PiScalar::i() * PiScalar(k) * at(k - 1, Site{0, 0}) / PiScalar(2);
        return base + staircase_integral(k, Site{0, 2}, z);
      }
      case SiteClass::Dual:
        return dual_constant(k) + staircase_integral(k, Site{2, 2}, z);
      default:
        throw std::domain_error("monomial evaluated off-lattice at " + z.str());
    }
  }

  // Integral of k z^[k-1] along the axis-first staircase from `from` to `to`
  // inside one sublattice translate (real steps first, then imaginary steps).
  PiScalar staircase_integral(int k, Site from, Site to) const {
    PiScalar total;
    Site cur = from;
    while (cur.qx != to.qx) {
      int step = cur.qx < to.qx ? 4 : -4;
      Site next{cur.qx + step, cur.qy};
      total.add_mul(PiScalar(Site{step, 0}.value()) * PiScalar(k),
                    at(k - 1, Site{cur.qx + step / 2, cur.qy}));
      cur = next;
    }
    while (cur.qy != to.qy) {
      int step = cur.qy < to.qy ? 4 : -4;
      Site next{cur.qx, cur.qy + step};
      total.add_mul(PiScalar(Site{0, step}.value()) * PiScalar(k),
                    at(k - 1, Site{cur.qx, cur.qy + step / 2}));
      cur = next;
    }
    return total;
  }

  static uint64_t pack(int k, Site z) {
    return (static_cast<uint64_t>(static_cast<uint16_t>(k)) << 48) |
           (static_cast<uint64_t>(static_cast<uint16_t>(z.qx)) << 24) |
           static_cast<uint64_t>(static_cast<uint16_t>(z.qy));
  }

  const PotentialKernel& kernel_;
  mutable std::mutex mutex_;
  mutable std::unordered_map<uint64_t, PiScalar> cache_;
  mutable std::unordered_map<int, PiScalar> dual_constants_;
};

}  // namespace latvir
