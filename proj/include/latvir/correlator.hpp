#pragma once

// Exact Gaussian correlation functions of the pinned full-plane free field and
// of the Dirichlet half-plane free field, including current insertions.
//
// The field is extended by zero to the dual lattice, so a current at a medial
// site z is a two-term stencil over the adjacent primal vertices:
//
//   J(z)    = sum_{a in pair(z)} conj(a) phi(z+a)      (analytic,  [dee phi])
//   Jbar(z) = sum_{a in pair(z)}      a  phi(z+a)      (antianalytic)
//
// where pair(z) = {+-1/2} on horizontal and {+-i/2} on vertical medials (the
// dual-pointing neighbours carry the zero extension).  All covariances are
// derived from the field two-point function
//
//   full plane:  <phi(x) phi(y)> = a(x) + a(y) - a(x-y)     (pinned at 0)
//   half-plane:  <phi(x) phi(y)> = a(x - conj(y)) - a(x-y)  (Dirichlet)
//
// and every higher correlation is a Wick sum over pair partitions.

#include <array>
#include <cstddef>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "kernel.hpp"
#include "lattice.hpp"
#include "scalar.hpp"

namespace latvir {

enum class Geometry : uint8_t { FullPlane, HalfPlane };
enum class Sector : uint8_t { Analytic, Antianalytic };

inline const char* to_string(Geometry g) {
  return g == Geometry::FullPlane ? "full_plane" : "half_plane";
}
inline const char* to_string(Sector s) {
  return s == Sector::Analytic ? "analytic" : "antianalytic";
}

struct FieldPoint {
  Site site;

  explicit FieldPoint(Site s) : site(s) {
    if (!s.is_diamond())
      throw std::domain_error("field insertions live on the diamond lattice, got " + s.str());
  }
  static FieldPoint vertex(int x, int y) { return FieldPoint(Site::vertex(x, y)); }
};

struct CurrentPoint {
  Site site;
  Sector sector = Sector::Analytic;

  CurrentPoint(Site s, Sector sec) : site(s), sector(sec) {
    if (!s.is_medial())
      throw std::domain_error("current insertions live on the medial lattice, got " + s.str());
  }
};

struct StencilTerm {
  Site vertex;
  GaussianRational weight;
};

// The two-term stencil of a current over adjacent primal vertices.
inline std::array<StencilTerm, 2> current_stencil(const CurrentPoint& c) {
  Site step = c.site.cls() == SiteClass::MedialH ? Site{2, 0} : Site{0, 2};
  GaussianRational a = step.value();  // +1/2 or +i/2
  GaussianRational w_plus = c.sector == Sector::Analytic ? a.conj() : a;
  return {StencilTerm{c.site + step, w_plus}, StencilTerm{c.site - step, -w_plus}};
}

// An ordered multiset of insertions: a radially ordered word of current
// insertions followed by field insertions, all in one geometry.
struct InsertionList {
  Geometry geometry = Geometry::FullPlane;
  std::vector<CurrentPoint> currents;
  std::vector<FieldPoint> fields;

  static InsertionList make(Geometry geom, std::vector<FieldPoint> fields,
                            std::vector<CurrentPoint> currents = {}) {
    if (geom == Geometry::HalfPlane)
      for (const FieldPoint& f : fields)
        if (f.site.qy <= 0)
          throw std::domain_error("half-plane field insertions must lie strictly in the "
                                  "upper half-plane, got " + f.site.str());
    return {geom, std::move(currents), std::move(fields)};
  }

  std::string str() const {
    if (currents.empty() && fields.empty()) return "1";
    std::string out;
    for (const CurrentPoint& c : currents)
      out += std::string(c.sector == Sector::Analytic ? "J" : "Jbar") + c.site.str();
    for (const FieldPoint& f : fields) out += "phi" + f.site.str();
    return out;
  }
};

// A Wick slot is either a current or a field insertion.
struct Slot {
  enum class Kind : uint8_t { Field, Current } kind;
  Site site;
  Sector sector = Sector::Analytic;

  static Slot field(Site s) { return {Kind::Field, s, Sector::Analytic}; }
  static Slot current(const CurrentPoint& c) { return {Kind::Current, c.site, c.sector}; }
};

// Covariance provider for one geometry, with an exact memo of slot pairs.
class FieldTheory {
 public:
  FieldTheory(const PotentialKernel& kernel, Geometry geom)
      : kernel_(kernel), geometry_(geom) {}

  Geometry geometry() const { return geometry_; }
  const PotentialKernel& kernel() const { return kernel_; }

  // <phi(x) phi(y)>; zero as soon as one point carries the dual extension.
  PiScalar cov_field(Site x, Site y) const {
    if (x.cls() == SiteClass::Dual || y.cls() == SiteClass::Dual) return PiScalar(0);
    if (geometry_ == Geometry::FullPlane)
      return kernel_.at(x) + kernel_.at(y) - kernel_.at(x - y);
    return kernel_.at(x - y.conj()) - kernel_.at(x - y);
  }

  PiScalar cov_current_field(const CurrentPoint& c, Site x) const {
    PiScalar out;
    for (const StencilTerm& t : current_stencil(c))
      out.add_mul(PiScalar(t.weight), cov_field(t.vertex, x));
    return out;
  }

  PiScalar cov_current_current(const CurrentPoint& c, const CurrentPoint& d) const {
    PiScalar out;
    for (const StencilTerm& s : current_stencil(c))
      for (const StencilTerm& t : current_stencil(d))
        out.add_mul(PiScalar(s.weight * t.weight), cov_field(s.vertex, t.vertex));
    return out;
  }

  PiScalar cov(const Slot& a, const Slot& b) const {
    std::array<int, 6> key{a.site.qx, a.site.qy, slot_tag(a), b.site.qx, b.site.qy,
                           slot_tag(b)};
    std::array<int, 6> rkey{key[3], key[4], key[5], key[0], key[1], key[2]};
    if (rkey < key) key = rkey;
    {
      std::lock_guard<std::mutex> lock(mutex_);
      auto it = cov_cache_.find(key);
      if (it != cov_cache_.end()) return it->second;
    }
    PiScalar v = cov_uncached(a, b);
    std::lock_guard<std::mutex> lock(mutex_);
    return cov_cache_.emplace(key, std::move(v)).first->second;
  }

 private:
  static int slot_tag(const Slot& s) {
    return s.kind == Slot::Kind::Field ? 0 : (s.sector == Sector::Analytic ? 1 : 2);
  }

  PiScalar cov_uncached(const Slot& a, const Slot& b) const {
    bool ca = a.kind == Slot::Kind::Current, cb = b.kind == Slot::Kind::Current;
    if (ca && cb)
      return cov_current_current({a.site, a.sector}, {b.site, b.sector});
    if (ca) return cov_current_field({a.site, a.sector}, b.site);
    if (cb) return cov_current_field({b.site, b.sector}, a.site);
    return cov_field(a.site, b.site);
  }

  const PotentialKernel& kernel_;
  Geometry geometry_;
  mutable std::mutex mutex_;
  mutable std::map<std::array<int, 6>, PiScalar> cov_cache_;
};

// Enumerates all pair partitions of {0,...,n-1}, invoking f on each partition
// given as a list of index pairs.  There are (n-1)!! partitions for even n and
// none for odd n.
template <typename F>
inline void for_each_pairing(size_t n, F&& f) {
  if (n % 2 != 0) return;
  std::vector<std::pair<size_t, size_t>> pairs;
  std::vector<bool> used(n, false);
  auto rec = [&](auto&& self) -> void {
    size_t first = n;
    for (size_t i = 0; i < n; ++i)
      if (!used[i]) {
        first = i;
        break;
      }
    if (first == n) {
      f(pairs);
      return;
    }
    used[first] = true;
    for (size_t j = first + 1; j < n; ++j) {
      if (used[j]) continue;
      used[j] = true;
      pairs.emplace_back(first, j);
      self(self);
      pairs.pop_back();
      used[j] = false;
    }
    used[first] = false;
  };
  rec(rec);
}

// Bosonic Wick formula: sum over pair partitions of the product of pairwise
// covariances; zero for an odd number of slots.
inline PiScalar wick_correlator(const FieldTheory& theory, const std::vector<Slot>& slots) {
  if (slots.empty()) return PiScalar(1);
  PiScalar total;
  for_each_pairing(slots.size(), [&](const std::vector<std::pair<size_t, size_t>>& pairs) {
    PiScalar term(1);
    for (auto [i, j] : pairs) {
      term *= theory.cov(slots[i], slots[j]);
      if (term.is_zero()) break;
    }
    total += term;
  });
  return total;
}

inline std::vector<Slot> slots_of(const InsertionList& ins) {
  std::vector<Slot> slots;
  for (const CurrentPoint& c : ins.currents) slots.push_back(Slot::current(c));
  for (const FieldPoint& f : ins.fields) slots.push_back(Slot::field(f.site));
  return slots;
}

inline PiScalar wick_correlator(const FieldTheory& theory, const InsertionList& ins) {
  if (theory.geometry() != ins.geometry)
    throw std::domain_error("insertion list geometry does not match the field theory");
  return wick_correlator(theory, slots_of(ins));
}

}  // namespace latvir
