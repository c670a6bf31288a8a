#pragma once

// Current modes, Sugawara (Virasoro) modes and Coulomb-gas modes acting on
// insertion lists by nested, radially ordered discrete contour integrals.
//
// A current mode acts on insertions by
//
//   <a_n X> = (1/sqrt(pi)) oint <J(z) X> z^[n] dz ,
//
// and a word a_{n_j} ... a_{n_1} by the j-fold nested integral with prefactor
// pi^(-j/2): the rightmost generator integrates over the innermost contour,
// and each contour separates the closure of the previous one (together with
// the ball ||z||_1 <= max(0, -n/2) and the insertion points) from infinity.
// Antianalytic generators integrate <Jbar(z) X> against conj(z^[n]) with
// conjugated edge weights.
//
// The Virasoro generator is the Sugawara sum
//
//   L_n = (1/2) sum_{j>=0} a_{n-j} a_j  +  (1/2) sum_{j<=-1} a_j a_{n-j} ,
//
// truncated to the finitely many terms that can act nonzero: when the inner
// generator faces only the insertion points, j ranges over [0, M] and
// [n-M, -1] with M = 1 + 2 max ||z||_1; when it faces previously placed
// contours, M grows to cover their closures (the dropped terms vanish because
// z^[j] vanishes on the ball reaching every singularity of the integrand).
// The Coulomb-gas generator expands as L^b_n = L_n + b (n+1) a_n.
//
// Two evaluators are provided.  The reference evaluator performs the literal
// nested summation over all contour edge tuples with a full Wick expansion at
// each tuple.  The fast evaluator expands the Wick pairings first, so each
// integrated current pairs either with another one (a cached double contour
// integral) or with an insertion (a cached single contour integral); the two
// agree exactly, which the test suite asserts case by case.

#include <algorithm>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "contour.hpp"
#include "correlator.hpp"
#include "kernel.hpp"
#include "lattice.hpp"
#include "monomials.hpp"
#include "scalar.hpp"

namespace latvir {

enum class GenKind : uint8_t { Current, CurrentBar, Virasoro, VirasoroBar, Coulomb };

struct Generator {
  GenKind kind;
  int n;
  Rational b;  // Coulomb background charge; ignored otherwise

  static Generator current(int n) { return {GenKind::Current, n, Rational(0)}; }
  static Generator current_bar(int n) { return {GenKind::CurrentBar, n, Rational(0)}; }
  static Generator virasoro(int n) { return {GenKind::Virasoro, n, Rational(0)}; }
  static Generator virasoro_bar(int n) { return {GenKind::VirasoroBar, n, Rational(0)}; }
  static Generator coulomb(int n, Rational b) { return {GenKind::Coulomb, n, std::move(b)}; }

  std::string str() const {
    switch (kind) {
      case GenKind::Current: return "a_" + std::to_string(n);
      case GenKind::CurrentBar: return "abar_" + std::to_string(n);
      case GenKind::Virasoro: return "L_" + std::to_string(n);
      case GenKind::VirasoroBar: return "Lbar_" + std::to_string(n);
      case GenKind::Coulomb: return "Lb_" + std::to_string(n);
    }
    return "?";
  }
};

// A word of generators in reading order: the leftmost generator acts last
// (outermost contours), the rightmost acts first.
using ModeWord = std::vector<Generator>;

// One integrated current of a fully expanded word.
struct CurrentGen {
  int n;
  Sector sector;
};

// A fully expanded current word in action order: index 0 is the innermost
// (first-acting) generator.
using CurrentWord = std::vector<CurrentGen>;

namespace detail {

inline int ceil_div_nonneg(int a, int b) { return a <= 0 ? 0 : (a + b - 1) / b; }

// Smallest rectangle radius whose interior contains the ball
// ||z||_1 <= max(0, -n/2) that the monomial z^[n] needs enclosed.
inline int ball_radius(int n) { return ceil_div_nonneg(-2 * n - 2, 4); }

// Smallest rectangle radius enclosing an insertion point (with a one-step
// margin around current insertions, whose stencils spill onto neighbours).
inline int point_radius(const Site& z, bool is_current) {
  int q = z.norm_inf_quarters() + (is_current ? 2 : 0);
  return ceil_div_nonneg(q - 2, 4);
}

}  // namespace detail

class ModeEvaluator {
 public:
  ModeEvaluator(const PotentialKernel& kernel, const MonomialFamily& monomials,
                Geometry geometry, int growth = 0)
      : theory_(kernel, geometry), monomials_(monomials), growth_(growth) {
    if (growth < 0) throw std::invalid_argument("contour growth must be >= 0");
  }

  Geometry geometry() const { return theory_.geometry(); }
  const FieldTheory& theory() const { return theory_; }
  int growth() const { return growth_; }

  // M_G = 1 + 2 max ||z||_1 over the insertion points (1 for the empty list).
  static int truncation_bound(const InsertionList& ins) {
    int m = 1;
    for (const FieldPoint& f : ins.fields)
      m = std::max(m, 1 + f.site.norm1_quarters() / 2);
    for (const CurrentPoint& c : ins.currents)
      m = std::max(m, 1 + c.site.norm1_quarters() / 2 + 1);
    return m;
  }

  // Radii (growth included) of the radially ordered rectangle contours for a
  // current word in action order.
  std::vector<int> contour_radii(const CurrentWord& word, const InsertionList& ins) const {
    int pts = 0;
    for (const FieldPoint& f : ins.fields)
      pts = std::max(pts, detail::point_radius(f.site, false));
    for (const CurrentPoint& c : ins.currents)
      pts = std::max(pts, detail::point_radius(c.site, true));
    std::vector<int> radii;
    int prev = -1;
    for (const CurrentGen& g : word) {
      int r = std::max({pts, detail::ball_radius(g.n), prev + 1});
      radii.push_back(r + growth_);
      prev = r;
    }
    return radii;
  }

  PiScalar current_word_action(const CurrentWord& word, const InsertionList& ins,
                               bool fast = true) const {
    check_geometry(ins);
    if (word.empty()) return wick_correlator(theory_, ins);
    PiScalar value = fast ? eval_fast(word, ins) : eval_reference(word, ins);
    return value * PiScalar::pi_power(-static_cast<int>(word.size()));
  }

  // Action of a generator word; Virasoro and Coulomb generators expand into
  // truncated sums of current words.  `extra_truncation` pads every Sugawara
  // truncation bound (the padding terms vanish; asserted by tests).
  PiScalar mode_word_action(const ModeWord& word, const InsertionList& ins, bool fast = true,
                            int extra_truncation = 0) const {
    check_geometry(ins);
    PiScalar total;
    for (const auto& [coeff, cword] : expand(word, ins, extra_truncation))
      total += PiScalar(coeff) * current_word_action(cword, ins, fast);
    return total;
  }

  PiScalar sugawara_action(int n, Sector sector, const InsertionList& ins, bool fast = true,
                           int extra_truncation = 0) const {
    Generator g = sector == Sector::Analytic ? Generator::virasoro(n)
                                             : Generator::virasoro_bar(n);
    return mode_word_action({g}, ins, fast, extra_truncation);
  }

  // Wick parity of a generator word acting on an insertion list: the number
  // of expanded current generators plus the number of insertion slots, mod 2.
  // An action of odd parity vanishes identically.
  static int word_parity(const ModeWord& word, const InsertionList& ins) {
    int currents = 0;
    for (const Generator& g : word) {
      switch (g.kind) {
        case GenKind::Current:
        case GenKind::CurrentBar: currents += 1; break;
        case GenKind::Virasoro:
        case GenKind::VirasoroBar: break;  // two currents per term
        case GenKind::Coulomb:
          throw std::domain_error("Coulomb generators mix Wick parities");
      }
    }
    return (currents + static_cast<int>(ins.fields.size() + ins.currents.size())) % 2;
  }

  // Expansion of a generator word into (coefficient, current word) terms,
  // processed right to left so each Sugawara truncation bound can account for
  // the contours already placed inside it.
  std::vector<std::pair<Rational, CurrentWord>> expand(const ModeWord& word,
                                                       const InsertionList& ins,
                                                       int extra_truncation = 0) const {
    std::vector<std::pair<Rational, CurrentWord>> partials{{Rational(1), {}}};
    for (auto it = word.rbegin(); it != word.rend(); ++it) {
      const Generator& g = *it;
      std::vector<std::pair<Rational, CurrentWord>> next;
      for (const auto& [coeff, cword] : partials) {
        switch (g.kind) {
          case GenKind::Current:
          case GenKind::CurrentBar: {
            Sector s = g.kind == GenKind::Current ? Sector::Analytic : Sector::Antianalytic;
            CurrentWord w = cword;
            w.push_back({g.n, s});
            next.emplace_back(coeff, std::move(w));
            break;
          }
          case GenKind::Virasoro:
          case GenKind::VirasoroBar: {
            Sector s = g.kind == GenKind::Virasoro ? Sector::Analytic : Sector::Antianalytic;
            append_sugawara_terms(next, coeff, cword, g.n, s, ins, extra_truncation);
            break;
          }
          case GenKind::Coulomb: {
            append_sugawara_terms(next, coeff, cword, g.n, Sector::Analytic, ins,
                                  extra_truncation);
            CurrentWord w = cword;
            w.push_back({g.n, Sector::Analytic});
            next.emplace_back(coeff * g.b * Rational(g.n + 1), std::move(w));
            break;
          }
        }
      }
      partials = std::move(next);
    }
    return partials;
  }

  // Truncation bound for a Sugawara generator whose inner side is the already
  // expanded current word `inner` acting on `ins`.
  int sugawara_truncation(const CurrentWord& inner, const InsertionList& ins) const {
    int m = truncation_bound(ins);
    if (!inner.empty()) {
      std::vector<int> radii = contour_radii(inner, ins);
      const Contour& top = rectangle(radii.back());
      // Wick pairings against currents on the inner contours put dbar masses
      // within a half-step of their closure.
      int mass_quarters = top.closure_norm1_quarters() + 2;
      m = std::max(m, (mass_quarters + 1) / 2);
    }
    return m;
  }

  const Contour& rectangle(int r) const {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = contours_.find(r);
    if (it == contours_.end()) it = contours_.emplace(r, Contour::rectangle(r)).first;
    return it->second;
  }

 private:
  void check_geometry(const InsertionList& ins) const {
    if (ins.geometry != theory_.geometry())
      throw std::domain_error("insertion list geometry does not match the evaluator");
  }

  void append_sugawara_terms(std::vector<std::pair<Rational, CurrentWord>>& out,
                             const Rational& coeff, const CurrentWord& inner, int n, Sector s,
                             const InsertionList& ins, int extra) const {
    int M = sugawara_truncation(inner, ins) + extra;
    Rational half = coeff / 2;
    for (int j = 0; j <= M; ++j) {
      CurrentWord w = inner;
      w.push_back({j, s});
      w.push_back({n - j, s});
      out.emplace_back(half, std::move(w));
    }
    for (int j = n - M; j <= -1; ++j) {
      CurrentWord w = inner;
      w.push_back({n - j, s});
      w.push_back({j, s});
      out.emplace_back(half, std::move(w));
    }
  }

  // Edge weight and monomial factor of one contour edge for a generator:
  // (v-u) z_dia^[n] for analytic generators, conjugated for antianalytic ones.
  GaussianRational edge_weight(const ContourEdge& e, Sector s) const {
    GaussianRational w = (e.to - e.from).value();
    return s == Sector::Analytic ? w : w.conj();
  }
  PiScalar edge_monomial(const ContourEdge& e, const CurrentGen& g) const {
    PiScalar m = monomials_.at(g.n, e.diamond);
    return g.sector == Sector::Analytic ? m : m.conj();
  }

  // ---------------------------------------------------------------------
  // Reference evaluator: literal nested summation over edge tuples.
  // ---------------------------------------------------------------------

  PiScalar eval_reference(const CurrentWord& word, const InsertionList& ins) const {
    std::vector<int> radii = contour_radii(word, ins);
    std::vector<Slot> slots = slots_of(ins);
    PiScalar total;
    std::vector<Slot> work = slots;
    nested_sum(word, radii, ins, 0, GaussianRational(1), PiScalar(1), work, total);
    return total;
  }

  void nested_sum(const CurrentWord& word, const std::vector<int>& radii,
                  const InsertionList& ins, size_t level, GaussianRational weight,
                  const PiScalar& mono_prod, std::vector<Slot>& slots, PiScalar& total) const {
    if (level == word.size()) {
      total += PiScalar(weight) * mono_prod * wick_correlator(theory_, slots);
      return;
    }
    const Contour& gamma = rectangle(radii[level]);
    const CurrentGen& g = word[level];
    for (const ContourEdge& e : gamma.edges()) {
      slots.push_back(Slot::current({e.medial, g.sector}));
      nested_sum(word, radii, ins, level + 1, weight * edge_weight(e, g.sector),
                 mono_prod * edge_monomial(e, g), slots, total);
      slots.pop_back();
    }
  }

  // ---------------------------------------------------------------------
  // Fast evaluator: Wick pairings expanded first, contour integrals cached.
  // ---------------------------------------------------------------------

  PiScalar eval_fast(const CurrentWord& word, const InsertionList& ins) const {
    std::vector<Slot> fixed = slots_of(ins);
    size_t j = word.size(), total_slots = j + fixed.size();
    PiScalar total;
    for_each_pairing(total_slots, [&](const std::vector<std::pair<size_t, size_t>>& pairs) {
      PiScalar term(1);
      for (auto [p, q] : pairs) {
        bool pl = p < j, ql = q < j;  // p < q, so p is the inner level of the two
        if (pl && ql)
          term *= pair_integral(word[p], word[q]);
        else if (pl)
          term *= slot_integral(word[p], fixed[q - j]);
        else
          term *= theory_.cov(fixed[p - j], fixed[q - j]);
        if (term.is_zero()) break;
      }
      total += term;
    });
    return total;
  }

  // Nested double contour integral of <J J> against two monomials, for an
  // inner/outer generator pair.  By contour independence the value depends
  // only on the generators, so canonical radii are used and the result cached.
  PiScalar pair_integral(const CurrentGen& inner, const CurrentGen& outer) const {
    std::array<int, 4> key{inner.n, static_cast<int>(inner.sector), outer.n,
                           static_cast<int>(outer.sector)};
    {
      std::lock_guard<std::mutex> lock(mutex_);
      auto it = pair_cache_.find(key);
      if (it != pair_cache_.end()) return it->second;
    }
    int r_in = detail::ball_radius(inner.n);
    int r_out = std::max(r_in + 1, detail::ball_radius(outer.n));
    const Contour& gin = rectangle(r_in + growth_);
    const Contour& gout = rectangle(r_out + growth_);
    PiScalar value;
    for (const ContourEdge& eo : gout.edges()) {
      Slot co = Slot::current({eo.medial, outer.sector});
      PiScalar inner_sum;
      for (const ContourEdge& ei : gin.edges()) {
        Slot ci = Slot::current({ei.medial, inner.sector});
        inner_sum.add_mul(PiScalar(edge_weight(ei, inner.sector)) * theory_.cov(co, ci),
                          edge_monomial(ei, inner));
      }
      value.add_mul(PiScalar(edge_weight(eo, outer.sector)) * edge_monomial(eo, outer),
                    inner_sum);
    }
    std::lock_guard<std::mutex> lock(mutex_);
    return pair_cache_.emplace(key, std::move(value)).first->second;
  }

  // Single contour integral of the covariance of a generator's current with a
  // fixed insertion slot, against the generator's monomial.
  PiScalar slot_integral(const CurrentGen& g, const Slot& slot) const {
    std::array<int, 6> key{g.n, static_cast<int>(g.sector), slot.site.qx, slot.site.qy,
                           slot.kind == Slot::Kind::Current ? 1 : 0,
                           static_cast<int>(slot.sector)};
    {
      std::lock_guard<std::mutex> lock(mutex_);
      auto it = slot_cache_.find(key);
      if (it != slot_cache_.end()) return it->second;
    }
    int r = std::max(detail::ball_radius(g.n),
                     detail::point_radius(slot.site, slot.kind == Slot::Kind::Current));
    const Contour& gamma = rectangle(r + growth_);
    PiScalar value;
    for (const ContourEdge& e : gamma.edges()) {
      Slot c = Slot::current({e.medial, g.sector});
      value.add_mul(PiScalar(edge_weight(e, g.sector)) * theory_.cov(c, slot),
                    edge_monomial(e, g));
    }
    std::lock_guard<std::mutex> lock(mutex_);
    return slot_cache_.emplace(key, std::move(value)).first->second;
  }

  FieldTheory theory_;
  const MonomialFamily& monomials_;
  int growth_;
  mutable std::mutex mutex_;
  mutable std::map<int, Contour> contours_;
  mutable std::map<std::array<int, 4>, PiScalar> pair_cache_;
  mutable std::map<std::array<int, 6>, PiScalar> slot_cache_;
};

}  // namespace latvir
