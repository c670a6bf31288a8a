#pragma once

// Commutator verification suites.  Every algebraic identity is checked by
// exact arithmetic: a case passes iff its residual is the zero PiScalar.
//
// All identities are stated and checked on the insertion side, where the
// generator families satisfy
//
//   [a_m, a_n]       = m delta_{m+n,0} Id          (Heisenberg, both sectors)
//   [a_m, abar_n]    = 0
//   [L_m, L_n]       = (m-n) L_{m+n} + (c/12)(m^3-m) delta_{m+n,0} Id,  c = 1
//   [L_n, a_m]       = -m a_{n+m}
//   [L_m, Lbar_n]    = 0
//   [Lb_m, Lb_n]     = (m-n) Lb_{m+n} + (c/12)(m^3-m) delta_{m+n,0} Id,
//                      c = 1 - 12 b^2   (Coulomb gas)
//   [Lb_n, a_m]      = -m a_{n+m} + b n(n+1) delta_{n+m,0} Id
//
// and identically in the Dirichlet half-plane geometry.  Optionally every
// case is recomputed with all contours enlarged by two, asserting exact
// contour robustness of both sides.

#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "modes.hpp"

namespace latvir {

struct VerifyCase {
  std::string identity;
  int m = 0, n = 0;
  std::string insertion;
  PiScalar residual;
  bool robust = true;  // unchanged under contour growth (when checked)
  bool pass = false;

  nlohmann::json to_json() const {
    return {{"identity", identity},
            {"indices", {{"m", m}, {"n", n}}},
            {"insertion", insertion},
            {"residual", residual.to_json()},
            {"kind", "exact"},
            {"pass", pass}};
  }
};

struct SuiteReport {
  std::string suite;
  nlohmann::json parameters;
  std::vector<VerifyCase> cases;

  int passed() const {
    int p = 0;
    for (const auto& c : cases) p += c.pass ? 1 : 0;
    return p;
  }
  bool all_pass() const { return passed() == static_cast<int>(cases.size()); }

  nlohmann::json to_json() const {
    nlohmann::json cs = nlohmann::json::array();
    for (const auto& c : cases) cs.push_back(c.to_json());
    return {{"suite", suite},
            {"parameters", parameters},
            {"cases", cs},
            {"summary",
             {{"total", cases.size()}, {"passed", passed()}, {"all_pass", all_pass()}}}};
  }

  void print(std::ostream& os, bool verbose = false) const {
    for (const auto& c : cases)
      if (verbose || !c.pass)
        os << (c.pass ? "  ok   " : "  FAIL ") << c.identity << "  m=" << c.m << " n=" << c.n
           << "  on " << c.insertion
           << (c.pass ? "" : "  residual = " + c.residual.str()) << "\n";
    os << suite << ": " << passed() << "/" << cases.size() << " cases pass\n";
  }
};

struct VerifyOptions {
  int max_index = 2;
  int max_degree = 2;
  int window = 2;       // ||x||_1 bound on insertion points
  bool growth_check = true;
  bool fast = true;
  Rational b = Rational(1, 2);  // Coulomb background charge
};

// All field-insertion lists of degree <= max_degree with points of
// ||x||_1 <= window (strictly upper half-plane points in that geometry).
inline std::vector<InsertionList> insertion_family(Geometry geom, int max_degree, int window) {
  std::vector<Site> pts;
  for (int x = -window; x <= window; ++x)
    for (int y = -window; y <= window; ++y) {
      if (std::abs(x) + std::abs(y) > window) continue;
      if (geom == Geometry::HalfPlane && y <= 0) continue;
      pts.push_back(Site::vertex(x, y));
    }
  std::vector<InsertionList> family;
  if (max_degree >= 0) family.push_back(InsertionList::make(geom, {}));
  if (max_degree >= 1)
    for (Site p : pts) family.push_back(InsertionList::make(geom, {FieldPoint(p)}));
  if (max_degree >= 2)
    for (size_t i = 0; i < pts.size(); ++i)
      for (size_t j = i; j < pts.size(); ++j)
        family.push_back(InsertionList::make(geom, {FieldPoint(pts[i]), FieldPoint(pts[j])}));
  if (max_degree >= 3)
    throw std::invalid_argument("insertion families are generated up to degree 2");
  return family;
}

namespace detail {

class CaseRunner {
 public:
  CaseRunner(const PotentialKernel& kernel, const MonomialFamily& monomials, Geometry geom,
             const VerifyOptions& opts)
      : base_(kernel, monomials, geom, 0), opts_(opts) {
    if (opts.growth_check) grown_.emplace(kernel, monomials, geom, 2);
  }

  // lhs = <A B X> - <B A X>, rhs supplied as (evaluator -> PiScalar) so the
  // growth recheck re-derives both sides with enlarged contours.
  void run(SuiteReport& report, const std::string& identity, int m, int n,
           const ModeWord& A, const ModeWord& B, const InsertionList& X,
           const std::function<PiScalar(const ModeEvaluator&)>& rhs) {
    VerifyCase c{identity, m, n, X.str(), PiScalar(0), true, false};
    PiScalar lhs = bracket(base_, A, B, X);
    c.residual = lhs - rhs(base_);
    c.pass = c.residual.is_zero();
    if (grown_) {
      PiScalar lhs2 = bracket(*grown_, A, B, X);
      c.robust = (lhs2 == lhs) && (rhs(*grown_) == rhs(base_));
      c.pass = c.pass && c.robust;
    }
    report.cases.push_back(std::move(c));
  }

  const ModeEvaluator& evaluator() const { return base_; }

 private:
  PiScalar bracket(const ModeEvaluator& ev, const ModeWord& A, const ModeWord& B,
                   const InsertionList& X) const {
    ModeWord AB = A, BA = B;
    AB.insert(AB.end(), B.begin(), B.end());
    BA.insert(BA.end(), A.begin(), A.end());
    return ev.mode_word_action(AB, X, opts_.fast) - ev.mode_word_action(BA, X, opts_.fast);
  }

  ModeEvaluator base_;
  std::optional<ModeEvaluator> grown_;
  VerifyOptions opts_;
};

inline PiScalar central_term(const Rational& c, int m) {
  // (c/12)(m^3 - m)
  return PiScalar(c * make_rational(static_cast<long>(m) * m * m - m, 12));
}

}  // namespace detail

// [a_m, a_n] = m delta Id, same antianalytically, and [a_m, abar_n] = 0.
inline SuiteReport heisenberg_suite(const PotentialKernel& kernel,
                                    const MonomialFamily& monomials, Geometry geom,
                                    const VerifyOptions& opts) {
  SuiteReport report;
  report.suite = geom == Geometry::FullPlane ? "heisenberg" : "heisenberg_halfplane";
  report.parameters = {{"max_index", opts.max_index}, {"max_degree", opts.max_degree},
                       {"window", opts.window},       {"growth_check", opts.growth_check},
                       {"fast", opts.fast},           {"geometry", to_string(geom)}};
  detail::CaseRunner runner(kernel, monomials, geom, opts);
  auto family = insertion_family(geom, opts.max_degree, opts.window);
  // Near the Dirichlet boundary the reflection ties the two sectors together
  // (J(conj z) = -Jbar(z)), so the cross-sector commutator is a full-plane
  // statement only.
  bool cross_sector = geom == Geometry::FullPlane;
  int N = opts.max_index;
  for (int m = -N; m <= N; ++m)
    for (int n = -N; n <= N; ++n)
      for (const InsertionList& X : family) {
        auto delta_rhs = [&, m, n](const ModeEvaluator& ev) {
          return m + n == 0 ? PiScalar(m) * ev.current_word_action({}, X, opts.fast)
                            : PiScalar(0);
        };
        runner.run(report, "[a_m,a_n] = m d(m+n) Id", m, n, {Generator::current(m)},
                   {Generator::current(n)}, X, delta_rhs);
        runner.run(report, "[abar_m,abar_n] = m d(m+n) Id", m, n,
                   {Generator::current_bar(m)}, {Generator::current_bar(n)}, X, delta_rhs);
        if (cross_sector)
          runner.run(report, "[a_m,abar_n] = 0", m, n, {Generator::current(m)},
                     {Generator::current_bar(n)}, X,
                     [](const ModeEvaluator&) { return PiScalar(0); });
      }
  return report;
}

// Virasoro relations at central charge c = 1 - 12 b^2 (b = 0 gives the plain
// Sugawara family):  [L_m, L_n], [L_n, a_m], and mixed [L_m, Lbar_n] = 0 for
// |m|, |n| <= min(max_index, 1).
inline SuiteReport virasoro_suite(const PotentialKernel& kernel,
                                  const MonomialFamily& monomials, Geometry geom,
                                  const VerifyOptions& opts, Rational b = Rational(0)) {
  bool coulomb = b != 0;
  SuiteReport report;
  report.suite = coulomb ? "coulomb"
                         : (geom == Geometry::FullPlane ? "virasoro" : "virasoro_halfplane");
  Rational c = Rational(1) - Rational(12) * b * b;
  report.parameters = {{"max_index", opts.max_index}, {"max_degree", opts.max_degree},
                       {"window", opts.window},       {"growth_check", opts.growth_check},
                       {"fast", opts.fast},           {"geometry", to_string(geom)},
                       {"b", to_string(b)},           {"central_charge", to_string(c)}};
  detail::CaseRunner runner(kernel, monomials, geom, opts);
  auto family = insertion_family(geom, opts.max_degree, opts.window);
  int N = opts.max_index;
  auto L = [&](int n) {
    return coulomb ? Generator::coulomb(n, b) : Generator::virasoro(n);
  };
  std::string ll = coulomb ? "[Lb_m,Lb_n] = (m-n)Lb_(m+n) + (c/12)(m^3-m)d(m+n) Id"
                           : "[L_m,L_n] = (m-n)L_(m+n) + (1/12)(m^3-m)d(m+n) Id";
  std::string la = coulomb ? "[Lb_n,a_m] = -m a_(n+m) + b n(n+1) d(n+m) Id"
                           : "[L_n,a_m] = -m a_(n+m)";
  for (int m = -N; m <= N; ++m)
    for (int n = -N; n <= N; ++n)
      for (const InsertionList& X : family) {
        runner.run(report, ll, m, n, {L(m)}, {L(n)}, X,
                   [&, m, n](const ModeEvaluator& ev) {
                     PiScalar rhs = PiScalar(m - n) * ev.mode_word_action({L(m + n)}, X,
                                                                          opts.fast);
                     if (m + n == 0)
                       rhs += detail::central_term(c, m) *
                              ev.current_word_action({}, X, opts.fast);
                     return rhs;
                   });
        runner.run(report, la, n, m, {L(n)}, {Generator::current(m)}, X,
                   [&, m, n](const ModeEvaluator& ev) {
                     PiScalar rhs = PiScalar(-m) * ev.mode_word_action(
                                                       {Generator::current(n + m)}, X,
                                                       opts.fast);
                     if (coulomb && n + m == 0)
                       rhs += PiScalar(b * Rational(static_cast<long>(n) * (n + 1))) *
                              ev.current_word_action({}, X, opts.fast);
                     return rhs;
                   });
      }
  if (!coulomb && geom == Geometry::FullPlane) {
    int mixed_N = std::min(N, 1);
    for (int m = -mixed_N; m <= mixed_N; ++m)
      for (int n = -mixed_N; n <= mixed_N; ++n)
        for (const InsertionList& X : family)
          runner.run(report, "[L_m,Lbar_n] = 0", m, n, {L(m)},
                     {Generator::virasoro_bar(n)}, X,
                     [](const ModeEvaluator&) { return PiScalar(0); });
  }
  return report;
}

// Mixed-sector commutators beyond the Heisenberg suite: [L_m, Lbar_n] = 0 and
// [L_n, abar_m] = 0.
inline SuiteReport mixed_suite(const PotentialKernel& kernel, const MonomialFamily& monomials,
                               Geometry geom, const VerifyOptions& opts) {
  SuiteReport report;
  report.suite = "mixed";
  report.parameters = {{"max_index", opts.max_index}, {"max_degree", opts.max_degree},
                       {"window", opts.window},       {"growth_check", opts.growth_check},
                       {"fast", opts.fast},           {"geometry", to_string(geom)}};
  detail::CaseRunner runner(kernel, monomials, geom, opts);
  auto family = insertion_family(geom, opts.max_degree, opts.window);
  auto zero = [](const ModeEvaluator&) { return PiScalar(0); };
  int N = opts.max_index;
  for (int m = -N; m <= N; ++m)
    for (int n = -N; n <= N; ++n)
      for (const InsertionList& X : family) {
        runner.run(report, "[L_m,Lbar_n] = 0", m, n, {Generator::virasoro(m)},
                   {Generator::virasoro_bar(n)}, X, zero);
        runner.run(report, "[L_n,abar_m] = 0", n, m, {Generator::virasoro(n)},
                   {Generator::current_bar(m)}, X, zero);
      }
  return report;
}

}  // namespace latvir
