#pragma once

// Discrete contours on the shifted half-mesh lattice (Z/2 + 1/4)^2 and the
// contour calculus built on them: product integrals of a medial function
// against a diamond function, the Stokes/Leibnitz evaluation over the
// interior, and the residue pairing of Laurent monomials.
//
// Every edge of a contour has exactly one medial and one diamond site at
// distance 1/4; an oriented edge u -> v contributes (v-u) f(z_m) g(z_dia).
// Contours are immutable once constructed (edges and interiors are computed
// up front), so they can be shared freely between threads.

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "json.hpp"
#include "lattice.hpp"
#include "monomials.hpp"
#include "scalar.hpp"

namespace latvir {

struct ContourEdge {
  Site from, to;
  Site medial, diamond;  // the flanking evaluation sites
};

class Contour {
 public:
  // Nodes of a closed simple path; consecutive nodes (cyclically) differ by
  // one half-step.  Positive (counterclockwise) orientation is required.
  explicit Contour(std::vector<Site> nodes) : nodes_(std::move(nodes)) {
    validate(/*require_positive=*/true);
    build();
  }

  // Axis-aligned square through the nodes (+-(r + 3/4), +-(r + 3/4)),
  // positively oriented; its interior contains the ball ||z||_1 <= r + 1/2.
  static Contour rectangle(int r) {
    if (r < 0) throw std::invalid_argument("rectangle contour needs r >= 0");
    int R = 4 * r + 3;
    std::vector<Site> nodes;
    for (int t = -R; t < R; t += 2) nodes.push_back({R, t});    // right, upward
    for (int t = R; t > -R; t -= 2) nodes.push_back({t, R});    // top, leftward
    for (int t = R; t > -R; t -= 2) nodes.push_back({-R, t});   // left, downward
    for (int t = -R; t < R; t += 2) nodes.push_back({t, -R});   // bottom, rightward
    return Contour(std::move(nodes));
  }

  Contour reversed() const {
    std::vector<Site> rev(nodes_.rbegin(), nodes_.rend());
    return Contour(std::move(rev), /*require_positive=*/false);
  }

  const std::vector<Site>& nodes() const { return nodes_; }
  int orientation() const { return orientation_; }
  const std::vector<ContourEdge>& edges() const { return edges_; }

  // Encircled site sets and their discrete closures (interior plus the sites
  // at distance 1/4 from the contour).
  const std::vector<Site>& interior_medial() const { return int_m_; }
  const std::vector<Site>& interior_diamond() const { return int_d_; }

  bool encircles(Site z) const { return interior_set_.count(z.key()) > 0; }
  bool closure_contains(Site z) const { return encircles(z) || flank_set_.count(z.key()) > 0; }

  // Largest ||.||_1 (in quarter units) over the medial/diamond closure; used
  // to size radially ordered successor contours.
  int closure_norm1_quarters() const { return closure_norm1_quarters_; }

  nlohmann::json to_json() const {
    nlohmann::json arr = nlohmann::json::array();
    for (const Site& s : nodes_) arr.push_back({s.qx, s.qy});
    return arr;
  }

  static Contour from_json(const nlohmann::json& arr) {
    std::vector<Site> nodes;
    for (const auto& p : arr) nodes.push_back({p.at(0).get<int>(), p.at(1).get<int>()});
    return Contour(std::move(nodes));
  }

 private:
  Contour(std::vector<Site> nodes, bool require_positive) : nodes_(std::move(nodes)) {
    validate(require_positive);
    build();
  }

  void validate(bool require_positive) {
    if (nodes_.size() < 4) throw std::invalid_argument("contour too short");
    std::unordered_set<uint64_t> seen;
    long long shoelace = 0;
    for (size_t i = 0; i < nodes_.size(); ++i) {
      Site u = nodes_[i], v = nodes_[(i + 1) % nodes_.size()];
      if (u.cls() != SiteClass::ContourNode)
        throw std::invalid_argument("contour node off (Z/2+1/4)^2: " + u.str());
      if (!seen.insert(u.key()).second)
        throw std::invalid_argument("contour is not simple: repeated node " + u.str());
      Site d = v - u;
      if (!((std::abs(d.qx) == 2 && d.qy == 0) || (d.qx == 0 && std::abs(d.qy) == 2)))
        throw std::invalid_argument("contour step is not a half-step: " + u.str() + " -> " +
                                    v.str());
      shoelace += static_cast<long long>(u.qx) * v.qy - static_cast<long long>(v.qx) * u.qy;
    }
    if (shoelace == 0) throw std::invalid_argument("degenerate contour");
    if (require_positive && shoelace < 0)
      throw std::invalid_argument("contour must be positively oriented");
    orientation_ = shoelace > 0 ? 1 : -1;
  }

  void build() {
    for (size_t i = 0; i < nodes_.size(); ++i) {
      Site u = nodes_[i], v = nodes_[(i + 1) % nodes_.size()];
      Site mid{(u.qx + v.qx) / 2, (u.qy + v.qy) / 2};
      Site step = v - u;
      Site perp{-step.qy / 2, step.qx / 2};
      Site s1 = mid + perp, s2 = mid - perp;
      ContourEdge e{u, v, s1.is_medial() ? s1 : s2, s1.is_diamond() ? s1 : s2};
      edges_.push_back(e);
    }
    // Ray casting per lattice row: for each even qy, the sorted qx of vertical
    // contour edges crossing that row.  Sites and nodes never share
    // coordinates, so crossing parity is exact.
    std::map<int, std::vector<int>> rows;
    int min_x = nodes_[0].qx, max_x = nodes_[0].qx;
    for (const Site& s : nodes_) {
      min_x = std::min(min_x, s.qx);
      max_x = std::max(max_x, s.qx);
    }
    for (const ContourEdge& e : edges_)
      if (e.from.qx == e.to.qx) rows[(e.from.qy + e.to.qy) / 2].push_back(e.from.qx);
    for (auto& [y, xs] : rows) std::sort(xs.begin(), xs.end());
    for (const auto& [qy, xs] : rows) {
      if (qy % 2 != 0) continue;
      for (int qx = min_x + 1; qx < max_x; ++qx) {
        if (qx % 2 != 0) continue;
        size_t crossings =
            static_cast<size_t>(xs.end() - std::upper_bound(xs.begin(), xs.end(), qx));
        if (crossings % 2 == 0) continue;
        Site z{qx, qy};
        if (z.is_medial())
          int_m_.push_back(z);
        else if (z.is_diamond())
          int_d_.push_back(z);
        else
          continue;
        interior_set_.insert(z.key());
      }
    }
    closure_norm1_quarters_ = 0;
    for (const Site& z : int_m_)
      closure_norm1_quarters_ = std::max(closure_norm1_quarters_, z.norm1_quarters());
    for (const Site& z : int_d_)
      closure_norm1_quarters_ = std::max(closure_norm1_quarters_, z.norm1_quarters());
    for (const ContourEdge& e : edges_)
      for (Site z : {e.medial, e.diamond}) {
        flank_set_.insert(z.key());
        closure_norm1_quarters_ = std::max(closure_norm1_quarters_, z.norm1_quarters());
      }
  }

  std::vector<Site> nodes_;
  int orientation_ = 1;
  std::vector<ContourEdge> edges_;
  std::vector<Site> int_m_, int_d_;
  std::unordered_set<uint64_t> interior_set_, flank_set_;
  int closure_norm1_quarters_ = 0;
};

// Discrete contour integral of a product:  sum over oriented edges of
// (v - u) f(z_m) g(z_dia), with f on the medial and g on the diamond lattice.
inline PiScalar product_integral(const LatticeFunction& f, const LatticeFunction& g,
                                 const Contour& gamma) {
  PiScalar total;
  for (const ContourEdge& e : gamma.edges()) {
    Site step = e.to - e.from;
    total += PiScalar(step.value()) * f(e.medial) * g(e.diamond);
  }
  return total;
}

// The same integral evaluated through the discrete Leibnitz/Stokes identity:
//   i sum_{z in int_m} f(z) [dbar g](z)  +  i sum_{z in int_d} [dbar f](z) g(z).
inline PiScalar stokes_sum(const LatticeFunction& f, const LatticeFunction& g,
                           const Contour& gamma) {
  PiScalar total;
  for (Site z : gamma.interior_medial()) total.add_mul(f(z), dbar(g, z));
  for (Site z : gamma.interior_diamond()) total.add_mul(dbar(f, z), g(z));
  return PiScalar::i() * total;
}

// (1/(2 pi i)) times the contour integral of z^[m] z^[n]; equals
// delta_{m+n,-1} whenever gamma separates the ball ||z||_1 <= max(0,-m/2,-n/2)
// from infinity.  A contour violating that precondition is reported, never
// silently integrated.
inline PiScalar residue_pairing(int m, int n, const Contour& gamma,
                                const MonomialFamily& monomials) {
  int ball_quarters = std::max({0, -2 * m, -2 * n});
  for (int qx = -ball_quarters; qx <= ball_quarters; qx += 2)
    for (int qy = -(ball_quarters - std::abs(qx)); qy <= ball_quarters - std::abs(qx);
         qy += 2) {
      Site z{qx, qy};
      if ((z.is_medial() || z.is_diamond()) && !gamma.encircles(z))
        throw std::invalid_argument("contour too small for residue pairing of (" +
                                    std::to_string(m) + "," + std::to_string(n) +
                                    "): ball site " + z.str() + " not encircled");
    }
  PiScalar integral = product_integral(monomials.medial_function(m),
                                       monomials.diamond_function(n), gamma);
  return integral / PiScalar::pi_power(2, GaussianRational(Rational(0), Rational(2)));
}

}  // namespace latvir
