#pragma once

// Exact arithmetic in the graded ring  sum_{k in Z} Q(i) * pi^(k/2):
// Gaussian-rational coefficients attached to half-integer powers of pi.
// pi is treated as transcendental, so equality of two values is structural
// equality of canonical forms (no stored zero coefficients).

#include <gmpxx.h>
#include <mpfr.h>

#include <complex>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>

#include "json.hpp"

namespace latvir {

using Rational = mpq_class;

// mpq_class(p, q) does not reduce; GMP arithmetic requires canonical operands.
inline Rational make_rational(long p, long q) {
  Rational r(p, q);
  r.canonicalize();
  return r;
}

inline Rational rational_from_string(const std::string& s) {
  Rational q;
  if (mpq_set_str(q.get_mpq_t(), s.c_str(), 10) != 0)
    throw std::invalid_argument("bad rational literal: " + s);
  if (mpz_sgn(mpq_denref(q.get_mpq_t())) == 0)
    throw std::invalid_argument("zero denominator: " + s);
  q.canonicalize();
  return q;
}

inline std::string to_string(const Rational& q) { return q.get_str(); }

// ---------------------------------------------------------------------------
// Gaussian rationals Q(i)
// ---------------------------------------------------------------------------

struct GaussianRational {
  Rational re, im;

  GaussianRational() : re(0), im(0) {}
  GaussianRational(long r) : re(r), im(0) {}  // NOLINT(google-explicit-constructor)
  GaussianRational(Rational r) : re(std::move(r)), im(0) {}  // NOLINT
  GaussianRational(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}

  static GaussianRational i() { return {Rational(0), Rational(1)}; }

  bool is_zero() const { return re == 0 && im == 0; }

  GaussianRational conj() const { return {re, -im}; }

  GaussianRational operator-() const { return {-re, -im}; }

  GaussianRational& operator+=(const GaussianRational& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  GaussianRational& operator-=(const GaussianRational& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  friend GaussianRational operator+(GaussianRational a, const GaussianRational& b) { return a += b; }
  friend GaussianRational operator-(GaussianRational a, const GaussianRational& b) { return a -= b; }
  friend GaussianRational operator*(const GaussianRational& a, const GaussianRational& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  GaussianRational& operator*=(const GaussianRational& o) { return *this = *this * o; }

  GaussianRational inverse() const {
    if (is_zero()) throw std::domain_error("division by zero Gaussian rational");
    Rational n = re * re + im * im;
    return {re / n, -im / n};
  }

  bool operator==(const GaussianRational& o) const { return re == o.re && im == o.im; }
  bool operator!=(const GaussianRational& o) const { return !(*this == o); }
};

inline std::string to_string(const GaussianRational& g) {
  if (g.im == 0) return to_string(g.re);
  std::string im_part = to_string(g.im) + "*i";
  if (g.re == 0) return im_part;
  if (g.im > 0) return to_string(g.re) + " + " + im_part;
  return to_string(g.re) + " - " + to_string(Rational(-g.im)) + "*i";
}

// ---------------------------------------------------------------------------
// PiScalar
// ---------------------------------------------------------------------------

class PiScalar {
 public:
  // terms_[k] is the coefficient of pi^(k/2); never zero once canonicalized.
  using TermMap = std::map<int, GaussianRational>;

  PiScalar() = default;
  PiScalar(long v) {  // NOLINT(google-explicit-constructor)
    if (v != 0) terms_[0] = GaussianRational(v);
  }
  PiScalar(Rational v) {  // NOLINT(google-explicit-constructor)
    if (v != 0) terms_[0] = GaussianRational(std::move(v));
  }
  PiScalar(GaussianRational v) {  // NOLINT(google-explicit-constructor)
    if (!v.is_zero()) terms_[0] = std::move(v);
  }

  // c * pi^(half_exp/2)
  static PiScalar pi_power(int half_exp, GaussianRational c = GaussianRational(1)) {
    PiScalar s;
    if (!c.is_zero()) s.terms_[half_exp] = std::move(c);
    return s;
  }
  static PiScalar pi() { return pi_power(2); }
  static PiScalar i() { return PiScalar(GaussianRational::i()); }

  bool is_zero() const { return terms_.empty(); }
  const TermMap& terms() const { return terms_; }

  GaussianRational coefficient(int half_exp) const {
    auto it = terms_.find(half_exp);
    return it == terms_.end() ? GaussianRational() : it->second;
  }

  PiScalar& operator+=(const PiScalar& o) {
    for (const auto& [k, c] : o.terms_) add_term(k, c);
    return *this;
  }
  PiScalar& operator-=(const PiScalar& o) {
    for (const auto& [k, c] : o.terms_) add_term(k, -c);
    return *this;
  }
  friend PiScalar operator+(PiScalar a, const PiScalar& b) { return a += b; }
  friend PiScalar operator-(PiScalar a, const PiScalar& b) { return a -= b; }
  PiScalar operator-() const {
    PiScalar r;
    for (const auto& [k, c] : terms_) r.terms_[k] = -c;
    return r;
  }

  friend PiScalar operator*(const PiScalar& a, const PiScalar& b) {
    PiScalar r;
    for (const auto& [ka, ca] : a.terms_)
      for (const auto& [kb, cb] : b.terms_) r.add_term(ka + kb, ca * cb);
    return r;
  }
  PiScalar& operator*=(const PiScalar& o) { return *this = *this * o; }

  // *this += a * b, avoiding one temporary in hot loops.
  void add_mul(const PiScalar& a, const PiScalar& b) {
    for (const auto& [ka, ca] : a.terms_)
      for (const auto& [kb, cb] : b.terms_) add_term(ka + kb, ca * cb);
  }

  // Division is supported only by invertible single-term scalars c*pi^(k/2).
  friend PiScalar operator/(const PiScalar& a, const PiScalar& b) {
    if (b.terms_.size() != 1)
      throw std::domain_error("PiScalar division requires a single-term divisor");
    const auto& [k, c] = *b.terms_.begin();
    PiScalar r;
    GaussianRational cinv = c.inverse();
    for (const auto& [ka, ca] : a.terms_) r.terms_[ka - k] = ca * cinv;
    return r;
  }

  PiScalar conj() const {
    PiScalar r;
    for (const auto& [k, c] : terms_) r.terms_[k] = c.conj();
    return r;
  }

  bool operator==(const PiScalar& o) const { return terms_ == o.terms_; }
  bool operator!=(const PiScalar& o) const { return !(*this == o); }

  // Numeric evaluation, substituting pi at `digits` significant decimal digits.
  std::complex<double> to_complex(unsigned digits = 50) const {
    if (digits < 15) throw std::invalid_argument("to_complex: need >= 15 digits");
    mpfr_prec_t prec = static_cast<mpfr_prec_t>(digits * 3.33) + 64;
    mpfr_t pi, p, t, re, im;
    mpfr_inits2(prec, pi, p, t, re, im, static_cast<mpfr_ptr>(nullptr));
    mpfr_const_pi(pi, MPFR_RNDN);
    mpfr_set_zero(re, 1);
    mpfr_set_zero(im, 1);
    for (const auto& [k, c] : terms_) {
      // p = pi^(k/2)
      if (k % 2 == 0) {
        mpfr_pow_si(p, pi, k / 2, MPFR_RNDN);
      } else {
        mpfr_sqrt(p, pi, MPFR_RNDN);
        mpfr_pow_si(p, p, k, MPFR_RNDN);
      }
      mpfr_set_q(t, c.re.get_mpq_t(), MPFR_RNDN);
      mpfr_mul(t, t, p, MPFR_RNDN);
      mpfr_add(re, re, t, MPFR_RNDN);
      mpfr_set_q(t, c.im.get_mpq_t(), MPFR_RNDN);
      mpfr_mul(t, t, p, MPFR_RNDN);
      mpfr_add(im, im, t, MPFR_RNDN);
    }
    std::complex<double> out(mpfr_get_d(re, MPFR_RNDN), mpfr_get_d(im, MPFR_RNDN));
    mpfr_clears(pi, p, t, re, im, static_cast<mpfr_ptr>(nullptr));
    return out;
  }

  // JSON: [{"exp_num": k, "re": "p/q", "im": "p/q"}, ...] with exponent k/2.
  nlohmann::json to_json() const {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& [k, c] : terms_)
      arr.push_back({{"exp_num", k}, {"re", to_string(c.re)}, {"im", to_string(c.im)}});
    return arr;
  }

  static PiScalar from_json(const nlohmann::json& arr) {
    PiScalar s;
    for (const auto& t : arr)
      s.add_term(t.at("exp_num").get<int>(),
                 GaussianRational(rational_from_string(t.at("re").get<std::string>()),
                                  rational_from_string(t.at("im").get<std::string>())));
    return s;
  }

  std::string str() const;

 private:
  void add_term(int k, const GaussianRational& c) {
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.try_emplace(k, c);
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  TermMap terms_;
};

namespace detail {

inline std::string pi_suffix(int k) {
  if (k == 0) return "";
  if (k == 2) return "*pi";
  if (k == -2) return "/pi";
  if (k % 2 == 0) return "*pi^" + std::to_string(k / 2);
  return "*pi^(" + std::to_string(k) + "/2)";
}

}  // namespace detail

inline std::string PiScalar::str() const {
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  // Highest powers of pi first, so constants print before 1/pi corrections.
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    GaussianRational c = it->second;
    std::string sep;
    if (!first) {
      // Pull a leading minus out of purely real or purely imaginary coefficients.
      bool negative = (c.im == 0 && c.re < 0) || (c.re == 0 && c.im < 0);
      sep = negative ? " - " : " + ";
      if (negative) c = -c;
    }
    std::string suffix = detail::pi_suffix(it->first);
    std::string coeff = (c.im == 0 || c.re == 0) ? to_string(c) : "(" + to_string(c) + ")";
    if (!suffix.empty() && suffix[0] == '*' && c.im == 0 && (c.re == 1 || c.re == -1)) {
      out += sep + (c.re == 1 ? "" : "-") + suffix.substr(1);
    } else {
      out += sep + coeff + suffix;
    }
    first = false;
  }
  return out;
}

inline std::ostream& operator<<(std::ostream& os, const PiScalar& s) { return os << s.str(); }

}  // namespace latvir
