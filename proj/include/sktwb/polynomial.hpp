#pragma once

// Sparse multivariate polynomials over Q(zeta_N) with named commuting
// variables, kept in graded-lex order with the leading term first.

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "sktwb/cyclotomic.hpp"

namespace sktwb {

/// A power product; entries sorted by variable name, exponents positive.
class Monomial {
 public:
  using Entry = std::pair<std::string, unsigned>;

  Monomial() = default;
  explicit Monomial(std::string var, unsigned exp = 1) {
    if (exp > 0) e_.emplace_back(std::move(var), exp);
  }

  const std::vector<Entry>& entries() const noexcept { return e_; }
  bool is_one() const noexcept { return e_.empty(); }

  unsigned total_degree() const {
    unsigned d = 0;
    for (const auto& [v, k] : e_) d += k;
    return d;
  }
  unsigned degree_in(const std::string& var) const {
    for (const auto& [v, k] : e_)
      if (v == var) return k;
    return 0;
  }

  friend Monomial operator*(const Monomial& a, const Monomial& b) {
    Monomial r;
    auto i = a.e_.begin(), j = b.e_.begin();
    while (i != a.e_.end() || j != b.e_.end()) {
      if (j == b.e_.end() || (i != a.e_.end() && i->first < j->first)) {
        r.e_.push_back(*i++);
      } else if (i == a.e_.end() || j->first < i->first) {
        r.e_.push_back(*j++);
      } else {
        r.e_.emplace_back(i->first, i->second + j->second);
        ++i;
        ++j;
      }
    }
    return r;
  }

  /// a / b when b divides a.
  static bool divide(const Monomial& a, const Monomial& b, Monomial& out) {
    Monomial r;
    auto i = a.e_.begin();
    for (const auto& [v, k] : b.e_) {
      while (i != a.e_.end() && i->first < v) r.e_.push_back(*i++);
      if (i == a.e_.end() || i->first != v || i->second < k) return false;
      if (i->second > k) r.e_.emplace_back(v, i->second - k);
      ++i;
    }
    while (i != a.e_.end()) r.e_.push_back(*i++);
    out = std::move(r);
    return true;
  }

  Monomial without(const std::string& var) const {
    Monomial r;
    for (const auto& e : e_)
      if (e.first != var) r.e_.push_back(e);
    return r;
  }

  /// Graded lex: higher total degree first; ties broken by the exponent of
  /// the alphabetically first variable where the two differ.
  static int compare(const Monomial& a, const Monomial& b) {
    const unsigned da = a.total_degree(), db = b.total_degree();
    if (da != db) return da < db ? -1 : 1;
    auto i = a.e_.begin(), j = b.e_.begin();
    while (i != a.e_.end() && j != b.e_.end()) {
      if (i->first != j->first) return i->first < j->first ? 1 : -1;
      if (i->second != j->second) return i->second < j->second ? -1 : 1;
      ++i;
      ++j;
    }
    if (i != a.e_.end()) return 1;
    if (j != b.e_.end()) return -1;
    return 0;
  }

  friend bool operator==(const Monomial& a, const Monomial& b) { return a.e_ == b.e_; }

  std::string to_string() const {
    std::string s;
    for (const auto& [v, k] : e_) {
      if (!s.empty()) s += "*";
      s += v;
      if (k > 1) s += "^" + std::to_string(k);
    }
    return s;
  }

 private:
  std::vector<Entry> e_;
};

class Poly {
 public:
  struct Term {
    Monomial mono;
    CycNum coef;
  };

  Poly() = default;
  Poly(const CycNum& c) {  // NOLINT
    if (!c.is_zero()) t_.push_back({Monomial(), c});
  }
  Poly(long c) : Poly(CycNum(c)) {}  // NOLINT
  static Poly variable(const std::string& name) {
    Poly p;
    p.t_.push_back({Monomial(name), CycNum(1)});
    return p;
  }
  static Poly term(Monomial m, CycNum c) {
    Poly p;
    if (!c.is_zero()) p.t_.push_back({std::move(m), std::move(c)});
    return p;
  }

  const std::vector<Term>& terms() const noexcept { return t_; }
  bool is_zero() const noexcept { return t_.empty(); }
  bool is_constant() const noexcept {
    return t_.empty() || (t_.size() == 1 && t_[0].mono.is_one());
  }
  CycNum constant() const { return t_.empty() ? CycNum(0) : t_.back().mono.is_one() ? t_.back().coef : CycNum(0); }
  const Term& leading() const { return t_.front(); }

  std::set<std::string> variables() const {
    std::set<std::string> out;
    for (const auto& t : t_)
      for (const auto& e : t.mono.entries()) out.insert(e.first);
    return out;
  }
  unsigned degree_in(const std::string& var) const {
    unsigned d = 0;
    for (const auto& t : t_) d = std::max(d, t.mono.degree_in(var));
    return d;
  }

  Poly operator-() const {
    Poly r = *this;
    for (auto& t : r.t_) t.coef = -t.coef;
    return r;
  }
  friend Poly operator+(const Poly& a, const Poly& b) {
    Poly r;
    r.t_.reserve(a.t_.size() + b.t_.size());
    auto i = a.t_.begin(), j = b.t_.begin();
    while (i != a.t_.end() || j != b.t_.end()) {
      int c = i == a.t_.end() ? -1 : j == b.t_.end() ? 1 : Monomial::compare(i->mono, j->mono);
      if (c > 0) {
        r.t_.push_back(*i++);
      } else if (c < 0) {
        r.t_.push_back(*j++);
      } else {
        CycNum s = i->coef + j->coef;
        if (!s.is_zero()) r.t_.push_back({i->mono, std::move(s)});
        ++i;
        ++j;
      }
    }
    return r;
  }
  friend Poly operator-(const Poly& a, const Poly& b) { return a + (-b); }
  friend Poly operator*(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    if (a.is_constant()) return b.scaled(a.t_[0].coef);
    if (b.is_constant()) return a.scaled(b.t_[0].coef);
    std::vector<Term> acc;
    acc.reserve(a.t_.size() * b.t_.size());
    for (const auto& x : a.t_)
      for (const auto& y : b.t_) acc.push_back({x.mono * y.mono, x.coef * y.coef});
    return from_unsorted(std::move(acc));
  }
  Poly scaled(const CycNum& c) const {
    if (c.is_zero()) return {};
    Poly r = *this;
    for (auto& t : r.t_) t.coef = t.coef * c;
    return r;
  }
  Poly times_monomial(const Monomial& m) const {
    Poly r = *this;
    for (auto& t : r.t_) t.mono = t.mono * m;
    return r;
  }

  friend bool operator==(const Poly& a, const Poly& b) {
    if (a.t_.size() != b.t_.size()) return false;
    for (std::size_t k = 0; k < a.t_.size(); ++k) {
      if (!(a.t_[k].mono == b.t_[k].mono) || a.t_[k].coef != b.t_[k].coef) return false;
    }
    return true;
  }

  Poly conj() const {
    Poly r = *this;
    for (auto& t : r.t_) t.coef = t.coef.conj();
    return r;
  }

  Poly derivative(const std::string& var) const {
    std::vector<Term> acc;
    for (const auto& t : t_) {
      const unsigned k = t.mono.degree_in(var);
      if (k == 0) continue;
      Monomial m = t.mono.without(var) * Monomial(var, k - 1);
      acc.push_back({std::move(m), t.coef * CycNum(static_cast<long>(k))});
    }
    return from_unsorted(std::move(acc));
  }

  /// Substitute rational values for some variables.
  Poly evaluate(const std::map<std::string, Rational>& values) const {
    std::vector<Term> acc;
    for (const auto& t : t_) {
      Monomial rest;
      Rational factor = 1;
      for (const auto& [v, k] : t.mono.entries()) {
        auto it = values.find(v);
        if (it == values.end()) {
          rest = rest * Monomial(v, k);
        } else {
          Rational p = 1;
          for (unsigned n = 0; n < k; ++n) p *= it->second;
          factor *= p;
        }
      }
      if (sgn(factor) != 0) acc.push_back({std::move(rest), t.coef * CycNum(factor)});
    }
    return from_unsorted(std::move(acc));
  }

  /// Coefficients with respect to one variable.
  std::map<unsigned, Poly> coefficients_in(const std::string& var) const {
    std::map<unsigned, std::vector<Term>> parts;
    for (const auto& t : t_) parts[t.mono.degree_in(var)].push_back({t.mono.without(var), t.coef});
    std::map<unsigned, Poly> out;
    for (auto& [k, terms] : parts) out[k] = from_unsorted(std::move(terms));
    return out;
  }

  /// Exact quotient; throws if b does not divide a.
  friend Poly exact_div(Poly a, const Poly& b) {
    if (b.is_zero()) throw ArithmeticError("polynomial division by zero");
    if (b.is_constant()) return a.scaled(b.t_[0].coef.inverse());
    const Term& lb = b.leading();
    const CycNum inv = lb.coef.inverse();
    std::vector<Term> q;
    while (!a.is_zero()) {
      Monomial m;
      if (!Monomial::divide(a.leading().mono, lb.mono, m))
        throw ArithmeticError("polynomial division is not exact");
      CycNum c = a.leading().coef * inv;
      a = a - b.times_monomial(m).scaled(c);
      q.push_back({std::move(m), std::move(c)});
    }
    return from_unsorted(std::move(q));
  }

  /// Scale so the leading coefficient is 1.
  Poly monic() const {
    if (is_zero()) return {};
    return scaled(leading().coef.inverse());
  }

  /// Greatest common divisor, normalized monic. Recursive primitive
  /// remainder sequences over Q(zeta)[other variables].
  friend Poly gcd(const Poly& a, const Poly& b) {
    if (a.is_zero()) return b.monic();
    if (b.is_zero()) return a.monic();
    if (a.is_constant() || b.is_constant()) return Poly(1);
    auto va = a.variables(), vb = b.variables();
    std::set<std::string> all = va;
    all.insert(vb.begin(), vb.end());
    const std::string x = *all.begin();
    if (!va.count(x)) return gcd(a, b.content_in(x));
    if (!vb.count(x)) return gcd(a.content_in(x), b);
    const Poly ca = a.content_in(x), cb = b.content_in(x);
    const Poly g = gcd(ca, cb);
    Poly A = exact_div(a, ca), B = exact_div(b, cb);
    if (A.degree_in(x) < B.degree_in(x)) std::swap(A, B);
    while (!B.is_zero()) {
      Poly R = pseudo_remainder(A, B, x);
      A = std::move(B);
      B = R.is_zero() ? Poly() : R.primitive_in(x);
    }
    return (g * A.primitive_in(x)).monic();
  }

  Poly content_in(const std::string& x) const {
    Poly c;
    for (const auto& [k, coeff] : coefficients_in(x)) {
      c = gcd(c, coeff);
      if (c.is_constant()) return Poly(1);
    }
    return c;
  }
  Poly primitive_in(const std::string& x) const { return exact_div(*this, content_in(x)); }

  std::string to_string() const {
    if (t_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& t : t_) {
      // Coefficients with a single power-basis component print inline with
      // their sign; anything else is parenthesized.
      const bool simple = t.coef.support_size() == 1;
      bool negative = false;
      if (simple)
        for (const auto& c : t.coef.coeffs())
          if (sgn(c) != 0) negative = sgn(c) < 0;
      if (first) {
        if (negative) os << "-";
      } else {
        os << (negative ? " - " : " + ");
      }
      first = false;
      std::string body;
      if (simple) {
        const CycNum mag = negative ? -t.coef : t.coef;
        if (!mag.is_one() || t.mono.is_one()) body = mag.to_string();
      } else if (t_.size() == 1 && t.mono.is_one()) {
        body = t.coef.to_string();
      } else {
        body = "(" + t.coef.to_string() + ")";
      }
      if (!t.mono.is_one()) {
        if (!body.empty()) body += "*";
        body += t.mono.to_string();
      }
      os << body;
    }
    return os.str();
  }

 private:
  static Poly from_unsorted(std::vector<Term> acc) {
    std::sort(acc.begin(), acc.end(),
              [](const Term& x, const Term& y) { return Monomial::compare(x.mono, y.mono) > 0; });
    Poly r;
    for (auto& t : acc) {
      if (!r.t_.empty() && r.t_.back().mono == t.mono) {
        r.t_.back().coef += t.coef;
        if (r.t_.back().coef.is_zero()) r.t_.pop_back();
      } else if (!t.coef.is_zero()) {
        r.t_.push_back(std::move(t));
      }
    }
    return r;
  }

  static Poly pseudo_remainder(Poly a, const Poly& b, const std::string& x) {
    const unsigned db = b.degree_in(x);
    const Poly lb = b.coefficients_in(x).rbegin()->second;
    while (!a.is_zero()) {
      const unsigned da = a.degree_in(x);
      if (da < db) break;
      const Poly la = a.coefficients_in(x).rbegin()->second;
      a = a * lb - (b * la).times_monomial(Monomial(x, da - db));
    }
    return a;
  }

  std::vector<Term> t_;
};

}  // namespace sktwb
