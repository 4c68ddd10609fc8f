#pragma once

// Exact arithmetic in the cyclotomic field Q(zeta_N), represented in the
// power basis 1, zeta, ..., zeta^(phi(N)-1) modulo the N-th cyclotomic
// polynomial.

#include <gmpxx.h>

#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "sktwb/error.hpp"

namespace sktwb {

using Rational = mpq_class;

namespace upoly {

// Dense univariate polynomials over Q, coefficients low to high.
using Coeffs = std::vector<Rational>;

inline void trim(Coeffs& p) {
  while (!p.empty() && sgn(p.back()) == 0) p.pop_back();
}

inline Coeffs mul(const Coeffs& a, const Coeffs& b) {
  if (a.empty() || b.empty()) return {};
  Coeffs r(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (sgn(a[i]) == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  }
  trim(r);
  return r;
}

inline Coeffs sub(Coeffs a, const Coeffs& b) {
  if (a.size() < b.size()) a.resize(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) a[i] -= b[i];
  trim(a);
  return a;
}

/// Quotient and remainder; b must be nonzero.
inline std::pair<Coeffs, Coeffs> divmod(Coeffs a, const Coeffs& b) {
  trim(a);
  Coeffs q;
  if (a.size() >= b.size()) q.assign(a.size() - b.size() + 1, Rational(0));
  while (!a.empty() && a.size() >= b.size()) {
    const std::size_t shift = a.size() - b.size();
    Rational factor = a.back() / b.back();
    q[shift] = factor;
    for (std::size_t i = 0; i < b.size(); ++i) a[i + shift] -= factor * b[i];
    trim(a);
  }
  trim(q);
  return {q, a};
}

}  // namespace upoly

/// The field Q(zeta_N). Instances are interned per N and live for the
/// whole program, so raw pointers to them are stable.
class CyclotomicField {
 public:
  static const CyclotomicField& get(int order) {
    if (order < 1) throw InputError("cyclotomic order must be >= 1");
    static std::mutex mutex;
    static std::map<int, std::unique_ptr<CyclotomicField>> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(order);
    if (it == cache.end()) {
      it = cache.emplace(order, std::unique_ptr<CyclotomicField>(new CyclotomicField(order)))
               .first;
    }
    return *it->second;
  }

  int order() const noexcept { return order_; }
  int degree() const noexcept { return degree_; }
  const upoly::Coeffs& modulus() const noexcept { return modulus_; }

  /// zeta^k reduced into the power basis, for any integer k.
  const upoly::Coeffs& power(long k) const {
    long r = k % order_;
    if (r < 0) r += order_;
    return powers_[static_cast<std::size_t>(r)];
  }

  /// Reduce an arbitrary polynomial in zeta into a length-degree vector.
  std::vector<Rational> reduce(const upoly::Coeffs& p) const {
    std::vector<Rational> out(static_cast<std::size_t>(degree_));
    for (std::size_t k = 0; k < p.size(); ++k) {
      if (sgn(p[k]) == 0) continue;
      if (k < out.size()) {
        out[k] += p[k];
        continue;
      }
      const upoly::Coeffs& red = power(static_cast<long>(k));
      for (std::size_t j = 0; j < red.size(); ++j) out[j] += p[k] * red[j];
    }
    return out;
  }

  bool has_i() const noexcept { return order_ % 4 == 0; }
  bool has_cube_root() const noexcept { return order_ % 3 == 0; }

 private:
  explicit CyclotomicField(int order) : order_(order) {
    modulus_ = cyclotomic_polynomial(order);
    degree_ = static_cast<int>(modulus_.size()) - 1;
    powers_.reserve(static_cast<std::size_t>(order));
    for (int k = 0; k < order; ++k) {
      upoly::Coeffs xk(static_cast<std::size_t>(k) + 1);
      xk[static_cast<std::size_t>(k)] = 1;
      auto rem = upoly::divmod(xk, modulus_).second;
      rem.resize(static_cast<std::size_t>(degree_));
      powers_.push_back(std::move(rem));
    }
  }

  static upoly::Coeffs cyclotomic_polynomial(int n) {
    upoly::Coeffs p(static_cast<std::size_t>(n) + 1);
    p[0] = -1;
    p[static_cast<std::size_t>(n)] = 1;
    for (int d = 1; d < n; ++d) {
      if (n % d != 0) continue;
      p = upoly::divmod(p, cyclotomic_polynomial(d)).first;
    }
    return p;
  }

  int order_;
  int degree_ = 0;
  upoly::Coeffs modulus_;
  std::vector<upoly::Coeffs> powers_;
};

/// An element of Q(zeta_N). Elements of Q(zeta_1) = Q embed into every
/// field and are promoted on mixed arithmetic; other mixtures throw.
class CycNum {
 public:
  CycNum() : field_(&CyclotomicField::get(1)), c_(1) {}
  CycNum(long v) : field_(&CyclotomicField::get(1)), c_{Rational(v)} {}  // NOLINT
  CycNum(const Rational& v) : field_(&CyclotomicField::get(1)), c_{v} {}  // NOLINT
  CycNum(const CyclotomicField& f, std::vector<Rational> c) : field_(&f), c_(std::move(c)) {
    c_.resize(static_cast<std::size_t>(f.degree()));
  }

  static CycNum zeta_power(const CyclotomicField& f, long k) { return CycNum(f, f.power(k)); }

  const CyclotomicField& field() const noexcept { return *field_; }
  const std::vector<Rational>& coeffs() const noexcept { return c_; }

  bool is_zero() const {
    for (const auto& x : c_)
      if (sgn(x) != 0) return false;
    return true;
  }
  bool is_rational() const {
    for (std::size_t k = 1; k < c_.size(); ++k)
      if (sgn(c_[k]) != 0) return false;
    return true;
  }
  Rational rational() const {
    if (!is_rational()) throw ArithmeticError("cyclotomic number is not rational");
    return c_[0];
  }
  bool is_one() const { return is_rational() && c_[0] == 1; }

  /// Complex conjugation zeta -> zeta^(N-1).
  CycNum conj() const {
    if (field_->order() <= 2) return *this;
    std::vector<Rational> out(c_.size());
    for (std::size_t k = 0; k < c_.size(); ++k) {
      if (sgn(c_[k]) == 0) continue;
      const auto& img = field_->power(-static_cast<long>(k));
      for (std::size_t j = 0; j < img.size(); ++j) out[j] += c_[k] * img[j];
    }
    return CycNum(*field_, std::move(out));
  }

  CycNum inverse() const {
    if (is_zero()) throw ArithmeticError("division by zero in Q(zeta)");
    if (is_rational()) return CycNum(*field_, {Rational(1) / c_[0]});
    // Extended Euclid in Q[x] against the cyclotomic modulus.
    upoly::Coeffs r0 = field_->modulus(), r1 = c_;
    upoly::trim(r1);
    upoly::Coeffs s0, s1{Rational(1)};
    while (!(r1.size() == 1)) {
      auto [q, r] = upoly::divmod(r0, r1);
      auto s = upoly::sub(s0, upoly::mul(q, s1));
      r0 = std::move(r1);
      r1 = std::move(r);
      s0 = std::move(s1);
      s1 = std::move(s);
    }
    for (auto& x : s1) x /= r1[0];
    return CycNum(*field_, field_->reduce(s1));
  }

  CycNum operator-() const {
    CycNum r = *this;
    for (auto& x : r.c_) x = -x;
    return r;
  }
  CycNum& operator+=(const CycNum& o) {
    unify(o);
    if (o.field_ == field_) {
      for (std::size_t k = 0; k < c_.size(); ++k) c_[k] += o.c_[k];
    } else {
      c_[0] += o.c_[0];
    }
    return *this;
  }
  CycNum& operator-=(const CycNum& o) { return *this += -o; }
  CycNum& operator*=(const CycNum& o) {
    *this = *this * o;
    return *this;
  }
  CycNum& operator/=(const CycNum& o) { return *this *= o.inverse(); }

  friend CycNum operator+(CycNum a, const CycNum& b) { return a += b; }
  friend CycNum operator-(CycNum a, const CycNum& b) { return a -= b; }
  friend CycNum operator/(CycNum a, const CycNum& b) { return a /= b; }
  friend CycNum operator*(const CycNum& a, const CycNum& b) {
    if (b.field_->order() == 1 || a.field_->order() == 1) {
      const CycNum& scalar = b.field_->order() == 1 ? b : a;
      CycNum r = b.field_->order() == 1 ? a : b;
      for (auto& x : r.c_) x *= scalar.c_[0];
      return r;
    }
    if (a.field_ != b.field_) throw ArithmeticError("mixing different cyclotomic fields");
    upoly::Coeffs prod(a.c_.size() + b.c_.size());
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      if (sgn(a.c_[i]) == 0) continue;
      for (std::size_t j = 0; j < b.c_.size(); ++j) prod[i + j] += a.c_[i] * b.c_[j];
    }
    return CycNum(*a.field_, a.field_->reduce(prod));
  }

  friend bool operator==(const CycNum& a, const CycNum& b) {
    if (a.field_ == b.field_) return a.c_ == b.c_;
    return (a - b).is_zero();
  }
  friend bool operator!=(const CycNum& a, const CycNum& b) { return !(a == b); }

  /// Canonical text: sum of c*zeta^k in the power basis, with zeta^(N/4)
  /// spelled I when it is a basis element.
  std::string to_string() const {
    std::ostringstream os;
    bool first = true;
    for (std::size_t k = 0; k < c_.size(); ++k) {
      const Rational& c = c_[k];
      if (sgn(c) == 0) continue;
      Rational mag = abs(c);
      if (first) {
        if (sgn(c) < 0) os << "-";
      } else {
        os << (sgn(c) < 0 ? " - " : " + ");
      }
      first = false;
      if (k == 0) {
        os << mag.get_str();
        continue;
      }
      if (mag != 1) os << mag.get_str() << "*";
      os << basis_name(k);
    }
    if (first) os << "0";
    return os.str();
  }

  /// Number of nonzero power-basis coordinates.
  int support_size() const {
    int n = 0;
    for (const auto& x : c_)
      if (sgn(x) != 0) ++n;
    return n;
  }

 private:
  std::string basis_name(std::size_t k) const {
    const int n = field_->order();
    if (n % 4 == 0 && static_cast<int>(k) == n / 4) return "I";
    if (k == 1) return "zeta";
    return "zeta^" + std::to_string(k);
  }

  void unify(const CycNum& o) {
    if (field_ == o.field_ || o.field_->order() == 1) return;
    if (field_->order() == 1) {
      Rational v = c_[0];
      field_ = o.field_;
      c_.assign(static_cast<std::size_t>(field_->degree()), Rational(0));
      c_[0] = v;
      return;
    }
    throw ArithmeticError("mixing different cyclotomic fields");
  }

  const CyclotomicField* field_;
  std::vector<Rational> c_;
};

inline bool is_zero(const CycNum& x) { return x.is_zero(); }
inline bool is_zero(const Rational& x) { return sgn(x) == 0; }

}  // namespace sktwb
