#pragma once

// Sparse elements of an exterior algebra on at most 32 generators. A basis
// monomial e^{i1} ^ ... ^ e^{ik} (i1 < ... < ik) is a bitmask; the
// coefficient map never stores zeros.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "sktwb/scalar.hpp"

namespace sktwb {

using Mask = std::uint32_t;

inline int degree_of(Mask m) { return std::popcount(m); }

inline std::vector<int> indices_of(Mask m) {
  std::vector<int> out;
  while (m) {
    out.push_back(std::countr_zero(m));
    m &= m - 1;
  }
  return out;
}

inline Mask mask_of(const std::vector<int>& idx) {
  Mask m = 0;
  for (int i : idx) m |= Mask(1) << i;
  return m;
}

/// Degree first, then lexicographic on the sorted index lists.
struct MaskOrder {
  bool operator()(Mask a, Mask b) const {
    const int da = degree_of(a), db = degree_of(b);
    if (da != db) return da < db;
    const Mask x = a ^ b;
    if (!x) return false;
    return (a & (x & (~x + 1))) != 0;
  }
};

/// Sign of e_a ^ e_b relative to e_{a|b}; 0 when the monomials overlap.
inline int wedge_sign(Mask a, Mask b) {
  if (a & b) return 0;
  int swaps = 0;
  for (Mask rest = b; rest; rest &= rest - 1) {
    const int j = std::countr_zero(rest);
    const Mask above = j >= 31 ? 0 : ~((Mask(2) << j) - 1);
    swaps += std::popcount(a & above);
  }
  return (swaps & 1) ? -1 : 1;
}

/// Basis of all degree-k monomials on n generators, in MaskOrder.
inline std::vector<Mask> monomials(int n, int k) {
  std::vector<Mask> out;
  if (k < 0 || k > n) return out;
  for (Mask m = 0; m < (Mask(1) << n); ++m)
    if (degree_of(m) == k) out.push_back(m);
  std::sort(out.begin(), out.end(), MaskOrder{});
  return out;
}

class Form {
 public:
  using Terms = std::map<Mask, Scalar, MaskOrder>;

  Form() = default;
  explicit Form(int dim) : dim_(dim) {
    if (dim < 0 || dim > 32) throw InputError("exterior algebra dimension must be in [0, 32]");
  }
  static Form generator(int dim, int k) {
    if (k < 0 || k >= dim) throw InputError("generator index out of range");
    Form f(dim);
    f.t_.emplace(Mask(1) << k, Scalar(1));
    return f;
  }
  static Form constant(int dim, const Scalar& c) {
    Form f(dim);
    f.add_term(0, c);
    return f;
  }
  static Form monomial(int dim, Mask m, const Scalar& c = Scalar(1)) {
    Form f(dim);
    f.add_term(m, c);
    return f;
  }

  int dim() const noexcept { return dim_; }
  const Terms& terms() const noexcept { return t_; }
  bool is_zero() const noexcept { return t_.empty(); }

  void add_term(Mask m, const Scalar& c) {
    if (c.is_zero()) return;
    auto [it, inserted] = t_.emplace(m, c);
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero()) t_.erase(it);
    }
  }

  Scalar coefficient(Mask m) const {
    auto it = t_.find(m);
    return it == t_.end() ? Scalar() : it->second;
  }

  /// Degree of a homogeneous form; -1 for zero or mixed degree.
  int degree() const {
    if (t_.empty()) return -1;
    const int d = degree_of(t_.begin()->first);
    for (const auto& [m, c] : t_)
      if (degree_of(m) != d) return -1;
    return d;
  }
  bool is_homogeneous(int k) const {
    for (const auto& [m, c] : t_)
      if (degree_of(m) != k) return false;
    return true;
  }
  Form component(int k) const {
    Form f(dim_);
    for (const auto& [m, c] : t_)
      if (degree_of(m) == k) f.t_.emplace(m, c);
    return f;
  }

  template <class F>
  Form map_coefficients(F&& fn) const {
    Form f(dim_);
    for (const auto& [m, c] : t_) f.add_term(m, fn(c));
    return f;
  }

  Form operator-() const {
    Form f = *this;
    for (auto& [m, c] : f.t_) c = -c;
    return f;
  }
  Form& operator+=(const Form& o) {
    check_dim(o);
    for (const auto& [m, c] : o.t_) add_term(m, c);
    return *this;
  }
  Form& operator-=(const Form& o) {
    check_dim(o);
    for (const auto& [m, c] : o.t_) add_term(m, -c);
    return *this;
  }
  friend Form operator+(Form a, const Form& b) { return a += b; }
  friend Form operator-(Form a, const Form& b) { return a -= b; }
  friend Form operator*(const Scalar& s, const Form& a) {
    if (s.is_zero()) return Form(a.dim_);
    Form f(a.dim_);
    for (const auto& [m, c] : a.t_) f.add_term(m, s * c);
    return f;
  }
  friend Form operator*(const Form& a, const Scalar& s) { return s * a; }

  friend Form wedge(const Form& a, const Form& b) {
    a.check_dim(b);
    Form f(a.dim_);
    for (const auto& [ma, ca] : a.t_)
      for (const auto& [mb, cb] : b.t_) {
        const int s = wedge_sign(ma, mb);
        if (s == 0) continue;
        Scalar c = ca * cb;
        f.add_term(ma | mb, s > 0 ? c : -c);
      }
    return f;
  }

  friend bool operator==(const Form& a, const Form& b) { return a.dim_ == b.dim_ && a.t_ == b.t_; }
  friend bool operator!=(const Form& a, const Form& b) { return !(a == b); }

  /// Canonical text using the given generator names.
  std::string to_string(const std::vector<std::string>& names) const {
    if (t_.empty()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [m, c] : t_) {
      std::string mono;
      for (int i : indices_of(m)) {
        if (!mono.empty()) mono += "^";
        mono += names.at(static_cast<std::size_t>(i));
      }
      std::string coef = c.to_string();
      bool negative = false;
      if (is_inline(c)) {
        if (coef[0] == '-') {
          negative = true;
          coef.erase(0, 1);
        }
        if (coef == "1" && !mono.empty()) coef.clear();
      } else {
        coef = "(" + coef + ")";
      }
      out += first ? (negative ? "-" : "") : (negative ? " - " : " + ");
      first = false;
      out += coef;
      if (!mono.empty()) out += (coef.empty() ? "" : "*") + mono;
    }
    return out;
  }

 private:
  static bool is_inline(const Scalar& c) {
    if (!c.is_polynomial()) return false;
    const auto& t = c.numerator().terms();
    return t.size() == 1 && t[0].coef.support_size() == 1;
  }
  void check_dim(const Form& o) const {
    if (o.dim_ != dim_) throw InputError("forms live in exterior algebras of different dimension");
  }

  int dim_ = 0;
  Terms t_;
};

inline std::vector<std::string> real_names(int dim, const std::string& stem = "e") {
  std::vector<std::string> n;
  for (int i = 1; i <= dim; ++i) n.push_back(stem + std::to_string(i));
  return n;
}

/// phi1..phin followed by phibar1..phibarn.
inline std::vector<std::string> complex_names(int n) {
  std::vector<std::string> out = real_names(n, "phi");
  for (int i = 1; i <= n; ++i) out.push_back("phibar" + std::to_string(i));
  return out;
}

/// Algebra homomorphism determined by images of the generators:
/// e^i -> images[i] (1-forms in an algebra of dimension target_dim).
inline Form substitute(const Form& a, const std::vector<Form>& images, int target_dim) {
  if (static_cast<int>(images.size()) != a.dim())
    throw InputError("substitution needs one image per generator");
  std::map<Mask, Form> memo;
  std::function<const Form&(Mask)> image = [&](Mask m) -> const Form& {
    auto it = memo.find(m);
    if (it != memo.end()) return it->second;
    Form r(target_dim);
    if (m == 0) {
      r = Form::constant(target_dim, Scalar(1));
    } else {
      const int low = std::countr_zero(m);
      r = wedge(images[static_cast<std::size_t>(low)], image(m & (m - 1)));
    }
    return memo.emplace(m, std::move(r)).first->second;
  };
  Form out(target_dim);
  for (const auto& [m, c] : a.terms()) out += c * image(m);
  return out;
}

}  // namespace sktwb
