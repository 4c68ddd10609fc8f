#pragma once

// Coefficient ring of the workbench: rational functions over Q(zeta_N) in
// real parameters (t, s, ...) and formal function-derivative symbols
// (f, f_3, f_36, ...), always kept in lowest terms with a monic
// denominator so that equality is structural.

#include <algorithm>
#include <cctype>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "sktwb/polynomial.hpp"

namespace sktwb {

class Scalar {
 public:
  Scalar() = default;
  Scalar(long v) : num_(v) {}                                   // NOLINT
  Scalar(const Rational& v) : num_(CycNum(v)) {}                // NOLINT
  Scalar(const CycNum& v) : num_(v) {}                          // NOLINT
  Scalar(Poly num) : num_(std::move(num)) {}                    // NOLINT
  Scalar(Poly num, Poly den) : num_(std::move(num)), den_(std::move(den)) { normalize(); }

  static Scalar variable(const std::string& name) { return Scalar(Poly::variable(name)); }

  const Poly& numerator() const noexcept { return num_; }
  const Poly& denominator() const noexcept { return den_; }

  bool is_zero() const noexcept { return num_.is_zero(); }
  bool is_polynomial() const noexcept { return den_.is_constant(); }
  bool is_constant() const noexcept { return num_.is_constant() && den_.is_constant(); }
  /// Value in Q(zeta) of a constant scalar.
  CycNum constant() const {
    if (!is_constant()) throw ArithmeticError("scalar is not a constant: " + to_string());
    return num_.constant() / den_.constant();
  }
  bool is_rational() const { return is_constant() && constant().is_rational(); }
  Rational rational() const { return constant().rational(); }

  std::set<std::string> variables() const {
    auto v = num_.variables();
    auto w = den_.variables();
    v.insert(w.begin(), w.end());
    return v;
  }

  Scalar operator-() const {
    Scalar r = *this;
    r.num_ = -r.num_;
    return r;
  }
  friend Scalar operator+(const Scalar& a, const Scalar& b) {
    if (a.den_ == b.den_) return Scalar(a.num_ + b.num_, a.den_);
    return Scalar(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
  }
  friend Scalar operator-(const Scalar& a, const Scalar& b) { return a + (-b); }
  friend Scalar operator*(const Scalar& a, const Scalar& b) {
    if (a.is_zero() || b.is_zero()) return {};
    if (a.den_.is_constant() && b.den_.is_constant()) return Scalar(a.num_ * b.num_);
    return Scalar(a.num_ * b.num_, a.den_ * b.den_);
  }
  friend Scalar operator/(const Scalar& a, const Scalar& b) {
    if (b.is_zero()) throw ArithmeticError("division by zero");
    return Scalar(a.num_ * b.den_, a.den_ * b.num_);
  }
  Scalar& operator+=(const Scalar& o) { return *this = *this + o; }
  Scalar& operator-=(const Scalar& o) { return *this = *this - o; }
  Scalar& operator*=(const Scalar& o) { return *this = *this * o; }
  Scalar& operator/=(const Scalar& o) { return *this = *this / o; }

  friend bool operator==(const Scalar& a, const Scalar& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }

  /// Complex conjugation; all variables are real.
  Scalar conj() const { return Scalar(num_.conj(), den_.conj()); }

  Scalar real_part() const { return (*this + conj()) / Scalar(2); }

  Scalar derivative(const std::string& var) const {
    if (den_.is_constant()) return Scalar(num_.derivative(var));
    return Scalar(num_.derivative(var) * den_ - num_ * den_.derivative(var), den_ * den_);
  }

  Scalar evaluate(const std::map<std::string, Rational>& values) const {
    Poly n = num_.evaluate(values), d = den_.evaluate(values);
    if (d.is_zero()) throw ArithmeticError("division by zero after specialization of " + to_string());
    return Scalar(std::move(n), std::move(d));
  }

  /// True when printing needs no parentheses inside a product.
  bool is_atomic() const {
    if (!den_.is_constant() || num_.terms().size() != 1) return false;
    return num_.terms()[0].coef.is_rational();
  }

  std::string to_string() const {
    if (den_.is_constant()) return num_.to_string();
    auto wrap = [](const Poly& p) {
      std::string s = p.to_string();
      if (p.terms().size() == 1 && p.terms()[0].coef.is_rational() &&
          s.find('/') == std::string::npos && s[0] != '-')
        return s;
      return "(" + s + ")";
    };
    return wrap(num_) + "/" + wrap(den_);
  }

 private:
  void normalize() {
    if (den_.is_zero()) throw ArithmeticError("division by zero");
    if (num_.is_zero()) {
      den_ = Poly(1);
      return;
    }
    if (!den_.is_constant()) {
      Poly g = gcd(num_, den_);
      if (!g.is_constant()) {
        num_ = exact_div(num_, g);
        den_ = exact_div(den_, g);
      }
    }
    const CycNum lc = den_.leading().coef;
    if (!lc.is_one()) {
      const CycNum inv = lc.inverse();
      num_ = num_.scaled(inv);
      den_ = den_.scaled(inv);
    }
  }

  Poly num_;
  Poly den_ = Poly(1);
};

inline bool is_zero(const Scalar& x) { return x.is_zero(); }

/// Declaration of a formal real function of some base coordinates.
struct FunctionSymbol {
  std::string name;
  std::vector<int> depends_on;  // 1-based coordinate indices, sorted
  std::vector<std::string> metadata;  // e.g. "even", "periodic"; not enforced
};

struct RingDescriptor {
  int cyclotomic_order = 1;
  std::vector<std::string> parameters;
  std::vector<FunctionSymbol> functions;
  std::vector<std::string> assumptions;  // free-text side conditions like "s != 0"
};

/// Factory and context for scalars of one manifest: knows which variables
/// are parameters and how the coordinate derivation acts on function
/// symbols.
class Ring {
 public:
  static std::shared_ptr<const Ring> make(RingDescriptor desc) {
    if (desc.cyclotomic_order < 1) throw InputError("cyclotomic order must be >= 1");
    std::set<std::string> seen;
    auto check_name = [&](const std::string& n, const char* what) {
      if (n.empty() || !(std::isalpha(static_cast<unsigned char>(n[0]))))
        throw InputError(std::string("invalid ") + what + " name '" + n + "'");
      for (char c : n)
        if (!std::isalnum(static_cast<unsigned char>(c)))
          throw InputError(std::string("invalid ") + what + " name '" + n + "'");
      if (is_reserved(n)) throw InputError(std::string(what) + " name '" + n + "' is reserved");
      if (!seen.insert(n).second) throw InputError("duplicate symbol name '" + n + "'");
    };
    for (const auto& p : desc.parameters) check_name(p, "parameter");
    for (auto& f : desc.functions) {
      check_name(f.name, "function");
      std::sort(f.depends_on.begin(), f.depends_on.end());
      f.depends_on.erase(std::unique(f.depends_on.begin(), f.depends_on.end()), f.depends_on.end());
      for (int j : f.depends_on)
        if (j < 1) throw InputError("function '" + f.name + "' depends on invalid coordinate");
    }
    return std::shared_ptr<const Ring>(new Ring(std::move(desc)));
  }

  static bool is_reserved(const std::string& n) {
    static const std::set<std::string> words = {"I", "zeta", "xi", "J", "H", "d", "identity"};
    if (words.count(n)) return true;
    auto numbered = [&](const std::string& prefix) {
      if (n.size() <= prefix.size() || n.compare(0, prefix.size(), prefix) != 0) return false;
      return std::all_of(n.begin() + static_cast<long>(prefix.size()), n.end(),
                         [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
    };
    return numbered("e") || numbered("phi") || numbered("phibar") || numbered("u");
  }

  const RingDescriptor& descriptor() const noexcept { return desc_; }
  const CyclotomicField& field() const noexcept { return *field_; }
  int cyclotomic_order() const noexcept { return desc_.cyclotomic_order; }

  Scalar zeta(long power = 1) const { return Scalar(CycNum::zeta_power(*field_, power)); }
  Scalar imaginary_unit() const {
    if (!field_->has_i()) throw InputError("I requires the cyclotomic order to be divisible by 4");
    return zeta(desc_.cyclotomic_order / 4);
  }
  Scalar cube_root_of_unity() const {
    if (!field_->has_cube_root())
      throw InputError("xi requires the cyclotomic order to be divisible by 3");
    return zeta(desc_.cyclotomic_order / 3);
  }

  bool is_parameter(const std::string& name) const {
    return std::find(desc_.parameters.begin(), desc_.parameters.end(), name) !=
           desc_.parameters.end();
  }
  Scalar parameter(const std::string& name) const {
    if (!is_parameter(name)) throw InputError("unknown parameter '" + name + "'");
    return Scalar::variable(name);
  }

  const FunctionSymbol* find_function(const std::string& name) const {
    for (const auto& f : desc_.functions)
      if (f.name == name) return &f;
    return nullptr;
  }

  /// Canonical variable name of the partial derivative of f along the
  /// multiset `partials` of coordinates.
  static std::string derivative_name(const std::string& f, std::vector<int> partials) {
    if (partials.empty()) return f;
    std::sort(partials.begin(), partials.end());
    const bool compact = std::all_of(partials.begin(), partials.end(), [](int j) { return j < 10; });
    std::string s = f + "_";
    for (std::size_t k = 0; k < partials.size(); ++k) {
      if (!compact && k > 0) s += "_";
      s += std::to_string(partials[k]);
    }
    return s;
  }

  /// Split a variable name into (function, partials) if it names a function symbol.
  std::optional<std::pair<const FunctionSymbol*, std::vector<int>>> function_variable(
      const std::string& var) const {
    const auto us = var.find('_');
    const FunctionSymbol* f = find_function(var.substr(0, us));
    if (!f) return std::nullopt;
    std::vector<int> partials;
    if (us != std::string::npos) {
      std::string rest = var.substr(us + 1);
      if (rest.empty()) return std::nullopt;
      if (rest.find('_') == std::string::npos) {
        for (char c : rest) {
          if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
          partials.push_back(c - '0');
        }
      } else {
        std::size_t pos = 0;
        while (pos <= rest.size()) {
          auto next = rest.find('_', pos);
          std::string tok = rest.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
          if (tok.empty() || !std::all_of(tok.begin(), tok.end(),
                                          [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
            return std::nullopt;
          partials.push_back(std::stoi(tok));
          if (next == std::string::npos) break;
          pos = next + 1;
        }
      }
    }
    for (int j : partials)
      if (!std::binary_search(f->depends_on.begin(), f->depends_on.end(), j)) return std::nullopt;
    std::sort(partials.begin(), partials.end());
    return std::make_pair(f, partials);
  }

  /// The function symbol f_I as a scalar; I is normalized as a multiset.
  Scalar function(const std::string& name, std::vector<int> partials = {}) const {
    const FunctionSymbol* f = find_function(name);
    if (!f) throw InputError("unknown function symbol '" + name + "'");
    for (int j : partials)
      if (!std::binary_search(f->depends_on.begin(), f->depends_on.end(), j))
        throw InputError("function '" + name + "' does not depend on x" + std::to_string(j));
    return Scalar::variable(derivative_name(name, std::move(partials)));
  }

  /// Coordinate decomposition of dx: list of (j, dx/dx_j), j ascending.
  /// Parameters and constants have zero derivative.
  std::vector<std::pair<int, Scalar>> derive(const Scalar& x) const {
    std::map<int, Scalar> parts;
    for (const auto& var : x.variables()) {
      auto fv = function_variable(var);
      if (!fv) continue;
      const Scalar dv = x.derivative(var);
      if (dv.is_zero()) continue;
      for (int j : fv->first->depends_on) {
        auto partials = fv->second;
        partials.push_back(j);
        parts[j] += dv * Scalar::variable(derivative_name(fv->first->name, partials));
      }
    }
    std::vector<std::pair<int, Scalar>> out;
    for (auto& [j, v] : parts)
      if (!v.is_zero()) out.emplace_back(j, std::move(v));
    return out;
  }

  /// Substitute rational values for parameters. Every parameter occurring
  /// in x must be assigned.
  Scalar specialize(const Scalar& x, const std::map<std::string, Rational>& assignment) const {
    for (const auto& var : x.variables())
      if (is_parameter(var) && !assignment.count(var))
        throw InputError("no value assigned to parameter '" + var + "'");
    return x.evaluate(assignment);
  }

  /// Partial specialization: assign only what is given.
  Scalar substitute(const Scalar& x, const std::map<std::string, Rational>& assignment) const {
    return x.evaluate(assignment);
  }


 private:
  explicit Ring(RingDescriptor d)
      : desc_(std::move(d)), field_(&CyclotomicField::get(desc_.cyclotomic_order)) {}

  RingDescriptor desc_;
  const CyclotomicField* field_;
};

}  // namespace sktwb
