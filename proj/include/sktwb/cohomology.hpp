#pragma once

// Chevalley-Eilenberg cohomology of constant-coefficient algebras, finite
// groups acting on the coframe by pullback, and the cohomology of the
// subcomplex of invariant forms.

#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "sktwb/complex_structure.hpp"

namespace sktwb {

struct PoincarePoly {
  std::vector<long> b;  // b[k] = coefficient of t^k

  PoincarePoly() = default;
  explicit PoincarePoly(std::vector<long> coeffs) : b(std::move(coeffs)) { trim(); }

  long operator[](std::size_t k) const { return k < b.size() ? b[k] : 0; }
  int degree() const { return static_cast<int>(b.size()) - 1; }

  friend PoincarePoly operator+(const PoincarePoly& p, const PoincarePoly& q) {
    std::vector<long> c(std::max(p.b.size(), q.b.size()), 0);
    for (std::size_t k = 0; k < c.size(); ++k) c[k] = p[k] + q[k];
    return PoincarePoly(std::move(c));
  }
  friend PoincarePoly operator*(const PoincarePoly& p, const PoincarePoly& q) {
    if (p.b.empty() || q.b.empty()) return {};
    std::vector<long> c(p.b.size() + q.b.size() - 1, 0);
    for (std::size_t i = 0; i < p.b.size(); ++i)
      for (std::size_t j = 0; j < q.b.size(); ++j) c[i + j] += p.b[i] * q.b[j];
    return PoincarePoly(std::move(c));
  }
  friend PoincarePoly operator*(long s, const PoincarePoly& p) {
    std::vector<long> c = p.b;
    for (auto& x : c) x *= s;
    return PoincarePoly(std::move(c));
  }
  friend bool operator==(const PoincarePoly& p, const PoincarePoly& q) { return p.b == q.b; }

  long euler_characteristic() const {
    long e = 0;
    for (std::size_t k = 0; k < b.size(); ++k) e += (k % 2 ? -1 : 1) * b[k];
    return e;
  }

  /// "1 + 6t + 15t^2 + ..."
  std::string to_string() const {
    if (b.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (std::size_t k = 0; k < b.size(); ++k) {
      if (b[k] == 0) continue;
      long c = b[k];
      if (!first) os << (c < 0 ? " - " : " + ");
      else if (c < 0) os << "-";
      first = false;
      c = c < 0 ? -c : c;
      if (k == 0 || c != 1) os << c;
      if (k >= 1) os << "t";
      if (k >= 2) os << "^" << k;
    }
    return os.str();
  }
  /// "(1,6,15,20,15,6,1)" padded to `len` entries when given.
  std::string tuple(std::size_t len = 0) const {
    std::ostringstream os;
    os << "(";
    const std::size_t n = std::max(len, b.size());
    for (std::size_t k = 0; k < n; ++k) os << (k ? "," : "") << (*this)[k];
    os << ")";
    return os.str();
  }

 private:
  void trim() {
    while (!b.empty() && b.back() == 0) b.pop_back();
  }
};

namespace detail {

inline CycNum constant_coefficient(const Scalar& c) {
  if (!c.is_constant())
    throw InputError("cohomology needs constant coefficients; specialize first (found " + c.to_string() + ")");
  return c.constant();
}

inline std::map<Mask, std::size_t> index_of(const std::vector<Mask>& basis) {
  std::map<Mask, std::size_t> idx;
  for (std::size_t i = 0; i < basis.size(); ++i) idx.emplace(basis[i], i);
  return idx;
}

}  // namespace detail

/// Matrix of d : Lambda^k -> Lambda^{k+1} in the monomial bases (columns
/// are degree-k monomials in MaskOrder).
inline Matrix<CycNum> differential_matrix(const Algebra& alg, int k) {
  const auto src = monomials(alg.dim(), k), dst = monomials(alg.dim(), k + 1);
  const auto row = detail::index_of(dst);
  Matrix<CycNum> m(dst.size(), src.size());
  for (std::size_t c = 0; c < src.size(); ++c) {
    const Form image = alg.d(Form::monomial(alg.dim(), src[c]));
    for (const auto& [mask, coef] : image.terms()) m(row.at(mask), c) = detail::constant_coefficient(coef);
  }
  return m;
}

inline PoincarePoly betti(const Algebra& alg) {
  const int n = alg.dim();
  std::vector<std::size_t> rk(static_cast<std::size_t>(n + 1), 0);
  for (int k = 0; k < n; ++k) rk[static_cast<std::size_t>(k)] = rank(differential_matrix(alg, k));
  std::vector<long> b;
  for (int k = 0; k <= n; ++k) {
    long v = static_cast<long>(monomials(n, k).size()) - static_cast<long>(rk[static_cast<std::size_t>(k)]);
    if (k > 0) v -= static_cast<long>(rk[static_cast<std::size_t>(k - 1)]);
    b.push_back(v);
  }
  return PoincarePoly(std::move(b));
}

/// Pullback of a coframe map: g* e^i = sum_k P(i,k) e^k. Coefficients of
/// forms (parameters and function symbols) are left fixed.
inline Form pullback(const Matrix<Scalar>& p, const Form& a) {
  const int dim = a.dim();
  std::vector<Form> images;
  for (int i = 0; i < dim; ++i) {
    Form f(dim);
    for (int k = 0; k < dim; ++k) f.add_term(Mask(1) << k, p(static_cast<std::size_t>(i), static_cast<std::size_t>(k)));
    images.push_back(std::move(f));
  }
  return substitute(a, images, dim);
}

/// Real coframe matrix of a map given by its action on phi^1..phi^n:
/// g* phi^j = sum_k Q(j,k) psi^k over the complex basis psi = (phi, phibar).
inline Matrix<Scalar> pullback_from_coframe(const ComplexStructure& cs, const Matrix<Scalar>& q) {
  const auto n = static_cast<std::size_t>(cs.n()), dim = 2 * n;
  if (q.rows() != n || q.cols() != dim) throw InputError("coframe action needs n rows over 2n complex generators");
  Matrix<Scalar> full(dim, dim);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < dim; ++k) {
      full(j, k) = q(j, k);
      full(n + j, (k + n) % dim) = q(j, k).conj();
    }
  const Matrix<Scalar>& m = cs.basis_change();
  Matrix<Scalar> p = *inverse(m) * full * m;
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t k = 0; k < dim; ++k)
      if (p(i, k) != p(i, k).conj()) throw InputError("the action on phi does not come from a real coframe map");
  return p;
}

class GroupAction {
 public:
  GroupAction(std::vector<std::string> names, std::vector<Matrix<Scalar>> generators, std::size_t bound = 1024)
      : names_(std::move(names)), gens_(std::move(generators)) {
    if (names_.size() != gens_.size()) throw InputError("one name per group generator");
    if (gens_.empty()) throw InputError("a group action needs at least one generator");
    const std::size_t dim = gens_[0].rows();
    for (const auto& g : gens_) {
      if (g.rows() != dim || g.cols() != dim) throw InputError("group generators must be square of equal size");
      for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t k = 0; k < dim; ++k)
          if (!g(i, k).is_constant()) throw InputError("group generators must have constant entries");
      if (!inverse(g)) throw InputError("group generator is not invertible");
    }
    elements_.push_back(Matrix<Scalar>::identity(dim));
    for (std::size_t next = 0; next < elements_.size(); ++next) {
      for (const auto& g : gens_) {
        Matrix<Scalar> h = elements_[next] * g;
        bool seen = false;
        for (const auto& e : elements_)
          if (e == h) {
            seen = true;
            break;
          }
        if (seen) continue;
        if (elements_.size() >= bound)
          throw InputError("group closure exceeds the bound of " + std::to_string(bound) + " elements");
        elements_.push_back(std::move(h));
      }
    }
  }

  static GroupAction trivial(int dim) {
    return GroupAction({"id"}, {Matrix<Scalar>::identity(static_cast<std::size_t>(dim))});
  }

  const std::vector<std::string>& names() const noexcept { return names_; }
  const std::vector<Matrix<Scalar>>& generators() const noexcept { return gens_; }
  const std::vector<Matrix<Scalar>>& elements() const noexcept { return elements_; }
  std::size_t order() const noexcept { return elements_.size(); }
  int dim() const { return static_cast<int>(gens_[0].rows()); }

  /// Order of a group element (smallest k >= 1 with g^k = id).
  std::size_t element_order(const Matrix<Scalar>& g) const {
    const auto id = Matrix<Scalar>::identity(g.rows());
    Matrix<Scalar> p = g;
    for (std::size_t k = 1; k <= order(); ++k) {
      if (p == id) return k;
      p = p * g;
    }
    throw CheckFailure("group element has order exceeding the group order", "");
  }

 private:
  std::vector<std::string> names_;
  std::vector<Matrix<Scalar>> gens_;
  std::vector<Matrix<Scalar>> elements_;
};

struct ActionCheck {
  bool automorphism = true;
  std::optional<bool> holomorphic, isometric;
  std::string witness;  // first failure, printable
};

inline ActionCheck check_action(const GroupAction& act, const Algebra& alg,
                                const ComplexStructure* cs = nullptr, const Form* f = nullptr) {
  if (act.dim() != alg.dim()) throw InputError("group action and algebra have different dimensions");
  ActionCheck out;
  const auto names = real_names(alg.dim());
  for (std::size_t gi = 0; gi < act.generators().size(); ++gi) {
    const auto& g = act.generators()[gi];
    const std::string& gname = act.names()[gi];
    for (int i = 0; i < alg.dim(); ++i) {
      const Form e = alg.generator(i);
      Form lhs = pullback(g, alg.d(e)), rhs = alg.d(pullback(g, e));
      if (lhs != rhs && out.automorphism) {
        out.automorphism = false;
        out.witness = gname + "* does not commute with d on e" + std::to_string(i + 1) + ": " +
                      (lhs - rhs).to_string(names);
      }
    }
    if (cs) {
      if (!out.holomorphic) out.holomorphic = true;
      for (int j = 0; j < cs->n(); ++j) {
        BigradedForm img = cs->bigrade(pullback(g, cs->holomorphic_coframe()[static_cast<std::size_t>(j)]));
        if (!img.is_pure(1, 0) && *out.holomorphic) {
          out.holomorphic = false;
          if (out.witness.empty())
            out.witness = gname + "* phi" + std::to_string(j + 1) + " = " + img.to_string();
        }
      }
    }
    if (f) {
      if (!out.isometric) out.isometric = true;
      Form img = pullback(g, *f);
      if (img != *f && *out.isometric) {
        out.isometric = false;
        if (out.witness.empty()) out.witness = gname + "* F - F = " + (img - *f).to_string(names);
      }
    }
  }
  return out;
}

/// Matrix of Lambda^k(g*) on degree-k monomials (columns are sources).
inline Matrix<CycNum> pullback_matrix(const Matrix<Scalar>& g, int dim, int k) {
  const auto basis = monomials(dim, k);
  const auto row = detail::index_of(basis);
  Matrix<CycNum> m(basis.size(), basis.size());
  for (std::size_t c = 0; c < basis.size(); ++c) {
    const Form image = pullback(g, Form::monomial(dim, basis[c]));
    for (const auto& [mask, coef] : image.terms()) m(row.at(mask), c) = detail::constant_coefficient(coef);
  }
  return m;
}

/// Averaging projector (1/|G|) sum_g Lambda^k(g*).
inline Matrix<CycNum> averaging_projector(const GroupAction& act, int k) {
  const int dim = act.dim();
  const std::size_t size = monomials(dim, k).size();
  Matrix<CycNum> p(size, size);
  for (const auto& g : act.elements()) p = p + pullback_matrix(g, dim, k);
  return p.scaled(CycNum(Rational(1, static_cast<long>(act.order()))));
}

/// Betti numbers of the subcomplex of G-invariant forms.
inline PoincarePoly invariant_betti(const Algebra& alg, const GroupAction& act) {
  if (!check_action(act, alg).automorphism)
    throw InputError("the group action does not commute with d");
  const int n = alg.dim();
  std::vector<long> b;
  std::size_t prev_rank = 0;
  for (int k = 0; k <= n; ++k) {
    Matrix<CycNum> p = averaging_projector(act, k);
    const std::size_t dim_inv = rank(p);
    const std::size_t rk = k < n ? rank(differential_matrix(alg, k) * p) : 0;
    b.push_back(static_cast<long>(dim_inv) - static_cast<long>(rk) - static_cast<long>(prev_rank));
    prev_rank = rk;
  }
  return PoincarePoly(std::move(b));
}

}  // namespace sktwb
