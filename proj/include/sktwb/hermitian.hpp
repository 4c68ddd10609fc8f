#pragma once

// Hermitian metrics compatible with a complex structure: the fundamental
// form F = (i/2) sum H_jk phi^j ^ phibar^k, the induced real inner product,
// the exact Hodge star, the Lee form and the Kahler / strong KT / standard /
// balanced predicates.

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sktwb/complex_structure.hpp"

namespace sktwb {

/// Leading principal minors of a square matrix, or nullopt when some minor
/// is not a rational constant.
inline std::optional<std::vector<Rational>> leading_principal_minors(const Matrix<Scalar>& h) {
  std::vector<Rational> out;
  for (std::size_t k = 1; k <= h.rows(); ++k) {
    Matrix<Scalar> sub(k, k);
    for (std::size_t a = 0; a < k; ++a)
      for (std::size_t b = 0; b < k; ++b) sub(a, b) = h(a, b);
    Scalar d = determinant(sub);
    if (!d.is_rational()) return std::nullopt;
    out.push_back(d.rational());
  }
  return out;
}

inline bool all_positive(const std::vector<Rational>& xs) {
  for (const auto& x : xs)
    if (sgn(x) <= 0) return false;
  return true;
}

class HermitianMetric {
 public:
  HermitianMetric(const ComplexStructure& cs, Matrix<Scalar> h) : cs_(cs), h_(std::move(h)) {
    const auto n = static_cast<std::size_t>(cs_.n());
    if (h_.rows() != n || h_.cols() != n) throw InputError("metric matrix H must be n x n");
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        if (h_(j, k) != h_(k, j).conj())
          throw InputError("H is not Hermitian at entry (" + std::to_string(j + 1) + "," +
                           std::to_string(k + 1) + ")");
  }
  static HermitianMetric identity(const ComplexStructure& cs) {
    return {cs, Matrix<Scalar>::identity(static_cast<std::size_t>(cs.n()))};
  }

  const ComplexStructure& complex_structure() const noexcept { return cs_; }
  const Matrix<Scalar>& h() const noexcept { return h_; }
  int n() const noexcept { return cs_.n(); }

  BigradedForm fundamental_form() const {
    const int n = cs_.n();
    const Scalar half_i = cs_.real_algebra().ring().imaginary_unit() / Scalar(2);
    Form f(2 * n);
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        const Scalar& c = h_(static_cast<std::size_t>(j), static_cast<std::size_t>(k));
        if (c.is_zero()) continue;
        f += (half_i * c) * wedge(Form::generator(2 * n, j), Form::generator(2 * n, n + k));
      }
    return {n, std::move(f)};
  }
  /// F in the real coframe e^1..e^2n.
  Form fundamental_form_real() const { return cs_.reconstruct(fundamental_form()); }

  /// Leading principal minors of H; nullopt when some minor is not a
  /// rational constant (parametric or non-real entries).
  std::optional<std::vector<Rational>> leading_minors() const { return leading_principal_minors(h_); }
  /// Sylvester test; nullopt when H is not numeric.
  std::optional<bool> is_positive_definite() const {
    auto m = leading_minors();
    if (!m) return std::nullopt;
    return all_positive(*m);
  }

  /// Real coframe u^{2j-1} = Re phi^j, u^{2j} = Im phi^j in terms of e.
  const std::vector<Form>& unitary_coframe() const {
    ensure_geometry();
    return geo_->u_in_e;
  }
  /// Gram matrix of g on the frame dual to u (identity when H = id).
  const Matrix<Scalar>& gram() const {
    ensure_geometry();
    return geo_->gram;
  }

  /// Volume form det(H) u^1 ^ ... ^ u^2n in the e-coframe.
  Form volume() const {
    ensure_geometry();
    const int dim = 2 * n();
    Form v = Form::monomial(dim, full_mask(), geo_->volume_factor);
    return substitute(v, geo_->u_in_e, dim);
  }

  Form hodge_star(const Form& a) const {
    ensure_geometry();
    const int dim = 2 * n();
    const Mask full = full_mask();
    Form au = substitute(a, geo_->e_in_u, dim);
    Form out(dim);
    for (const auto& [mi, c] : au.terms()) {
      for (Mask mj : candidates(mi)) {
        Scalar g = inverse_gram_minor(mi, mj);
        if (g.is_zero()) continue;
        const Mask comp = full & ~mj;
        const int sign = wedge_sign(mj, comp);
        Scalar coef = c * g * geo_->volume_factor;
        out.add_term(comp, sign > 0 ? coef : -coef);
      }
    }
    return substitute(out, geo_->u_in_e, dim);
  }

  /// Hermitian pairing <a, b> (conjugate-linear in b), with monomials in
  /// an orthonormal coframe having unit length.
  Scalar inner(const Form& a, const Form& b) const {
    ensure_geometry();
    const int dim = 2 * n();
    Form au = substitute(a, geo_->e_in_u, dim);
    Form bu = substitute(b, geo_->e_in_u, dim);
    Scalar s;
    for (const auto& [mi, ci] : au.terms())
      for (const auto& [mj, cj] : bu.terms()) {
        if (degree_of(mi) != degree_of(mj)) continue;
        Scalar g = inverse_gram_minor(mi, mj);
        if (!g.is_zero()) s += ci * cj.conj() * g;
      }
    return s;
  }
  Scalar norm2(const Form& a) const { return inner(a, a); }

  /// The complex structure acting on 1-forms, optionally with the opposite
  /// sign convention.
  Form apply_j(const Form& a, bool flip = false) const {
    if (!a.is_homogeneous(1)) throw InputError("J is applied to 1-forms only");
    const auto& j = cs_.j_matrix();
    const int dim = 2 * n();
    Form out(dim);
    for (const auto& [m, c] : a.terms()) {
      const auto i = static_cast<std::size_t>(std::countr_zero(m));
      for (std::size_t k = 0; k < j.cols(); ++k)
        if (!j(i, k).is_zero()) out.add_term(Mask(1) << k, c * j(i, k));
    }
    return flip ? -out : out;
  }

 private:
  struct Geometry {
    std::vector<Form> u_in_e, e_in_u;
    Matrix<Scalar> gram, gram_inv;
    bool diagonal = false;
    Scalar volume_factor;
  };

  Mask full_mask() const { return n() == 16 ? ~Mask(0) : (Mask(1) << (2 * n())) - 1; }

  void ensure_geometry() const {
    if (geo_) return;
    auto pd = is_positive_definite();
    if (!pd) throw InputError("the Hodge star needs a numeric (rational) Hermitian metric");
    if (!*pd) throw InputError("the metric H is not positive definite");
    const int n = this->n(), dim = 2 * n;
    const Scalar i = cs_.real_algebra().ring().imaginary_unit();
    Geometry g;
    const auto& phis = cs_.holomorphic_coframe();
    for (int j = 0; j < n; ++j) {
      const Form& p = phis[static_cast<std::size_t>(j)];
      Form pbar = p.map_coefficients([](const Scalar& c) { return c.conj(); });
      g.u_in_e.push_back(Scalar(Rational(1, 2)) * (p + pbar));
      g.u_in_e.push_back((Scalar(1) / (Scalar(2) * i)) * (p - pbar));
    }
    Matrix<Scalar> u(static_cast<std::size_t>(dim), static_cast<std::size_t>(dim));
    for (int a = 0; a < dim; ++a)
      for (const auto& [m, c] : g.u_in_e[static_cast<std::size_t>(a)].terms())
        u(static_cast<std::size_t>(a), static_cast<std::size_t>(std::countr_zero(m))) = c;
    auto uinv = inverse(u);
    if (!uinv) throw CheckFailure("real and imaginary parts of phi are not a coframe", "");
    for (int e = 0; e < dim; ++e) {
      Form f(dim);
      for (int a = 0; a < dim; ++a)
        f.add_term(Mask(1) << a, (*uinv)(static_cast<std::size_t>(e), static_cast<std::size_t>(a)));
      g.e_in_u.push_back(std::move(f));
    }
    // z_j = x_{2j-1} + i x_{2j}; g(X,X) = sum H_jk z_j conj(z_k) = x^T Re(C^T H conj C) x.
    Matrix<Scalar> c(static_cast<std::size_t>(n), static_cast<std::size_t>(dim));
    for (int j = 0; j < n; ++j) {
      c(static_cast<std::size_t>(j), static_cast<std::size_t>(2 * j)) = Scalar(1);
      c(static_cast<std::size_t>(j), static_cast<std::size_t>(2 * j + 1)) = i;
    }
    Matrix<Scalar> cbar = c.map([](const Scalar& x) { return x.conj(); });
    Matrix<Scalar> m = c.transpose() * h_ * cbar;
    g.gram = m.map([](const Scalar& x) { return x.real_part(); });
    g.diagonal = true;
    for (std::size_t a = 0; a < g.gram.rows(); ++a)
      for (std::size_t b = 0; b < g.gram.cols(); ++b)
        if (a != b && !g.gram(a, b).is_zero()) g.diagonal = false;
    g.gram_inv = *inverse(g.gram);
    g.volume_factor = determinant(h_);
    geo_ = std::make_shared<Geometry>(std::move(g));
  }

  std::vector<Mask> candidates(Mask mi) const {
    if (geo_->diagonal) return {mi};
    return monomials(2 * n(), degree_of(mi));
  }

  /// <u^I, u^J> = det of the (I,J) block of the inverse Gram matrix.
  Scalar inverse_gram_minor(Mask mi, Mask mj) const {
    if (geo_->diagonal) {
      if (mi != mj) return Scalar();
      Scalar p(1);
      for (int a : indices_of(mi)) p = p * geo_->gram_inv(static_cast<std::size_t>(a), static_cast<std::size_t>(a));
      return p;
    }
    auto ii = indices_of(mi), jj = indices_of(mj);
    Matrix<Scalar> sub(ii.size(), jj.size());
    for (std::size_t a = 0; a < ii.size(); ++a)
      for (std::size_t b = 0; b < jj.size(); ++b)
        sub(a, b) = geo_->gram_inv(static_cast<std::size_t>(ii[a]), static_cast<std::size_t>(jj[b]));
    return determinant(sub);
  }

  ComplexStructure cs_;
  Matrix<Scalar> h_;
  mutable std::shared_ptr<const Geometry> geo_;
};

struct LeeData {
  Form theta;
  Scalar df_norm2;        // |dF|^2
  Scalar theta_f_norm2;   // |theta ^ F|^2
  Scalar rhs;             // (n-1) |theta ^ F|^2
  bool identity_holds = false;
};

/// theta = -J * d * F; `flip` uses the opposite sign of J on 1-forms.
inline LeeData lee_form(const HermitianMetric& g, bool flip = false) {
  const Algebra& alg = g.complex_structure().real_algebra();
  const Form f = g.fundamental_form_real();
  const Form df = alg.d(f);
  LeeData out;
  out.theta = -g.apply_j(g.hodge_star(alg.d(g.hodge_star(f))), flip);
  out.df_norm2 = g.norm2(df);
  out.theta_f_norm2 = g.norm2(wedge(out.theta, f));
  out.rhs = Scalar(static_cast<long>(g.n() - 1)) * out.theta_f_norm2;
  out.identity_holds = out.df_norm2 == out.rhs;
  return out;
}

/// d d-bar F for a (possibly formal) fundamental form.
inline BigradedForm skt_check_formal(const BigradedForm& f, const ComplexStructure& cs) {
  return cs.del(cs.delbar(f));
}

inline BigradedForm power(const BigradedForm& a, int k) {
  BigradedForm out(a.n(), Form::constant(2 * a.n(), Scalar(1)));
  for (int i = 0; i < k; ++i) out = wedge(out, a);
  return out;
}

struct Classification {
  bool kahler = false, skt = false, standard = false;
  std::optional<bool> balanced;      // undetermined for non-numeric metrics
  BigradedForm df;                   // obstruction to kahler
  BigradedForm ddbar_f;              // obstruction to skt
  BigradedForm ddbar_fn1;            // obstruction to standard
  std::optional<Form> theta;         // obstruction to balanced
};

inline Classification classify(const HermitianMetric& g, bool flip_lee = false) {
  const ComplexStructure& cs = g.complex_structure();
  auto integrable = cs.check_integrable();
  if (!integrable.pass)
    throw CheckFailure("complex structure is not integrable",
                       "(0,2) part of d phi" + std::to_string(integrable.index + 1) + ": " +
                           integrable.obstruction.to_string());
  const BigradedForm f = g.fundamental_form();
  Classification c;
  c.df = cs.d(f);
  c.kahler = c.df.is_zero();
  c.ddbar_f = skt_check_formal(f, cs);
  c.skt = c.ddbar_f.is_zero();
  c.ddbar_fn1 = cs.del(cs.delbar(power(f, g.n() - 1)));
  c.standard = c.ddbar_fn1.is_zero();
  if (g.is_positive_definite().value_or(false)) {
    c.theta = lee_form(g, flip_lee).theta;
    c.balanced = c.theta->is_zero();
  }
  return c;
}

}  // namespace sktwb
