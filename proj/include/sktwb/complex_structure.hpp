#pragma once

// Almost complex structures on a real coframe, the (1,0)-coframe they
// determine, and the bigraded calculus (bidegree splitting, integrability,
// del and delbar) carried out in the basis phi^1..phi^n, phibar^1..phibar^n.

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sktwb/algebra.hpp"
#include "sktwb/matrix.hpp"

namespace sktwb {

/// A form written in the complex basis (phi^j, phibar^j): generator a < n is
/// phi^{a+1}, generator n + a is phibar^{a+1}.
class BigradedForm {
 public:
  BigradedForm() = default;
  BigradedForm(int n, Form f) : n_(n), f_(std::move(f)) {
    if (f_.dim() != 2 * n) throw InputError("bigraded form has the wrong dimension");
  }
  static BigradedForm zero(int n) { return BigradedForm(n, Form(2 * n)); }

  int n() const noexcept { return n_; }
  const Form& form() const noexcept { return f_; }
  bool is_zero() const noexcept { return f_.is_zero(); }

  std::pair<int, int> bidegree(Mask m) const {
    const Mask low = (Mask(1) << n_) - 1;
    return {degree_of(m & low), degree_of(m >> n_)};
  }

  BigradedForm component(int p, int q) const {
    Form out(2 * n_);
    for (const auto& [m, c] : f_.terms())
      if (bidegree(m) == std::make_pair(p, q)) out.add_term(m, c);
    return {n_, std::move(out)};
  }

  std::map<std::pair<int, int>, BigradedForm> components() const {
    std::map<std::pair<int, int>, Form> parts;
    for (const auto& [m, c] : f_.terms()) {
      auto key = bidegree(m);
      parts.try_emplace(key, 2 * n_).first->second.add_term(m, c);
    }
    std::map<std::pair<int, int>, BigradedForm> out;
    for (auto& [k, f] : parts) out.emplace(k, BigradedForm(n_, std::move(f)));
    return out;
  }

  /// Pure of bidegree (p,q) (the zero form is pure of every bidegree).
  bool is_pure(int p, int q) const {
    for (const auto& [m, c] : f_.terms())
      if (bidegree(m) != std::make_pair(p, q)) return false;
    return true;
  }

  BigradedForm operator-() const { return {n_, -f_}; }
  friend BigradedForm operator+(const BigradedForm& a, const BigradedForm& b) {
    return {a.n_, a.f_ + b.f_};
  }
  friend BigradedForm operator-(const BigradedForm& a, const BigradedForm& b) {
    return {a.n_, a.f_ - b.f_};
  }
  friend BigradedForm operator*(const Scalar& s, const BigradedForm& a) { return {a.n_, s * a.f_}; }
  friend BigradedForm wedge(const BigradedForm& a, const BigradedForm& b) {
    return {a.n_, wedge(a.f_, b.f_)};
  }
  friend bool operator==(const BigradedForm& a, const BigradedForm& b) {
    return a.n_ == b.n_ && a.f_ == b.f_;
  }

  /// Complex conjugate: conjugate coefficients and swap phi^j <-> phibar^j.
  BigradedForm conj() const {
    std::vector<Form> swap;
    for (int a = 0; a < 2 * n_; ++a) swap.push_back(Form::generator(2 * n_, (a + n_) % (2 * n_)));
    Form c = f_.map_coefficients([](const Scalar& x) { return x.conj(); });
    return {n_, substitute(c, swap, 2 * n_)};
  }

  std::string to_string() const { return f_.to_string(complex_names(n_)); }

 private:
  int n_ = 0;
  Form f_;
};

struct IntegrabilityCheck {
  bool pass = true;
  int index = -1;              // 0-based j of the failing phi^{j+1}
  BigradedForm obstruction;    // (0,2) part of d phi^{j+1}
};

class ComplexStructure {
 public:
  /// J acting on 1-forms in row convention: J e^i = sum_k J(i,k) e^k. The
  /// (1,0)-coframe is the -i eigenspace, normalized so the first nonzero
  /// coefficient of each phi is 1 (J e1 = e2 gives phi = e1 + I*e2).
  static ComplexStructure from_j(const Algebra& alg, const Matrix<Scalar>& j) {
    require_i(alg);
    const std::size_t dim = static_cast<std::size_t>(alg.dim());
    if (dim % 2 != 0) throw InputError("complex structure needs an even-dimensional coframe");
    if (j.rows() != dim || j.cols() != dim) throw InputError("J has the wrong size");
    if (!(j * j == Matrix<Scalar>::identity(dim).scaled(Scalar(-1))))
      throw CheckFailure("J^2 != -identity", "");
    const Scalar i = alg.ring().imaginary_unit();
    Matrix<Scalar> a = j.transpose();
    for (std::size_t k = 0; k < dim; ++k) a(k, k) += i;
    auto ker = kernel(a);
    if (ker.size() != dim / 2) throw CheckFailure("J does not have an n-dimensional -i eigenspace", "");
    std::vector<Form> phis;
    for (auto& v : ker) {
      Scalar lead;
      for (auto& x : v)
        if (!x.is_zero()) {
          lead = x;
          break;
        }
      Form phi(alg.dim());
      for (std::size_t k = 0; k < dim; ++k) phi.add_term(Mask(1) << k, v[k] / lead);
      phis.push_back(std::move(phi));
    }
    std::sort(phis.begin(), phis.end(), [](const Form& x, const Form& y) {
      return MaskOrder{}(x.terms().begin()->first, y.terms().begin()->first);
    });
    return ComplexStructure(alg, std::move(phis), j);
  }

  static ComplexStructure from_coframe(const Algebra& alg, std::vector<Form> phis) {
    require_i(alg);
    if (alg.dim() % 2 != 0) throw InputError("complex structure needs an even-dimensional coframe");
    if (static_cast<int>(phis.size()) * 2 != alg.dim())
      throw InputError("need exactly n = dim/2 forms phi^j");
    for (const auto& p : phis)
      if (p.dim() != alg.dim() || !p.is_homogeneous(1) || p.is_zero())
        throw InputError("each phi^j must be a nonzero 1-form");
    const std::size_t dim = static_cast<std::size_t>(alg.dim()), n = dim / 2;
    Matrix<Scalar> m = coframe_matrix(phis, dim);
    auto minv = inverse(m);
    if (!minv) throw CheckFailure("phi^1..phi^n and their conjugates are not a basis", "");
    const Scalar i = alg.ring().imaginary_unit();
    Matrix<Scalar> diag(dim, dim);
    for (std::size_t k = 0; k < dim; ++k) diag(k, k) = k < n ? -i : i;
    Matrix<Scalar> j = *minv * diag * m;
    return ComplexStructure(alg, std::move(phis), std::move(j));
  }

  /// Both presentations given: they must define the same J.
  static ComplexStructure from_both(const Algebra& alg, const Matrix<Scalar>& j, std::vector<Form> phis) {
    ComplexStructure cs = from_coframe(alg, std::move(phis));
    if (!(cs.j_ == j)) throw CheckFailure("J and the listed phi^j define different complex structures", "");
    return cs;
  }

  int n() const noexcept { return n_; }
  const Algebra& real_algebra() const noexcept { return real_; }
  const Algebra& complex_algebra() const noexcept { return *complex_; }
  const Matrix<Scalar>& j_matrix() const noexcept { return j_; }
  const std::vector<Form>& holomorphic_coframe() const noexcept { return phis_; }
  /// Rows: phi^1..phi^n, phibar^1..phibar^n in terms of e^1..e^2n.
  const Matrix<Scalar>& basis_change() const noexcept { return m_; }

  BigradedForm bigrade(const Form& a) const {
    if (a.dim() != 2 * n_) throw InputError("form does not belong to this coframe");
    return {n_, substitute(a, e_in_psi_, 2 * n_)};
  }
  Form reconstruct(const BigradedForm& b) const { return substitute(b.form(), psi_in_e_, 2 * n_); }

  BigradedForm phi(int j) const { return {n_, Form::generator(2 * n_, j)}; }
  BigradedForm phibar(int j) const { return {n_, Form::generator(2 * n_, n_ + j)}; }

  IntegrabilityCheck check_integrable() const {
    for (int j = 0; j < n_; ++j) {
      BigradedForm dphi(n_, complex_->differential(j));
      BigradedForm obstruction = dphi.component(0, 2);
      if (!obstruction.is_zero()) return {false, j, std::move(obstruction)};
    }
    return {};
  }
  bool is_integrable() const { return integrable_; }

  BigradedForm d(const BigradedForm& a) const { return {n_, complex_->d(a.form())}; }

  BigradedForm del(const BigradedForm& a) const { return project(a, 1, 0); }
  BigradedForm delbar(const BigradedForm& a) const { return project(a, 0, 1); }

  /// Specialize every coefficient of the structure.
  ComplexStructure specialized(const Algebra& alg, const std::map<std::string, Rational>& assignment) const {
    std::vector<Form> phis;
    for (const auto& p : phis_)
      phis.push_back(p.map_coefficients([&](const Scalar& c) { return alg.ring().substitute(c, assignment); }));
    return from_coframe(alg, std::move(phis));
  }

 private:
  ComplexStructure(const Algebra& alg, std::vector<Form> phis, Matrix<Scalar> j)
      : real_(alg), n_(alg.dim() / 2), phis_(std::move(phis)), j_(std::move(j)) {
    const std::size_t dim = static_cast<std::size_t>(alg.dim());
    m_ = coframe_matrix(phis_, dim);
    auto minv = inverse(m_);
    if (!minv) throw CheckFailure("phi^1..phi^n and their conjugates are not a basis", "");
    // e^i = sum_a Minv(i,a) psi^a ; psi^a = sum_i M(a,i) e^i
    for (std::size_t i = 0; i < dim; ++i) {
      Form f(static_cast<int>(dim));
      for (std::size_t a = 0; a < dim; ++a) f.add_term(Mask(1) << a, (*minv)(i, a));
      e_in_psi_.push_back(std::move(f));
    }
    for (std::size_t a = 0; a < dim; ++a) {
      Form f(static_cast<int>(dim));
      for (std::size_t i = 0; i < dim; ++i) f.add_term(Mask(1) << i, m_(a, i));
      psi_in_e_.push_back(std::move(f));
    }
    std::vector<Form> diffs, coords;
    for (std::size_t a = 0; a < dim; ++a)
      diffs.push_back(substitute(alg.d(psi_in_e_[a]), e_in_psi_, static_cast<int>(dim)));
    for (const auto& c : alg.coordinates()) coords.push_back(substitute(c, e_in_psi_, static_cast<int>(dim)));
    complex_ = std::make_shared<Algebra>(alg.ring_ptr(), static_cast<int>(dim), std::move(diffs), std::move(coords));
    integrable_ = check_integrable().pass;
  }

  static void require_i(const Algebra& alg) {
    if (!alg.ring().field().has_i())
      throw InputError("complex structures need I: use a cyclotomic order divisible by 4");
  }

  static Matrix<Scalar> coframe_matrix(const std::vector<Form>& phis, std::size_t dim) {
    const std::size_t n = phis.size();
    Matrix<Scalar> m(dim, dim);
    for (std::size_t a = 0; a < n; ++a)
      for (const auto& [mask, c] : phis[a].terms()) {
        const auto k = static_cast<std::size_t>(std::countr_zero(mask));
        m(a, k) = c;
        m(n + a, k) = c.conj();
      }
    return m;
  }

  BigradedForm project(const BigradedForm& a, int dp, int dq) const {
    if (!integrable_)
      throw InputError("del and delbar are undefined: the complex structure is not integrable");
    BigradedForm out = BigradedForm::zero(n_);
    for (const auto& [pq, part] : a.components()) {
      BigradedForm da = d(part);
      out = out + da.component(pq.first + dp, pq.second + dq);
    }
    return out;
  }

  Algebra real_;
  int n_;
  std::vector<Form> phis_;
  Matrix<Scalar> j_;
  Matrix<Scalar> m_;
  std::vector<Form> e_in_psi_, psi_in_e_;
  std::shared_ptr<Algebra> complex_;
  bool integrable_ = false;
};

}  // namespace sktwb
