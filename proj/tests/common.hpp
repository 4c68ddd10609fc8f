#pragma once
// Shared helpers for the unit and property tests.

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>

#include "sktwb/workbench.hpp"

namespace testing_util {

using namespace sktwb;

inline std::shared_ptr<const Ring> ring12(std::vector<std::string> params = {},
                                          std::vector<FunctionSymbol> fns = {}) {
  RingDescriptor d;
  d.cyclotomic_order = 12;
  d.parameters = std::move(params);
  d.functions = std::move(fns);
  return Ring::make(d);
}

// e-expression or phi-expression in an algebra of the given (real) dimension
inline Form form(const Ring& r, int dim, const std::string& text) {
  return ExpressionParser(r, dim, tokenize(text, 1)).parse().form;
}

inline Scalar scalar(const Ring& r, const std::string& text) {
  Form f = form(r, 0, text);
  return f.is_zero() ? Scalar() : f.coefficient(0);
}

inline Algebra algebra(std::shared_ptr<const Ring> r, int dim, const std::map<int, std::string>& de) {
  std::vector<Form> diffs(static_cast<std::size_t>(dim), Form(dim));
  for (const auto& [k, text] : de) diffs[static_cast<std::size_t>(k - 1)] = form(*r, dim, text);
  return Algebra(std::move(r), dim, std::move(diffs));
}

// J e_{2k-1} = e_{2k}
inline Matrix<Scalar> standard_j(int dim) {
  Matrix<Scalar> j(static_cast<std::size_t>(dim), static_cast<std::size_t>(dim));
  for (int k = 0; k + 1 < dim; k += 2) {
    j(static_cast<std::size_t>(k), static_cast<std::size_t>(k + 1)) = Scalar(1);
    j(static_cast<std::size_t>(k + 1), static_cast<std::size_t>(k)) = Scalar(-1);
  }
  return j;
}

inline Manifest load(const std::string& name) {
  return parse_manifest(read_file(std::filesystem::path(SKT_MANIFEST_DIR) / (name + ".skt")));
}

inline std::filesystem::path manifest_path(const std::string& name) {
  return std::filesystem::path(SKT_MANIFEST_DIR) / (name + ".skt");
}

// Small random elements of Q(i) and random forms.
struct Gen {
  std::mt19937_64 rng;
  explicit Gen(std::uint64_t seed) : rng(seed) {}

  long integer(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng); }
  bool coin() { return integer(0, 1) == 1; }

  Rational rational(long span = 3) {
    Rational num(integer(-span, span)), den(integer(1, 3));
    return num / den;
  }
  Scalar gaussian(const Ring& r) {
    Scalar re(rational()), im(rational());
    return re + im * r.imaginary_unit();
  }
  Form form(const Ring& r, int dim, int degree, int terms = 3) {
    Form f(dim);
    auto basis = monomials(dim, degree);
    for (int t = 0; t < terms; ++t)
      f.add_term(basis[static_cast<std::size_t>(integer(0, static_cast<long>(basis.size()) - 1))], gaussian(r));
    return f;
  }
  Form mixed_form(const Ring& r, int dim) {
    Form f(dim);
    for (int k = 0; k <= dim; ++k)
      if (coin()) f += form(r, dim, k, 2);
    return f;
  }
};

// 2-step nilpotent structure with closed phi1..phi_{n-1} and dphi_n a random
// (2,0)+(1,1) form in the closed ones; real differentials of e_{2n-1}, e_{2n}
// are read off from dphi_n.
inline Algebra random_nilpotent(std::shared_ptr<const Ring> r, int n, Gen& g) {
  const int dim = 2 * n;
  const Scalar i = r->imaginary_unit();
  std::vector<Form> phi, phibar;
  for (int j = 0; j < n; ++j) {
    phi.push_back(Form::generator(dim, 2 * j) + i * Form::generator(dim, 2 * j + 1));
    phibar.push_back(Form::generator(dim, 2 * j) - i * Form::generator(dim, 2 * j + 1));
  }
  Form w(dim);
  for (int a = 0; a + 1 < n; ++a)
    for (int b = 0; b + 1 < n; ++b) {
      if (a < b && g.coin()) w += g.gaussian(*r) * wedge(phi[static_cast<std::size_t>(a)], phi[static_cast<std::size_t>(b)]);
      if (g.coin()) w += g.gaussian(*r) * wedge(phi[static_cast<std::size_t>(a)], phibar[static_cast<std::size_t>(b)]);
    }
  std::vector<Form> diffs(static_cast<std::size_t>(dim), Form(dim));
  diffs[static_cast<std::size_t>(dim - 2)] = w.map_coefficients([](const Scalar& c) { return c.real_part(); });
  diffs[static_cast<std::size_t>(dim - 1)] =
      w.map_coefficients([&](const Scalar& c) { return (c - c.conj()) / (Scalar(2) * i); });
  return Algebra(std::move(r), dim, std::move(diffs));
}

// Random rational positive definite Hermitian matrix: L L^* + 1 with L lower
// triangular over Q(i).
inline Matrix<Scalar> random_pd(const Ring& r, int n, Gen& g) {
  const auto N = static_cast<std::size_t>(n);
  Matrix<Scalar> l(N, N);
  for (std::size_t a = 0; a < N; ++a)
    for (std::size_t b = 0; b <= a; ++b) l(a, b) = a == b ? Scalar(g.integer(1, 2)) : g.gaussian(r);
  Matrix<Scalar> lstar = l.transpose().map([](const Scalar& x) { return x.conj(); });
  return l * lstar + Matrix<Scalar>::identity(N);
}

}  // namespace testing_util
