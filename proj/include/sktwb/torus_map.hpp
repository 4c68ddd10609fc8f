#pragma once

// Fixed points of affine maps x -> A x + b on the torus R^n / Z^n, via the
// Smith normal form of A - I over the integers.

#include <gmpxx.h>

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sktwb/matrix.hpp"

namespace sktwb {

using Integer = mpz_class;

inline bool is_zero(const Integer& x) { return sgn(x) == 0; }

struct AffineTorusMap {
  Matrix<Integer> a;
  std::vector<Rational> b;

  AffineTorusMap(Matrix<Integer> a_, std::vector<Rational> b_) : a(std::move(a_)), b(std::move(b_)) {
    if (a.rows() != a.cols()) throw InputError("torus map matrix must be square");
    if (b.empty()) b.assign(a.rows(), Rational(0));
    if (b.size() != a.rows()) throw InputError("torus map translation has the wrong length");
    const Integer d = determinant(a.map([](const Integer& x) { return Rational(x); })).get_num();
    if (abs(d) != 1) throw InputError("torus map matrix must be unimodular (|det A| = 1)");
  }
  std::size_t n() const { return a.rows(); }

  /// Image of a point, reduced into [0,1)^n.
  std::vector<Rational> apply(const std::vector<Rational>& x) const;
};

/// U * M * V = diag(d_1, ..., d_r, 0, ...) with d_i | d_{i+1}, d_i > 0 and
/// U, V unimodular.
struct SmithForm {
  Matrix<Integer> u, d, v;
  std::vector<Integer> diagonal;  // d_1..d_min(rows,cols), zeros included
};

inline SmithForm smith_normal_form(Matrix<Integer> m) {
  const std::size_t rows = m.rows(), cols = m.cols();
  Matrix<Integer> u = Matrix<Integer>::identity(rows), v = Matrix<Integer>::identity(cols);
  auto swap_cols = [](Matrix<Integer>& x, std::size_t i, std::size_t k) {
    if (i == k) return;
    for (std::size_t r = 0; r < x.rows(); ++r) std::swap(x(r, i), x(r, k));
  };
  // row_i += f * row_k (and the same on u)
  auto add_row = [&](std::size_t i, std::size_t k, const Integer& f) {
    for (std::size_t c = 0; c < cols; ++c) m(i, c) += f * m(k, c);
    for (std::size_t c = 0; c < rows; ++c) u(i, c) += f * u(k, c);
  };
  auto add_col = [&](std::size_t i, std::size_t k, const Integer& f) {
    for (std::size_t r = 0; r < rows; ++r) m(r, i) += f * m(r, k);
    for (std::size_t r = 0; r < cols; ++r) v(r, i) += f * v(r, k);
  };
  const std::size_t steps = std::min(rows, cols);
  for (std::size_t t = 0; t < steps; ++t) {
    for (;;) {
      // smallest nonzero entry of the trailing block moves to (t,t)
      std::optional<std::pair<std::size_t, std::size_t>> best;
      for (std::size_t i = t; i < rows; ++i)
        for (std::size_t j = t; j < cols; ++j)
          if (sgn(m(i, j)) != 0 && (!best || abs(m(i, j)) < abs(m(best->first, best->second)))) best = {{i, j}};
      if (!best) break;
      m.swap_rows(t, best->first);
      u.swap_rows(t, best->first);
      swap_cols(m, t, best->second);
      swap_cols(v, t, best->second);
      bool clean = true;
      for (std::size_t i = t + 1; i < rows; ++i) {
        if (sgn(m(i, t)) == 0) continue;
        Integer q;
        mpz_fdiv_q(q.get_mpz_t(), m(i, t).get_mpz_t(), m(t, t).get_mpz_t());
        add_row(i, t, -q);
        if (sgn(m(i, t)) != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < cols; ++j) {
        if (sgn(m(t, j)) == 0) continue;
        Integer q;
        mpz_fdiv_q(q.get_mpz_t(), m(t, j).get_mpz_t(), m(t, t).get_mpz_t());
        add_col(j, t, -q);
        if (sgn(m(t, j)) != 0) clean = false;
      }
      if (!clean) continue;
      // divisibility of the remaining block by the pivot
      std::optional<std::size_t> bad;
      for (std::size_t i = t + 1; i < rows && !bad; ++i)
        for (std::size_t j = t + 1; j < cols; ++j)
          if (sgn(m(i, j) % m(t, t)) != 0) {
            bad = i;
            break;
          }
      if (!bad) break;
      add_row(t, *bad, Integer(1));
    }
    if (sgn(m(t, t)) < 0) {
      for (std::size_t c = 0; c < cols; ++c) m(t, c) = -m(t, c);
      for (std::size_t c = 0; c < rows; ++c) u(t, c) = -u(t, c);
    }
  }
  SmithForm s{std::move(u), m, std::move(v), {}};
  for (std::size_t t = 0; t < steps; ++t) s.diagonal.push_back(m(t, t));
  return s;
}

inline Rational frac(const Rational& x) {
  Integer fl;
  mpz_fdiv_q(fl.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return x - Rational(fl);
}

inline std::vector<Rational> AffineTorusMap::apply(const std::vector<Rational>& x) const {
  std::vector<Rational> y(n(), Rational(0));
  for (std::size_t i = 0; i < n(); ++i) {
    Rational s = b[i];
    for (std::size_t k = 0; k < n(); ++k) s += Rational(a(i, k)) * x[k];
    y[i] = frac(s);
  }
  return y;
}

struct FixedPointSet {
  bool empty = false;
  int dimension = 0;                                // dimension of each component
  Integer components;                              // number of components
  std::vector<std::vector<Rational>> representatives;  // one point per component, in [0,1)^n
  bool truncated = false;                          // representatives list capped
};

/// Solve (A - I) x = -b mod Z^n.
inline FixedPointSet fixed_points(const AffineTorusMap& map, std::size_t max_listed = 4096) {
  const std::size_t n = map.n();
  Matrix<Integer> bm = map.a;
  for (std::size_t i = 0; i < n; ++i) bm(i, i) -= 1;
  const SmithForm s = smith_normal_form(bm);
  // D y = U c (mod Z^n) with c = -b and x = V y
  std::vector<Rational> uc(n, Rational(0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) uc[i] -= Rational(s.u(i, k)) * map.b[k];
  FixedPointSet out;
  std::vector<std::size_t> live;
  out.components = 1;
  for (std::size_t i = 0; i < n; ++i) {
    if (sgn(s.diagonal[i]) == 0) {
      ++out.dimension;
      if (sgn(frac(uc[i])) != 0) {
        out.empty = true;
        out.components = 0;
        return out;
      }
    } else {
      out.components *= s.diagonal[i];
      live.push_back(i);
    }
  }
  // enumerate y_i = (uc_i + k_i) / d_i, free coordinates at 0
  std::vector<Integer> k(n, 0);
  for (;;) {
    if (out.representatives.size() >= max_listed) {
      out.truncated = true;
      break;
    }
    std::vector<Rational> y(n, Rational(0));
    for (std::size_t i : live) y[i] = (uc[i] + Rational(k[i])) / Rational(s.diagonal[i]);
    std::vector<Rational> x(n, Rational(0));
    for (std::size_t r = 0; r < n; ++r) {
      Rational acc = 0;
      for (std::size_t c = 0; c < n; ++c) acc += Rational(s.v(r, c)) * y[c];
      x[r] = frac(acc);
    }
    out.representatives.push_back(std::move(x));
    std::size_t pos = 0;
    while (pos < live.size()) {
      const std::size_t i = live[pos];
      if (++k[i] < s.diagonal[i]) break;
      k[i] = 0;
      ++pos;
    }
    if (pos == live.size()) break;
  }
  std::sort(out.representatives.begin(), out.representatives.end());
  return out;
}

}  // namespace sktwb
