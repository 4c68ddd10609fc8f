#pragma once

// Existence of invariant strong KT metrics for a fixed complex structure.
// The condition d d-bar F = 0 is linear in the real coordinates of the
// Hermitian matrix H; the solver extracts that system, solves it exactly and
// looks for a positive definite point of the solution space.

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "sktwb/hermitian.hpp"

namespace sktwb {

/// Real coordinate of a Hermitian matrix: H_jj, Re H_jk or Im H_jk (j < k).
struct HermitianUnknown {
  enum class Part { diagonal, real, imaginary };
  Part part;
  int j, k;  // 0-based

  std::string name() const {
    const std::string idx = std::to_string(j + 1) + std::to_string(k + 1);
    switch (part) {
      case Part::diagonal: return "H" + idx;
      case Part::real: return "ReH" + idx;
      default: return "ImH" + idx;
    }
  }
};

inline std::vector<HermitianUnknown> hermitian_unknowns(int n) {
  std::vector<HermitianUnknown> out;
  for (int j = 0; j < n; ++j) out.push_back({HermitianUnknown::Part::diagonal, j, j});
  for (int j = 0; j < n; ++j)
    for (int k = j + 1; k < n; ++k) {
      out.push_back({HermitianUnknown::Part::real, j, k});
      out.push_back({HermitianUnknown::Part::imaginary, j, k});
    }
  return out;
}

/// The fundamental form of the Hermitian matrix with this coordinate 1 and
/// all others 0.
inline BigradedForm unknown_form(const ComplexStructure& cs, const HermitianUnknown& u) {
  const Scalar i = cs.real_algebra().ring().imaginary_unit();
  auto pp = [&](int a, int b) { return wedge(cs.phi(a), cs.phibar(b)); };
  switch (u.part) {
    case HermitianUnknown::Part::diagonal: return (i / Scalar(2)) * pp(u.j, u.j);
    case HermitianUnknown::Part::real: return (i / Scalar(2)) * (pp(u.j, u.k) + pp(u.k, u.j));
    default: return Scalar(Rational(-1, 2)) * (pp(u.j, u.k) - pp(u.k, u.j));
  }
}

/// Hermitian matrix with the given real coordinates.
inline Matrix<Scalar> hermitian_from(const std::vector<HermitianUnknown>& us, const std::vector<Scalar>& x,
                                     int n, const Scalar& i) {
  Matrix<Scalar> h(static_cast<std::size_t>(n), static_cast<std::size_t>(n));
  for (std::size_t a = 0; a < us.size(); ++a) {
    const auto j = static_cast<std::size_t>(us[a].j), k = static_cast<std::size_t>(us[a].k);
    switch (us[a].part) {
      case HermitianUnknown::Part::diagonal: h(j, j) += x[a]; break;
      case HermitianUnknown::Part::real:
        h(j, k) += x[a];
        h(k, j) += x[a];
        break;
      default:
        h(j, k) += i * x[a];
        h(k, j) -= i * x[a];
    }
  }
  return h;
}

struct ConstraintRow {
  std::string label;            // e.g. "Im[phi1^phi2^phibar1^phibar2]"
  std::vector<Scalar> coeffs;   // one per unknown
};

struct ConstraintSystem {
  int n = 0;
  std::vector<HermitianUnknown> unknowns;
  std::vector<ConstraintRow> rows;
  bool symbolic = false;
  Scalar imaginary_unit;

  /// Unknowns with a nonzero coefficient in some row.
  std::vector<std::string> constrained_unknowns() const {
    std::vector<std::string> out;
    for (std::size_t a = 0; a < unknowns.size(); ++a)
      for (const auto& r : rows)
        if (!r.coeffs[a].is_zero()) {
          out.push_back(unknowns[a].name());
          break;
        }
    return out;
  }

  bool is_numeric() const {
    for (const auto& r : rows)
      for (const auto& c : r.coeffs)
        if (!c.is_rational()) return false;
    return true;
  }

  ConstraintSystem specialized(const Ring& ring, const std::map<std::string, Rational>& assignment) const {
    ConstraintSystem out = *this;
    out.rows.clear();
    for (const auto& r : rows) {
      ConstraintRow s{r.label, {}};
      bool nonzero = false;
      for (const auto& c : r.coeffs) {
        s.coeffs.push_back(ring.substitute(c, assignment));
        nonzero = nonzero || !s.coeffs.back().is_zero();
      }
      if (nonzero) out.rows.push_back(std::move(s));
    }
    out.symbolic = false;
    for (const auto& r : out.rows)
      for (const auto& c : r.coeffs)
        if (!c.is_constant()) out.symbolic = true;
    return out;
  }
};

/// Rows: real and imaginary parts of each (2,2)-monomial coefficient of
/// d d-bar F for generic Hermitian H.
inline ConstraintSystem extract_constraints(const ComplexStructure& cs) {
  auto integrable = cs.check_integrable();
  if (!integrable.pass)
    throw CheckFailure("complex structure is not integrable",
                       "(0,2) part of d phi" + std::to_string(integrable.index + 1) + ": " +
                           integrable.obstruction.to_string());
  ConstraintSystem sys;
  sys.n = cs.n();
  sys.unknowns = hermitian_unknowns(cs.n());
  sys.imaginary_unit = cs.real_algebra().ring().imaginary_unit();
  const Scalar& i = sys.imaginary_unit;
  std::vector<BigradedForm> images;
  std::map<Mask, bool, MaskOrder> support;
  for (const auto& u : sys.unknowns) {
    images.push_back(skt_check_formal(unknown_form(cs, u), cs));
    for (const auto& [m, c] : images.back().form().terms()) support[m] = true;
  }
  const auto names = complex_names(cs.n());
  for (const auto& [m, unused] : support) {
    std::string mono;
    for (int a : indices_of(m)) mono += (mono.empty() ? "" : "^") + names[static_cast<std::size_t>(a)];
    ConstraintRow re{"Re[" + mono + "]", {}}, im{"Im[" + mono + "]", {}};
    bool re_nonzero = false, im_nonzero = false;
    for (const auto& img : images) {
      const Scalar c = img.form().coefficient(m);
      re.coeffs.push_back(c.real_part());
      im.coeffs.push_back((c - c.conj()) / (Scalar(2) * i));
      re_nonzero = re_nonzero || !re.coeffs.back().is_zero();
      im_nonzero = im_nonzero || !im.coeffs.back().is_zero();
    }
    if (re_nonzero) sys.rows.push_back(std::move(re));
    if (im_nonzero) sys.rows.push_back(std::move(im));
  }
  for (const auto& r : sys.rows)
    for (const auto& c : r.coeffs)
      if (!c.is_constant()) sys.symbolic = true;
  return sys;
}

struct FeasibilityVerdict {
  enum class Kind { feasible, infeasible, unknown };
  Kind kind = Kind::unknown;

  // feasible
  Matrix<Scalar> witness;
  std::vector<Rational> minors;
  std::string method;

  // infeasible
  bool zero_space = false;
  int forced_zero = -1;                // index j (0-based) with H_jj = 0 on the solution space
  std::vector<Rational> multipliers;   // y with y^T R = e_{H_jj}

  // always
  std::vector<std::vector<Rational>> basis;  // solution space
  int trials_used = 0;

  static const char* kind_name(Kind k) {
    switch (k) {
      case Kind::feasible: return "FEASIBLE";
      case Kind::infeasible: return "INFEASIBLE";
      default: return "UNKNOWN";
    }
  }
};

inline constexpr std::uint64_t default_seed = 20240601;

inline Matrix<Rational> rational_matrix(const ConstraintSystem& sys) {
  if (!sys.is_numeric())
    throw InputError("feasibility needs numeric constraints; specialize the parameters first");
  Matrix<Rational> r(sys.rows.size(), sys.unknowns.size());
  for (std::size_t a = 0; a < sys.rows.size(); ++a)
    for (std::size_t b = 0; b < sys.unknowns.size(); ++b) r(a, b) = sys.rows[a].coeffs[b].rational();
  return r;
}

inline FeasibilityVerdict feasibility(const ConstraintSystem& sys, int trials = 200,
                                      std::uint64_t seed = default_seed) {
  const Matrix<Rational> r = rational_matrix(sys);
  const std::size_t nu = sys.unknowns.size();
  FeasibilityVerdict v;
  v.basis = kernel(r);

  auto certify = [&](std::size_t a) {
    std::vector<Rational> e(nu, Rational(0));
    e[a] = 1;
    auto y = solve(r.transpose(), e);
    v.kind = FeasibilityVerdict::Kind::infeasible;
    v.forced_zero = sys.unknowns[a].j;
    v.multipliers = y ? *y : std::vector<Rational>{};
  };

  if (v.basis.empty()) {
    v.zero_space = true;
    certify(0);
    return v;
  }
  for (std::size_t a = 0; a < nu; ++a) {
    if (sys.unknowns[a].part != HermitianUnknown::Part::diagonal) continue;
    bool all_zero = true;
    for (const auto& b : v.basis)
      if (sgn(b[a]) != 0) all_zero = false;
    if (all_zero) {
      certify(a);
      return v;
    }
  }

  auto to_matrix = [&](const std::vector<Rational>& x) {
    std::vector<Scalar> xs(x.begin(), x.end());
    return hermitian_from(sys.unknowns, xs, sys.n, sys.imaginary_unit);
  };
  auto try_point = [&](const std::vector<Rational>& x, const std::string& how) {
    Matrix<Scalar> h = to_matrix(x);
    auto m = leading_principal_minors(h);
    if (!m || !all_positive(*m)) return false;
    v.kind = FeasibilityVerdict::Kind::feasible;
    v.witness = std::move(h);
    v.minors = std::move(*m);
    v.method = how;
    return true;
  };
  auto combine = [&](const std::vector<Rational>& c) {
    std::vector<Rational> x(nu, Rational(0));
    for (std::size_t b = 0; b < v.basis.size(); ++b)
      for (std::size_t a = 0; a < nu; ++a) x[a] += c[b] * v.basis[b][a];
    return x;
  };

  // orthogonal projection of the identity onto the solution space
  const std::size_t dim = v.basis.size();
  Matrix<Rational> gram(dim, dim);
  std::vector<Rational> rhs(dim, Rational(0));
  for (std::size_t p = 0; p < dim; ++p) {
    for (std::size_t q = 0; q < dim; ++q)
      for (std::size_t a = 0; a < nu; ++a) gram(p, q) += v.basis[p][a] * v.basis[q][a];
    for (std::size_t a = 0; a < nu; ++a)
      if (sys.unknowns[a].part == HermitianUnknown::Part::diagonal) rhs[p] += v.basis[p][a];
  }
  if (auto c = solve(gram, rhs); c && try_point(combine(*c), "projection of the identity")) return v;

  std::mt19937_64 rng(seed);
  for (int t = 0; t < trials; ++t) {
    std::vector<Rational> c(dim);
    for (auto& x : c) x = Rational(static_cast<long>(rng() % 21) - 10);
    v.trials_used = t + 1;
    if (try_point(combine(c), "seeded sample " + std::to_string(t + 1))) return v;
  }
  v.kind = FeasibilityVerdict::Kind::unknown;
  return v;
}

}  // namespace sktwb
