#include <gtest/gtest.h>

#include "common.hpp"

using namespace sktwb;
using namespace testing_util;

namespace {

Algebra iwasawa(std::shared_ptr<const Ring> r) {
  return algebra(std::move(r), 6, {{5, "t*e1^e2 + 2*t*e3^e4 + s*e1^e3 - s*e2^e4"}, {6, "s*e1^e4 + s*e2^e3"}});
}

ConstraintSystem iwasawa_at(long t, long s) {
  auto r = ring12({"t", "s"});
  auto cs = ComplexStructure::from_j(iwasawa(r).specialized({{"t", Rational(t)}, {"s", Rational(s)}}), standard_j(6));
  return extract_constraints(cs);
}

std::size_t index_of(const ConstraintSystem& sys, const std::string& name) {
  for (std::size_t a = 0; a < sys.unknowns.size(); ++a)
    if (sys.unknowns[a].name() == name) return a;
  return sys.unknowns.size();
}

}  // namespace

TEST(Unknowns, Layout) {
  auto u = hermitian_unknowns(3);
  ASSERT_EQ(u.size(), 9u);
  EXPECT_EQ(u[0].name(), "H11");
  EXPECT_EQ(u[2].name(), "H33");
  EXPECT_EQ(u[3].name(), "ReH12");
  EXPECT_EQ(u[4].name(), "ImH12");
  EXPECT_EQ(u[8].name(), "ImH23");
}

TEST(Extract, AbelianIsEmpty) {
  auto r = ring12();
  auto sys = extract_constraints(ComplexStructure::from_j(Algebra::abelian(r, 6), standard_j(6)));
  EXPECT_TRUE(sys.rows.empty());
  auto v = feasibility(sys);
  EXPECT_EQ(v.kind, FeasibilityVerdict::Kind::feasible);
  EXPECT_EQ(v.witness, Matrix<Scalar>::identity(3));
}

// Only H33 enters the system; its coefficient is (t^2 - s^2)/2 (c = 1 in the
// phi-basis obstruction, times the 1/2 of F).
TEST(Extract, IwasawaSymbolic) {
  auto r = ring12({"t", "s"});
  auto sys = extract_constraints(ComplexStructure::from_j(iwasawa(r), standard_j(6)));
  EXPECT_TRUE(sys.symbolic);
  EXPECT_EQ(sys.constrained_unknowns(), std::vector<std::string>{"H33"});
  ASSERT_EQ(sys.rows.size(), 1u);
  EXPECT_EQ(sys.rows[0].label, "Im[phi1^phi2^phibar1^phibar2]");
  const std::size_t h33 = index_of(sys, "H33");
  EXPECT_EQ(sys.rows[0].coeffs[h33], scalar(*r, "(t^2 - s^2)/2"));
  for (std::size_t a = 0; a < sys.unknowns.size(); ++a) {
    if (a == h33) continue;
    EXPECT_TRUE(sys.rows[0].coeffs[a].is_zero());
  }
  EXPECT_THROW(feasibility(sys), InputError);
}

TEST(Extract, SecondFamilyIdenticallyZero) {
  auto r = ring12({"t", "s"});
  Algebra alg = algebra(r, 6, {{6, "t^2*e1^e2 + t*s*e1^e4 - t*s*e2^e3 + s^2*e3^e4"}});
  auto sys = extract_constraints(ComplexStructure::from_j(alg, standard_j(6)));
  EXPECT_TRUE(sys.rows.empty());
}

TEST(Extract, CommutesWithSpecialization) {
  auto r = ring12({"t", "s"});
  Algebra alg = iwasawa(r);
  auto sym = extract_constraints(ComplexStructure::from_j(alg, standard_j(6)));
  for (auto [t, s] : std::vector<std::pair<long, long>>{{1, 1}, {2, 1}, {3, -5}, {0, 2}}) {
    std::map<std::string, Rational> a{{"t", Rational(t)}, {"s", Rational(s)}};
    auto direct = extract_constraints(ComplexStructure::from_j(alg.specialized(a), standard_j(6)));
    auto later = sym.specialized(*r, a);
    ASSERT_EQ(direct.rows.size(), later.rows.size()) << t << "," << s;
    for (std::size_t k = 0; k < direct.rows.size(); ++k) {
      EXPECT_EQ(direct.rows[k].label, later.rows[k].label);
      EXPECT_EQ(direct.rows[k].coeffs, later.rows[k].coeffs);
    }
  }
}

TEST(Feasibility, IwasawaOneOne) {
  auto v = feasibility(iwasawa_at(1, 1));
  EXPECT_EQ(v.kind, FeasibilityVerdict::Kind::feasible);
  EXPECT_EQ(v.witness, Matrix<Scalar>::identity(3));
  EXPECT_EQ(v.method, "projection of the identity");
  EXPECT_EQ(v.minors, (std::vector<Rational>{1, 1, 1}));
}

TEST(Feasibility, IwasawaInfeasible) {
  for (auto [t, s] : std::vector<std::pair<long, long>>{{2, 1}, {3, 1}, {1, 2}}) {
    auto sys = iwasawa_at(t, s);
    auto v = feasibility(sys);
    EXPECT_EQ(v.kind, FeasibilityVerdict::Kind::infeasible);
    EXPECT_EQ(v.forced_zero, 2);
    EXPECT_FALSE(v.zero_space);
    ASSERT_EQ(v.multipliers.size(), 1u);
    // y * (t^2 - s^2)/2 = 1
    EXPECT_EQ(v.multipliers[0], Rational(2) / Rational(t * t - s * s));
    EXPECT_EQ(v.basis.size(), 8u);
  }
}

TEST(Feasibility, ZeroSpace) {
  ConstraintSystem sys;
  sys.n = 1;
  sys.unknowns = hermitian_unknowns(1);
  sys.imaginary_unit = ring12()->imaginary_unit();
  sys.rows.push_back({"r", {Scalar(1)}});
  auto v = feasibility(sys);
  EXPECT_EQ(v.kind, FeasibilityVerdict::Kind::infeasible);
  EXPECT_TRUE(v.zero_space);
}

// H11 + H22 = 0 with H12 free: the identity projection is 0, and every
// solution has H11 = -H22, so no sample can be PD; but H11 is not forced to 0.
TEST(Feasibility, UnknownWhenSamplingFails) {
  ConstraintSystem sys;
  sys.n = 2;
  sys.unknowns = hermitian_unknowns(2);
  sys.imaginary_unit = ring12()->imaginary_unit();
  sys.rows.push_back({"r", {Scalar(1), Scalar(1), Scalar(), Scalar()}});
  auto v = feasibility(sys, 25, 7);
  EXPECT_EQ(v.kind, FeasibilityVerdict::Kind::unknown);
  EXPECT_EQ(v.trials_used, 25);
  EXPECT_EQ(v.basis.size(), 3u);
}

TEST(Feasibility, SamplingIsDeterministic) {
  // H11 - 2 H22 = 0 and ReH12 = 5 H22: the identity projection fails, samples decide
  ConstraintSystem sys;
  sys.n = 2;
  sys.unknowns = hermitian_unknowns(2);
  sys.imaginary_unit = ring12()->imaginary_unit();
  sys.rows.push_back({"a", {Scalar(1), Scalar(-2), Scalar(), Scalar()}});
  sys.rows.push_back({"b", {Scalar(), Scalar(5), Scalar(-1), Scalar()}});
  auto v1 = feasibility(sys, 200, 99), v2 = feasibility(sys, 200, 99);
  EXPECT_EQ(v1.kind, v2.kind);
  EXPECT_EQ(v1.method, v2.method);
  EXPECT_EQ(v1.witness, v2.witness);
  EXPECT_EQ(v1.kind, FeasibilityVerdict::Kind::unknown);  // det = 2 - 25 < 0 on the whole line
}

TEST(Feasibility, WitnessSatisfiesRowsExactly) {
  auto r = ring12();
  // d e6 = w with w^w = 0
  Algebra alg = algebra(r, 6, {{6, "e1^e2 + e1^e4 - e2^e3 + e3^e4"}});
  auto cs = ComplexStructure::from_j(alg, standard_j(6));
  auto sys = extract_constraints(cs);
  auto v = feasibility(sys);
  ASSERT_EQ(v.kind, FeasibilityVerdict::Kind::feasible);
  EXPECT_TRUE(classify(HermitianMetric(cs, v.witness)).skt);
}

TEST(Feasibility, NonDegenerateCenterIsInfeasible) {
  // w^w = 6 e1234 here
  auto r = ring12();
  auto sys = extract_constraints(ComplexStructure::from_j(algebra(r, 6, {{6, "e1^e2 + e1^e4 - e2^e3 + 4*e3^e4"}}), standard_j(6)));
  auto v = feasibility(sys);
  EXPECT_EQ(v.kind, FeasibilityVerdict::Kind::infeasible);
  EXPECT_EQ(v.multipliers, std::vector<Rational>{Rational(4, 3)});
}
