#include <gtest/gtest.h>

#include "common.hpp"

using namespace sktwb;
using namespace testing_util;

TEST(Wedge, Basics) {
  auto r = ring12();
  const Form e1 = Form::generator(4, 0), e2 = Form::generator(4, 1);
  EXPECT_TRUE(wedge(e1, e1).is_zero());
  EXPECT_EQ(wedge(e2, e1), -wedge(e1, e2));
  EXPECT_EQ(wedge(form(*r, 4, "e1^e2"), form(*r, 4, "e3^e4")), form(*r, 4, "e1^e2^e3^e4"));
  EXPECT_EQ(wedge(form(*r, 4, "e2^e4"), form(*r, 4, "e1^e3")), -form(*r, 4, "e1^e2^e3^e4"));
  EXPECT_THROW(wedge(e1, Form::generator(5, 0)), InputError);
}

TEST(Wedge, SignMatchesPermutationParity) {
  // e_a ^ e_b for disjoint a, b: sign of the shuffle
  EXPECT_EQ(wedge_sign(0b0001, 0b0010), 1);
  EXPECT_EQ(wedge_sign(0b0010, 0b0001), -1);
  EXPECT_EQ(wedge_sign(0b1010, 0b0101), -1);  // e2e4 ^ e1e3 -> e1e2e3e4 needs 3 swaps
  EXPECT_EQ(wedge_sign(0b0011, 0b1100), 1);
  EXPECT_EQ(wedge_sign(0b0011, 0b0110), 0);
}

TEST(Differential, IwasawaStructureEquation) {
  auto r = ring12({"t", "s"});
  Algebra alg = algebra(r, 6, {{5, "t*e1^e2 + 2*t*e3^e4 + s*e1^e3 - s*e2^e4"}, {6, "s*e1^e4 + s*e2^e3"}});
  EXPECT_EQ(alg.d(alg.generator(4)), form(*r, 6, "t*(e1^e2 + 2*e3^e4) + s*(e1^e3 - e2^e4)"));
  EXPECT_TRUE(alg.d(Form::constant(6, scalar(*r, "t + 1"))).is_zero());
  EXPECT_TRUE(check_d_squared(alg).pass);
}

TEST(Differential, DSquaredFailureWitness) {
  auto r = ring12();
  Algebra alg = algebra(r, 4, {{3, "e1^e2"}, {4, "e3^e4"}});
  auto c = check_d_squared(alg);
  EXPECT_FALSE(c.pass);
  EXPECT_EQ(c.generator, 3);
  EXPECT_EQ(c.witness, form(*r, 4, "e1^e2^e4"));
  EXPECT_TRUE(check_d_squared(Algebra::abelian(r, 6)).pass);
}

TEST(Differential, FunctionCoefficient) {
  auto r = ring12({}, {{"f", {3, 6}, {}}});
  Algebra alg = Algebra::abelian(r, 6);
  // d(f e3) = f_6 e6 ^ e3
  Form fe3 = r->function("f") * alg.generator(2);
  EXPECT_EQ(alg.d(fe3), r->function("f", {6}) * wedge(alg.generator(5), alg.generator(2)));
  EXPECT_EQ(alg.d(fe3).to_string(real_names(6)), "-f_6*e3^e6");
}

TEST(Differential, CoordinateBeyondCoframe) {
  auto r = ring12({}, {{"f", {7}, {}}});
  Algebra alg = Algebra::abelian(r, 6);
  EXPECT_THROW(alg.d(Form::constant(6, r->function("f"))), InputError);
}

TEST(Differential, NonTwoFormRejected) {
  auto r = ring12();
  std::vector<Form> d(4, Form(4));
  d[2] = Form::generator(4, 0);
  EXPECT_THROW(Algebra(r, 4, d), InputError);
}

TEST(Forms, PrintingAndSubstitution) {
  auto r = ring12({"t"});
  Form f = form(*r, 4, "-e1^e2 + (1/2 + I)*e3 + t*e4");
  EXPECT_EQ(f.to_string(real_names(4)), "(1/2 + I)*e3 + t*e4 - e1^e2");
  // swap e1 <-> e2
  std::vector<Form> img = {Form::generator(4, 1), Form::generator(4, 0), Form::generator(4, 2), Form::generator(4, 3)};
  EXPECT_EQ(substitute(form(*r, 4, "e1^e2^e3"), img, 4), form(*r, 4, "-e1^e2^e3"));
}

TEST(Forms, TopDegreeIsOneDimensional) {
  EXPECT_EQ(monomials(6, 6).size(), 1u);
  EXPECT_EQ(monomials(8, 4).size(), 70u);
  EXPECT_TRUE(monomials(4, 5).empty());
}
