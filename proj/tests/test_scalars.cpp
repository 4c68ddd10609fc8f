#include <gtest/gtest.h>

#include "common.hpp"

using namespace sktwb;
using namespace testing_util;

TEST(Cyclotomic, CubeRootRelation) {
  RingDescriptor d;
  d.cyclotomic_order = 3;
  auto r = Ring::make(d);
  Scalar xi = r->cube_root_of_unity();
  EXPECT_TRUE((xi * xi + xi + Scalar(1)).is_zero());
  EXPECT_THROW(r->imaginary_unit(), InputError);
}

TEST(Cyclotomic, ImaginaryUnitInOrder12) {
  auto r = ring12();
  Scalar i = r->imaginary_unit();
  EXPECT_EQ(r->zeta(3), i);
  EXPECT_EQ(i.conj(), -i);
  EXPECT_EQ(i * i, Scalar(-1));
  // conj(zeta) = zeta^11
  EXPECT_EQ(r->zeta(1).conj(), r->zeta(11));
  EXPECT_EQ(r->cube_root_of_unity().to_string(), "-1 + zeta^2");
}

TEST(Cyclotomic, Inverse) {
  auto r = ring12();
  Scalar z = Scalar(2) + r->zeta(1) - Scalar(Rational(1, 3)) * r->zeta(3);
  EXPECT_EQ(z * (Scalar(1) / z), Scalar(1));
  EXPECT_THROW(Scalar(1) / Scalar(), ArithmeticError);
}

TEST(Ring, Errors) {
  RingDescriptor d;
  d.cyclotomic_order = 0;
  EXPECT_THROW(Ring::make(d), InputError);
  d.cyclotomic_order = 12;
  d.parameters = {"t", "t"};
  EXPECT_THROW(Ring::make(d), InputError);
  d.parameters = {"e3"};
  EXPECT_THROW(Ring::make(d), InputError);
}

TEST(Scalar, ParametersSpecialize) {
  auto r = ring12({"t", "s"});
  Scalar x = scalar(*r, "t^2 - s^2");
  EXPECT_TRUE(r->specialize(x, {{"t", Rational(1)}, {"s", Rational(1)}}).is_zero());
  EXPECT_EQ(r->specialize(x, {{"t", Rational(2)}, {"s", Rational(1)}}), Scalar(3));
  EXPECT_TRUE(r->specialize(scalar(*r, "t*s"), {{"t", Rational(0)}, {"s", Rational(5)}}).is_zero());
  EXPECT_THROW(r->specialize(x, {{"t", Rational(1)}}), InputError);
}

TEST(Scalar, RationalFunctionsNormalize) {
  auto r = ring12({"t", "s"});
  Scalar a = scalar(*r, "(t^2 - s^2)/(t - s)");
  EXPECT_EQ(a, scalar(*r, "t + s"));
  EXPECT_TRUE(a.is_polynomial());
  Scalar b = scalar(*r, "1/(t+s)") + scalar(*r, "1/(t-s)");
  EXPECT_EQ(b, scalar(*r, "2*t/(t^2 - s^2)"));
}

TEST(Scalar, ParametersAreRealUnderConj) {
  auto r = ring12({"t"});
  Scalar x = scalar(*r, "t*(1 + I)");
  EXPECT_EQ(x.conj(), scalar(*r, "t*(1 - I)"));
  EXPECT_EQ(x.conj().conj(), x);
}

TEST(Derivation, FunctionSymbol) {
  auto r = ring12({"t"}, {{"f", {3, 6}, {"even"}}});
  auto parts = r->derive(r->function("f"));
  ASSERT_EQ(parts.size(), 2u);
  EXPECT_EQ(parts[0].first, 3);
  EXPECT_EQ(parts[0].second, r->function("f", {3}));
  EXPECT_EQ(parts[1].first, 6);
  EXPECT_EQ(parts[1].second, r->function("f", {6}));

  EXPECT_TRUE(r->derive(r->parameter("t")).empty());
  EXPECT_TRUE(r->derive(r->zeta(1)).empty());

  // f_3 -> (3, f_33), (6, f_36)
  auto p3 = r->derive(r->function("f", {3}));
  ASSERT_EQ(p3.size(), 2u);
  EXPECT_EQ(p3[0].second.to_string(), "f_33");
  EXPECT_EQ(p3[1].second.to_string(), "f_36");
}

TEST(Derivation, MixedPartialsCommute) {
  auto r = ring12({}, {{"f", {3, 6}, {}}});
  EXPECT_EQ(r->function("f", {6, 3}), r->function("f", {3, 6}));
  EXPECT_EQ(Ring::derivative_name("f", {6, 3, 3}), "f_336");
  EXPECT_EQ(Ring::derivative_name("g", {12, 3}), "g_3_12");
  EXPECT_THROW(r->function("f", {1}), InputError);
}

TEST(Derivation, QuotientRule) {
  auto r = ring12({}, {{"f", {3}, {}}});
  Scalar f = r->function("f");
  auto parts = r->derive(Scalar(1) / (f + Scalar(1)));
  ASSERT_EQ(parts.size(), 1u);
  EXPECT_EQ(parts[0].second, -r->function("f", {3}) / ((f + Scalar(1)) * (f + Scalar(1))));
}
