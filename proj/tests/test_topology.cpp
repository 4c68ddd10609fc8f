#include <gtest/gtest.h>

#include "common.hpp"

using namespace sktwb;
using namespace testing_util;

namespace {
PoincarePoly P(std::vector<long> b) { return PoincarePoly(std::move(b)); }
}  // namespace

TEST(ProjectiveSpace, Poincare) {
  EXPECT_EQ(cp_poincare(1), P({1}));
  EXPECT_EQ(cp_poincare(3), P({1, 0, 1, 0, 1}));
  EXPECT_EQ(cp_poincare(4), P({1, 0, 1, 0, 1, 0, 1}));
  EXPECT_THROW(cp_poincare(0), InputError);
}

TEST(Blowup, PointInDimensionThree) {
  PoincarePoly m = P({1, 2, 3, 4, 3, 2, 1});
  EXPECT_EQ(blowup_poincare(m, BlowupStep::point(3)), P({1, 2, 4, 4, 4, 2, 1}));
}

TEST(Blowup, AlongCurve) {
  // P_M + (1 + 2t + t^2) t^2
  PoincarePoly m = P({1, 0, 3, 0, 3, 0, 1});
  EXPECT_EQ(blowup_poincare(m, BlowupStep::along(3, 1, P({1, 2, 1}))), P({1, 0, 4, 2, 4, 0, 1}));
}

TEST(Blowup, DivisorIsIdentity) {
  PoincarePoly m = P({1, 1, 5, 3, 5, 1, 1});
  EXPECT_EQ(blowup_poincare(m, BlowupStep::along(3, 2, P({1, 2, 2, 2, 1}))), m);
}

TEST(Blowup, PointEqualsZeroDimensionalCenter) {
  PoincarePoly m = P({1, 7, 22, 41, 50, 41, 22, 7, 1});
  EXPECT_EQ(blowup_poincare(m, BlowupStep::point(4)), blowup_poincare(m, BlowupStep::along(4, 0, P({1}))));
  EXPECT_EQ(blowup_poincare(m, BlowupStep::point(4))[1], 7);
}

TEST(Blowup, MalformedSteps) {
  EXPECT_THROW(blowup_poincare(P({1}), BlowupStep::along(3, 3, P({1}))), InputError);
  EXPECT_THROW(blowup_poincare(P({1}), BlowupStep::along(3, 1, P({1, 0, 0, 1}))), InputError);
  EXPECT_THROW(blowup_poincare(P({1, 0, 0, 0, 0, 0, 0, 0, 1}), BlowupStep::point(3)), InputError);
}

TEST(Schedule, SixtyFourPoints) {
  auto r = resolve_schedule(P({1, 0, 15, 0, 15, 0, 1}), {BlowupStep::point(3, 64)});
  EXPECT_EQ(r.result, P({1, 0, 79, 0, 79, 0, 1}));
  EXPECT_TRUE(r.b0_b1_constant);
  ASSERT_EQ(r.contributions.size(), 1u);
  EXPECT_EQ(r.contributions[0], P({0, 0, 64, 0, 64}));
}

TEST(Schedule, EmptyAndOrderIndependent) {
  PoincarePoly m = P({1, 1, 8, 15, 14, 15, 8, 1, 1});
  EXPECT_EQ(resolve_schedule(m, {}).result, m);
  BlowupStep a = BlowupStep::point(4, 3), b = BlowupStep::along(4, 2, cp_poincare(3), 2);
  EXPECT_EQ(resolve_schedule(m, {a, b}).result, resolve_schedule(m, {b, a}).result);
}
