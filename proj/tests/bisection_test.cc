#include "srgkit/bisection.h"

#include <cmath>

#include <gtest/gtest.h>

#include "srgkit/errors.h"

namespace srgkit {
namespace {

FeasibilityResult Status(FeasibilityStatus s) {
  FeasibilityResult r;
  r.status = s;
  return r;
}

// Feasible above the threshold.
GainPredicate Above(double threshold) {
  return [threshold](double g) {
    return Status(g >= threshold ? FeasibilityStatus::kFeasible
                                 : FeasibilityStatus::kInfeasible);
  };
}

// Feasible below the threshold.
GainPredicate Below(double threshold) {
  return [threshold](double g) {
    return Status(g <= threshold ? FeasibilityStatus::kFeasible
                                 : FeasibilityStatus::kInfeasible);
  };
}

TEST(BisectionTest, UpperThreshold) {
  for (double t : {1e-3, 0.7, 3.0, 4321.0}) {
    const BisectionResult r = bisect_gain(Above(t), 0.0, 1.0, GainSide::kUpper);
    EXPECT_GE(r.value, t);
    EXPECT_LE(r.value - t, 1e-6 * r.value + 1e-12) << t;
    EXPECT_EQ(r.value, r.hi);
    EXPECT_FALSE(r.settled);
  }
}

TEST(BisectionTest, LowerThreshold) {
  for (double t : {1e-3, 0.7, 3.0, 4321.0}) {
    const BisectionResult r = bisect_gain(Below(t), 0.0, 1.0, GainSide::kLower);
    EXPECT_LE(r.value, t);
    EXPECT_LE(t - r.value, 1e-6 * t + 1e-12) << t;
    EXPECT_EQ(r.value, r.lo);
  }
}

TEST(BisectionTest, CapAndFloor) {
  BisectionOptions opt;
  opt.cap = 100.0;
  EXPECT_EQ(bisect_gain(Above(1e3), 0.0, 1.0, GainSide::kUpper, opt).value,
            kInfinity);
  EXPECT_EQ(bisect_gain(Below(-1.0), 0.0, 1.0, GainSide::kLower, opt).value,
            0.0);
  EXPECT_EQ(bisect_gain(Below(1e3), 0.0, 1.0, GainSide::kLower, opt).value,
            kInfinity);
  // Feasible at the smallest resolvable value: the threshold is 0.
  EXPECT_LE(bisect_gain(Above(0.0), 0.0, 1.0, GainSide::kUpper, opt).value,
            opt.abs_tol);
}

TEST(BisectionTest, InconclusiveThrowsWithBracket) {
  const GainPredicate p = [](double g) {
    if (g > 1.0 && g < 2.0) return Status(FeasibilityStatus::kInconclusive);
    return Status(g >= 1.5 ? FeasibilityStatus::kFeasible
                           : FeasibilityStatus::kInfeasible);
  };
  try {
    bisect_gain(p, 0.0, 4.0, GainSide::kUpper, {}, 0.25);
    FAIL() << "expected SolverInconclusiveError";
  } catch (const SolverInconclusiveError& e) {
    EXPECT_EQ(e.alpha(), 0.25);
    EXPECT_LE(e.bracket_lo(), 1.5);
    EXPECT_GE(e.bracket_hi(), 1.5);
  }
}

TEST(BisectionTest, StepsAroundUndecidedMidpoint) {
  // The first halving lands exactly on the threshold while [0.5, 1] is wide.
  for (GainSide side : {GainSide::kUpper, GainSide::kLower}) {
    const double t = 0.75;
    const GainPredicate p = [t, side](double g) {
      if (std::abs(g - t) < 1e-9) return Status(FeasibilityStatus::kInconclusive);
      const bool above = g >= t;
      return Status(above == (side == GainSide::kUpper)
                        ? FeasibilityStatus::kFeasible
                        : FeasibilityStatus::kInfeasible);
    };
    const BisectionResult r = bisect_gain(p, 0.0, 1.0, side);
    EXPECT_TRUE(r.settled);
    EXPECT_LE(r.lo, t);
    EXPECT_GE(r.hi, t);
    EXPECT_NEAR(r.value, t, 1e-4);
  }
}

TEST(BisectionTest, SurvivesIsolatedStalls) {
  // Undecided near 0.625 (a midpoint) and exactly at the first expansion point,
  // both far from the threshold at 0.3; the answer is still exact.
  for (GainSide side : {GainSide::kUpper, GainSide::kLower}) {
    const double t = 0.3;
    const GainPredicate p = [t, side](double g) {
      if (std::abs(g - 0.625) < 0.01 || g == 2.0)
        return Status(FeasibilityStatus::kInconclusive);
      const bool above = g >= t;
      return Status(above == (side == GainSide::kUpper)
                        ? FeasibilityStatus::kFeasible
                        : FeasibilityStatus::kInfeasible);
    };
    const BisectionResult r = bisect_gain(p, 0.0, 2.0, side);
    EXPECT_FALSE(r.settled);
    EXPECT_NEAR(r.value, t, 1e-6);
  }
  // Undecided everywhere in the middle of a wide bracket still fails.
  const GainPredicate wall = [](double g) {
    if (g > 0.2 && g < 0.9) return Status(FeasibilityStatus::kInconclusive);
    return Status(g >= 0.5 ? FeasibilityStatus::kFeasible
                           : FeasibilityStatus::kInfeasible);
  };
  EXPECT_THROW(bisect_gain(wall, 0.0, 1.0, GainSide::kUpper),
               SolverInconclusiveError);
}

TEST(BisectionTest, SettlesInsideNarrowBracket) {
  const double t = 1.2345;
  const GainPredicate p = [t](double g) {
    if (std::abs(g - t) < 1e-6) return Status(FeasibilityStatus::kInconclusive);
    return Status(g >= t ? FeasibilityStatus::kFeasible
                         : FeasibilityStatus::kInfeasible);
  };
  const BisectionResult r = bisect_gain(p, 0.0, 1.0, GainSide::kUpper);
  EXPECT_TRUE(r.settled);
  EXPECT_GE(r.value, t);
  EXPECT_LE(r.hi - r.lo, 1e-4 * r.hi);

  BisectionOptions strict;
  strict.settle_rel_tol = 0.0;
  EXPECT_THROW(bisect_gain(p, 0.0, 1.0, GainSide::kUpper, strict),
               SolverInconclusiveError);
}

TEST(BisectionTest, NonMonotoneDetected) {
  // Infeasible at 1 on the first call, feasible when asked again: the
  // repeated probe of the lower bracket end exposes the contradiction.
  int calls = 0;
  const GainPredicate p = [&calls](double g) {
    ++calls;
    const bool feasible = g >= 2.0 || (g >= 1.0 && calls > 1);
    return Status(feasible ? FeasibilityStatus::kFeasible
                           : FeasibilityStatus::kInfeasible);
  };
  EXPECT_THROW(bisect_gain(p, 0.0, 1.0, GainSide::kUpper), NonMonotoneError);
}

}  // namespace
}  // namespace srgkit
