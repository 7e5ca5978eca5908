#include "srgkit/gains_data.h"

#include <cmath>

#include <gtest/gtest.h>

#include "srgkit/errors.h"
#include "srgkit/fixtures.h"
#include "test_systems.h"

namespace srgkit {
namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

constexpr OperatorKind kTrunc = OperatorKind::kTruncatedLimit;
constexpr OperatorKind kL2 = OperatorKind::kL2;

DataMatrices PeData(const StateSpace& ss, unsigned seed, int N = 120,
                    int l = -1) {
  const MatrixXd u = testing::random_input(seed, N, ss.num_channels());
  return build_data_matrices(simulate(ss, u), l < 0 ? lag(ss) : l);
}

// |data - ss| <= 1e-4 max(1, ss), with Infinity matching Infinity.
::testing::AssertionResult Agree(double data, double model) {
  if (std::isinf(model) || std::isinf(data)) {
    if (data == model) return ::testing::AssertionSuccess();
    return ::testing::AssertionFailure() << data << " vs " << model;
  }
  const double tol = 1e-4 * std::max(1.0, model);
  if (std::abs(data - model) <= tol) return ::testing::AssertionSuccess();
  return ::testing::AssertionFailure()
         << "data " << data << " vs model " << model << " (tol " << tol << ")";
}

TEST(DataMatricesTest, SmallExample) {
  Trajectory traj;
  traj.u = (MatrixXd(3, 1) << 1, 2, 3).finished();
  traj.y = (MatrixXd(3, 1) << 4, 5, 6).finished();
  const DataMatrices dm = build_data_matrices(traj, 1);
  EXPECT_EQ(dm.columns(), 2);
  EXPECT_EQ(dm.Xi, (MatrixXd(2, 2) << 1, 2, 4, 5).finished());
  EXPECT_EQ(dm.XiPlus, (MatrixXd(2, 2) << 2, 3, 5, 6).finished());
  EXPECT_EQ(dm.U, (MatrixXd(1, 2) << 2, 3).finished());
  EXPECT_EQ(dm.Y, (MatrixXd(1, 2) << 5, 6).finished());
}

TEST(DataMatricesTest, FirstColumnAndShiftConsistency) {
  const StateSpace ss = fixtures::low_pass();
  const MatrixXd u = testing::random_input(3, 30, 1);
  const Trajectory traj = simulate(ss, u);
  const int l = 2;
  const DataMatrices dm = build_data_matrices(traj, l);
  EXPECT_EQ(dm.Xi.col(0), (VectorXd(4) << u(0, 0), u(1, 0), traj.y(0, 0),
                           traj.y(1, 0))
                              .finished());
  // Rebuild every regressor directly from the samples.
  for (int j = 0; j < dm.columns(); ++j) {
    const int k = l + j + 1;
    VectorXd xi(4);
    xi << u(k - 2, 0), u(k - 1, 0), traj.y(k - 2, 0), traj.y(k - 1, 0);
    EXPECT_EQ(dm.XiPlus.col(j), xi) << j;
    EXPECT_EQ(dm.XiPlus(1, j), dm.U(0, j));
    EXPECT_EQ(dm.XiPlus(3, j), dm.Y(0, j));
  }
  VectorXd z(2 * 2 + 2);
  for (int j = 0; j < dm.columns(); ++j) {
    z << dm.Xi.col(j), dm.U.col(j), dm.Y.col(j);
    EXPECT_EQ(next_regressor_map(l, 1) * z, dm.XiPlus.col(j));
  }
}

TEST(DataMatricesTest, RegressorMapMimo) {
  const StateSpace ss = fixtures::unstable_mimo();
  const DataMatrices dm = PeData(ss, 5, 40, 3);
  MatrixXd W(dm.Xi.rows() + 4, dm.columns());
  W << dm.Xi, dm.U, dm.Y;
  EXPECT_TRUE((next_regressor_map(3, 2) * W).isApprox(dm.XiPlus, 0.0));
}

TEST(DataMatricesTest, InputSequenceRoundTrip) {
  const MatrixXd u = testing::random_input(8, 25, 2);
  const Trajectory traj = simulate(fixtures::unstable_mimo(), u);
  EXPECT_EQ(input_sequence(build_data_matrices(traj, 3)), u);
  EXPECT_EQ(input_sequence(build_data_matrices(traj, 0)), u);
}

TEST(DataMatricesTest, Preconditions) {
  Trajectory traj;
  traj.u = MatrixXd::Ones(4, 1);
  traj.y = MatrixXd::Ones(4, 1);
  EXPECT_NO_THROW(build_data_matrices(traj, 2));
  EXPECT_THROW(build_data_matrices(traj, 3), PreconditionError);
  EXPECT_THROW(build_data_matrices(traj, -1), std::invalid_argument);
}

TEST(ShiftDataTest, Examples) {
  const DataMatrices dm = PeData(fixtures::high_pass(), 1, 30);
  const DataMatrices same = shift_data(dm, 0.0);
  EXPECT_EQ(same.Xi, dm.Xi);
  EXPECT_EQ(same.Y, dm.Y);

  const StateSpace two = StateSpace::Static(MatrixXd::Constant(1, 1, 2.0));
  const DataMatrices sdm = shift_data(PeData(two, 2, 20, 1), 2.0);
  EXPECT_EQ(sdm.Y.norm(), 0.0);
  EXPECT_EQ(sdm.Xi.row(1).norm(), 0.0);
}

TEST(ShiftDataTest, CommutesWithBuild) {
  const MatrixXd u = testing::random_input(4, 50, 2);
  const Trajectory traj = simulate(fixtures::unstable_mimo(), u);
  for (double alpha : {-1.5, 0.3, 2.0}) {
    const DataMatrices a = build_data_matrices(shift_data(traj, alpha), 3);
    const DataMatrices b = shift_data(build_data_matrices(traj, 3), alpha);
    EXPECT_TRUE(a.Xi.isApprox(b.Xi, 1e-14));
    EXPECT_TRUE(a.XiPlus.isApprox(b.XiPlus, 1e-14));
    EXPECT_EQ(a.U, b.U);
    EXPECT_TRUE(a.Y.isApprox(b.Y, 1e-14));
  }
}

TEST(GainsDataTest, StaticGain) {
  const StateSpace two = StateSpace::Static(MatrixXd::Constant(1, 1, 2.0));
  for (int l : {0, 1}) {
    const DataMatrices dm = PeData(two, 6, 20, l);
    for (OperatorKind kind : {kTrunc, kL2}) {
      EXPECT_NEAR(max_gain_data(dm, kind), 2.0, 2e-6) << l;
      EXPECT_NEAR(min_gain_data(dm, kind), 2.0, 2e-6) << l;
    }
  }
}

TEST(GainsDataTest, LowPassMatchesModel) {
  const StateSpace ss = fixtures::low_pass();
  const DataMatrices dm = PeData(ss, 11);
  for (OperatorKind kind : {kTrunc, kL2}) {
    EXPECT_TRUE(Agree(max_gain_data(dm, kind, {}, 2), max_gain(ss, kind)));
    EXPECT_TRUE(Agree(min_gain_data(dm, kind, {}, 2), min_gain(ss, kind)));
  }
}

TEST(GainsDataTest, UnstableTruncatedIsInfinite) {
  const DataMatrices dm = PeData(fixtures::unstable_mimo(), 12, 80);
  EXPECT_EQ(max_gain_data(dm, kTrunc), kInfinity);
}

TEST(GainsDataTest, ZeroFeedthroughTruncatedMinIsZero) {
  const StateSpace ss(MatrixXd::Constant(1, 1, 0.5), MatrixXd::Ones(1, 1),
                      MatrixXd::Ones(1, 1), MatrixXd::Zero(1, 1));
  EXPECT_EQ(min_gain_data(PeData(ss, 13, 30), kTrunc), 0.0);
}

TEST(GainsDataTest, HighPassAgainstFrequencyOracle) {
  const StateSpace ss = fixtures::high_pass();
  const DataMatrices dm = PeData(ss, 14);
  const GainBounds oracle = gain_freq_oracle(ss, 0.0, 200000);
  const GainBounds data = gain_annulus_data(dm, 0.0, kL2);
  EXPECT_LT(std::abs(data.gamma - oracle.gamma), 1e-3 * oracle.gamma);
  EXPECT_LT(std::abs(data.zeta - oracle.zeta), 1e-3 * oracle.zeta);
}

TEST(GainsDataTest, ShiftedDataMatchesShiftedModel) {
  const StateSpace ss = fixtures::low_pass();
  const DataMatrices dm = PeData(ss, 15);
  for (OperatorKind kind : {kTrunc, kL2}) {
    const GainBounds a = gain_annulus_data(dm, 0.3, kind);
    const GainBounds b = gain_annulus(ss, 0.3, kind);
    EXPECT_TRUE(Agree(a.gamma, b.gamma));
    EXPECT_TRUE(Agree(a.zeta, b.zeta));
  }
}

TEST(GainsDataTest, ExcitationCheck) {
  const StateSpace ss = fixtures::low_pass();
  Trajectory traj = simulate(ss, MatrixXd::Ones(60, 1));
  const DataMatrices dm = build_data_matrices(traj, 2);
  EXPECT_THROW(max_gain_data(dm, kL2, {}, 2), PreconditionError);
  EXPECT_THROW(gain_annulus_data(dm, 0.0, kL2, {}, 2), PreconditionError);
  // Too short for order n + l + 1 = 5 with a generic input: 5 columns of
  // depth 5 need N >= 9.
  const DataMatrices shortdm = PeData(ss, 16, 8);
  EXPECT_THROW(check_excitation(shortdm, 2), PreconditionError);
  EXPECT_NO_THROW(check_excitation(PeData(ss, 16, 9), 2));
  EXPECT_NO_THROW(check_excitation(dm, std::nullopt));
}

TEST(GainsDataTest, IndependentOfTrajectory) {
  const StateSpace ss = fixtures::unstable_mimo();
  const DataMatrices a = PeData(ss, 20, 80);
  const DataMatrices b = PeData(ss, 21, 150);
  EXPECT_TRUE(Agree(max_gain_data(a, kL2), max_gain_data(b, kL2)));
  EXPECT_TRUE(Agree(min_gain_data(a, kL2), min_gain_data(b, kL2)));
  EXPECT_TRUE(Agree(min_gain_data(a, kTrunc), min_gain_data(b, kTrunc)));
}

class DataEquivalenceTest : public ::testing::TestWithParam<unsigned> {};

TEST_P(DataEquivalenceTest, MatchesModelOnAlphaGrid) {
  const unsigned seed = GetParam();
  const int n = 1 + seed % 4;
  const int m = 1 + (seed / 4) % 2;
  const StateSpace ss = testing::random_system(seed, n, m, seed % 3 == 2);
  const int l = lag(ss);
  // Generic inputs are PE of order L once N >= (m + 1) L - 1; a few extra
  // samples suffice, and unstable outputs stay moderate.
  const int order = n + l + 1;
  const DataMatrices dm = PeData(ss, 100 + seed, (m + 1) * order + 10, l);
  ASSERT_NO_THROW(check_excitation(dm, n));
  for (double alpha : {-1.0, -0.5, 0.0, 0.5, 1.0}) {
    for (OperatorKind kind : {kTrunc, kL2}) {
      const GainBounds d = gain_annulus_data(dm, alpha, kind, {}, n);
      const GainBounds s = gain_annulus(ss, alpha, kind);
      EXPECT_TRUE(Agree(d.gamma, s.gamma)) << "alpha " << alpha;
      EXPECT_TRUE(Agree(d.zeta, s.zeta)) << "alpha " << alpha;
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Seeds, DataEquivalenceTest,
                         ::testing::Range(0u, 16u));

}  // namespace
}  // namespace srgkit
