#include "srgkit/lti.h"

#include <cmath>

#include <gtest/gtest.h>

#include "srgkit/errors.h"
#include "srgkit/fixtures.h"
#include "test_systems.h"

namespace srgkit {
namespace {

using Eigen::MatrixXd;

MatrixXd Col(std::initializer_list<double> v) {
  MatrixXd M(v.size(), 1);
  int i = 0;
  for (double x : v) M(i++, 0) = x;
  return M;
}

StateSpace Scalar(double a, double b, double c, double d) {
  return StateSpace(MatrixXd::Constant(1, 1, a), MatrixXd::Constant(1, 1, b),
                    MatrixXd::Constant(1, 1, c), MatrixXd::Constant(1, 1, d));
}

TEST(StateSpaceTest, RejectsInconsistentShapes) {
  EXPECT_THROW(StateSpace(MatrixXd::Zero(2, 2), MatrixXd::Zero(2, 1),
                          MatrixXd::Zero(1, 3), MatrixXd::Zero(1, 1)),
               DimensionError);
  EXPECT_THROW(StateSpace(MatrixXd::Zero(2, 2), MatrixXd::Zero(2, 2),
                          MatrixXd::Zero(1, 2), MatrixXd::Zero(1, 1)),
               DimensionError);
  const StateSpace s = StateSpace::Static(MatrixXd::Constant(1, 1, 2.0));
  EXPECT_EQ(s.num_states(), 0);
  EXPECT_EQ(s.num_channels(), 1);
}

TEST(SimulateTest, MarkovParameters) {
  const Trajectory t = simulate(Scalar(0.5, 1, 1, 0), Col({1, 0, 0}));
  EXPECT_DOUBLE_EQ(t.y(0, 0), 0.0);
  EXPECT_DOUBLE_EQ(t.y(1, 0), 1.0);
  EXPECT_DOUBLE_EQ(t.y(2, 0), 0.5);
}

TEST(SimulateTest, LowPassImpulse) {
  const Trajectory t = simulate(fixtures::low_pass(), Col({1, 0, 0, 0, 0}));
  EXPECT_NEAR(t.y(0, 0), 0.10, 1e-15);
  EXPECT_NEAR(t.y(1, 0), 0.29, 1e-15);
}

TEST(SimulateTest, ZeroInputGivesZeroOutput) {
  const Trajectory t = simulate(fixtures::unstable_mimo(), MatrixXd::Zero(30, 2));
  EXPECT_EQ(t.y.cwiseAbs().maxCoeff(), 0.0);
}

TEST(SimulateTest, Linear) {
  const StateSpace ss = testing::random_system(3, 3, 2);
  const MatrixXd u1 = testing::random_input(1, 40, 2);
  const MatrixXd u2 = testing::random_input(2, 40, 2);
  const MatrixXd lhs = simulate(ss, 2.0 * u1 - 3.0 * u2).y;
  const MatrixXd rhs = 2.0 * simulate(ss, u1).y - 3.0 * simulate(ss, u2).y;
  EXPECT_LE((lhs - rhs).norm(), 1e-12 * rhs.norm());
}

TEST(SimulateTest, RejectsWrongChannelCount) {
  EXPECT_THROW(simulate(fixtures::low_pass(), MatrixXd::Zero(5, 2)),
               DimensionError);
}

TEST(LagTest, FullStateMeasurement) {
  MatrixXd A(2, 2);
  A << 0.5, 0.1, 0.0, 0.3;
  const StateSpace ss(A, MatrixXd::Identity(2, 2), MatrixXd::Identity(2, 2),
                      MatrixXd::Zero(2, 2));
  EXPECT_EQ(lag(ss), 1);
}

// Independent rank sweep over the observability stack.
int SweepLag(const StateSpace& ss) {
  const int n = ss.num_states();
  MatrixXd O(0, n);
  MatrixXd CAk = ss.C();
  for (int l = 1; l <= n; ++l) {
    MatrixXd next(O.rows() + CAk.rows(), n);
    next << O, CAk;
    O = next;
    Eigen::BDCSVD<MatrixXd> svd(O);
    const auto sv = svd.singularValues();
    int r = 0;
    for (int i = 0; i < sv.size(); ++i) r += sv(i) > 1e-8 * sv(0);
    if (r == n) return l;
    CAk = CAk * ss.A();
  }
  return -1;
}

TEST(LagTest, Fixtures) {
  EXPECT_EQ(lag(fixtures::low_pass()), 2);
  EXPECT_EQ(lag(fixtures::high_pass()), 2);
  EXPECT_EQ(lag(fixtures::unstable_mimo()), SweepLag(fixtures::unstable_mimo()));
  EXPECT_EQ(lag(fixtures::unstable_mimo()), 2);
  EXPECT_EQ(lag(StateSpace::Static(MatrixXd::Identity(2, 2))), 0);
}

TEST(LagTest, RandomSystemsBoundedByStateDimension) {
  for (unsigned seed = 0; seed < 10; ++seed) {
    const StateSpace ss = testing::random_system(seed, 1 + seed % 5, 1 + seed % 2);
    const int l = lag(ss);
    EXPECT_EQ(l, SweepLag(ss));
    EXPECT_LE(l, ss.num_states());
  }
}

TEST(LagTest, UnobservableThrows) {
  MatrixXd C(1, 2);
  C << 1.0, 0.0;
  const StateSpace ss(MatrixXd::Identity(2, 2) * 0.5, Col({1, 1}), C,
                      MatrixXd::Zero(1, 1));
  EXPECT_THROW(lag(ss), NotObservableError);
}

TEST(HankelTest, ScalarDepthTwo) {
  MatrixXd expected(2, 3);
  expected << 1, 2, 3, 2, 3, 4;
  EXPECT_EQ(hankel(Col({1, 2, 3, 4}), 2), expected);
  EXPECT_EQ(hankel(Col({1, 2, 3, 4}), 1), Col({1, 2, 3, 4}).transpose());
}

TEST(HankelTest, BlockStructure) {
  MatrixXd u(3, 2);
  u << 1, 2, 3, 4, 5, 6;
  MatrixXd expected(4, 2);
  expected << 1, 3,
              2, 4,
              3, 5,
              4, 6;
  EXPECT_EQ(hankel(u, 2), expected);
}

TEST(HankelTest, FirstBlockRowIsTheSignal) {
  const MatrixXd u = testing::random_input(5, 20, 2);
  const MatrixXd H = hankel(u, 4);
  EXPECT_EQ(H.topRows(2), u.topRows(17).transpose());
}

TEST(HankelTest, DepthBeyondLengthThrows) {
  EXPECT_THROW(hankel(Col({1, 2}), 3), DimensionError);
}

TEST(PersistentExcitationTest, Examples) {
  EXPECT_FALSE(is_persistently_exciting(Col({1, 0, 0, 0, 0}), 2));
  EXPECT_TRUE(is_persistently_exciting(Col({1, 2, 3, 4}), 2));
  EXPECT_TRUE(is_persistently_exciting(testing::random_input(11, 50, 2), 7));
  EXPECT_EQ(persistent_excitation_order(Col({1, 0, 0, 0, 0})), 1);
}

TEST(ShiftOutputTest, SubtractsFromFeedthrough) {
  const StateSpace lp = fixtures::low_pass();
  EXPECT_EQ(shift_output(lp, 0.0).D(), lp.D());
  EXPECT_NEAR(shift_output(lp, 0.10).D()(0, 0), 0.0, 1e-17);
  EXPECT_EQ(shift_output(StateSpace::Static(MatrixXd::Constant(1, 1, 2)), 2.0)
                .D()(0, 0),
            0.0);
}

TEST(InverseSystemTest, ScalarExample) {
  const StateSpace inv = inverse_system(Scalar(0.5, 1, 1, 2));
  EXPECT_DOUBLE_EQ(inv.A()(0, 0), 0.0);
  EXPECT_DOUBLE_EQ(inv.B()(0, 0), 0.5);
  EXPECT_DOUBLE_EQ(inv.C()(0, 0), -0.5);
  EXPECT_DOUBLE_EQ(inv.D()(0, 0), 0.5);
}

TEST(InverseSystemTest, IdentityFeedthrough) {
  MatrixXd A(2, 2);
  A << 0.1, 0.2, 0.3, 0.4;
  const StateSpace ss(A, MatrixXd::Ones(2, 1), MatrixXd::Zero(1, 2),
                      MatrixXd::Identity(1, 1));
  const StateSpace inv = inverse_system(ss);
  EXPECT_EQ(inv.A(), A);
  EXPECT_EQ(inv.B(), ss.B());
  EXPECT_EQ(inv.C().cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(inv.D(), ss.D());
}

TEST(InverseSystemTest, RoundTripAndInvolution) {
  const StateSpace ss = testing::random_system(7, 3, 1);
  const MatrixXd u = testing::random_input(8, 30, 1);
  const StateSpace inv = inverse_system(ss);
  const MatrixXd back = simulate(inv, simulate(ss, u).y).y;
  // Rounding errors grow with the inverse's spectral radius when it exceeds 1.
  const double rho = inv.A().eigenvalues().cwiseAbs().maxCoeff();
  EXPECT_LE((back - u).cwiseAbs().maxCoeff(),
            1e-11 * std::pow(std::max(1.0, rho), 30));
  const StateSpace twice = inverse_system(inv);
  EXPECT_LE((twice.A() - ss.A()).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_LE((twice.B() - ss.B()).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_LE((twice.C() - ss.C()).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_LE((twice.D() - ss.D()).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(InverseSystemTest, SingularFeedthroughThrows) {
  EXPECT_THROW(inverse_system(fixtures::unstable_mimo()),
               SingularFeedthroughError);
}

TEST(FreqResponseTest, Examples) {
  EXPECT_DOUBLE_EQ(
      freq_response(StateSpace::Static(MatrixXd::Constant(1, 1, 2)), 1.3)(0, 0)
          .real(),
      2.0);
  // (I - A)^{-1} B for the filter dynamics is (1, 1) / (1 - 0.94 + 0.33).
  const double dc = (0.29 + 0.07) / 0.39 + 0.10;
  EXPECT_NEAR(std::abs(freq_response(fixtures::low_pass(), 0.0)(0, 0)), dc,
              1e-14);
  EXPECT_NEAR(std::abs(freq_response(fixtures::low_pass(), 0.0)(0, 0)), 1.0231,
              1e-4);
  // (-I - A)^{-1} B = (-1, 1) / (1 + 0.94 + 0.33).
  const double nyq = (0.60 + 0.38) / 2.27 + 0.57;
  EXPECT_NEAR(std::abs(freq_response(fixtures::high_pass(), M_PI)(0, 0)), nyq,
              1e-14);
  EXPECT_NEAR(std::abs(freq_response(fixtures::high_pass(), M_PI)(0, 0)),
              1.0017, 1e-4);
}

TEST(FreqResponseTest, ShiftCommutes) {
  const StateSpace ss = testing::random_system(4, 3, 2);
  for (double theta : {0.0, 0.7, 2.5}) {
    const Eigen::MatrixXcd lhs = freq_response(shift_output(ss, 0.3), theta);
    const Eigen::MatrixXcd rhs =
        freq_response(ss, theta) - 0.3 * Eigen::MatrixXcd::Identity(2, 2);
    EXPECT_LE((lhs - rhs).cwiseAbs().maxCoeff(), 1e-14);
  }
}

TEST(FreqResponseTest, UnitCirclePoleThrows) {
  const StateSpace integrator = Scalar(1.0, 1.0, 1.0, 0.0);
  EXPECT_TRUE(has_unit_circle_eigenvalue(integrator));
  EXPECT_THROW(freq_response(integrator, 0.0), UnitCirclePoleError);
  EXPECT_NO_THROW(freq_response(integrator, 1.0));
}

}  // namespace
}  // namespace srgkit
