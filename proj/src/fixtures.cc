#include "srgkit/fixtures.h"

namespace srgkit::fixtures {

using Eigen::MatrixXd;

StateSpace unstable_mimo() {
  MatrixXd A = MatrixXd::Zero(4, 4);
  A.diagonal() << 0.5, 1.05, -0.3, -0.9;
  MatrixXd B(4, 2);
  B << -2, 0,
       1, 0,
       1, -2,
       -1, 0;
  MatrixXd C(2, 4);
  C << 0.2, -0.3, 0.4, 0.0,
       0.0, 0.1, -0.3, 0.5;
  return StateSpace(A, B, C, MatrixXd::Zero(2, 2));
}

namespace {

MatrixXd FilterA() {
  MatrixXd A(2, 2);
  A << 0.94, -0.33,
       1.0, 0.0;
  return A;
}

MatrixXd FilterB() {
  MatrixXd B(2, 1);
  B << 1.0, 0.0;
  return B;
}

}  // namespace

StateSpace low_pass() {
  MatrixXd C(1, 2);
  C << 0.29, 0.07;
  return StateSpace(FilterA(), FilterB(), C, MatrixXd::Constant(1, 1, 0.10));
}

StateSpace high_pass() {
  MatrixXd C(1, 2);
  C << -0.60, 0.38;
  return StateSpace(FilterA(), FilterB(), C, MatrixXd::Constant(1, 1, 0.57));
}

}  // namespace srgkit::fixtures
