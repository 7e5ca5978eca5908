#include "srgkit/lti.h"

#include <algorithm>
#include <string>

#include "srgkit/errors.h"

namespace srgkit {

using Eigen::MatrixXd;

const char* to_string(OperatorKind kind) {
  return kind == OperatorKind::kTruncatedLimit ? "trunc" : "l2";
}

StateSpace::StateSpace(MatrixXd A, MatrixXd B, MatrixXd C, MatrixXd D)
    : A_(std::move(A)), B_(std::move(B)), C_(std::move(C)), D_(std::move(D)) {
  const auto n = A_.rows();
  const auto m = D_.rows();
  if (A_.cols() != n || B_.rows() != n || C_.cols() != n) {
    throw DimensionError("StateSpace: A must be n x n with B n x m, C m x n");
  }
  if (D_.cols() != m || B_.cols() != m || C_.rows() != m) {
    throw DimensionError(
        "StateSpace: inputs and outputs must agree (B n x m, C m x n, D m x "
        "m)");
  }
  if (m == 0) {
    throw DimensionError("StateSpace: at least one channel is required");
  }
}

StateSpace StateSpace::Static(const MatrixXd& D) {
  return StateSpace(MatrixXd(0, 0), MatrixXd(0, D.cols()),
                    MatrixXd(D.rows(), 0), D);
}

double StateSpace::spectral_radius() const {
  if (A_.rows() == 0) return 0.0;
  return A_.eigenvalues().cwiseAbs().maxCoeff();
}

void Trajectory::Validate() const {
  if (u.rows() != y.rows() || u.cols() != y.cols()) {
    throw DimensionError("Trajectory: u and y must have identical shape");
  }
  if (u.rows() < 1 || u.cols() < 1) {
    throw DimensionError("Trajectory: need at least one sample and channel");
  }
}

int numerical_rank(const MatrixXd& M, double rel_tol) {
  if (M.size() == 0) return 0;
  Eigen::JacobiSVD<MatrixXd> svd(M);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  const double thresh = rel_tol * s(0);
  return static_cast<int>((s.array() > thresh).count());
}

Trajectory simulate(const StateSpace& ss, const MatrixXd& u) {
  const int m = ss.num_channels();
  if (u.cols() != m) {
    throw DimensionError("simulate: input has " + std::to_string(u.cols()) +
                         " columns, system has " + std::to_string(m) +
                         " channels");
  }
  const auto N = u.rows();
  Trajectory traj{u, MatrixXd(N, m)};
  Eigen::VectorXd x = Eigen::VectorXd::Zero(ss.num_states());
  for (Eigen::Index k = 0; k < N; ++k) {
    const Eigen::VectorXd uk = u.row(k).transpose();
    traj.y.row(k) = (ss.C() * x + ss.D() * uk).transpose();
    x = ss.A() * x + ss.B() * uk;
  }
  return traj;
}

MatrixXd observability_matrix(const StateSpace& ss, int depth) {
  const int n = ss.num_states();
  const int m = ss.num_channels();
  MatrixXd O(m * depth, n);
  if (depth == 0) return O;
  O.topRows(m) = ss.C();
  for (int i = 1; i < depth; ++i) {
    O.middleRows(m * i, m) = O.middleRows(m * (i - 1), m) * ss.A();
  }
  return O;
}

int lag(const StateSpace& ss, double rank_tol) {
  const int n = ss.num_states();
  if (n == 0) return 0;
  for (int l = 1; l <= n; ++l) {
    if (numerical_rank(observability_matrix(ss, l), rank_tol) == n) return l;
  }
  throw NotObservableError("lag: (A, C) is not observable; rank " +
                           std::to_string(n) + " never reached");
}

MatrixXd hankel(const MatrixXd& u, int depth) {
  const auto N = static_cast<int>(u.rows());
  const auto m = static_cast<int>(u.cols());
  if (depth < 1 || depth > N) {
    throw DimensionError("hankel: need 1 <= depth <= N");
  }
  const int cols = N - depth + 1;
  MatrixXd H(m * depth, cols);
  for (int i = 0; i < depth; ++i) {
    H.middleRows(m * i, m) = u.middleRows(i, cols).transpose();
  }
  return H;
}

bool is_persistently_exciting(const MatrixXd& u, int order, double rank_tol) {
  if (order < 1 || order > u.rows()) {
    throw DimensionError("is_persistently_exciting: need 1 <= order <= N");
  }
  const MatrixXd H = hankel(u, order);
  if (H.cols() < H.rows()) return false;
  return numerical_rank(H, rank_tol) == H.rows();
}

int persistent_excitation_order(const MatrixXd& u, double rank_tol) {
  int best = 0;
  for (int L = 1; L <= u.rows(); ++L) {
    if (u.cols() * L > u.rows() - L + 1) break;
    if (!is_persistently_exciting(u, L, rank_tol)) break;
    best = L;
  }
  return best;
}

StateSpace shift_output(const StateSpace& ss, double alpha) {
  const int m = ss.num_channels();
  return StateSpace(ss.A(), ss.B(), ss.C(),
                    ss.D() - alpha * MatrixXd::Identity(m, m));
}

StateSpace inverse_system(const StateSpace& ss) {
  const MatrixXd& D = ss.D();
  Eigen::JacobiSVD<MatrixXd> svd(D);
  const auto& s = svd.singularValues();
  const double smax = s(0);
  const double smin = s(s.size() - 1);
  if (smax == 0.0 || smin <= kFeedthroughSingularTol * smax) {
    throw SingularFeedthroughError(
        "inverse_system: D is singular, the truncated operator has minimum "
        "gain 0");
  }
  const Eigen::PartialPivLU<MatrixXd> lu(D);
  const MatrixXd Dinv = lu.inverse();
  const MatrixXd BDinv = ss.B() * Dinv;
  return StateSpace(ss.A() - BDinv * ss.C(), BDinv, -Dinv * ss.C(), Dinv);
}

bool has_unit_circle_eigenvalue(const StateSpace& ss, double tol) {
  if (ss.num_states() == 0) return false;
  const Eigen::VectorXcd eig = ss.A().eigenvalues();
  for (Eigen::Index i = 0; i < eig.size(); ++i) {
    if (std::abs(std::abs(eig(i)) - 1.0) <= tol) return true;
  }
  return false;
}

Eigen::MatrixXcd freq_response(const StateSpace& ss, double theta) {
  const int n = ss.num_states();
  const Eigen::MatrixXcd D = ss.D().cast<std::complex<double>>();
  if (n == 0) return D;
  const std::complex<double> z = std::polar(1.0, theta);
  const Eigen::MatrixXcd M =
      z * Eigen::MatrixXcd::Identity(n, n) - ss.A().cast<std::complex<double>>();
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(M);
  const auto& s = svd.singularValues();
  const double scale = std::max(1.0, ss.A().norm());
  if (s(s.size() - 1) <= 1e-12 * scale) {
    throw UnitCirclePoleError("freq_response: pole on the unit circle at theta=" +
                              std::to_string(theta));
  }
  const Eigen::MatrixXcd X =
      M.partialPivLu().solve(ss.B().cast<std::complex<double>>());
  return ss.C().cast<std::complex<double>>() * X + D;
}

}  // namespace srgkit
