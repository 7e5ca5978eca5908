#include "srgkit/gains_robust.h"

#include <cmath>
#include <random>
#include <sstream>

#include "gain_search.h"
#include "srgkit/errors.h"

namespace srgkit {

using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

double SymmetryDefect(const MatrixXd& M) {
  return (M - M.transpose()).cwiseAbs().maxCoeff();
}

double MaxEigenvalue(const MatrixXd& M) {
  if (M.size() == 0) return -kInfinity;
  return Eigen::SelfAdjointEigenSolver<MatrixXd>(0.5 * (M + M.transpose()),
                                                 Eigen::EigenvaluesOnly)
      .eigenvalues()
      .maxCoeff();
}

double SpectralNorm(const MatrixXd& M) {
  if (M.size() == 0) return 0.0;
  return Eigen::JacobiSVD<MatrixXd>(M).singularValues()(0);
}

// (xi, u, y) -> (xi, u, y + center (xi, u)).
MatrixXd CenterMap(const MatrixXd& center) {
  const int q = static_cast<int>(center.cols());
  const int m = static_cast<int>(center.rows());
  MatrixXd T = MatrixXd::Identity(q + m, q + m);
  T.bottomLeftCorner(m, q) = center;
  return T;
}

}  // namespace

void NoiseModel::Validate() const {
  const int K = columns();
  const int mv = noise_dim();
  if (Q.cols() != K || S.rows() != K || S.cols() != mv || R.cols() != mv ||
      Bv.cols() != mv) {
    std::ostringstream msg;
    msg << "noise model shapes: Q " << Q.rows() << "x" << Q.cols() << ", S "
        << S.rows() << "x" << S.cols() << ", R " << R.rows() << "x" << R.cols()
        << ", Bv " << Bv.rows() << "x" << Bv.cols();
    throw DimensionError(msg.str());
  }
  if (SymmetryDefect(Q) > 1e-12 * std::max(1.0, Q.cwiseAbs().maxCoeff()) ||
      SymmetryDefect(R) > 1e-12 * std::max(1.0, R.cwiseAbs().maxCoeff())) {
    throw std::invalid_argument("noise model: Q and R must be symmetric");
  }
  if (K > 0 && !(MaxEigenvalue(Q) < 0.0)) {
    throw std::invalid_argument("noise model: Q must be negative definite");
  }
}

MatrixXd NoiseModel::Form(const MatrixXd& V) const {
  if (V.rows() != noise_dim() || V.cols() != columns()) {
    throw DimensionError("noise matrix must be m_v x (N - l)");
  }
  const MatrixXd VS = V * S;
  return V * Q * V.transpose() + VS + VS.transpose() + R;
}

bool NoiseModel::Admits(const MatrixXd& V, double tol) const {
  const MatrixXd F = Form(V);
  if (F.size() == 0) return true;
  const double min_eig = -MaxEigenvalue(-F);
  return min_eig >= -tol * std::max(1.0, R.norm());
}

NoiseModel ball_noise_model(double v_bar, int N, int l, int m) {
  if (!(v_bar > 0.0)) throw std::invalid_argument("v_bar must be positive");
  if (m < 1 || l < 0 || N <= l) {
    throw std::invalid_argument("ball noise model needs m >= 1, 0 <= l < N");
  }
  const int K = N - l;
  NoiseModel nm;
  nm.Q = -MatrixXd::Identity(K, K);
  nm.S = MatrixXd::Zero(K, m);
  nm.R = v_bar * v_bar * K * MatrixXd::Identity(m, m);
  nm.Bv = MatrixXd::Identity(m, m);
  return nm;
}

MatrixXd sample_ball_noise(int m, int N, double v_bar, std::uint64_t seed) {
  if (v_bar < 0.0) throw std::invalid_argument("v_bar must be nonnegative");
  if (m < 1 || N < 0) throw std::invalid_argument("need m >= 1 and N >= 0");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  MatrixXd v(N, m);
  for (int k = 0; k < N; ++k) {
    VectorXd dir(m);
    do {
      for (int i = 0; i < m; ++i) dir(i) = normal(rng);
    } while (dir.norm() == 0.0);
    const double radius = v_bar * std::pow(unit(rng), 1.0 / m);
    v.row(k) = (radius / dir.norm()) * dir.transpose();
  }
  return v;
}

ExtendedKnown build_extended_known(int l, int m) {
  if (l < 1 || m < 1) throw std::invalid_argument("need l >= 1 and m >= 1");
  const int p = 2 * m * l;
  const MatrixXd E = next_regressor_map(l, m).topRows(p - m);
  return {E.leftCols(p), E.middleCols(p, m)};
}

DifferenceOperator difference_operator(const StateSpace& ss, int l) {
  if (l < 0) throw std::invalid_argument("l must be nonnegative");
  const int n = ss.num_states();
  const int m = ss.num_channels();
  const MatrixXd O = observability_matrix(ss, l);
  if (n > 0 && numerical_rank(O) < n) {
    std::ostringstream msg;
    msg << "l = " << l << " is below the lag: observability matrix of depth "
        << l << " has rank " << numerical_rank(O) << " < " << n;
    throw NotObservableError(msg.str());
  }
  // y window = O x_{k-l} + Tl u window,  x_k = A^l x_{k-l} + Rl u window.
  MatrixXd Rl(n, m * l);
  MatrixXd Tl = MatrixXd::Zero(m * l, m * l);
  MatrixXd Ak = MatrixXd::Identity(n, n);
  for (int j = l - 1; j >= 0; --j) {
    Rl.middleCols(j * m, m) = Ak * ss.B();
    Ak = Ak * ss.A();
  }
  const MatrixXd Al = Ak;
  for (int i = 0; i < l; ++i) {
    Tl.block(i * m, i * m, m, m) = ss.D();
    MatrixXd CAk = ss.C();
    for (int j = i - 1; j >= 0; --j) {
      Tl.block(i * m, j * m, m, m) = CAk * ss.B();
      CAk = CAk * ss.A();
    }
  }
  const MatrixXd Opinv =
      n > 0 ? MatrixXd(O.completeOrthogonalDecomposition().pseudoInverse())
            : MatrixXd(0, m * l);
  DifferenceOperator op;
  op.Ct.resize(m, 2 * m * l);
  op.Ct.leftCols(m * l) = ss.C() * (Rl - Al * Opinv * Tl);
  op.Ct.rightCols(m * l) = ss.C() * Al * Opinv;
  op.Dt = ss.D();
  return op;
}

Trajectory simulate_noisy(const StateSpace& ss, const MatrixXd& u,
                          const MatrixXd& noise, const MatrixXd& Bv, int l) {
  const int m = ss.num_channels();
  const int N = static_cast<int>(u.rows());
  if (u.cols() != m || noise.rows() != N || Bv.rows() != m ||
      Bv.cols() != noise.cols()) {
    throw DimensionError("simulate_noisy: need u N x m, noise N x m_v, Bv m x m_v");
  }
  if (l < 0) l = lag(ss);
  const DifferenceOperator op = difference_operator(ss, l);
  Trajectory traj;
  traj.u = u;
  traj.y.resize(N, m);
  VectorXd x = VectorXd::Zero(ss.num_states());
  for (int k = 0; k < std::min(l, N); ++k) {
    const VectorXd uk = u.row(k).transpose();
    traj.y.row(k) =
        (ss.C() * x + ss.D() * uk + Bv * noise.row(k).transpose()).transpose();
    x = ss.A() * x + ss.B() * uk;
  }
  VectorXd xi(2 * m * l);
  for (int k = l; k < N; ++k) {
    for (int j = 0; j < l; ++j) {
      xi.segment(j * m, m) = u.row(k - l + j).transpose();
      xi.segment(m * l + j * m, m) = traj.y.row(k - l + j).transpose();
    }
    traj.y.row(k) = (op.Ct * xi + op.Dt * u.row(k).transpose() +
                     Bv * noise.row(k).transpose())
                        .transpose();
  }
  return traj;
}

ConsistencySet build_consistency_set(const DataMatrices& dm,
                                     const NoiseModel& noise) {
  noise.Validate();
  const int K = dm.columns();
  const int m = dm.m;
  if (noise.columns() != K || noise.Bv.rows() != m) {
    std::ostringstream msg;
    msg << "noise model is for " << noise.columns() << " columns and "
        << noise.Bv.rows() << " outputs; data has " << K << " and " << m;
    throw DimensionError(msg.str());
  }
  const int q = 2 * m * dm.l + m;
  MatrixXd Phi(q, K);
  Phi << dm.Xi, dm.U;

  ConsistencySet cs;
  cs.l = dm.l;
  cs.m = m;
  // Least-squares (C~ D~); its residual is orthogonal to the rows of Phi.
  cs.center = Phi.transpose()
                  .completeOrthogonalDecomposition()
                  .solve(dm.Y.transpose())
                  .transpose();
  const MatrixXd Res = dm.Y - cs.center * Phi;

  // Inner matrix with the symmetric completion of its off-diagonal blocks.
  const MatrixXd& Bv = noise.Bv;
  MatrixXd inner(K + m, K + m);
  inner << noise.Q, noise.S * Bv.transpose(), Bv * noise.S.transpose(),
      Bv * noise.R * Bv.transpose();
  auto assemble = [&](const MatrixXd& bottom) {
    MatrixXd outer = MatrixXd::Zero(q + m, K + m);
    outer.topLeftCorner(q, K) = Phi;
    outer.bottomLeftCorner(m, K) = bottom;
    outer.bottomRightCorner(m, m).setIdentity();
    MatrixXd M = outer * inner * outer.transpose();
    return MatrixXd(0.5 * (M + M.transpose()));
  };
  const MatrixXd M = assemble(dm.Y);
  const MatrixXd Mc = assemble(Res);
  cs.Qbar = M.topLeftCorner(q, q);
  cs.Sbar = M.topRightCorner(q, m);
  cs.Rbar = M.bottomRightCorner(m, m);

  // Invert the centered matrix after diagonal equilibration.
  VectorXd d(q + m);
  for (int i = 0; i < q + m; ++i) {
    const double a = std::abs(Mc(i, i));
    d(i) = a > 0.0 ? 1.0 / std::sqrt(a) : 1.0;
  }
  const MatrixXd Me = d.asDiagonal() * Mc * d.asDiagonal();
  const VectorXd sv = Eigen::JacobiSVD<MatrixXd>(Me).singularValues();
  if (sv.size() == 0 || sv(sv.size() - 1) <= 1e-13 * sv(0)) {
    std::ostringstream msg;
    msg << "consistency matrix is singular (reciprocal condition "
        << (sv.size() ? sv(sv.size() - 1) / sv(0) : 0.0)
        << "); [Xi; U] needs full row rank: use a richer input, a longer "
           "trajectory or a noise model with invertible inner matrix";
    throw SingularConsistencyError(msg.str());
  }
  const MatrixXd Minv_c =
      d.asDiagonal() * Me.partialPivLu().inverse() * d.asDiagonal();
  cs.centered_inverse = 0.5 * (Minv_c + Minv_c.transpose());
  const MatrixXd Tinv = CenterMap(-cs.center);
  const MatrixXd Minv = Tinv.transpose() * cs.centered_inverse * Tinv;
  cs.Qt = Minv.topLeftCorner(q, q);
  cs.St = Minv.topRightCorner(q, m);
  cs.Rt = Minv.bottomRightCorner(m, m);
  cs.inverse_residual =
      (M * Minv - MatrixXd::Identity(q + m, q + m)).cwiseAbs().maxCoeff();

  const double qmax = MaxEigenvalue(cs.Qbar);
  if (!(qmax < -1e-13 * SpectralNorm(cs.Qbar))) {
    std::ostringstream msg;
    msg << "Qbar is not negative definite (largest eigenvalue " << qmax
        << "); try a longer trajectory or a larger l";
    throw IndefiniteQbarError(msg.str());
  }
  return cs;
}

double consistency_violation(const ConsistencySet& cs, const MatrixXd& Ct,
                             const MatrixXd& Dt) {
  const int q = static_cast<int>(cs.center.cols());
  const int m = cs.m;
  if (Ct.rows() != m || Dt.rows() != m || Ct.cols() + Dt.cols() != q) {
    throw DimensionError("coefficient shapes do not match the consistency set");
  }
  MatrixXd Delta(m, q);
  Delta << Ct, Dt;
  Delta -= cs.center;
  MatrixXd Z(q + m, q);
  Z << MatrixXd::Identity(q, q), Delta;
  const MatrixXd F = Z.transpose() * cs.centered_inverse * Z;
  const MatrixXd& W = cs.centered_inverse;
  const double dn = SpectralNorm(Delta);
  const double scale = SpectralNorm(W.topLeftCorner(q, q)) +
                       2.0 * dn * SpectralNorm(W.topRightCorner(q, m)) +
                       dn * dn * SpectralNorm(W.bottomRightCorner(m, m));
  return MaxEigenvalue(F) / scale;
}

bool in_consistency_set(const ConsistencySet& cs, const MatrixXd& Ct,
                        const MatrixXd& Dt, double tol) {
  return consistency_violation(cs, Ct, Dt) <= tol;
}

namespace {

LmiProblem RobustLmi(const ConsistencySet& cs, double g, OperatorKind kind,
                     double rel_margin, bool upper) {
  const int m = cs.m;
  const int p = 2 * m * cs.l;
  const int d = p + 2 * m;
  // Centered coordinates z' = (xi, u, y - center (xi, u)).
  const MatrixXd T = CenterMap(cs.center);
  const MatrixXd next = next_regressor_map(cs.l, m) * T;
  const MatrixXd cur = MatrixXd::Identity(p, d);
  const MatrixXd out = T.bottomRows(m);
  MatrixXd in = MatrixXd::Zero(m, d);
  in.middleCols(p, m).setIdentity();
  const MatrixXd& Pi = cs.centered_inverse;

  const double s = internal::gain_normalizer(g);
  const double sign = upper ? 1.0 : -1.0;
  LmiProblem problem(p, kind == OperatorKind::kTruncatedLimit);
  const int tau = problem.AddNonnegativeScalar("tau");
  LmiConstraint& c =
      problem.AddConstraint(upper ? "robust_max_gain" : "robust_min_gain", d);
  c.AddConstant(sign *
                (out.transpose() * out - g * g * in.transpose() * in) / s);
  problem.AddCongruence(c, next, 1.0);
  problem.AddCongruence(c, cur, -1.0);
  // With little noise the (xi, u) block of Pi is tiny next to the y block and
  // the useful tau grows like the inverse square root of that ratio; the
  // geometric-mean normalization keeps it near one.
  const int q = p + m;
  const double n11 = SpectralNorm(Pi.topLeftCorner(q, q));
  const double n22 = SpectralNorm(Pi.bottomRightCorner(m, m));
  const double pin = n11 > 0.0 && n22 > 0.0 ? std::sqrt(n11 * n22)
                                            : SpectralNorm(Pi);
  c.AddTerm(tau, -Pi / pin);
  const double on = SpectralNorm(out);
  c.set_scale((on * on + g * g) / s);
  c.set_margin(internal::gain_margin(rel_margin, g, c.scale()));
  return problem;
}

BisectionResult RobustSearch(const ConsistencySet& cs, OperatorKind kind,
                             const GainOptions& opts, bool upper,
                             double ref, double alpha = 0.0) {
  if (!(ref > 0.0) || !std::isfinite(ref)) ref = 1.0;
  const double abs_tol = 1e-3 * opts.rel_tol * ref;
  auto build = [&](double g, double margin) {
    return RobustLmi(cs, g, kind, margin, upper);
  };
  return internal::search_gain(
      build, upper ? GainSide::kUpper : GainSide::kLower, 0.0,
      upper ? 2.0 * ref : 1.0001 * ref + 2.0 * abs_tol, abs_tol, ref, opts,
      alpha);
}

}  // namespace

LmiProblem robust_max_gain_lmi(const ConsistencySet& cs, double gamma,
                               OperatorKind kind, double rel_margin) {
  return RobustLmi(cs, gamma, kind, rel_margin, true);
}

LmiProblem robust_min_gain_lmi(const ConsistencySet& cs, double zeta,
                               OperatorKind kind, double rel_margin) {
  return RobustLmi(cs, zeta, kind, rel_margin, false);
}

BisectionResult robust_max_gain_search(const ConsistencySet& cs,
                                       OperatorKind kind,
                                       const GainOptions& opts,
                                       double scale_hint) {
  return RobustSearch(cs, kind, opts, true, scale_hint);
}

BisectionResult robust_min_gain_search(const ConsistencySet& cs,
                                       OperatorKind kind,
                                       const GainOptions& opts,
                                       double gain_hint) {
  return RobustSearch(cs, kind, opts, false, gain_hint);
}

double robust_max_gain(const DataMatrices& dm, const NoiseModel& noise,
                       OperatorKind kind, const GainOptions& opts) {
  return robust_max_gain_search(build_consistency_set(dm, noise), kind, opts)
      .value;
}

double robust_min_gain(const DataMatrices& dm, const NoiseModel& noise,
                       OperatorKind kind, const GainOptions& opts) {
  return robust_min_gain_search(build_consistency_set(dm, noise), kind, opts)
      .value;
}

GainBounds robust_gain_annulus(const DataMatrices& dm, const NoiseModel& noise,
                               double alpha, OperatorKind kind,
                               const GainOptions& opts) {
  const ConsistencySet cs = build_consistency_set(shift_data(dm, alpha), noise);
  GainBounds out;
  out.alpha = alpha;
  out.kind = kind;
  const BisectionResult hi = RobustSearch(cs, kind, opts, true, 1.0, alpha);
  const BisectionResult lo =
      RobustSearch(cs, kind, opts, false, hi.value, alpha);
  out.gamma = hi.value;
  out.gamma_tol = hi.infinite() ? 0.0 : hi.tolerance();
  out.zeta = lo.value;
  out.zeta_tol = lo.tolerance();
  out.settled = hi.settled || lo.settled;
  return out;
}

}  // namespace srgkit
