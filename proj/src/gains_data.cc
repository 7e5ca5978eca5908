#include "srgkit/gains_data.h"

#include <cmath>
#include <sstream>

#include "gain_search.h"
#include "srgkit/errors.h"

namespace srgkit {

using Eigen::MatrixXd;

namespace {

// Relative singular value threshold for the range of [Xi; U; Y].
constexpr double kRangeTol = 1e-10;

// The data LMI is W' M(P) W <= 0 with W = [Xi; U; Y] and M a quadratic form
// in z = (xi, u, y), because XiPlus = E W for the regressor map E. The form
// is negative semidefinite on range(W) iff Q' M Q <= 0 for an orthonormal
// basis Q of that range. W' M W itself always has a null space (N - l
// exceeds the rank), so only the restricted form can be strictly negative.
// Columns are normalized first: a positive diagonal column scaling changes
// neither the range nor the sign of the form, and data from unstable systems
// otherwise spans many orders of magnitude.
struct ReducedData {
  MatrixXd Zp;  // E Q
  MatrixXd Z;   // Xi rows of Q
  MatrixXd Zu;  // U rows of Q
  MatrixXd Zy;  // Y rows of Q
  int p = 0;
  double ratio = 0.0;  // |Y|/|U| of the normalized columns
};

ReducedData Reduce(const DataMatrices& dm) {
  const int p = 2 * dm.m * dm.l;
  const int d = p + 2 * dm.m;
  MatrixXd W(d, dm.columns());
  W << dm.Xi, dm.U, dm.Y;
  for (int j = 0; j < W.cols(); ++j) {
    const double nrm = W.col(j).norm();
    if (nrm > 0.0) W.col(j) /= nrm;
  }
  Eigen::JacobiSVD<MatrixXd> svd(W, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  int r = 0;
  while (r < sv.size() && sv(r) > kRangeTol * sv(0)) ++r;
  const MatrixXd Q = svd.matrixU().leftCols(r);
  ReducedData red;
  red.p = p;
  const double un = W.middleRows(p, dm.m).norm();
  const double yn = W.bottomRows(dm.m).norm();
  red.ratio = un > 0.0 ? yn / un : (yn > 0.0 ? kInfinity : 1.0);
  const MatrixXd Zp = next_regressor_map(dm.l, dm.m) * Q;
  const MatrixXd Z = Q.topRows(p);
  // P only enters through V'PV with V a basis of the regressors that occur;
  // compressing it removes directions the data never touches. For P >= 0
  // this is exact too, since V P~ V' is a valid P for any P~ >= 0.
  if (p > 0) {
    MatrixXd ZZ(p, 2 * r);
    ZZ << Z, Zp;
    Eigen::JacobiSVD<MatrixXd> zsvd(ZZ, Eigen::ComputeThinU);
    const auto& zs = zsvd.singularValues();
    int q = 0;
    while (q < zs.size() && zs(q) > kRangeTol * zs(0)) ++q;
    const MatrixXd V = zsvd.matrixU().leftCols(q);
    red.p = q;
    red.Zp = V.transpose() * Zp;
    red.Z = V.transpose() * Z;
  } else {
    red.Zp = Zp;
    red.Z = Z;
  }
  red.Zu = Q.middleRows(p, dm.m);
  red.Zy = Q.bottomRows(dm.m);
  return red;
}

double SpectralNormSquared(const MatrixXd& M) {
  if (M.size() == 0) return 0.0;
  const double s = Eigen::JacobiSVD<MatrixXd>(M).singularValues()(0);
  return s * s;
}

LmiProblem ReducedLmi(const ReducedData& red, double g, OperatorKind kind,
                      double rel_margin, bool upper) {
  const int r = static_cast<int>(red.Zu.cols());
  const double s = internal::gain_normalizer(g);
  const double sign = upper ? 1.0 : -1.0;
  LmiProblem problem(red.p, kind == OperatorKind::kTruncatedLimit);
  LmiConstraint& c =
      problem.AddConstraint(upper ? "max_gain_data" : "min_gain_data", r);
  c.AddConstant(sign *
                (red.Zy.transpose() * red.Zy - g * g * red.Zu.transpose() * red.Zu) /
                s);
  problem.AddCongruence(c, red.Zp, 1.0);
  problem.AddCongruence(c, red.Z, -1.0);
  c.set_scale((SpectralNormSquared(red.Zy) + g * g * SpectralNormSquared(red.Zu)) /
              s);
  c.set_margin(internal::gain_margin(rel_margin, g, c.scale()));
  return problem;
}

BisectionResult Search(const DataMatrices& dm, OperatorKind kind,
                       const GainOptions& opts, bool upper, double hint,
                       double alpha = 0.0) {
  const ReducedData red = Reduce(dm);
  double ratio = red.ratio;
  if (!std::isfinite(ratio)) ratio = opts.cap;
  double ref = (hint > 0.0 && std::isfinite(hint)) ? hint : ratio;
  if (ref <= 0.0) ref = 1.0;
  const double abs_tol = 1e-3 * opts.rel_tol * ref;
  auto build = [&](double g, double margin) {
    return ReducedLmi(red, g, kind, margin, upper);
  };
  if (upper) {
    return internal::search_gain(build, GainSide::kUpper, 0.0,
                                 2.0 * ratio + abs_tol, abs_tol, ref, opts,
                                 alpha);
  }
  return internal::search_gain(build, GainSide::kLower, 0.0,
                               1.0001 * ref + 2.0 * abs_tol, abs_tol, ref, opts,
                               alpha);
}

}  // namespace

DataMatrices build_data_matrices(const Trajectory& traj, int l) {
  traj.Validate();
  if (l < 0) throw std::invalid_argument("lag bound l must be nonnegative");
  const int N = traj.length();
  const int m = traj.channels();
  if (N < l + 2) {
    std::ostringstream msg;
    msg << "trajectory too short: N = " << N << " but l = " << l
        << " needs N >= " << l + 2;
    throw PreconditionError(msg.str());
  }
  DataMatrices dm;
  dm.l = l;
  dm.m = m;
  dm.N = N;
  const int K = N - l;
  dm.Xi.resize(2 * m * l, K);
  dm.XiPlus.resize(2 * m * l, K);
  auto xi = [&](int k, Eigen::Ref<Eigen::VectorXd> out) {
    for (int j = 0; j < l; ++j) {
      out.segment(j * m, m) = traj.u.row(k - l + j).transpose();
      out.segment(m * l + j * m, m) = traj.y.row(k - l + j).transpose();
    }
  };
  for (int j = 0; j < K; ++j) {
    xi(l + j, dm.Xi.col(j));
    xi(l + j + 1, dm.XiPlus.col(j));
  }
  dm.U = traj.u.bottomRows(K).transpose();
  dm.Y = traj.y.bottomRows(K).transpose();
  return dm;
}

DataMatrices shift_data(const DataMatrices& dm, double alpha) {
  DataMatrices out = dm;
  const int ml = dm.m * dm.l;
  out.Xi.bottomRows(ml) -= alpha * dm.Xi.topRows(ml);
  out.XiPlus.bottomRows(ml) -= alpha * dm.XiPlus.topRows(ml);
  out.Y -= alpha * dm.U;
  return out;
}

Trajectory shift_data(const Trajectory& traj, double alpha) {
  Trajectory out = traj;
  out.y -= alpha * traj.u;
  return out;
}

MatrixXd input_sequence(const DataMatrices& dm) {
  MatrixXd u(dm.N, dm.m);
  for (int j = 0; j < dm.l; ++j) {
    u.row(j) = dm.Xi.col(0).segment(j * dm.m, dm.m).transpose();
  }
  u.bottomRows(dm.columns()) = dm.U.transpose();
  return u;
}

MatrixXd next_regressor_map(int l, int m) {
  const int ml = m * l;
  const int p = 2 * ml;
  MatrixXd E = MatrixXd::Zero(p, p + 2 * m);
  if (l == 0) return E;
  const int shifted = m * (l - 1);
  // Input window: drop the oldest sample, append u_k.
  E.block(0, m, shifted, shifted).setIdentity();
  E.block(shifted, p, m, m).setIdentity();
  // Output window: drop the oldest sample, append y_k.
  E.block(ml, ml + m, shifted, shifted).setIdentity();
  E.block(ml + shifted, p + m, m, m).setIdentity();
  return E;
}

LmiProblem max_gain_data_lmi(const DataMatrices& dm, double gamma,
                             OperatorKind kind, double rel_margin) {
  return ReducedLmi(Reduce(dm), gamma, kind, rel_margin, true);
}

LmiProblem min_gain_data_lmi(const DataMatrices& dm, double zeta,
                             OperatorKind kind, double rel_margin) {
  return ReducedLmi(Reduce(dm), zeta, kind, rel_margin, false);
}

void check_excitation(const DataMatrices& dm, std::optional<int> n) {
  if (!n) return;
  const int order = *n + dm.l + 1;
  const MatrixXd u = input_sequence(dm);
  if (order > u.rows() || !is_persistently_exciting(u, order)) {
    std::ostringstream msg;
    msg << "input is not persistently exciting of order n + l + 1 = " << order
        << " (achieved order " << persistent_excitation_order(u) << ")";
    throw PreconditionError(msg.str());
  }
}

BisectionResult max_gain_data_search(const DataMatrices& dm, OperatorKind kind,
                                     const GainOptions& opts) {
  return Search(dm, kind, opts, true, 0.0);
}

BisectionResult min_gain_data_search(const DataMatrices& dm, OperatorKind kind,
                                     const GainOptions& opts,
                                     double gain_hint) {
  return Search(dm, kind, opts, false, gain_hint);
}

double max_gain_data(const DataMatrices& dm, OperatorKind kind,
                     const GainOptions& opts, std::optional<int> n) {
  check_excitation(dm, n);
  return max_gain_data_search(dm, kind, opts).value;
}

double min_gain_data(const DataMatrices& dm, OperatorKind kind,
                     const GainOptions& opts, std::optional<int> n) {
  check_excitation(dm, n);
  return min_gain_data_search(dm, kind, opts).value;
}

GainBounds gain_annulus_data(const DataMatrices& dm, double alpha,
                             OperatorKind kind, const GainOptions& opts,
                             std::optional<int> n) {
  check_excitation(dm, n);
  const DataMatrices shifted = shift_data(dm, alpha);
  GainBounds out;
  out.alpha = alpha;
  out.kind = kind;
  const BisectionResult hi = Search(shifted, kind, opts, true, 0.0, alpha);
  const BisectionResult lo =
      Search(shifted, kind, opts, false, hi.value, alpha);
  out.gamma = hi.value;
  out.gamma_tol = hi.infinite() ? 0.0 : hi.tolerance();
  out.zeta = lo.value;
  out.zeta_tol = lo.tolerance();
  out.settled = hi.settled || lo.settled;
  return out;
}

}  // namespace srgkit
