// Primal-dual interior point method for small dense block-diagonal SDPs.
//
// The feasibility question "exists x with F_c(x) <= -margin_c I for all c"
// is posed as the dual-form SDP
//
//   max -t  s.t.  S = C - sum_i y_i A_i >= 0,   y = (x, t),
//
// with one block per constraint (C = -(F0 + margin I), A_i = F_i, A_t = -I),
// one block for P >= 0 (C = 0, A_i = -E_i) and one 1x1 block per nonnegative
// scalar. t only enters the constraint blocks: P and the scalars need not be
// strictly inside their cones, which matters when every certificate P is
// singular (non-minimal data coordinates). The primal is
//
//   min <C, X>  s.t.  <A_i, X> = 0 (x vars),  tr X_lmi = 1,  X >= 0,
//
// so a primal iterate bounds t* from below and every dual iterate, which is
// kept exactly feasible, bounds it from above.

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "srgkit/sdp.h"

namespace srgkit {

using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Entry {
  int r;
  int c;
  double v;
};

struct BlockCoef {
  int block = 0;
  bool sparse = false;
  MatrixXd dense;
  std::vector<Entry> entries;

  // tr(A Z) for a square, possibly non-symmetric Z.
  double Dot(const MatrixXd& Z) const {
    if (!sparse) return dense.cwiseProduct(Z.transpose()).sum();
    double acc = 0.0;
    for (const auto& e : entries) acc += e.v * Z(e.c, e.r);
    return acc;
  }

  void AddTo(MatrixXd& M, double scale) const {
    if (!sparse) {
      M.noalias() += scale * dense;
      return;
    }
    for (const auto& e : entries) M(e.r, e.c) += scale * e.v;
  }

  // X A Sinv.
  MatrixXd Sandwich(const MatrixXd& X, const MatrixXd& Sinv) const {
    if (!sparse) return X * dense * Sinv;
    MatrixXd G = MatrixXd::Zero(X.rows(), Sinv.cols());
    for (const auto& e : entries) {
      G.noalias() += e.v * X.col(e.r) * Sinv.row(e.c);
    }
    return G;
  }
};

BlockCoef DenseCoef(int block, MatrixXd M) {
  BlockCoef c;
  c.block = block;
  c.dense = std::move(M);
  return c;
}

BlockCoef SparseCoef(int block, std::vector<Entry> entries) {
  BlockCoef c;
  c.block = block;
  c.sparse = true;
  c.entries = std::move(entries);
  return c;
}

struct SdpForm {
  std::vector<int> dims;
  std::vector<MatrixXd> C;
  // Coefficients per dual variable; the last variable is t.
  std::vector<std::vector<BlockCoef>> A;
  // Original decision vector x = basis * y.head(basis.cols()).
  MatrixXd basis;
  // Blocks [0, lmi_blocks) are the constraints; the rest are cones.
  int lmi_blocks = 0;
  // Reduced x with P = I and every scalar 1: strictly inside the cones.
  VectorXd start;
  int total_dim = 0;
  double scale = 1.0;
};

// Column i holds the coefficient of original variable i, flattened over all
// blocks (upper triangles, off-diagonals weighted by sqrt 2).
MatrixXd FlattenedCoefficients(const std::vector<std::vector<BlockCoef>>& A,
                               const std::vector<int>& dims) {
  std::vector<int> offset(dims.size() + 1, 0);
  for (size_t b = 0; b < dims.size(); ++b) {
    offset[b + 1] = offset[b] + dims[b] * (dims[b] + 1) / 2;
  }
  MatrixXd F = MatrixXd::Zero(offset.back(), static_cast<int>(A.size()));
  for (size_t i = 0; i < A.size(); ++i) {
    for (const auto& coef : A[i]) {
      const int d = dims[coef.block];
      MatrixXd M = MatrixXd::Zero(d, d);
      coef.AddTo(M, 1.0);
      int row = offset[coef.block];
      for (int r = 0; r < d; ++r) {
        for (int c = r; c < d; ++c) {
          F(row++, static_cast<int>(i)) = (r == c ? 1.0 : std::sqrt(2.0)) * M(r, c);
        }
      }
    }
  }
  return F;
}

SdpForm BuildForm(const LmiProblem& problem) {
  SdpForm form;
  const int k = problem.num_vars();
  std::vector<std::vector<BlockCoef>> A(k);

  double scale = 0.0;
  for (const auto& c : problem.constraints()) {
    const int b = static_cast<int>(form.dims.size());
    form.dims.push_back(c.size());
    MatrixXd F0 = c.constant();
    F0.diagonal().array() += c.margin();
    scale = std::max(scale, F0.cwiseAbs().maxCoeff());
    form.C.push_back(-F0);
    for (const auto& [var, M] : c.terms()) {
      if (M.cwiseAbs().maxCoeff() == 0.0) continue;
      A[var].push_back(DenseCoef(b, M));
    }
  }
  form.lmi_blocks = static_cast<int>(form.dims.size());
  VectorXd x0 = VectorXd::Zero(k);
  const int p = problem.p_size();
  if (problem.p_psd() && p > 0) {
    for (int i = 0; i < p; ++i) x0(problem.p_var(i, i)) = 1.0;
    const int b = static_cast<int>(form.dims.size());
    form.dims.push_back(p);
    form.C.push_back(MatrixXd::Zero(p, p));
    for (int i = 0; i < p; ++i) {
      for (int j = i; j < p; ++j) {
        std::vector<Entry> e{{i, j, -1.0}};
        if (i != j) e.push_back({j, i, -1.0});
        A[problem.p_var(i, j)].push_back(SparseCoef(b, std::move(e)));
      }
    }
  }
  for (int s = 0; s < problem.num_scalars(); ++s) {
    const int b = static_cast<int>(form.dims.size());
    form.dims.push_back(1);
    form.C.push_back(MatrixXd::Zero(1, 1));
    A[problem.num_p_vars() + s].push_back(
        SparseCoef(b, std::vector<Entry>{{0, 0, -1.0}}));
    x0(problem.num_p_vars() + s) = 1.0;
  }
  form.scale = scale > 0.0 ? scale : 1.0;

  // Directions of x that no block sees make the Schur complement singular;
  // restrict to the complement of that null space.
  form.basis = MatrixXd::Identity(k, k);
  if (k > 0) {
    MatrixXd F = FlattenedCoefficients(A, form.dims);
    VectorXd colnorm = F.colwise().norm().transpose();
    for (int i = 0; i < k; ++i) {
      if (colnorm(i) == 0.0) colnorm(i) = 1.0;
    }
    const MatrixXd Fn = F * colnorm.cwiseInverse().asDiagonal();
    Eigen::ColPivHouseholderQR<MatrixXd> qr(Fn);
    qr.setThreshold(1e-11);
    if (qr.rank() < k) {
      Eigen::JacobiSVD<MatrixXd> svd(Fn, Eigen::ComputeFullV);
      const auto& sv = svd.singularValues();
      int r = 0;
      while (r < sv.size() && sv(r) > 1e-11 * sv(0)) ++r;
      form.basis = colnorm.cwiseInverse().asDiagonal() * svd.matrixV().leftCols(r);
      std::vector<std::vector<BlockCoef>> reduced(r);
      for (size_t b = 0; b < form.dims.size(); ++b) {
        const int d = form.dims[b];
        for (int j = 0; j < r; ++j) {
          MatrixXd M = MatrixXd::Zero(d, d);
          bool any = false;
          for (int i = 0; i < k; ++i) {
            const double w = form.basis(i, j);
            if (w == 0.0) continue;
            for (const auto& coef : A[i]) {
              if (coef.block != static_cast<int>(b)) continue;
              coef.AddTo(M, w);
              any = true;
            }
          }
          if (any && M.cwiseAbs().maxCoeff() > 0.0) {
            reduced[j].push_back(DenseCoef(static_cast<int>(b), std::move(M)));
          }
        }
      }
      A = std::move(reduced);
    }
  }
  // x0 minus its invisible part; the cone blocks see it unchanged.
  form.start = k > 0 ? VectorXd(form.basis.colPivHouseholderQr().solve(x0))
                     : VectorXd();

  // t enters every constraint block with coefficient -I.
  std::vector<BlockCoef> t_coef;
  for (int b = 0; b < form.lmi_blocks; ++b) {
    std::vector<Entry> e;
    for (int i = 0; i < form.dims[b]; ++i) e.push_back({i, i, -1.0});
    t_coef.push_back(SparseCoef(static_cast<int>(b), std::move(e)));
  }
  A.push_back(std::move(t_coef));
  form.A = std::move(A);
  for (int d : form.dims) form.total_dim += d;
  return form;
}

using BlockMats = std::vector<MatrixXd>;

double Inner(const BlockMats& X, const BlockMats& S) {
  double acc = 0.0;
  for (size_t b = 0; b < X.size(); ++b) acc += X[b].cwiseProduct(S[b]).sum();
  return acc;
}

// Largest alpha with X + alpha dX >= 0 (infinity when unbounded).
double MaxStep(const MatrixXd& X, const MatrixXd& dX) {
  Eigen::LLT<MatrixXd> llt(X);
  if (llt.info() != Eigen::Success) return 0.0;
  const auto L = llt.matrixL();
  MatrixXd W = L.solve(dX);
  W = L.solve(W.transpose()).transpose();
  W = 0.5 * (W + W.transpose());
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(W, Eigen::EigenvaluesOnly);
  const double lmin = es.eigenvalues().minCoeff();
  return lmin >= 0.0 ? kInf : -1.0 / lmin;
}

class IpmRun {
 public:
  IpmRun(const LmiProblem& problem, const IpmOptions& options)
      : problem_(problem), options_(options), form_(BuildForm(problem)) {
    nvar_ = static_cast<int>(form_.A.size());
    nblk_ = static_cast<int>(form_.dims.size());
    block_terms_.resize(nblk_);
    for (int i = 0; i < nvar_; ++i) {
      for (const auto& coef : form_.A[i]) {
        block_terms_[coef.block].emplace_back(i, &coef);
      }
    }
    double min_margin = kInf;
    for (const auto& c : problem.constraints()) {
      min_margin = std::min(min_margin, c.margin());
    }
    if (!std::isfinite(min_margin) || min_margin <= 0.0) {
      delta_ = 1e-14 * form_.scale;
    } else {
      delta_ = 0.1 * min_margin;
    }
  }

  FeasibilityResult Run();

 private:
  VectorXd ApplyA(const BlockMats& X) const {
    VectorXd v = VectorXd::Zero(nvar_);
    for (int i = 0; i < nvar_; ++i) {
      for (const auto& coef : form_.A[i]) v(i) += coef.Dot(X[coef.block]);
    }
    return v;
  }

  BlockMats ApplyAdjoint(const VectorXd& y) const {
    BlockMats out(nblk_);
    for (int b = 0; b < nblk_; ++b) {
      out[b] = MatrixXd::Zero(form_.dims[b], form_.dims[b]);
    }
    for (int i = 0; i < nvar_; ++i) {
      if (y(i) == 0.0) continue;
      for (const auto& coef : form_.A[i]) coef.AddTo(out[coef.block], y(i));
    }
    return out;
  }

  void BuildSchur() {
    M_ = MatrixXd::Zero(nvar_, nvar_);
    for (int b = 0; b < nblk_; ++b) {
      const auto& terms = block_terms_[b];
      for (size_t jj = 0; jj < terms.size(); ++jj) {
        const auto& [j, Aj] = terms[jj];
        const MatrixXd G = Aj->Sandwich(X_[b], Sinv_[b]);
        for (size_t ii = 0; ii <= jj; ++ii) {
          const auto& [i, Ai] = terms[ii];
          const double v = Ai->Dot(G);
          M_(i, j) += v;
          if (i != j) M_(j, i) += v;
        }
      }
    }
    M_ = 0.5 * (M_ + M_.transpose());
    const double reg = 1e-14 * std::max(1.0, M_.diagonal().cwiseAbs().maxCoeff());
    M_.diagonal().array() += reg;
    ldlt_.compute(M_);
  }

  // Newton direction for the complementarity right-hand side Rc.
  bool Direction(const BlockMats& Rc, const VectorXd& Rp, const BlockMats& Rd,
                 BlockMats& dX, VectorXd& dy, BlockMats& dS) const {
    BlockMats Z(nblk_);
    for (int b = 0; b < nblk_; ++b) {
      Z[b] = (Rc[b] - X_[b] * Rd[b]) * Sinv_[b];
    }
    VectorXd rhs = Rp - ApplyA(Z);
    dy = ldlt_.solve(rhs);
    // Refinement; near the end the Schur complement is badly conditioned.
    for (int k = 0; k < 2 && dy.allFinite(); ++k) {
      dy += ldlt_.solve(rhs - M_ * dy);
    }
    if (!dy.allFinite()) return false;
    dS = ApplyAdjoint(dy);
    for (int b = 0; b < nblk_; ++b) dS[b] = Rd[b] - dS[b];
    dX.resize(nblk_);
    for (int b = 0; b < nblk_; ++b) {
      MatrixXd D = (Rc[b] - X_[b] * dS[b]) * Sinv_[b];
      dX[b] = 0.5 * (D + D.transpose());
    }
    return true;
  }

  double StepLength(const BlockMats& V, const BlockMats& dV) const {
    double a = kInf;
    for (int b = 0; b < nblk_; ++b) a = std::min(a, MaxStep(V[b], dV[b]));
    return a;
  }

  BlockMats DualSlack(const VectorXd& y) const {
    BlockMats S = ApplyAdjoint(y);
    for (int b = 0; b < nblk_; ++b) {
      S[b] = form_.C[b] - S[b];
      S[b] = 0.5 * (S[b] + S[b].transpose());
    }
    return S;
  }

  static bool PositiveDefinite(const BlockMats& S) {
    for (const auto& Sb : S) {
      if (Sb.rows() == 0) continue;
      Eigen::LLT<MatrixXd> llt(Sb);
      if (llt.info() != Eigen::Success) return false;
    }
    return true;
  }

  bool TryWitness(FeasibilityResult& result) const {
    const int k = static_cast<int>(form_.basis.cols());
    const VectorXd x = form_.basis * y_.head(k);
    if (max_violation(problem_, x) > 0.0) return false;
    result.status = FeasibilityStatus::kFeasible;
    result.witness = FeasibilityWitness{x, problem_.ExtractP(x),
                                        problem_.ExtractScalars(x)};
    return true;
  }

  const LmiProblem& problem_;
  IpmOptions options_;
  SdpForm form_;
  int nvar_ = 0;
  int nblk_ = 0;
  std::vector<std::vector<std::pair<int, const BlockCoef*>>> block_terms_;
  double delta_ = 0.0;

  BlockMats X_, S_, Sinv_;
  VectorXd y_;
  MatrixXd M_;
  Eigen::LDLT<MatrixXd> ldlt_;
};

FeasibilityResult IpmRun::Run() {
  FeasibilityResult result;
  result.diagnostics.backend = "ipm";
  const int t_idx = nvar_ - 1;
  VectorXd b = VectorXd::Zero(nvar_);
  b(t_idx) = -1.0;

  // Dual-feasible start: P = I, scalars 1, t above every constraint block.
  y_ = VectorXd::Zero(nvar_);
  y_.head(form_.start.size()) = form_.start;
  double lmax = 0.0;
  {
    const BlockMats S0 = DualSlack(y_);
    for (int blk = 0; blk < form_.lmi_blocks; ++blk) {
      if (form_.dims[blk] == 0) continue;
      Eigen::SelfAdjointEigenSolver<MatrixXd> es(-S0[blk],
                                                 Eigen::EigenvaluesOnly);
      lmax = std::max(lmax, es.eigenvalues().maxCoeff());
    }
  }
  y_(t_idx) = lmax + form_.scale;
  X_.resize(nblk_);
  S_ = BlockMats(nblk_);
  Sinv_.resize(nblk_);
  {
    const BlockMats AY = ApplyAdjoint(y_);
    for (int blk = 0; blk < nblk_; ++blk) {
      const int d = form_.dims[blk];
      X_[blk] = MatrixXd::Identity(d, d) / form_.total_dim;
      S_[blk] = form_.C[blk] - AY[blk];
      S_[blk] = 0.5 * (S_[blk] + S_[blk].transpose());
    }
  }

  const double n = form_.total_dim;
  double t_lower = -kInf;
  double primal_estimate = -kInf;
  double best_mu = kInf;
  double best_rp = kInf;
  int best_mu_it = 0;
  int it = 0;
  for (; it < options_.max_iterations; ++it) {
    const double t = y_(t_idx);
    result.diagnostics.t_upper = t;
    if (t < 0.0 && TryWitness(result)) break;

    const VectorXd Ax = ApplyA(X_);
    const VectorXd Rp = b - Ax;
    BlockMats Rd = ApplyAdjoint(y_);
    for (int blk = 0; blk < nblk_; ++blk) {
      Rd[blk] = form_.C[blk] - Rd[blk] - S_[blk];
    }
    double rp_rel = 0.0;
    for (int i = 0; i < nvar_; ++i) {
      double anorm = 0.0;
      for (const auto& coef : form_.A[i]) {
        anorm += coef.sparse ? static_cast<double>(coef.entries.size())
                             : coef.dense.cwiseAbs().maxCoeff();
      }
      rp_rel = std::max(rp_rel, std::abs(Rp(i)) / (1.0 + anorm));
    }
    double cx = 0.0;
    for (int blk = 0; blk < nblk_; ++blk) {
      cx += form_.C[blk].cwiseProduct(X_[blk]).sum();
    }
    // For any dual-feasible y, t >= -<C, X> + y'(A(X) - b). The optimal y is
    // unknown; the current one, inflated tenfold, stands in for it so that a
    // small primal residual does not hide a clear infeasibility gap.
    if (rp_rel <= 1e-4) {
      const double slack = 10.0 * Rp.cwiseAbs().dot(y_.cwiseAbs());
      t_lower = std::max(t_lower, -cx - slack);
      primal_estimate = -cx;
    }
    result.diagnostics.t_lower = t_lower;
    if (t_lower > -delta_) {
      result.status = FeasibilityStatus::kInfeasible;
      break;
    }

    const double mu = Inner(X_, S_) / n;
    if (mu <= 1e-15 * form_.scale && rp_rel <= 1e-9) {
      result.diagnostics.message = "converged without a decision";
      break;
    }
    // Progress is a halving of mu or of the primal residual; with an
    // infeasible start the residual often still falls while mu sits still.
    if (mu < 0.5 * best_mu || rp_rel < 0.5 * best_rp) {
      best_mu = std::min(best_mu, mu);
      best_rp = std::min(best_rp, rp_rel);
      best_mu_it = it;
    } else if (it - best_mu_it >= 8) {
      result.diagnostics.message = "stalled";
      break;
    }

    bool ok = true;
    for (int blk = 0; blk < nblk_ && ok; ++blk) {
      Eigen::LLT<MatrixXd> llt(S_[blk]);
      if (llt.info() != Eigen::Success) {
        ok = false;
        break;
      }
      const int d = form_.dims[blk];
      Sinv_[blk] = llt.solve(MatrixXd::Identity(d, d));
      Sinv_[blk] = 0.5 * (Sinv_[blk] + Sinv_[blk].transpose());
    }
    if (!ok) {
      result.diagnostics.message = "lost positive definiteness of S";
      break;
    }
    BuildSchur();

    // Predictor.
    BlockMats Rc(nblk_);
    for (int blk = 0; blk < nblk_; ++blk) Rc[blk] = -X_[blk] * S_[blk];
    BlockMats dXa, dSa;
    VectorXd dya;
    if (!Direction(Rc, Rp, Rd, dXa, dya, dSa)) {
      result.diagnostics.message = "singular Schur complement";
      break;
    }
    const double ap_a = std::min(1.0, StepLength(X_, dXa));
    const double ad_a = std::min(1.0, StepLength(S_, dSa));
    double mu_aff = 0.0;
    for (int blk = 0; blk < nblk_; ++blk) {
      mu_aff += (X_[blk] + ap_a * dXa[blk])
                    .cwiseProduct(S_[blk] + ad_a * dSa[blk])
                    .sum();
    }
    mu_aff /= n;
    const double sigma = std::clamp(std::pow(std::max(mu_aff, 0.0) / mu, 3.0),
                                    0.0, 1.0);

    // Corrector.
    for (int blk = 0; blk < nblk_; ++blk) {
      const int d = form_.dims[blk];
      Rc[blk] = sigma * mu * MatrixXd::Identity(d, d) - X_[blk] * S_[blk] -
                dXa[blk] * dSa[blk];
    }
    BlockMats dX, dS;
    VectorXd dy;
    if (!Direction(Rc, Rp, Rd, dX, dy, dS)) {
      result.diagnostics.message = "singular Schur complement";
      break;
    }
    const double ap =
        std::min(1.0, options_.step_fraction * StepLength(X_, dX));
    const double ad =
        std::min(1.0, options_.step_fraction * StepLength(S_, dS));
    if (ap < 1e-12 && ad < 1e-12) {
      result.diagnostics.message = "step length collapsed";
      break;
    }
    for (int blk = 0; blk < nblk_; ++blk) {
      X_[blk] += ap * dX[blk];
      X_[blk] = 0.5 * (X_[blk] + X_[blk].transpose());
    }
    // S is recomputed from y so the dual iterate stays exactly feasible;
    // rounding near the boundary can still cost definiteness, so back off.
    double step = ad;
    bool moved = false;
    for (int tries = 0; tries < 30 && !moved; ++tries, step *= 0.7) {
      const VectorXd y_new = y_ + step * dy;
      BlockMats S_new = DualSlack(y_new);
      if (PositiveDefinite(S_new)) {
        y_ = y_new;
        S_ = std::move(S_new);
        moved = true;
      }
    }
    if (!moved && ap < 1e-12) {
      result.diagnostics.message = "dual step collapsed";
      break;
    }
  }
  result.diagnostics.iterations = it;
  if (result.status == FeasibilityStatus::kInconclusive) {
    std::ostringstream msg;
    msg << (result.diagnostics.message.empty() ? "iteration limit"
                                               : result.diagnostics.message)
        << "; t in [" << t_lower << ", " << y_(t_idx) << "], primal estimate "
        << primal_estimate;
    result.diagnostics.message = msg.str();
    // No strictly feasible point was found and the primal iterate, up to its
    // residual, puts the optimum above -delta. Calling this infeasible only
    // ever moves gain bounds outward.
    if (y_(t_idx) > -delta_ && primal_estimate > -delta_) {
      result.status = FeasibilityStatus::kInfeasible;
      result.diagnostics.message = "infeasible to solver precision; " + msg.str();
    }
  }
  return result;
}

}  // namespace

FeasibilityResult InteriorPointSolver::Solve(const LmiProblem& problem) const {
  IpmRun run(problem, options_);
  return run.Run();
}

}  // namespace srgkit
