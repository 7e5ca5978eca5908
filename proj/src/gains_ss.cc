#include "srgkit/gains_ss.h"

#include <algorithm>
#include <cmath>

#include "gain_search.h"
#include "srgkit/errors.h"

namespace srgkit {

using Eigen::MatrixXd;

namespace {

LmiProblem GainLmi(const StateSpace& ss, double g, OperatorKind kind,
                   double rel_margin, bool upper) {
  const int n = ss.num_states();
  const int m = ss.num_channels();
  MatrixXd CD(m, n + m);
  CD << ss.C(), ss.D();
  MatrixXd AB(n, n + m);
  AB << ss.A(), ss.B();
  MatrixXd I0 = MatrixXd::Zero(n, n + m);
  I0.leftCols(n).setIdentity();
  MatrixXd Eu = MatrixXd::Zero(n + m, n + m);
  Eu.bottomRightCorner(m, m).setIdentity();

  const double s = internal::gain_normalizer(g);
  const double sign = upper ? 1.0 : -1.0;
  LmiProblem problem(n, kind == OperatorKind::kTruncatedLimit);
  LmiConstraint& c =
      problem.AddConstraint(upper ? "max_gain" : "min_gain", n + m);
  c.AddConstant(sign * (CD.transpose() * CD - g * g * Eu) / s);
  problem.AddCongruence(c, AB, 1.0);
  problem.AddCongruence(c, I0, -1.0);
  c.set_scale((CD.squaredNorm() + g * g) / s);
  c.set_margin(internal::gain_margin(rel_margin, g, c.scale()));
  return problem;
}

struct Bracket {
  double max_hi;
  double min_hi;
  double abs_tol;
  double scale;
};

Bracket InitialBracket(const StateSpace& ss, const GainOptions& opts) {
  double gmax;
  double gmin;
  if (!has_unit_circle_eigenvalue(ss)) {
    const GainBounds oracle = gain_freq_oracle(ss, 0.0, opts.bracket_grid);
    gmax = oracle.gamma;
    gmin = oracle.zeta;
  } else {
    gmax = ss.D().norm() + ss.B().norm() * ss.C().norm() + 1.0;
    gmin = gmax;
  }
  const double ref = gmax > 0.0 ? gmax : 1.0;
  const double abs_tol = 1e-3 * opts.rel_tol * ref;
  return {1.5 * gmax + abs_tol, 1.5 * gmin + 2.0 * abs_tol, abs_tol, ref};
}

}  // namespace

LmiProblem max_gain_lmi(const StateSpace& ss, double gamma, OperatorKind kind,
                        double rel_margin) {
  return GainLmi(ss, gamma, kind, rel_margin, true);
}

LmiProblem min_gain_lmi(const StateSpace& ss, double zeta, OperatorKind kind,
                        double rel_margin) {
  return GainLmi(ss, zeta, kind, rel_margin, false);
}

namespace {

BisectionResult Search(const StateSpace& ss, OperatorKind kind,
                       const GainOptions& opts, bool upper, double alpha) {
  const Bracket b = InitialBracket(ss, opts);
  auto build = [&](double g, double margin) {
    return upper ? max_gain_lmi(ss, g, kind, margin)
                 : min_gain_lmi(ss, g, kind, margin);
  };
  const GainSide side = upper ? GainSide::kUpper : GainSide::kLower;
  return internal::search_gain(build, side, 0.0, upper ? b.max_hi : b.min_hi,
                               b.abs_tol, b.scale, opts, alpha);
}

}  // namespace

BisectionResult max_gain_search(const StateSpace& ss, OperatorKind kind,
                                const GainOptions& opts) {
  return Search(ss, kind, opts, true, 0.0);
}

BisectionResult min_gain_search(const StateSpace& ss, OperatorKind kind,
                                const GainOptions& opts) {
  return Search(ss, kind, opts, false, 0.0);
}

double max_gain(const StateSpace& ss, OperatorKind kind,
                const GainOptions& opts) {
  return max_gain_search(ss, kind, opts).value;
}

double min_gain(const StateSpace& ss, OperatorKind kind,
                const GainOptions& opts) {
  return min_gain_search(ss, kind, opts).value;
}

GainBounds gain_annulus(const StateSpace& ss, double alpha, OperatorKind kind,
                        const GainOptions& opts) {
  const StateSpace shifted = shift_output(ss, alpha);
  GainBounds out;
  out.alpha = alpha;
  out.kind = kind;
  out.unit_circle_warning = has_unit_circle_eigenvalue(ss);
  const BisectionResult hi = Search(shifted, kind, opts, true, alpha);
  const BisectionResult lo = Search(shifted, kind, opts, false, alpha);
  out.gamma = hi.value;
  out.gamma_tol = hi.infinite() ? 0.0 : hi.tolerance();
  out.zeta = lo.value;
  out.zeta_tol = lo.tolerance();
  out.settled = hi.settled || lo.settled;
  return out;
}

GainBounds gain_freq_oracle(const StateSpace& ss, double alpha,
                            int grid_size) {
  if (grid_size < 2) throw std::invalid_argument("grid_size must be >= 2");
  if (has_unit_circle_eigenvalue(ss)) {
    throw UnitCirclePoleError("frequency oracle: A has a unit-circle eigenvalue");
  }
  const int m = ss.num_channels();
  const Eigen::MatrixXcd shift =
      alpha * Eigen::MatrixXcd::Identity(m, m);
  GainBounds out;
  out.alpha = alpha;
  out.kind = OperatorKind::kL2;
  out.zeta = kInfinity;
  out.gamma = 0.0;
  for (int k = 0; k < grid_size; ++k) {
    const double theta = M_PI * k / (grid_size - 1);
    const Eigen::MatrixXcd G = freq_response(ss, theta) - shift;
    const Eigen::VectorXd sv =
        Eigen::JacobiSVD<Eigen::MatrixXcd>(G).singularValues();
    out.gamma = std::max(out.gamma, sv(0));
    out.zeta = std::min(out.zeta, sv(sv.size() - 1));
  }
  return out;
}

}  // namespace srgkit
