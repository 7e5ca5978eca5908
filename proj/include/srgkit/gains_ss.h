#pragma once

#include "srgkit/bisection.h"
#include "srgkit/lti.h"
#include "srgkit/sdp.h"

namespace srgkit {

/// Options shared by the model-based, data-based and robust gain searches.
struct GainOptions {
  /// Relative bisection tolerance on the gain.
  double rel_tol = 1e-6;
  /// Bracket width (relative) below which an inconclusive solve stops the
  /// search at the certified end instead of failing.
  double settle_rel_tol = 1e-3;
  /// Strictness margin: each LMI must hold as <= -rel_margin * scale * I,
  /// where scale is the magnitude of its constant terms.
  double rel_margin = 1e-9;
  /// Largest finite gain; an infeasible cap reports Infinity.
  double cap = 1e6;
  /// Frequency grid used to initialize model-based brackets.
  int bracket_grid = 1024;
  /// Backend; default_solver() when null.
  const FeasibilitySolver* solver = nullptr;
};

/// Gains of T - alpha I (or of the truncated-limit operator minus alpha I).
/// zeta = 0 stands for "Zero" and gamma = +inf for "Infinity".
struct GainBounds {
  double alpha = 0.0;
  double zeta = 0.0;
  double gamma = 0.0;
  OperatorKind kind = OperatorKind::kL2;
  /// Widths of the final bisection brackets.
  double zeta_tol = 0.0;
  double gamma_tol = 0.0;
  /// A search stopped early on an inconclusive solve; the tolerances above
  /// are the certified brackets.
  bool settled = false;
  /// Set when A has eigenvalues on the unit circle; the L2 values are then
  /// only what the bisection caps report.
  bool unit_circle_warning = false;
};

/// The bounded-real-lemma LMI for "max gain <= gamma", scaled by
/// 1 / max(1, gamma^2):
///   [A B]' P [A B] - [I 0]' P [I 0] + [C D]'[C D] - gamma^2 [0 I]'[0 I] <= 0
/// with P >= 0 iff kind is kTruncatedLimit.
LmiProblem max_gain_lmi(const StateSpace& ss, double gamma, OperatorKind kind,
                        double rel_margin = 1e-9);

/// The LMI for "min gain >= zeta":
///   [A B]' P [A B] - [I 0]' P [I 0] - [C D]'[C D] + zeta^2 [0 I]'[0 I] <= 0.
LmiProblem min_gain_lmi(const StateSpace& ss, double zeta, OperatorKind kind,
                        double rel_margin = 1e-9);

BisectionResult max_gain_search(const StateSpace& ss, OperatorKind kind,
                                const GainOptions& opts = {});
BisectionResult min_gain_search(const StateSpace& ss, OperatorKind kind,
                                const GainOptions& opts = {});

/// Infimal feasible gamma; +inf when no gamma up to opts.cap is feasible.
double max_gain(const StateSpace& ss, OperatorKind kind,
                const GainOptions& opts = {});
/// Supremal feasible zeta; 0 when even a tiny positive zeta is infeasible.
double min_gain(const StateSpace& ss, OperatorKind kind,
                const GainOptions& opts = {});

/// Min and max gain of shift_output(ss, alpha).
GainBounds gain_annulus(const StateSpace& ss, double alpha, OperatorKind kind,
                        const GainOptions& opts = {});

/// Extremal singular values of G(e^{i theta}) - alpha I over grid_size
/// points of theta uniform on [0, pi]. Throws UnitCirclePoleError when A has
/// an eigenvalue on the unit circle.
GainBounds gain_freq_oracle(const StateSpace& ss, double alpha,
                            int grid_size = 10000);

}  // namespace srgkit
