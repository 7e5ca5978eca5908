#pragma once

#include <cstdint>

#include <Eigen/Dense>

#include "srgkit/gains_data.h"
#include "srgkit/gains_ss.h"
#include "srgkit/lti.h"

namespace srgkit {

/// Quadratic noise bound on V = [v_l ... v_{N-1}] (m_v x (N-l)):
///   V Q V' + V S + S'V' + R >= 0,   Q < 0.
/// Noise enters the output as Bv v_k.
struct NoiseModel {
  Eigen::MatrixXd Q;   // (N-l) x (N-l)
  Eigen::MatrixXd S;   // (N-l) x m_v
  Eigen::MatrixXd R;   // m_v x m_v
  Eigen::MatrixXd Bv;  // m x m_v

  int columns() const { return static_cast<int>(Q.rows()); }
  int noise_dim() const { return static_cast<int>(R.rows()); }

  /// Throws DimensionError on inconsistent shapes and std::invalid_argument
  /// when Q or R is not symmetric or Q is not negative definite.
  void Validate() const;

  /// Value of the bound's quadratic form at V (m_v x (N-l)).
  Eigen::MatrixXd Form(const Eigen::MatrixXd& V) const;
  bool Admits(const Eigen::MatrixXd& V, double tol = 1e-10) const;
};

/// Per-step bound |v_k| <= v_bar with Bv = I:
/// Q = -I, S = 0, R = v_bar^2 (N - l) I.
NoiseModel ball_noise_model(double v_bar, int N, int l, int m);

/// N x m matrix of i.i.d. samples, uniform on the m-ball of radius v_bar.
Eigen::MatrixXd sample_ball_noise(int m, int N, double v_bar,
                                  std::uint64_t seed);

/// The known rows of the regressor recursion xi_{k+1} = [At; C~] xi_k +
/// [Bt; D~] u_k: At is (2ml - m) x 2ml, Bt is (2ml - m) x m.
struct ExtendedKnown {
  Eigen::MatrixXd At;
  Eigen::MatrixXd Bt;
};

/// Requires l >= 1 and m >= 1.
ExtendedKnown build_extended_known(int l, int m);

/// Coefficients (C~, D~) of the difference-operator form
///   y_k = C~ xi_k + D~ u_k
/// of a state-space model, for l >= lag(ss). Throws NotObservableError when
/// l is below the lag.
struct DifferenceOperator {
  Eigen::MatrixXd Ct;  // m x 2ml
  Eigen::MatrixXd Dt;  // m x m
};
DifferenceOperator difference_operator(const StateSpace& ss, int l);

/// Runs the difference-operator recursion with Bv v_k added to every output.
/// The first l samples come from the state-space model started at rest (plus
/// noise); from k = l on, y_k = C~ xi_k + D~ u_k + Bv v_k with xi_k built from
/// the noisy past. noise is N x m_v, Bv is m x m_v. l defaults to lag(ss).
Trajectory simulate_noisy(const StateSpace& ss, const Eigen::MatrixXd& u,
                          const Eigen::MatrixXd& noise,
                          const Eigen::MatrixXd& Bv, int l = -1);

/// The set of (C~, D~) consistent with the data and the noise model:
///   [I 0; 0 I; C~ D~]' [Qt St; St' Rt] [I 0; 0 I; C~ D~] <= 0,
/// where [Qt St; St' Rt] inverts
///   M = [G H] [Q, S Bv'; Bv S', Bv R Bv'] [G H]',  G = [Xi; U; Y], H = [0; Bv].
/// The blocks of M are the Qbar, Sbar, Rbar of the dual description.
struct ConsistencySet {
  Eigen::MatrixXd Qt, St, Rt;
  Eigen::MatrixXd Qbar, Sbar, Rbar;
  /// Least-squares fit of (C~ D~); the set is described around it.
  Eigen::MatrixXd center;
  /// inverse(M) in coordinates (xi, u, y - center (xi, u)), i.e.
  /// T' inverse(M) T with T = [I 0; center I]. Better conditioned than Qt...
  Eigen::MatrixXd centered_inverse;
  /// max-abs entry of M inverse(M) - I.
  double inverse_residual = 0.0;
  int l = 0;
  int m = 0;
};

/// Throws SingularConsistencyError when M is singular (for instance when
/// [Xi; U] lacks full row rank) and IndefiniteQbarError when Qbar is not
/// negative definite.
ConsistencySet build_consistency_set(const DataMatrices& dm,
                                     const NoiseModel& noise);

/// Largest eigenvalue of the set's quadratic form at (Ct, Dt), relative to
/// the form's scale; (Ct, Dt) is in the set when this is <= tol.
double consistency_violation(const ConsistencySet& cs, const Eigen::MatrixXd& Ct,
                             const Eigen::MatrixXd& Dt);
bool in_consistency_set(const ConsistencySet& cs, const Eigen::MatrixXd& Ct,
                        const Eigen::MatrixXd& Dt, double tol = 1e-9);

/// S-procedure LMI in P (2ml x 2ml, P >= 0 iff kTruncatedLimit) and tau >= 0:
///   [xi; xi+; u; y]' diag(-P, P, Lambda, Psi) [...] - tau inverse(M) <= 0
/// with xi+ = (At xi + Bt u, y); (Lambda, Psi) = (-g^2 I, I) for the upper
/// bound and (g^2 I, -I) for the lower bound. Assembled in the centered
/// coordinates, scaled by 1 / max(1, g^2).
LmiProblem robust_max_gain_lmi(const ConsistencySet& cs, double gamma,
                               OperatorKind kind, double rel_margin = 1e-9);
LmiProblem robust_min_gain_lmi(const ConsistencySet& cs, double zeta,
                               OperatorKind kind, double rel_margin = 1e-9);

/// Guaranteed bounds over the consistency set: an upper bound on the max gain
/// and a lower bound on the min gain.
BisectionResult robust_max_gain_search(const ConsistencySet& cs,
                                       OperatorKind kind,
                                       const GainOptions& opts = {},
                                       double scale_hint = 1.0);
BisectionResult robust_min_gain_search(const ConsistencySet& cs,
                                       OperatorKind kind,
                                       const GainOptions& opts = {},
                                       double gain_hint = 0.0);
double robust_max_gain(const DataMatrices& dm, const NoiseModel& noise,
                       OperatorKind kind, const GainOptions& opts = {});
double robust_min_gain(const DataMatrices& dm, const NoiseModel& noise,
                       OperatorKind kind, const GainOptions& opts = {});

/// Robust annulus of the operator minus alpha I, from the shifted data.
GainBounds robust_gain_annulus(const DataMatrices& dm, const NoiseModel& noise,
                               double alpha, OperatorKind kind,
                               const GainOptions& opts = {});

}  // namespace srgkit
