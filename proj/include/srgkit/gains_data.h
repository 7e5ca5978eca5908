#pragma once

#include <optional>

#include <Eigen/Dense>

#include "srgkit/gains_ss.h"
#include "srgkit/lti.h"

namespace srgkit {

/// Regressor matrices of one trajectory for lag bound l. With
/// xi_k = (u_{k-l}, ..., u_{k-1}, y_{k-l}, ..., y_{k-1}):
///   Xi     = [xi_l     ... xi_{N-1}]   (2ml x (N-l))
///   XiPlus = [xi_{l+1} ... xi_N]       (2ml x (N-l))
///   U      = [u_l ... u_{N-1}],  Y = [y_l ... y_{N-1}]   (m x (N-l))
struct DataMatrices {
  Eigen::MatrixXd Xi;
  Eigen::MatrixXd XiPlus;
  Eigen::MatrixXd U;
  Eigen::MatrixXd Y;
  int l = 0;
  int m = 0;
  int N = 0;

  int columns() const { return N - l; }
};

/// Throws PreconditionError unless N >= l + 2, and std::invalid_argument for
/// negative l.
DataMatrices build_data_matrices(const Trajectory& traj, int l);

/// Replaces every y_k by y_k - alpha u_k.
DataMatrices shift_data(const DataMatrices& dm, double alpha);
Trajectory shift_data(const Trajectory& traj, double alpha);

/// The input samples u_0 ... u_{N-1} (N x m) recovered from the regressors.
Eigen::MatrixXd input_sequence(const DataMatrices& dm);

/// The 2ml x (2ml + 2m) matrix E with xi_{k+1} = E (xi_k, u_k, y_k).
Eigen::MatrixXd next_regressor_map(int l, int m);

/// Data-based gain LMI in P (2ml x 2ml):
///   XiPlus' P XiPlus - Xi' P Xi + Y'Y - g^2 U'U <= 0       (upper)
///  -(...)  with the signs of the last two terms flipped     (lower)
/// The quadratic form is restricted to the range of [Xi; U; Y] and P to the
/// span of the regressors that occur. Both reductions are exact; without the
/// first the inequality could never be strict.
LmiProblem max_gain_data_lmi(const DataMatrices& dm, double gamma,
                             OperatorKind kind, double rel_margin = 1e-9);
LmiProblem min_gain_data_lmi(const DataMatrices& dm, double zeta,
                             OperatorKind kind, double rel_margin = 1e-9);

/// When n is given, the input must be persistently exciting of order
/// n + l + 1 (PreconditionError otherwise).
double max_gain_data(const DataMatrices& dm, OperatorKind kind,
                     const GainOptions& opts = {},
                     std::optional<int> n = std::nullopt);
double min_gain_data(const DataMatrices& dm, OperatorKind kind,
                     const GainOptions& opts = {},
                     std::optional<int> n = std::nullopt);

BisectionResult max_gain_data_search(const DataMatrices& dm, OperatorKind kind,
                                     const GainOptions& opts = {});
BisectionResult min_gain_data_search(const DataMatrices& dm, OperatorKind kind,
                                     const GainOptions& opts = {},
                                     double gain_hint = 0.0);

/// Gains of the data-represented operator minus alpha I.
GainBounds gain_annulus_data(const DataMatrices& dm, double alpha,
                             OperatorKind kind, const GainOptions& opts = {},
                             std::optional<int> n = std::nullopt);

/// Throws PreconditionError when n is given and the input is not
/// persistently exciting of order n + l + 1.
void check_excitation(const DataMatrices& dm, std::optional<int> n);

}  // namespace srgkit
