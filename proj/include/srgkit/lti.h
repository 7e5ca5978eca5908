#pragma once

#include <complex>

#include <Eigen/Dense>

namespace srgkit {

/// Which operator a gain or SRG computation refers to.
///
/// kTruncatedLimit is the limit of the finite-horizon operator as the horizon
/// grows; its gain certificates need a nonnegative storage matrix (P >= 0).
/// kL2 is the operator on square-summable sequences whose domain is restricted
/// to inputs with square-summable outputs; its certificates allow indefinite P.
enum class OperatorKind { kTruncatedLimit, kL2 };

const char* to_string(OperatorKind kind);

/// Discrete-time realization x+ = A x + B u, y = C x + D u, x0 = 0, with as
/// many outputs as inputs. n = 0 (static gain) is allowed.
class StateSpace {
 public:
  StateSpace() = default;

  /// Throws DimensionError unless A is n x n, B n x m, C m x n and D m x m.
  StateSpace(Eigen::MatrixXd A, Eigen::MatrixXd B, Eigen::MatrixXd C,
             Eigen::MatrixXd D);

  /// Static gain y = D u.
  static StateSpace Static(const Eigen::MatrixXd& D);

  const Eigen::MatrixXd& A() const { return A_; }
  const Eigen::MatrixXd& B() const { return B_; }
  const Eigen::MatrixXd& C() const { return C_; }
  const Eigen::MatrixXd& D() const { return D_; }

  int num_states() const { return static_cast<int>(A_.rows()); }
  int num_channels() const { return static_cast<int>(D_.rows()); }

  double spectral_radius() const;

 private:
  Eigen::MatrixXd A_;
  Eigen::MatrixXd B_;
  Eigen::MatrixXd C_;
  Eigen::MatrixXd D_;
};

/// Input/output record, one row per time step.
struct Trajectory {
  Eigen::MatrixXd u;  // N x m
  Eigen::MatrixXd y;  // N x m

  int length() const { return static_cast<int>(u.rows()); }
  int channels() const { return static_cast<int>(u.cols()); }

  /// Throws DimensionError when u and y differ in shape or are empty.
  void Validate() const;
};

inline constexpr double kDefaultRankTol = 1e-8;

/// Numerical rank with threshold rel_tol * largest singular value.
int numerical_rank(const Eigen::MatrixXd& M, double rel_tol = kDefaultRankTol);

/// Zero-initial-state response to u (N x m).
Trajectory simulate(const StateSpace& ss, const Eigen::MatrixXd& u);

/// Stacked (C; CA; ...; CA^{depth-1}).
Eigen::MatrixXd observability_matrix(const StateSpace& ss, int depth);

/// Smallest l with rank(C; ...; CA^{l-1}) = n. Returns 0 for n = 0.
/// Throws NotObservableError when rank n is not reached by l = n.
int lag(const StateSpace& ss, double rank_tol = kDefaultRankTol);

/// Depth-L block Hankel matrix of u (N x m): block row i holds
/// u_i ... u_{N-L+i}. Result is (mL) x (N-L+1).
Eigen::MatrixXd hankel(const Eigen::MatrixXd& u, int depth);

bool is_persistently_exciting(const Eigen::MatrixXd& u, int order,
                              double rank_tol = kDefaultRankTol);

/// Largest L for which u is persistently exciting of order L (0 if none).
int persistent_excitation_order(const Eigen::MatrixXd& u,
                                double rank_tol = kDefaultRankTol);

/// (A, B, C, D - alpha I): the realization of T - alpha I.
StateSpace shift_output(const StateSpace& ss, double alpha);

/// Relative threshold below which D is treated as singular.
inline constexpr double kFeedthroughSingularTol = 1e-10;

/// (A - B D^-1 C, B D^-1, -D^-1 C, D^-1). Throws SingularFeedthroughError when
/// sigma_min(D) <= 1e-10 * ||D||.
StateSpace inverse_system(const StateSpace& ss);

/// C (e^{i theta} I - A)^{-1} B + D. Throws UnitCirclePoleError when
/// e^{i theta} is (numerically) an eigenvalue of A.
Eigen::MatrixXcd freq_response(const StateSpace& ss, double theta);

/// True when some eigenvalue of A has modulus within tol of 1.
bool has_unit_circle_eigenvalue(const StateSpace& ss, double tol = 1e-9);

}  // namespace srgkit
