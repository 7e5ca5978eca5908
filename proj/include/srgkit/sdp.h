#pragma once

#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace srgkit {

/// One symmetric affine matrix expression F(x) = F0 + sum_k x_k F_k that must
/// satisfy F(x) <= -margin * I.
class LmiConstraint {
 public:
  LmiConstraint(std::string name, int size);

  const std::string& name() const { return name_; }
  int size() const { return size_; }

  /// Throws std::invalid_argument when M is visibly non-symmetric.
  void AddConstant(const Eigen::MatrixXd& M);
  void AddTerm(int var, const Eigen::MatrixXd& M);

  const Eigen::MatrixXd& constant() const { return constant_; }
  const std::map<int, Eigen::MatrixXd>& terms() const { return terms_; }

  Eigen::MatrixXd Evaluate(const Eigen::VectorXd& x) const;

  double margin() const { return margin_; }
  void set_margin(double margin) { margin_ = margin; }

  /// Magnitude used to express margins and verification tolerances.
  double scale() const { return scale_; }
  void set_scale(double scale) { scale_ = scale; }

 private:
  std::string name_;
  int size_;
  Eigen::MatrixXd constant_;
  std::map<int, Eigen::MatrixXd> terms_;
  double margin_ = 0.0;
  double scale_ = 1.0;
};

/// Feasibility problem in one symmetric matrix P (size p, optionally P >= 0)
/// and a list of nonnegative scalars. The decision vector is
/// (P_00, P_01, ..., P_0p, P_11, ..., P_pp, s_0, s_1, ...).
class LmiProblem {
 public:
  LmiProblem(int p, bool p_psd);

  int p_size() const { return p_; }
  bool p_psd() const { return p_psd_; }
  int num_p_vars() const { return p_ * (p_ + 1) / 2; }
  int num_scalars() const { return static_cast<int>(scalar_names_.size()); }
  int num_vars() const { return num_p_vars() + num_scalars(); }

  /// Decision index of P(i, j) (= P(j, i)).
  int p_var(int i, int j) const;

  /// Adds a scalar s >= 0; returns its decision index.
  int AddNonnegativeScalar(std::string name);
  const std::vector<std::string>& scalar_names() const { return scalar_names_; }

  LmiConstraint& AddConstraint(std::string name, int size);
  const std::vector<LmiConstraint>& constraints() const { return constraints_; }
  std::vector<LmiConstraint>& constraints() { return constraints_; }

  /// Adds sign * M^T P M to constraint c (M has p rows).
  void AddCongruence(LmiConstraint& c, const Eigen::MatrixXd& M,
                     double sign) const;

  Eigen::MatrixXd ExtractP(const Eigen::VectorXd& x) const;
  Eigen::VectorXd ExtractScalars(const Eigen::VectorXd& x) const;

  /// Sets every constraint margin to rel_margin * constraint scale.
  void SetRelativeMargin(double rel_margin);

 private:
  int p_;
  bool p_psd_;
  std::vector<std::string> scalar_names_;
  std::vector<LmiConstraint> constraints_;
};

enum class FeasibilityStatus { kFeasible, kInfeasible, kInconclusive };

const char* to_string(FeasibilityStatus status);

struct FeasibilityWitness {
  Eigen::VectorXd x;
  Eigen::MatrixXd P;
  Eigen::VectorXd scalars;
};

struct SolverDiagnostics {
  std::string backend;
  int iterations = 0;
  /// Certified upper bound on min_x max_c (lambda_max(F_c(x)) + margin_c).
  double t_upper = 0.0;
  /// Solver's lower bound on the same quantity.
  double t_lower = 0.0;
  std::string message;
};

struct FeasibilityResult {
  FeasibilityStatus status = FeasibilityStatus::kInconclusive;
  std::optional<FeasibilityWitness> witness;
  SolverDiagnostics diagnostics;

  bool feasible() const { return status == FeasibilityStatus::kFeasible; }
};

/// Narrow backend interface. Implementations must be safe to call
/// concurrently on distinct problems.
class FeasibilitySolver {
 public:
  virtual ~FeasibilitySolver() = default;
  virtual std::string name() const = 0;
  virtual FeasibilityResult Solve(const LmiProblem& problem) const = 0;
};

struct IpmOptions {
  int max_iterations = 120;
  double step_fraction = 0.95;
};

/// Reference backend: infeasible-start primal-dual interior point method
/// (HKM direction, Mehrotra predictor-corrector) on
///   min t  s.t.  F_c(x) + margin_c I <= t I,  -P <= t I,  -s_j <= t.
/// A dual iterate with t < 0 is a strictly feasible witness; a converged
/// primal certificate with t* > 0 proves infeasibility.
class InteriorPointSolver final : public FeasibilitySolver {
 public:
  explicit InteriorPointSolver(IpmOptions options = {}) : options_(options) {}
  std::string name() const override { return "ipm"; }
  FeasibilityResult Solve(const LmiProblem& problem) const override;

 private:
  IpmOptions options_;
};

/// Backend by name ("ipm"). An empty name consults SRGKIT_SOLVER and falls
/// back to "ipm". Throws std::invalid_argument for unknown names.
std::unique_ptr<FeasibilitySolver> make_solver(std::string_view name = {});

/// Shared default backend.
const FeasibilitySolver& default_solver();

inline constexpr double kDefaultVerifyTol = 1e-7;

/// Largest violation of the problem's constraints at x, each relative to its
/// constraint scale: lambda_max(F_c(x)) + margin_c, -lambda_min(P), -s_j.
double max_violation(const LmiProblem& problem, const Eigen::VectorXd& x);

/// Runs the backend and re-checks any witness with an independent symmetric
/// eigenvalue test; a witness failing the check downgrades the result to
/// Inconclusive.
FeasibilityResult check_feasible(const LmiProblem& problem,
                                 const FeasibilitySolver& solver,
                                 double verify_tol = kDefaultVerifyTol);
FeasibilityResult check_feasible(const LmiProblem& problem);

/// Plain-text dump: per constraint a "name size" header, then the constant
/// and every nonzero coefficient as "var k" followed by row-major rows.
void dump_lmi(std::ostream& os, const LmiProblem& problem);

}  // namespace srgkit
