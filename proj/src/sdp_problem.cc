#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <iomanip>
#include <stdexcept>

#include "srgkit/sdp.h"

namespace srgkit {

using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

MatrixXd CheckedSymmetric(const MatrixXd& M, const std::string& where) {
  const double asym = (M - M.transpose()).cwiseAbs().maxCoeff();
  const double mag = std::max(1.0, M.cwiseAbs().maxCoeff());
  if (asym > 1e-9 * mag) {
    throw std::invalid_argument(where + ": matrix term is not symmetric");
  }
  return 0.5 * (M + M.transpose());
}

double MaxEigenvalue(const MatrixXd& M) {
  if (M.rows() == 0) return -std::numeric_limits<double>::infinity();
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(M, Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff();
}

}  // namespace

const char* to_string(FeasibilityStatus status) {
  switch (status) {
    case FeasibilityStatus::kFeasible:
      return "feasible";
    case FeasibilityStatus::kInfeasible:
      return "infeasible";
    case FeasibilityStatus::kInconclusive:
      break;
  }
  return "inconclusive";
}

LmiConstraint::LmiConstraint(std::string name, int size)
    : name_(std::move(name)),
      size_(size),
      constant_(MatrixXd::Zero(size, size)) {}

void LmiConstraint::AddConstant(const MatrixXd& M) {
  if (M.rows() != size_ || M.cols() != size_) {
    throw std::invalid_argument(name_ + ": constant has wrong size");
  }
  constant_ += CheckedSymmetric(M, name_);
}

void LmiConstraint::AddTerm(int var, const MatrixXd& M) {
  if (M.rows() != size_ || M.cols() != size_) {
    throw std::invalid_argument(name_ + ": term has wrong size");
  }
  auto [it, inserted] = terms_.try_emplace(var, MatrixXd::Zero(size_, size_));
  it->second += CheckedSymmetric(M, name_);
}

MatrixXd LmiConstraint::Evaluate(const VectorXd& x) const {
  MatrixXd F = constant_;
  for (const auto& [var, M] : terms_) F += x(var) * M;
  return F;
}

LmiProblem::LmiProblem(int p, bool p_psd) : p_(p), p_psd_(p_psd) {
  if (p < 0) throw std::invalid_argument("LmiProblem: negative P size");
}

int LmiProblem::p_var(int i, int j) const {
  if (i > j) std::swap(i, j);
  // Row-major upper triangle.
  return i * p_ - i * (i - 1) / 2 + (j - i);
}

int LmiProblem::AddNonnegativeScalar(std::string name) {
  scalar_names_.push_back(std::move(name));
  return num_vars() - 1;
}

LmiConstraint& LmiProblem::AddConstraint(std::string name, int size) {
  constraints_.emplace_back(std::move(name), size);
  return constraints_.back();
}

void LmiProblem::AddCongruence(LmiConstraint& c, const MatrixXd& M,
                               double sign) const {
  if (M.rows() != p_ || M.cols() != c.size()) {
    throw std::invalid_argument(c.name() + ": congruence factor has wrong size");
  }
  for (int i = 0; i < p_; ++i) {
    const VectorXd mi = M.row(i).transpose();
    for (int j = i; j < p_; ++j) {
      MatrixXd term;
      if (i == j) {
        term = mi * mi.transpose();
      } else {
        const VectorXd mj = M.row(j).transpose();
        term = mi * mj.transpose() + mj * mi.transpose();
      }
      c.AddTerm(p_var(i, j), sign * term);
    }
  }
}

MatrixXd LmiProblem::ExtractP(const VectorXd& x) const {
  MatrixXd P(p_, p_);
  for (int i = 0; i < p_; ++i) {
    for (int j = i; j < p_; ++j) {
      P(i, j) = P(j, i) = x(p_var(i, j));
    }
  }
  return P;
}

VectorXd LmiProblem::ExtractScalars(const VectorXd& x) const {
  return x.tail(num_scalars());
}

void LmiProblem::SetRelativeMargin(double rel_margin) {
  for (auto& c : constraints_) c.set_margin(rel_margin * c.scale());
}

double max_violation(const LmiProblem& problem, const VectorXd& x) {
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& c : problem.constraints()) {
    const double v =
        (MaxEigenvalue(c.Evaluate(x)) + c.margin()) / std::max(c.scale(), 1e-300);
    worst = std::max(worst, v);
  }
  if (problem.p_psd() && problem.p_size() > 0) {
    const MatrixXd P = problem.ExtractP(x);
    const double scale = std::max(P.cwiseAbs().maxCoeff(), 1e-300);
    worst = std::max(worst, MaxEigenvalue(-P) / scale);
  }
  const VectorXd s = problem.ExtractScalars(x);
  for (Eigen::Index j = 0; j < s.size(); ++j) worst = std::max(worst, -s(j));
  return worst;
}

FeasibilityResult check_feasible(const LmiProblem& problem,
                                 const FeasibilitySolver& solver,
                                 double verify_tol) {
  FeasibilityResult result = solver.Solve(problem);
  if (result.status == FeasibilityStatus::kFeasible) {
    if (!result.witness ||
        max_violation(problem, result.witness->x) > verify_tol) {
      result.status = FeasibilityStatus::kInconclusive;
      result.diagnostics.message += "; witness failed independent check";
    }
  }
  return result;
}

FeasibilityResult check_feasible(const LmiProblem& problem) {
  return check_feasible(problem, default_solver());
}

std::unique_ptr<FeasibilitySolver> make_solver(std::string_view name) {
  std::string chosen(name);
  if (chosen.empty()) {
    if (const char* env = std::getenv("SRGKIT_SOLVER"); env && *env) {
      chosen = env;
    } else {
      chosen = "ipm";
    }
  }
  if (chosen == "ipm") return std::make_unique<InteriorPointSolver>();
  throw std::invalid_argument("unknown feasibility backend '" + chosen +
                              "' (available: ipm)");
}

const FeasibilitySolver& default_solver() {
  static const std::unique_ptr<FeasibilitySolver> solver = make_solver();
  return *solver;
}

void dump_lmi(std::ostream& os, const LmiProblem& problem) {
  const auto old_flags = os.flags();
  const auto old_prec = os.precision();
  os << std::setprecision(17);
  os << "P " << problem.p_size() << (problem.p_psd() ? " psd" : " free")
     << "\nscalars " << problem.num_scalars() << "\nconstraints "
     << problem.constraints().size() << "\n";
  auto write = [&os](const MatrixXd& M) {
    os << M.rows() << " " << M.cols() << "\n";
    for (Eigen::Index i = 0; i < M.rows(); ++i) {
      for (Eigen::Index j = 0; j < M.cols(); ++j) {
        os << (j ? " " : "") << M(i, j);
      }
      os << "\n";
    }
  };
  for (const auto& c : problem.constraints()) {
    os << "constraint " << c.name() << " " << c.size() << " margin "
       << c.margin() << "\nconstant ";
    write(c.constant());
    for (const auto& [var, M] : c.terms()) {
      if (M.cwiseAbs().maxCoeff() == 0.0) continue;
      os << "var " << var << " ";
      write(M);
    }
  }
  os.flags(old_flags);
  os.precision(old_prec);
}

}  // namespace srgkit
