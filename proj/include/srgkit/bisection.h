#pragma once

#include <functional>
#include <limits>

#include "srgkit/sdp.h"

namespace srgkit {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Which side of the threshold is feasible.
enum class GainSide {
  kUpper,  // maximum gain: feasible for every gamma above the threshold
  kLower,  // minimum gain: feasible for every zeta below the threshold
};

struct BisectionOptions {
  double rel_tol = 1e-6;
  /// Absolute resolution near zero. Also the floor tested for kLower.
  double abs_tol = 1e-12;
  /// Largest finite value; infeasibility here means Infinity (kUpper).
  double cap = 1e6;
  /// An inconclusive solve inside a certified bracket narrower than
  /// max(settle_rel_tol * hi, settle_abs, abs_tol) ends the search with that
  /// bracket instead of throwing.
  double settle_rel_tol = 1e-4;
  double settle_abs = 0.0;
};

struct BisectionResult {
  /// Threshold estimate: the feasible end of the final bracket (an upper bound
  /// for kUpper, a lower bound for kLower), +inf or 0.
  double value = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  int evaluations = 0;
  int halvings = 0;
  /// True when the search ended early on an inconclusive solve (see
  /// BisectionOptions::settle_rel_tol).
  bool settled = false;

  bool infinite() const { return value == kInfinity; }
  double tolerance() const { return hi - lo; }
};

using GainPredicate = std::function<FeasibilityResult(double)>;

/// Locates the feasibility threshold of a monotone family of LMIs.
///
/// The bracket [lo, hi] is grown by doubling hi until it changes status or
/// exceeds options.cap, then halved until hi - lo <= max(rel_tol * hi,
/// abs_tol). For kUpper an infeasible cap returns Infinity; for kLower an
/// infeasible or undecided floor (lo, or abs_tol when lo = 0) returns 0.
///
/// Throws SolverInconclusiveError for an undecided predicate (except as
/// allowed by settle_rel_tol) and
/// NonMonotoneError when observations contradict monotonicity.
BisectionResult bisect_gain(const GainPredicate& predicate, double lo,
                            double hi, GainSide side,
                            const BisectionOptions& options = {},
                            double alpha = 0.0);

}  // namespace srgkit
