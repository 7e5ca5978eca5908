#include "gain_search.h"

namespace srgkit::internal {

FeasibilityResult decide(const LmiBuilder& build, double gain,
                         const GainOptions& opts) {
  const FeasibilitySolver& solver =
      opts.solver ? *opts.solver : default_solver();
  FeasibilityResult res = check_feasible(build(gain, opts.rel_margin), solver);
  if (res.status != FeasibilityStatus::kInconclusive) return res;
  // A larger margin can only turn feasible into infeasible, which moves the
  // reported gains outward and keeps the region an outer approximation.
  FeasibilityResult retry =
      check_feasible(build(gain, kRetryMarginFactor * opts.rel_margin), solver);
  if (retry.status == FeasibilityStatus::kInconclusive) {
    retry.diagnostics.message = res.diagnostics.message +
                                "; with stricter margin: " +
                                retry.diagnostics.message;
  }
  return retry;
}

BisectionResult search_gain(const LmiBuilder& build, GainSide side, double lo,
                            double hi, double abs_tol, double scale,
                            const GainOptions& opts, double alpha) {
  BisectionOptions bopts;
  bopts.rel_tol = opts.rel_tol;
  bopts.settle_rel_tol = opts.settle_rel_tol;
  bopts.abs_tol = abs_tol;
  bopts.settle_abs = opts.settle_rel_tol * scale;
  bopts.cap = opts.cap;
  return bisect_gain([&](double g) { return decide(build, g, opts); }, lo, hi,
                     side, bopts, alpha);
}

}  // namespace srgkit::internal
