#pragma once

// Shared plumbing for the gain modules: margin retry and bisection setup.

#include <functional>

#include "srgkit/bisection.h"
#include "srgkit/gains_ss.h"
#include "srgkit/sdp.h"

namespace srgkit::internal {

/// Builds the LMI for one gain value with the given relative margin.
using LmiBuilder = std::function<LmiProblem(double gain, double rel_margin)>;

inline constexpr double kRetryMarginFactor = 100.0;

/// Decides one gain value. An inconclusive solve is retried once with a
/// margin kRetryMarginFactor times stricter before being reported.
FeasibilityResult decide(const LmiBuilder& build, double gain,
                         const GainOptions& opts);

/// scale is the size of the annulus (about the max gain): settling is allowed
/// once the bracket is below opts.settle_rel_tol * scale, which matters for
/// small minimum gains.
BisectionResult search_gain(const LmiBuilder& build, GainSide side, double lo,
                            double hi, double abs_tol, double scale,
                            const GainOptions& opts, double alpha);

/// max(1, g^2): the factor every gain LMI is divided by.
inline double gain_normalizer(double g) { return g * g > 1.0 ? g * g : 1.0; }

/// Absolute strictness margin for a normalized gain LMI. Tying it to g^2
/// keeps the threshold shift it causes small relative to g, also for small
/// minimum gains; the floor keeps it resolvable by the solver.
inline double gain_margin(double rel_margin, double g, double scale) {
  const double g2 = g * g / gain_normalizer(g);
  return rel_margin * (g2 > 1e-2 * scale ? g2 : 1e-2 * scale);
}

}  // namespace srgkit::internal
