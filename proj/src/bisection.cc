#include "srgkit/bisection.h"

#include <algorithm>
#include <optional>
#include <sstream>
#include <utility>

#include "srgkit/errors.h"

namespace srgkit {

namespace {

class Observer {
 public:
  Observer(const GainPredicate& predicate, GainSide side, double alpha,
           BisectionResult& result)
      : predicate_(predicate), side_(side), alpha_(alpha), result_(result) {}

  /// Returns nullopt for an inconclusive solve when settling is allowed.
  std::optional<bool> Probe(double g, double lo, double hi, bool may_settle) {
    const FeasibilityResult res = predicate_(g);
    ++result_.evaluations;
    if (res.status == FeasibilityStatus::kInconclusive) {
      if (may_settle) return std::nullopt;
      std::ostringstream msg;
      msg << "solver inconclusive at alpha=" << alpha_ << ", gain=" << g
          << " (bracket [" << lo << ", " << hi
          << "]): " << res.diagnostics.message;
      throw SolverInconclusiveError(msg.str(), alpha_, lo, hi);
    }
    const bool feasible = res.feasible();
    if (side_ == GainSide::kUpper) {
      if (feasible) {
        min_feasible_ = std::min(min_feasible_, g);
      } else {
        max_infeasible_ = std::max(max_infeasible_, g);
      }
      if (min_feasible_ <= max_infeasible_) Fail(g);
    } else {
      if (feasible) {
        max_feasible_ = std::max(max_feasible_, g);
      } else {
        min_infeasible_ = std::min(min_infeasible_, g);
      }
      if (max_feasible_ >= min_infeasible_) Fail(g);
    }
    return feasible;
  }

  bool operator()(double g, double lo, double hi) {
    return *Probe(g, lo, hi, false);
  }

 private:
  [[noreturn]] void Fail(double g) const {
    std::ostringstream msg;
    msg << "non-monotone feasibility at alpha=" << alpha_ << ", gain=" << g;
    throw NonMonotoneError(msg.str());
  }

  const GainPredicate& predicate_;
  GainSide side_;
  double alpha_;
  BisectionResult& result_;
  double min_feasible_ = kInfinity;
  double max_infeasible_ = -kInfinity;
  double max_feasible_ = -kInfinity;
  double min_infeasible_ = kInfinity;
};

bool Converged(double lo, double hi, const BisectionOptions& opt) {
  return hi - lo <= std::max(opt.rel_tol * hi, opt.abs_tol);
}

double SettleWidth(double hi, const BisectionOptions& opt) {
  return std::max({opt.settle_rel_tol * hi, opt.settle_abs, opt.abs_tol});
}

bool MaySettle(double lo, double hi, const BisectionOptions& opt) {
  return hi - lo <= SettleWidth(hi, opt);
}

// Shrinks [lo, hi] until converged; false when it settled early.
bool Halve(Observer& feasible, GainSide side, const BisectionOptions& opt,
           double& lo, double& hi, BisectionResult& r) {
  auto update = [&](double g, bool f) {
    if (f == (side == GainSide::kUpper)) {
      hi = g;
    } else {
      lo = g;
    }
  };
  while (!Converged(lo, hi, opt)) {
    const double mid = 0.5 * (lo + hi);
    const auto f = feasible.Probe(mid, lo, hi, true);
    ++r.halvings;
    if (f) {
      update(mid, *f);
      continue;
    }
    if (MaySettle(lo, hi, opt)) return false;
    // Usually an undecided probe sits close to the threshold, and probes just
    // beside it decide and leave a bracket narrow enough to settle. Now and
    // then the solver stalls far from it; points a bit further off help then.
    const double d = 0.25 * SettleWidth(hi, opt);
    const double width = hi - lo;
    for (double g : {mid + d, mid - d, lo + 0.375 * width, lo + 0.625 * width}) {
      if (!(g > lo && g < hi)) continue;
      const auto fg = feasible.Probe(g, lo, hi, true);
      if (fg) update(g, *fg);
      if (hi - lo < 0.5 * width) break;
    }
    if (!(hi - lo < width)) feasible(mid, lo, hi);  // throws: no progress
  }
  return true;
}

// Probes g; when that solve is undecided, probes `alternate` instead.
// Returns the point that decided and its answer.
std::pair<double, bool> ProbeOr(Observer& feasible, double g, double alternate,
                                double lo, double hi) {
  if (const auto f = feasible.Probe(g, lo, hi, true)) return {g, *f};
  return {alternate, feasible(alternate, lo, hi)};
}

}  // namespace

BisectionResult bisect_gain(const GainPredicate& predicate, double lo,
                            double hi, GainSide side,
                            const BisectionOptions& options, double alpha) {
  BisectionResult r;
  Observer feasible(predicate, side, alpha, r);
  lo = std::max(lo, 0.0);
  hi = std::min(std::max(hi, std::max(lo, options.abs_tol)), options.cap);

  if (side == GainSide::kUpper) {
    while (true) {
      const auto [g, f] =
          ProbeOr(feasible, hi, std::min(1.25 * hi, options.cap), lo, hi);
      if (f) {
        hi = g;
        break;
      }
      lo = g;
      if (g >= options.cap) {
        r.value = kInfinity;
        r.lo = lo;
        r.hi = kInfinity;
        return r;
      }
      hi = std::min(2.0 * g, options.cap);
    }
    if (lo > 0.0) {
      while (true) {
        const auto [g, f] = ProbeOr(feasible, lo, 0.8 * lo, lo, hi);
        if (!f) {
          lo = g;
          break;
        }
        hi = g;
        lo = 0.5 * g;
        if (lo < options.abs_tol) {
          lo = 0.0;
          break;
        }
      }
    }
    if (!Halve(feasible, side, options, lo, hi, r)) r.settled = true;
    r.value = hi;
  } else {
    const double floor = lo > 0.0 ? lo : options.abs_tol;
    // Zero is always a valid lower bound, so an undecided floor settles there.
    const auto at_floor = feasible.Probe(floor, 0.0, hi, true);
    if (!at_floor || !*at_floor) {
      r.value = 0.0;
      r.lo = 0.0;
      r.hi = floor;
      r.settled = !at_floor;
      return r;
    }
    lo = floor;
    hi = std::max(hi, 2.0 * floor);
    while (true) {
      const auto [g, f] =
          ProbeOr(feasible, hi, std::min(1.25 * hi, options.cap), lo, hi);
      if (!f) {
        hi = g;
        break;
      }
      lo = g;
      if (g >= options.cap) {
        r.value = kInfinity;
        r.lo = lo;
        r.hi = kInfinity;
        return r;
      }
      hi = std::min(2.0 * g, options.cap);
    }
    if (!Halve(feasible, side, options, lo, hi, r)) r.settled = true;
    r.value = lo;
  }
  r.lo = lo;
  r.hi = hi;
  return r;
}

}  // namespace srgkit
