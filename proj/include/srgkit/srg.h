#pragma once

#include <complex>
#include <cstdint>
#include <exception>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "srgkit/gains_ss.h"

namespace srgkit {

/// Annuli { alpha + z : zeta(alpha) <= |z| <= gamma(alpha) } over an
/// increasing alpha grid. Their intersection contains the SRG.
struct GainProfile {
  OperatorKind kind = OperatorKind::kL2;
  std::vector<GainBounds> entries;

  /// Throws std::invalid_argument unless the alphas strictly increase and
  /// zeta <= gamma in every entry.
  void Validate() const;
  bool empty() const { return entries.empty(); }
  /// Every gamma is +inf.
  bool all_infinite() const;
  std::vector<double> alphas() const;
};

/// Largest excess of |g(a_i) - g(a_j)| - |a_i - a_j| - tol_i - tol_j over all
/// pairs, for both gains. Both are 1-Lipschitz in alpha, so a positive value
/// points at a solver problem. +inf when finite and infinite gammas mix.
double lipschitz_violation(const GainProfile& profile);

/// Intersection membership. widen relaxes every annulus by its reported
/// tolerance (zeta - zeta_tol, gamma + gamma_tol).
bool membership(std::complex<double> z, const GainProfile& profile,
                bool widen = false);

/// count points uniform on [-1.1 gamma0, 1.1 gamma0], or on window when
/// gamma0 is infinite. std::invalid_argument for an infinite gamma0 without
/// a window, or count < 1.
std::vector<double> default_alpha_grid(
    double gamma0, int count = 101,
    std::optional<std::pair<double, double>> window = std::nullopt);

/// A per-alpha failure in compute_profile. cause() is the original
/// exception; partial() holds the entries that did complete.
class ProfileError : public std::runtime_error {
 public:
  ProfileError(const std::string& what, double alpha, std::exception_ptr cause,
               GainProfile partial)
      : std::runtime_error(what),
        alpha_(alpha),
        cause_(std::move(cause)),
        partial_(std::move(partial)) {}

  double alpha() const { return alpha_; }
  const std::exception_ptr& cause() const { return cause_; }
  const GainProfile& partial() const { return partial_; }

 private:
  double alpha_;
  std::exception_ptr cause_;
  GainProfile partial_;
};

using GainFunction = std::function<GainBounds(double alpha)>;

/// Evaluates gain_fn on every alpha (sorted first) with up to `threads`
/// workers; 0 picks the hardware concurrency. gain_fn must be thread safe.
/// The first failing alpha (smallest) is reported through ProfileError.
GainProfile compute_profile(const GainFunction& gain_fn,
                            std::vector<double> alphas, OperatorKind kind,
                            int threads = 0);

struct Window {
  double re_min = -1.0;
  double re_max = 1.0;
  double im_min = -1.0;
  double im_max = 1.0;

  void Validate() const;
  bool operator==(const Window&) const = default;
};

/// Square window around the bounding box of the outermost annuli: the SRG
/// lies in re in [max(alpha - gamma), min(alpha + gamma)], |im| <= min gamma.
/// Padded by 20%. std::invalid_argument when every gamma is infinite.
Window default_window(const GainProfile& profile);

enum class RasterMode {
  /// Cell inside iff its center is a member.
  kCenter,
  /// Cell inside iff every (widened) annulus meets the cell. Never drops a
  /// point of the intersection.
  kConservative,
};

/// Raster of the annulus intersection. Row 0 is the top (im_max), column 0
/// the left (re_min).
struct SrgRegion {
  Window window;
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> mask;
  bool includes_infinity = false;
  RasterMode mode = RasterMode::kCenter;

  bool at(int col, int row) const { return mask[row * width + col] != 0; }
  std::complex<double> cell_center(int col, int row) const;
  double cell_width() const { return (window.re_max - window.re_min) / width; }
  double cell_height() const { return (window.im_max - window.im_min) / height; }
  long count() const;
};

SrgRegion rasterize(const GainProfile& profile, const Window& window,
                    int width, int height,
                    RasterMode mode = RasterMode::kCenter);

/// Cellwise inner => outer, and the infinity flag likewise. DimensionError
/// when the windows or resolutions differ.
bool region_contains(const SrgRegion& outer, const SrgRegion& inner);

/// Number of cells where the masks differ (DimensionError on mismatch).
long region_difference(const SrgRegion& a, const SrgRegion& b);

}  // namespace srgkit
