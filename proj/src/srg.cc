#include "srgkit/srg.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <sstream>
#include <thread>

#include "srgkit/errors.h"

namespace srgkit {

void GainProfile::Validate() const {
  for (size_t i = 0; i < entries.size(); ++i) {
    const GainBounds& e = entries[i];
    if (i > 0 && !(e.alpha > entries[i - 1].alpha)) {
      throw std::invalid_argument("profile alphas must strictly increase");
    }
    if (!(e.zeta >= 0.0) || !(e.zeta <= e.gamma)) {
      std::ostringstream msg;
      msg << "profile entry at alpha=" << e.alpha << " has zeta=" << e.zeta
          << " > gamma=" << e.gamma;
      throw std::invalid_argument(msg.str());
    }
  }
}

bool GainProfile::all_infinite() const {
  if (entries.empty()) return false;
  return std::all_of(entries.begin(), entries.end(),
                     [](const GainBounds& e) { return std::isinf(e.gamma); });
}

std::vector<double> GainProfile::alphas() const {
  std::vector<double> out;
  out.reserve(entries.size());
  for (const GainBounds& e : entries) out.push_back(e.alpha);
  return out;
}

double lipschitz_violation(const GainProfile& profile) {
  double worst = -kInfinity;
  const auto& es = profile.entries;
  for (size_t i = 0; i < es.size(); ++i) {
    for (size_t j = i + 1; j < es.size(); ++j) {
      const double da = std::abs(es[i].alpha - es[j].alpha);
      const bool ii = std::isinf(es[i].gamma);
      if (ii != std::isinf(es[j].gamma)) return kInfinity;
      if (!ii) {
        worst = std::max(worst, std::abs(es[i].gamma - es[j].gamma) - da -
                                    es[i].gamma_tol - es[j].gamma_tol);
      }
      worst = std::max(worst, std::abs(es[i].zeta - es[j].zeta) - da -
                                  es[i].zeta_tol - es[j].zeta_tol);
    }
  }
  return worst;
}

namespace {

double Lower(const GainBounds& e, bool widen) {
  return widen ? std::max(0.0, e.zeta - e.zeta_tol) : e.zeta;
}

double Upper(const GainBounds& e, bool widen) {
  return widen ? e.gamma + e.gamma_tol : e.gamma;
}

}  // namespace

bool membership(std::complex<double> z, const GainProfile& profile,
                bool widen) {
  for (const GainBounds& e : profile.entries) {
    const double r = std::hypot(z.real() - e.alpha, z.imag());
    if (r < Lower(e, widen) || r > Upper(e, widen)) return false;
  }
  return true;
}

std::vector<double> default_alpha_grid(
    double gamma0, int count, std::optional<std::pair<double, double>> window) {
  if (count < 1) throw std::invalid_argument("alpha grid needs count >= 1");
  double lo;
  double hi;
  if (window) {
    std::tie(lo, hi) = *window;
    if (!(lo <= hi)) throw std::invalid_argument("alpha window must have lo <= hi");
  } else if (std::isfinite(gamma0) && gamma0 >= 0.0) {
    hi = 1.1 * gamma0;
    lo = -hi;
  } else {
    throw std::invalid_argument(
        "infinite gain at alpha = 0: give an explicit alpha window");
  }
  std::vector<double> grid(count);
  if (count == 1) {
    grid[0] = 0.5 * (lo + hi);
    return grid;
  }
  // Symmetric formula: mirrored grid points are exact negatives.
  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  for (int k = 0; k < count; ++k) {
    grid[k] = mid + half * (static_cast<double>(2 * k - (count - 1)) / (count - 1));
  }
  return grid;
}

GainProfile compute_profile(const GainFunction& gain_fn,
                            std::vector<double> alphas, OperatorKind kind,
                            int threads) {
  std::sort(alphas.begin(), alphas.end());
  if (std::adjacent_find(alphas.begin(), alphas.end()) != alphas.end()) {
    throw std::invalid_argument("alpha grid contains duplicates");
  }
  const int n = static_cast<int>(alphas.size());
  std::vector<std::optional<GainBounds>> results(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<int> next{0};
  std::atomic<bool> stop{false};
  auto worker = [&] {
    for (int i = next++; i < n && !stop; i = next++) {
      try {
        GainBounds b = gain_fn(alphas[i]);
        b.alpha = alphas[i];
        b.kind = kind;
        results[i] = b;
      } catch (...) {
        errors[i] = std::current_exception();
        stop = true;
      }
    }
  };
  if (threads <= 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, std::max(n, 1));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  GainProfile profile;
  profile.kind = kind;
  for (int i = 0; i < n; ++i) {
    if (results[i]) profile.entries.push_back(*results[i]);
  }
  for (int i = 0; i < n; ++i) {
    if (!errors[i]) continue;
    std::string what = "unknown error";
    try {
      std::rethrow_exception(errors[i]);
    } catch (const std::exception& e) {
      what = e.what();
    } catch (...) {
    }
    std::ostringstream msg;
    msg << "gain computation failed at alpha=" << alphas[i] << ": " << what;
    throw ProfileError(msg.str(), alphas[i], errors[i], std::move(profile));
  }
  return profile;
}

void Window::Validate() const {
  if (!(std::isfinite(re_min) && std::isfinite(re_max) &&
        std::isfinite(im_min) && std::isfinite(im_max)) ||
      !(re_min < re_max) || !(im_min < im_max)) {
    throw std::invalid_argument("window needs finite re_min < re_max, im_min < im_max");
  }
}

Window default_window(const GainProfile& profile) {
  double lo = -kInfinity;
  double hi = kInfinity;
  double im = kInfinity;
  for (const GainBounds& e : profile.entries) {
    if (std::isinf(e.gamma)) continue;
    lo = std::max(lo, e.alpha - e.gamma);
    hi = std::min(hi, e.alpha + e.gamma);
    im = std::min(im, e.gamma);
  }
  if (std::isinf(im)) {
    throw std::invalid_argument(
        "no finite max gain in the profile: give an explicit window");
  }
  // An empty intersection (lo > hi) can come from rounded gains; keep the
  // window around the pinch point anyway.
  const double mid = 0.5 * (lo + hi);
  double half = 1.2 * std::max({0.5 * std::abs(hi - lo), im, 1e-9});
  Window w;
  w.re_min = mid - half;
  w.re_max = mid + half;
  w.im_min = -half;
  w.im_max = half;
  return w;
}

std::complex<double> SrgRegion::cell_center(int col, int row) const {
  const double re_mid = 0.5 * (window.re_min + window.re_max);
  const double re_half = 0.5 * (window.re_max - window.re_min);
  const double im_mid = 0.5 * (window.im_min + window.im_max);
  const double im_half = 0.5 * (window.im_max - window.im_min);
  // Mirrored cells get exactly mirrored centers on symmetric windows.
  const double re =
      re_mid + re_half * (static_cast<double>(2 * col + 1 - width) / width);
  const double im =
      im_mid + im_half * (static_cast<double>(height - 1 - 2 * row) / height);
  return {re, im};
}

long SrgRegion::count() const {
  return std::count(mask.begin(), mask.end(), std::uint8_t{1});
}

namespace {

// Does the annulus (widened) meet the closed rectangle?
bool MeetsCell(const GainBounds& e, double x0, double x1, double y0,
               double y1) {
  const double dx_near = std::max({x0 - e.alpha, 0.0, e.alpha - x1});
  const double dy_near = std::max({y0, 0.0, -y1});
  const double dx_far = std::max(std::abs(x0 - e.alpha), std::abs(x1 - e.alpha));
  const double dy_far = std::max(std::abs(y0), std::abs(y1));
  return std::hypot(dx_near, dy_near) <= Upper(e, true) &&
         std::hypot(dx_far, dy_far) >= Lower(e, true);
}

}  // namespace

SrgRegion rasterize(const GainProfile& profile, const Window& window,
                    int width, int height, RasterMode mode) {
  window.Validate();
  if (width < 1 || height < 1) {
    throw std::invalid_argument("raster resolution must be positive");
  }
  SrgRegion region;
  region.window = window;
  region.width = width;
  region.height = height;
  region.mode = mode;
  region.includes_infinity = profile.all_infinite();
  region.mask.assign(static_cast<size_t>(width) * height, 0);
  const double hx = 0.5 * region.cell_width();
  const double hy = 0.5 * region.cell_height();
  for (int row = 0; row < height; ++row) {
    for (int col = 0; col < width; ++col) {
      const std::complex<double> c = region.cell_center(col, row);
      bool inside;
      if (mode == RasterMode::kCenter) {
        inside = membership(c, profile);
      } else {
        inside = std::all_of(
            profile.entries.begin(), profile.entries.end(),
            [&](const GainBounds& e) {
              return MeetsCell(e, c.real() - hx, c.real() + hx, c.imag() - hy,
                               c.imag() + hy);
            });
      }
      region.mask[static_cast<size_t>(row) * width + col] = inside ? 1 : 0;
    }
  }
  return region;
}

namespace {

void CheckSameGrid(const SrgRegion& a, const SrgRegion& b) {
  if (!(a.window == b.window) || a.width != b.width || a.height != b.height) {
    throw DimensionError("regions differ in window or resolution");
  }
}

}  // namespace

bool region_contains(const SrgRegion& outer, const SrgRegion& inner) {
  CheckSameGrid(outer, inner);
  if (inner.includes_infinity && !outer.includes_infinity) return false;
  for (size_t k = 0; k < inner.mask.size(); ++k) {
    if (inner.mask[k] && !outer.mask[k]) return false;
  }
  return true;
}

long region_difference(const SrgRegion& a, const SrgRegion& b) {
  CheckSameGrid(a, b);
  long diff = 0;
  for (size_t k = 0; k < a.mask.size(); ++k) diff += a.mask[k] != b.mask[k];
  return diff;
}

}  // namespace srgkit
