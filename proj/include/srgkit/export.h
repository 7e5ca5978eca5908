#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "srgkit/srg.h"

namespace srgkit {

/// "alpha,zeta,gamma,zeta_tol,gamma_tol" rows; Infinity is written "inf".
void write_profile_csv(std::ostream& os, const GainProfile& profile);
/// Inverse of write_profile_csv (extra columns optional). SchemaError on
/// malformed rows.
GainProfile read_profile_csv(std::istream& is, OperatorKind kind);

/// One "re,im,inside" row per cell, row-major from the top-left.
void write_region_csv(std::ostream& os, const SrgRegion& region);

/// Plain (P2) graymap, inside cells black on white.
void write_region_pgm(std::ostream& os, const SrgRegion& region);

/// A closed polyline in cell-center coordinates (x = column, y = row).
using Contour = std::vector<std::pair<double, double>>;

/// Marching squares on the cell-center lattice, mask padded with empty
/// cells, so every contour closes. Saddles keep diagonal inside cells apart.
/// Contours come out in a deterministic order.
std::vector<Contour> mask_contours(const SrgRegion& region);

struct SvgOptions {
  int pixels = 600;  // longer side
  std::string fill = "#9a9a9a";
  std::string title;
};

/// The region filled via its contours (even-odd rule), real and imaginary
/// axes when in the window, and a note when the point at infinity belongs to
/// the region. Byte-identical for identical inputs.
void write_region_svg(std::ostream& os, const SrgRegion& region,
                      const SvgOptions& opts = {});

struct SvgLayer {
  const SrgRegion* region;
  std::string fill;
};

/// Layers drawn in order (first at the bottom); all must share one window and
/// resolution (DimensionError otherwise). opts.fill is unused.
void write_region_svg(std::ostream& os, const std::vector<SvgLayer>& layers,
                      const SvgOptions& opts = {});

}  // namespace srgkit
