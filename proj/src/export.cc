#include "srgkit/export.h"

#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "srgkit/errors.h"

namespace srgkit {

namespace {

std::string Num(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// Fixed-precision coordinates keep the SVG byte-stable and small.
std::string Fixed(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", x);
  std::string s = buf;
  if (s == "-0.00") s = "0.00";
  return s;
}

std::string Short(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", x);
  return buf;
}

std::string Escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

double ParseNum(const std::string& field, int line) {
  std::string f = field;
  while (!f.empty() && std::isspace(static_cast<unsigned char>(f.back()))) f.pop_back();
  while (!f.empty() && std::isspace(static_cast<unsigned char>(f.front()))) f.erase(0, 1);
  if (f == "inf" || f == "Infinity") return kInfinity;
  try {
    size_t used = 0;
    const double v = std::stod(f, &used);
    if (used == f.size()) return v;
  } catch (const std::exception&) {
  }
  throw SchemaError("profile csv line " + std::to_string(line) +
                    ": not a number: '" + field + "'");
}

}  // namespace

void write_profile_csv(std::ostream& os, const GainProfile& profile) {
  os << "alpha,zeta,gamma,zeta_tol,gamma_tol\n";
  for (const GainBounds& e : profile.entries) {
    os << Num(e.alpha) << ',' << Num(e.zeta) << ',' << Num(e.gamma) << ','
       << Num(e.zeta_tol) << ',' << Num(e.gamma_tol) << '\n';
  }
}

GainProfile read_profile_csv(std::istream& is, OperatorKind kind) {
  GainProfile profile;
  profile.kind = kind;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line.rfind("alpha", 0) == 0) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string f;
    while (std::getline(ss, f, ',')) fields.push_back(f);
    if (fields.size() < 3) {
      throw SchemaError("profile csv line " + std::to_string(lineno) +
                        ": expected at least alpha,zeta,gamma");
    }
    GainBounds e;
    e.kind = kind;
    e.alpha = ParseNum(fields[0], lineno);
    e.zeta = ParseNum(fields[1], lineno);
    e.gamma = ParseNum(fields[2], lineno);
    if (fields.size() > 3) e.zeta_tol = ParseNum(fields[3], lineno);
    if (fields.size() > 4) e.gamma_tol = ParseNum(fields[4], lineno);
    profile.entries.push_back(e);
  }
  try {
    profile.Validate();
  } catch (const std::invalid_argument& e) {
    throw SchemaError(std::string("profile csv: ") + e.what());
  }
  return profile;
}

void write_region_csv(std::ostream& os, const SrgRegion& region) {
  os << "re,im,inside\n";
  for (int row = 0; row < region.height; ++row) {
    for (int col = 0; col < region.width; ++col) {
      const auto c = region.cell_center(col, row);
      os << Num(c.real()) << ',' << Num(c.imag()) << ','
         << (region.at(col, row) ? 1 : 0) << '\n';
    }
  }
}

void write_region_pgm(std::ostream& os, const SrgRegion& region) {
  os << "P2\n" << region.width << ' ' << region.height << "\n255\n";
  for (int row = 0; row < region.height; ++row) {
    for (int col = 0; col < region.width; ++col) {
      if (col > 0) os << ' ';
      os << (region.at(col, row) ? 0 : 255);
    }
    os << '\n';
  }
}

std::vector<Contour> mask_contours(const SrgRegion& region) {
  const int W = region.width;
  const int H = region.height;
  auto v = [&](int c, int r) {
    return c >= 0 && r >= 0 && c < W && r < H && region.at(c, r);
  };
  // Nodes are lattice-edge midpoints in doubled coordinates. Each node lies
  // on one crossing edge shared by two squares, so it has degree two and the
  // segment graph is a union of cycles.
  using Node = std::pair<int, int>;
  std::map<Node, std::vector<Node>> adj;
  auto link = [&](Node a, Node b) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  };
  for (int r = -1; r < H; ++r) {
    for (int c = -1; c < W; ++c) {
      const bool a = v(c, r), b = v(c + 1, r), cc = v(c + 1, r + 1), d = v(c, r + 1);
      const Node top{2 * c + 1, 2 * r}, right{2 * c + 2, 2 * r + 1},
          bottom{2 * c + 1, 2 * r + 2}, left{2 * c, 2 * r + 1};
      if (a == cc && b == d && a != b) {
        if (a) {
          link(left, top);
          link(right, bottom);
        } else {
          link(top, right);
          link(bottom, left);
        }
        continue;
      }
      std::vector<Node> cross;
      if (a != b) cross.push_back(top);
      if (b != cc) cross.push_back(right);
      if (cc != d) cross.push_back(bottom);
      if (d != a) cross.push_back(left);
      if (cross.size() == 2) link(cross[0], cross[1]);
    }
  }
  std::vector<Contour> out;
  std::map<Node, bool> seen;
  for (const auto& [start, nbrs] : adj) {
    if (seen[start]) continue;
    Contour loop;
    Node prev = start;
    Node cur = start;
    do {
      seen[cur] = true;
      loop.emplace_back(0.5 * cur.first, 0.5 * cur.second);
      const auto& n = adj[cur];
      const Node next = (n[0] != prev || n.size() < 2) ? n[0] : n[1];
      prev = cur;
      cur = next;
    } while (cur != start);
    out.push_back(std::move(loop));
  }
  return out;
}

void write_region_svg(std::ostream& os, const SrgRegion& region,
                      const SvgOptions& opts) {
  write_region_svg(os, {SvgLayer{&region, opts.fill}}, opts);
}

void write_region_svg(std::ostream& os, const std::vector<SvgLayer>& layers,
                      const SvgOptions& opts) {
  if (layers.empty()) throw std::invalid_argument("svg needs at least one layer");
  const SrgRegion& region = *layers[0].region;
  for (const SvgLayer& l : layers) {
    if (!(l.region->window == region.window) || l.region->width != region.width ||
        l.region->height != region.height) {
      throw DimensionError("svg layers differ in window or resolution");
    }
  }
  const Window& w = region.window;
  const double re_span = w.re_max - w.re_min;
  const double im_span = w.im_max - w.im_min;
  const double scale = opts.pixels / std::max(re_span, im_span);
  const double pw = re_span * scale;
  const double ph = im_span * scale;
  const double margin = 40.0;
  // Cell-center lattice coordinates to pixels.
  const double sx = pw / region.width;
  const double sy = ph / region.height;
  auto px = [&](double col) { return margin + (col + 0.5) * sx; };
  auto py = [&](double row) { return margin + (row + 0.5) * sy; };
  auto re_px = [&](double re) { return margin + (re - w.re_min) * scale; };
  auto im_px = [&](double im) { return margin + (w.im_max - im) * scale; };

  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << Fixed(pw + 2 * margin)
     << "\" height=\"" << Fixed(ph + 2 * margin) << "\">\n";
  if (!opts.title.empty()) os << "<title>" << Escape(opts.title) << "</title>\n";
  os << "<rect x=\"" << Fixed(margin) << "\" y=\"" << Fixed(margin)
     << "\" width=\"" << Fixed(pw) << "\" height=\"" << Fixed(ph)
     << "\" fill=\"white\" stroke=\"black\"/>\n";

  bool infinity = false;
  for (const SvgLayer& layer : layers) {
    infinity = infinity || layer.region->includes_infinity;
    const std::vector<Contour> contours = mask_contours(*layer.region);
    if (contours.empty()) continue;
    os << "<path fill=\"" << Escape(layer.fill)
       << "\" fill-rule=\"evenodd\" stroke=\"black\" stroke-width=\"0.5\" d=\"";
    for (const Contour& c : contours) {
      for (size_t k = 0; k < c.size(); ++k) {
        os << (k == 0 ? 'M' : 'L') << Fixed(px(c[k].first)) << ' '
           << Fixed(py(c[k].second));
      }
      os << 'Z';
    }
    os << "\"/>\n";
  }

  os << "<g stroke=\"black\" stroke-width=\"0.75\" stroke-dasharray=\"4 3\">\n";
  if (w.im_min <= 0.0 && 0.0 <= w.im_max) {
    os << "<line x1=\"" << Fixed(margin) << "\" y1=\"" << Fixed(im_px(0.0))
       << "\" x2=\"" << Fixed(margin + pw) << "\" y2=\"" << Fixed(im_px(0.0)) << "\"/>\n";
  }
  if (w.re_min <= 0.0 && 0.0 <= w.re_max) {
    os << "<line x1=\"" << Fixed(re_px(0.0)) << "\" y1=\"" << Fixed(margin)
       << "\" x2=\"" << Fixed(re_px(0.0)) << "\" y2=\"" << Fixed(margin + ph) << "\"/>\n";
  }
  os << "</g>\n";
  os << "<g font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<text x=\"" << Fixed(margin) << "\" y=\"" << Fixed(margin + ph + 16)
     << "\">" << Short(w.re_min) << "</text>\n";
  os << "<text x=\"" << Fixed(margin + pw) << "\" y=\"" << Fixed(margin + ph + 16)
     << "\" text-anchor=\"end\">" << Short(w.re_max) << "</text>\n";
  os << "<text x=\"" << Fixed(margin - 4) << "\" y=\"" << Fixed(margin + 4)
     << "\" text-anchor=\"end\">" << Short(w.im_max) << "i</text>\n";
  os << "<text x=\"" << Fixed(margin - 4) << "\" y=\"" << Fixed(margin + ph)
     << "\" text-anchor=\"end\">" << Short(w.im_min) << "i</text>\n";
  if (infinity) {
    os << "<text x=\"" << Fixed(margin + pw) << "\" y=\"" << Fixed(margin - 10)
       << "\" text-anchor=\"end\">region includes the point at infinity</text>\n";
  }
  os << "</g>\n</svg>\n";
}

}  // namespace srgkit
