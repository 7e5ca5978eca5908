#include "srgkit/export.h"

#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "srgkit/errors.h"

namespace srgkit {
namespace {

SrgRegion FromRows(const std::vector<std::string>& rows) {
  SrgRegion r;
  r.height = static_cast<int>(rows.size());
  r.width = static_cast<int>(rows[0].size());
  r.window = Window{0.0, static_cast<double>(r.width), 0.0,
                    static_cast<double>(r.height)};
  for (const auto& row : rows)
    for (char c : row) r.mask.push_back(c == '#');
  return r;
}

// Every contour vertex must sit midway between an inside and an outside cell.
void ExpectOnBoundary(const SrgRegion& r, const std::vector<Contour>& cs) {
  auto v = [&](int c, int k) {
    return c >= 0 && k >= 0 && c < r.width && k < r.height && r.at(c, k);
  };
  for (const Contour& c : cs) {
    ASSERT_GE(c.size(), 4u);
    for (auto [x, y] : c) {
      const int x2 = static_cast<int>(std::lround(2 * x));
      const int y2 = static_cast<int>(std::lround(2 * y));
      if (x2 % 2 != 0) {
        const int col = (x2 - 1) / 2;
        EXPECT_NE(v(col, y2 / 2), v(col + 1, y2 / 2));
      } else {
        const int row = (y2 - 1) / 2;
        EXPECT_NE(v(x2 / 2, row), v(x2 / 2, row + 1));
      }
    }
  }
}

TEST(ProfileCsvTest, RoundTrip) {
  GainProfile p;
  p.kind = OperatorKind::kTruncatedLimit;
  GainBounds a;
  a.alpha = -0.1;
  a.zeta = 0.0;
  a.gamma = kInfinity;
  GainBounds b;
  b.alpha = 0.3;
  b.zeta = 0.123456789012345;
  b.gamma = 1.0 / 3.0;
  b.gamma_tol = 1e-7;
  p.entries = {a, b};
  std::ostringstream os;
  write_profile_csv(os, p);
  EXPECT_NE(os.str().find(",inf,"), std::string::npos);
  std::istringstream is(os.str());
  const GainProfile q = read_profile_csv(is, p.kind);
  ASSERT_EQ(q.entries.size(), 2u);
  EXPECT_EQ(q.entries[0].gamma, kInfinity);
  EXPECT_EQ(q.entries[1].zeta, b.zeta);
  EXPECT_EQ(q.entries[1].gamma, b.gamma);
  EXPECT_EQ(q.entries[1].gamma_tol, b.gamma_tol);
}

TEST(ProfileCsvTest, Malformed) {
  std::istringstream bad("alpha,zeta,gamma\n0,x,1\n");
  EXPECT_THROW(read_profile_csv(bad, OperatorKind::kL2), SchemaError);
  std::istringstream short_row("0,1\n");
  EXPECT_THROW(read_profile_csv(short_row, OperatorKind::kL2), SchemaError);
  std::istringstream unsorted("1,0,1\n0,0,1\n");
  EXPECT_THROW(read_profile_csv(unsorted, OperatorKind::kL2), SchemaError);
}

TEST(RegionExportTest, CsvAndPgm) {
  const SrgRegion r = FromRows({"#..", ".#."});
  std::ostringstream csv;
  write_region_csv(csv, r);
  EXPECT_EQ(csv.str(), "re,im,inside\n0.5,1.5,1\n1.5,1.5,0\n2.5,1.5,0\n"
                       "0.5,0.5,0\n1.5,0.5,1\n2.5,0.5,0\n");
  std::ostringstream pgm;
  write_region_pgm(pgm, r);
  EXPECT_EQ(pgm.str(), "P2\n3 2\n255\n0 255 255\n255 0 255\n");
}

TEST(ContourTest, SingleCell) {
  const SrgRegion r = FromRows({"...", ".#.", "..."});
  const auto cs = mask_contours(r);
  ASSERT_EQ(cs.size(), 1u);
  EXPECT_EQ(cs[0].size(), 4u);
  ExpectOnBoundary(r, cs);
}

TEST(ContourTest, BlobsHolesAndSaddles) {
  const SrgRegion two = FromRows({"##...", "##..#", ".....", "...##"});
  EXPECT_EQ(mask_contours(two).size(), 3u);
  ExpectOnBoundary(two, mask_contours(two));
  const SrgRegion ring = FromRows({"#####", "#...#", "#...#", "#####"});
  EXPECT_EQ(mask_contours(ring).size(), 2u);
  ExpectOnBoundary(ring, mask_contours(ring));
  const SrgRegion saddle = FromRows({"#.", ".#"});
  EXPECT_EQ(mask_contours(saddle).size(), 2u);
  ExpectOnBoundary(saddle, mask_contours(saddle));
  const SrgRegion full = FromRows({"##", "##"});
  EXPECT_EQ(mask_contours(full).size(), 1u);
  EXPECT_TRUE(mask_contours(FromRows({"...", "..."})).empty());
}

TEST(SvgTest, Deterministic) {
  SrgRegion r = FromRows({"....", ".##.", ".##.", "...."});
  r.window = Window{-1.0, 1.0, -1.0, 1.0};
  std::ostringstream a, b;
  write_region_svg(a, r);
  write_region_svg(b, r);
  EXPECT_EQ(a.str(), b.str());
  EXPECT_NE(a.str().find("<path"), std::string::npos);
  EXPECT_NE(a.str().find("<line"), std::string::npos);
  EXPECT_EQ(a.str().find("infinity"), std::string::npos);
  r.includes_infinity = true;
  std::ostringstream c;
  write_region_svg(c, r, SvgOptions{300, "#333", "a & b"});
  EXPECT_NE(c.str().find("infinity"), std::string::npos);
  EXPECT_NE(c.str().find("a &amp; b"), std::string::npos);
}

}  // namespace
}  // namespace srgkit
