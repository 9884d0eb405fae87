// Copyright 2026 The Slowent Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <set>
#include <sstream>

#include "slowent/lattice.hpp"
#include "test_support.hpp"

namespace slowent::lattice {
namespace {

using testing::Gen;

TEST(BoxSiteCount, SmallBoxes) {
  EXPECT_EQ(box_site_count(0, 2), 1);
  EXPECT_EQ(box_site_count(1, 2), 9);
  EXPECT_EQ(box_site_count(27, 2), 3025);
}

TEST(BoxSiteCount, MatchesEnumeration) {
  for (std::int64_t n = 0; n <= 6; ++n) {
    EXPECT_EQ(box_site_count(n), BigInt(box_sites(n).size()));
    std::int64_t line = 0;
    for (std::int64_t x = -n; x <= n; ++x) ++line;
    EXPECT_EQ(box_site_count(n, 1), line);
    EXPECT_EQ(box_site_count(n, 3), BigInt(line) * line * line);
  }
}

TEST(BoxSiteCount, LargeIsExact) {
  EXPECT_EQ(box_site_count(185221), BigInt(370443) * 370443);
  EXPECT_THROW(box_site_count64(std::int64_t{1} << 40), std::exception);
}

TEST(Site, SupNorm) {
  EXPECT_EQ((Site{3, -7}).norm(), 7);
  EXPECT_EQ((Site{-2, 1}).norm(), 2);
  EXPECT_EQ((Site{0, 0}).norm(), 0);
}

TEST(PatternDistance, Examples) {
  const Pattern a = Pattern::from_cells(1, kZero, {{{0, 0}, kOne}, {{1, 0}, kOne}});
  const Pattern b = Pattern::from_cells(1, kZero, {{{0, 0}, kOne}});
  EXPECT_EQ(pattern_distance(a, b), Ratio(1, 2));
  EXPECT_EQ(pattern_distance(a, a), Ratio(0));
  const Pattern origin = Pattern::from_cells(1, kZero, {{{0, 0}, kOne}});
  EXPECT_EQ(pattern_distance(origin, Pattern(1, kZero)), Ratio(1));
  EXPECT_EQ(pattern_distance(Pattern(1, kZero), Pattern(1, kZero)), Ratio(0));
}

TEST(PatternDistance, RejectsMismatchedBoxes) {
  EXPECT_THROW(pattern_distance(Pattern(1, kZero), Pattern(2, kZero)), UsageError);
  EXPECT_THROW(pattern_distance(Pattern(1, kZero), Pattern(1, kOne)), UsageError);
}

TEST(PatternDistance, AgreesWithDenseOracle) {
  Gen g(11);
  for (int t = 0; t < 500; ++t) {
    const std::int64_t r = g.range(0, 4);
    const Pattern a = g.pattern(r, 4, 40);
    const Pattern b = g.pattern(r, 4, 40);
    EXPECT_EQ(pattern_distance(a, b), testing::dense_distance(a, b));
  }
}

TEST(PatternDistance, MetricAxiomsOnRandomTriples) {
  Gen g(12);
  for (int t = 0; t < 3000; ++t) {
    const std::int64_t r = g.range(0, 3);
    const Pattern a = g.pattern(r, 3, 35);
    const Pattern b = g.pattern(r, 3, 35);
    const Pattern c = g.pattern(r, 3, 35);
    const Ratio ab = pattern_distance(a, b);
    ASSERT_EQ(ab, pattern_distance(b, a));
    ASSERT_LE(pattern_distance(a, c), ab + pattern_distance(b, c));
    ASSERT_GE(ab, Ratio(0));
    ASSERT_LE(ab, Ratio(1));
    ASSERT_EQ(ab == Ratio(0), a == b);
  }
}

TEST(Pattern, CanonicalSparsity) {
  const Pattern p = Pattern::from_cells(2, kZero, {{{1, 1}, kOne}, {{0, 0}, kZero}, {{-1, 2}, kA}});
  ASSERT_EQ(p.core_size(), 2u);
  EXPECT_EQ(p.cells()[0].site, (Site{-1, 2}));
  EXPECT_EQ(p.at({0, 0}), kZero);
  EXPECT_EQ(p.at({1, 1}), kOne);
  EXPECT_THROW(Pattern::from_cells(1, kZero, {{{2, 0}, kOne}}), UsageError);
  EXPECT_THROW(Pattern::from_cells(1, kZero, {{{0, 0}, kOne}, {{0, 0}, kA}}), UsageError);
}

TEST(Pattern, RestrictAndWindow) {
  Gen g(13);
  for (int t = 0; t < 200; ++t) {
    const Pattern p = g.pattern(5, 3, 50);
    const Pattern r = p.restrict(2);
    const Site u{g.range(-2, 2), g.range(-2, 2)};
    const Pattern w = p.window(u, 3);
    for (std::int64_t x = -3; x <= 3; ++x) {
      for (std::int64_t y = -3; y <= 3; ++y) {
        ASSERT_EQ(w.at({x, y}), p.at(u + Site{x, y}));
        if (x >= -2 && x <= 2 && y >= -2 && y <= 2) {
          ASSERT_EQ(r.at({x, y}), p.at({x, y}));
        }
      }
    }
  }
}

TEST(PatternText, Format) {
  const Pattern p = Pattern::from_cells(2, kZero, {{{1, -1}, kA}, {{-2, 0}, kB}});
  EXPECT_EQ(to_text(p), "box 2 default 0\n-2 0 b\n1 -1 a\n");
}

TEST(PatternText, RoundTrip) {
  Gen g(14);
  for (int t = 0; t < 300; ++t) {
    const Pattern p = g.pattern(g.range(0, 4), 4, 30, static_cast<Symbol>(g.range(0, 1)));
    const std::string text = to_text(p);
    const Pattern q = from_text(text);
    ASSERT_EQ(p, q);
    ASSERT_EQ(to_text(q), text);
  }
}

TEST(PatternText, RejectsGarbage) {
  EXPECT_THROW(from_text("box 1 default 0\n5 5 1\n"), UsageError);
  EXPECT_THROW(from_text("bx 1 default 0\n"), UsageError);
  EXPECT_THROW(from_text("box 1 default 0\n0 0 zz\n"), UsageError);
}

TEST(SymbolTable, Registry) {
  SymbolTable t;
  EXPECT_EQ(t.name(kA), "a");
  EXPECT_EQ(*t.find("b"), kB);
  const Symbol c = t.intern("c");
  EXPECT_EQ(t.intern("c"), c);
  EXPECT_EQ(t.name(c), "c");
  EXPECT_EQ(t.name(999), "#999");
}

TEST(Sumset, Examples) {
  const auto u = LatticeSet::explicit_set({{0, 0}, {3, 0}});
  const auto v = LatticeSet::explicit_set({{0, 0}, {0, 3}});
  const auto s = sumset(u, v).enumerate();
  EXPECT_EQ(s, (std::vector<Site>{{0, 0}, {0, 3}, {3, 0}, {3, 3}}));
  EXPECT_EQ(sumset(u, LatticeSet{}).enumerate(), u.enumerate());
}

TEST(Sumset, GammaLevelsContainExampleSite) {
  const auto g1 = LatticeSet::arithmetic({3, 27});
  const auto g2 = LatticeSet::arithmetic({57, 185193});
  const auto both = sumset(g1, g2);
  EXPECT_FALSE(both.is_explicit());
  EXPECT_TRUE(both.contains({30, -3}));
  EXPECT_FALSE(both.contains({29, 0}));
  EXPECT_EQ(g1.enumerate().size(), 361u);
}

TEST(Sumset, DescriptorAgreesWithExplicitSums) {
  Gen g(15);
  for (int t = 0; t < 40; ++t) {
    const ArithmeticLevel a{g.range(1, 4), g.range(0, 8)};
    const ArithmeticLevel b{g.range(5, 12), g.range(0, 20)};
    const auto desc = sumset(LatticeSet::arithmetic(a), LatticeSet::arithmetic(b));
    std::set<Site> oracle;
    for (const Site& p : LatticeSet::arithmetic(a).enumerate()) {
      for (const Site& q : LatticeSet::arithmetic(b).enumerate()) oracle.insert(p + q);
    }
    const std::int64_t reach = a.radius + b.radius + 2;
    for (std::int64_t x = -reach; x <= reach; ++x) {
      for (std::int64_t y = -reach; y <= reach; ++y) {
        ASSERT_EQ(desc.contains({x, y}), oracle.count({x, y}) == 1);
      }
    }
    const auto listed = desc.enumerate();
    ASSERT_EQ(std::set<Site>(listed.begin(), listed.end()), oracle);
  }
}

TEST(Sumset, ExplicitPlusDescriptor) {
  const auto e = LatticeSet::explicit_set({{1, 0}, {0, 2}});
  const auto d = LatticeSet::arithmetic({4, 4});
  const auto s = sumset(e, d);
  std::set<Site> oracle;
  for (const Site& p : e.enumerate()) {
    for (const Site& q : d.enumerate()) oracle.insert(p + q);
  }
  for (std::int64_t x = -7; x <= 7; ++x) {
    for (std::int64_t y = -7; y <= 7; ++y) EXPECT_EQ(s.contains({x, y}), oracle.count({x, y}) == 1);
  }
}

TEST(Contains1d, MatchesEnumeration) {
  const std::vector<ArithmeticLevel> levels{{3, 27}, {57, 185193}};
  for (std::int64_t x = -2000; x <= 2000; ++x) {
    const std::int64_t t = (x + 57 * 10000 + 28) / 57 - 10000;  // nearest copy
    const std::int64_t rem = x - 57 * t;
    const bool oracle = rem % 3 == 0 && rem >= -27 && rem <= 27;
    ASSERT_EQ(contains_1d(x, levels), oracle) << x;
  }
}

TEST(LatticeSet, EnumerateRespectsLimit) {
  const auto big = LatticeSet::arithmetic({1, 1000});
  EXPECT_THROW(static_cast<void>(big.enumerate(1000)), DiagnosticError);
}

}  // namespace
}  // namespace slowent::lattice
