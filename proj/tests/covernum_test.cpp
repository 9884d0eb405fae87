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

#include <cmath>
#include <limits>
#include <sstream>

#include "slowent/bowen.hpp"
#include "slowent/covernum.hpp"
#include "test_support.hpp"

namespace slowent::covernum {
namespace {

using testing::Gen;

MetricSample from_pairs(std::size_t n, std::initializer_list<std::tuple<int, int, Ratio>> pairs,
                        Ratio rest) {
  std::vector<Ratio> d(n * n, rest);
  for (std::size_t i = 0; i < n; ++i) d[i * n + i] = Ratio(0);
  for (const auto& [i, j, v] : pairs) {
    d[static_cast<std::size_t>(i) * n + static_cast<std::size_t>(j)] = v;
    d[static_cast<std::size_t>(j) * n + static_cast<std::size_t>(i)] = v;
  }
  return MetricSample(std::vector<Ratio>(n, Ratio(1, static_cast<std::int64_t>(n))), d);
}

MetricSample four_point() { return from_pairs(4, {{0, 1, Ratio(1, 10)}}, Ratio(1)); }

// Subset DP oracle: fewest sets of diameter <= eps covering mass >= (1 - eps_mass).
std::int64_t oracle_cover(const MetricSample& s, const Ratio& eps, const Ratio& eps_mass) {
  const std::size_t n = s.size();
  const std::size_t full = std::size_t{1} << n;
  std::vector<char> clique(full, 1);
  for (std::size_t m = 1; m < full; ++m) {
    const std::size_t low = static_cast<std::size_t>(__builtin_ctzll(m));
    const std::size_t rest = m & (m - 1);
    if (!clique[rest]) {
      clique[m] = 0;
      continue;
    }
    for (std::size_t j = 0; j < n; ++j) {
      if ((rest >> j & 1) && s.distance(low, j) > eps) clique[m] = 0;
    }
  }
  const int inf = std::numeric_limits<int>::max() / 2;
  std::vector<int> dp(full, inf);
  dp[0] = 0;
  for (std::size_t m = 1; m < full; ++m) {
    const std::size_t low = m & (~m + 1);
    for (std::size_t sub = m; sub; sub = (sub - 1) & m) {
      if ((sub & low) && clique[sub]) dp[m] = std::min(dp[m], dp[m ^ sub] + 1);
    }
  }
  BigRational total = 0;
  for (const Ratio& r : s.masses()) total += r.to_big();
  const BigRational need = (BigRational(1) - eps_mass.to_big()) * total;
  int best = inf;
  for (std::size_t m = 0; m < full; ++m) {
    BigRational mass = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (m >> j & 1) mass += s.mass(j).to_big();
    }
    if (mass >= need) best = std::min(best, dp[m]);
  }
  return best;
}

// Points on a small grid under the sup metric scaled by 1/10; random masses.
MetricSample random_instance(Gen& g) {
  const auto n = static_cast<std::size_t>(g.range(1, 10));
  std::vector<Site> pts;
  std::vector<Ratio> mass;
  for (std::size_t i = 0; i < n; ++i) {
    pts.push_back({g.range(0, 6), g.range(0, 6)});
    mass.emplace_back(g.range(1, 5), 20);
  }
  return MetricSample::build(mass, [&](std::size_t i, std::size_t j) {
    return Ratio((pts[i] - pts[j]).norm(), 10);
  }, 1, {.require_unit_range = true, .check_triangle = true});
}

TEST(MetricSample, Validation) {
  EXPECT_THROW(MetricSample({Ratio(1), Ratio(1)}, {Ratio(0), Ratio(1), Ratio(2), Ratio(0)}),
               UsageError);
  EXPECT_THROW(MetricSample({Ratio(1)}, {Ratio(1)}), UsageError);
  EXPECT_THROW(MetricSample({Ratio(1), Ratio(1)}, {Ratio(0), Ratio(2), Ratio(2), Ratio(0)},
                            {.require_unit_range = true}),
               UsageError);
  const auto bad = from_pairs(3, {{0, 1, Ratio(1, 10)}, {1, 2, Ratio(1, 10)}}, Ratio(1));
  EXPECT_THROW(MetricSample(std::vector<Ratio>(3, Ratio(1)),
                            {Ratio(0), Ratio(1, 10), Ratio(1), Ratio(1, 10), Ratio(0),
                             Ratio(1, 10), Ratio(1), Ratio(1, 10), Ratio(0)},
                            {.check_triangle = true}),
               UsageError);
  EXPECT_EQ(bad.distance_levels(), (std::vector<Ratio>{Ratio(1, 10), Ratio(1)}));
}

TEST(ExactCover, Examples) {
  const auto single = from_pairs(1, {}, Ratio(0));
  EXPECT_EQ(exact_cover_number(single, Ratio(1, 2), Ratio(0)), 1);
  EXPECT_EQ(exact_cover_number(single, Ratio(1, 2), Ratio(1)), 0);
  const auto three = from_pairs(3, {}, Ratio(1));
  EXPECT_EQ(exact_cover_number(three, Ratio(1, 2), Ratio(0)), 3);
  EXPECT_EQ(exact_cover_number(four_point(), Ratio(1, 5), Ratio(1, 5)), 3);
}

TEST(ExactCover, RefusesLargeInstances) {
  const auto big = from_pairs(21, {}, Ratio(1));
  EXPECT_THROW(exact_cover_number(big, Ratio(1, 2), Ratio(0)), DiagnosticError);
  EXPECT_EQ(exact_cover_number(big, Ratio(1, 2), Ratio(0), 21), 21);
}

TEST(GreedyCover, Examples) {
  EXPECT_EQ(greedy_cover_upper(from_pairs(3, {}, Ratio(1)), Ratio(1, 2), Ratio(0)), 3);
  EXPECT_EQ(greedy_cover_upper(four_point(), Ratio(1, 5), Ratio(1, 5)), 3);
  EXPECT_EQ(greedy_cover_upper(from_pairs(7, {}, Ratio(0)), Ratio(1, 5), Ratio(0)), 1);
}

TEST(MaxSeparated, Examples) {
  EXPECT_EQ(max_separated_lower(from_pairs(3, {}, Ratio(1)), Ratio(1, 2)), 3);
  EXPECT_EQ(max_separated_lower(from_pairs(5, {}, Ratio(0)), Ratio(1, 100)), 1);
  EXPECT_EQ(max_separated_lower(four_point(), Ratio(1, 5)), 3);
  const auto kept = first_fit_separated(4, [&](std::size_t i, std::size_t j) {
    return four_point().distance(i, j) >= Ratio(1, 5);
  });
  EXPECT_EQ(kept, (std::vector<std::size_t>{0, 2, 3}));
}

TEST(ExactCover, MatchesSubsetOracle) {
  Gen g(31);
  for (int t = 0; t < 300; ++t) {
    const auto s = random_instance(g);
    const Ratio eps(g.range(0, 6), 10);
    const Ratio eps_mass(g.range(0, 3), 10);
    ASSERT_EQ(exact_cover_number(s, eps, eps_mass), oracle_cover(s, eps, eps_mass));
  }
}

TEST(CoverSandwich, RandomInstances) {
  Gen g(32);
  for (int t = 0; t < 300; ++t) {
    const auto s = random_instance(g);
    const Ratio eps(g.range(0, 6), 10);
    const std::int64_t exact = exact_cover_number(s, eps, Ratio(0));
    ASSERT_LE(exact, greedy_cover_upper(s, eps, Ratio(0)));
    for (const Ratio& level : s.distance_levels()) {
      if (level > eps) {
        ASSERT_LE(max_separated_lower(s, level), exact);
      }
    }
    const CoverEstimate e = estimate_cover(s, eps, Ratio(0));
    ASSERT_TRUE(e.exact.has_value());
    ASSERT_LE(e.lower, *e.exact);
    ASSERT_LE(*e.exact, e.upper);
  }
}

TEST(ExactCover, MonotoneInEachEpsilon) {
  Gen g(33);
  for (int t = 0; t < 100; ++t) {
    const auto s = random_instance(g);
    for (std::int64_t a = 0; a < 6; ++a) {
      ASSERT_GE(exact_cover_number(s, Ratio(a, 10), Ratio(0)),
                exact_cover_number(s, Ratio(a + 1, 10), Ratio(0)));
      ASSERT_GE(exact_cover_number(s, Ratio(1, 10), Ratio(a, 10)),
                exact_cover_number(s, Ratio(1, 10), Ratio(a + 1, 10)));
    }
  }
}

TEST(ExactCover, ComparableMetrics) {
  // d2 <= a d1 + delta everywhere gives N(d2, a eps + delta) <= N(d1, eps).
  Gen g(34);
  for (int t = 0; t < 100; ++t) {
    const auto d1 = random_instance(g);
    const std::size_t n = d1.size();
    const Ratio a(g.range(1, 3), 2), delta(g.range(0, 2), 20);
    const auto d2 = MetricSample::build(std::vector<Ratio>(d1.masses().begin(), d1.masses().end()),
                                        [&](std::size_t i, std::size_t j) {
                                          return a * d1.distance(i, j) + delta;
                                        });
    ASSERT_EQ(d2.size(), n);
    const Ratio eps(g.range(0, 5), 10);
    ASSERT_LE(exact_cover_number(d2, a * eps + delta, Ratio(0)),
              exact_cover_number(d1, eps, Ratio(0)));
  }
}

TEST(CoverEstimate, Deterministic) {
  Gen g(35);
  const auto s = random_instance(g);
  std::ostringstream a, b;
  write_cover_csv_header(a);
  write_cover_csv_row(a, 3, estimate_cover(s, Ratio(1, 5), Ratio(1, 10)));
  write_cover_csv_header(b);
  write_cover_csv_row(b, 3, estimate_cover(s, Ratio(1, 5), Ratio(1, 10)));
  EXPECT_EQ(a.str(), b.str());
}

TEST(MetricSample, BuildIndependentOfThreads) {
  auto dist = [](std::size_t i, std::size_t j) {
    return Ratio(static_cast<std::int64_t>((i * 7 + j * 7) % 11), 11);
  };
  const auto one = MetricSample::uniform(40, dist, 1);
  const auto four = MetricSample::uniform(40, dist, 4);
  for (std::size_t i = 0; i < 40; ++i) {
    for (std::size_t j = 0; j < 40; ++j) ASSERT_EQ(one.distance(i, j), four.distance(i, j));
  }
}

TEST(GrowthFit, PowerLawSlow) {
  std::vector<std::pair<double, double>> s;
  for (double n : {4.0, 16.0, 64.0, 256.0}) s.emplace_back(n, std::exp2(std::pow(n, 1.5)));
  // 2^(256^1.5) overflows a double; fit on the three that fit and check the exact slope.
  s.pop_back();
  EXPECT_NEAR(growth_fit(s, Scale::kSlow).exponent, 1.5, 1e-9);
}

TEST(GrowthFit, ExpScale) {
  const auto f = growth_fit({{8, 256}, {16, 65536}, {32, 4294967296.0}}, Scale::kExp);
  EXPECT_NEAR(f.exponent, 1.0, 1e-9);
  EXPECT_NEAR(f.residual, 0.0, 1e-9);
}

TEST(GrowthFit, SquareLawDecays) {
  std::vector<std::pair<double, double>> s;
  for (int e = 4; e <= 12; ++e) s.emplace_back(std::ldexp(1.0, e), std::ldexp(1.0, 2 * e));
  double prev = std::numeric_limits<double>::infinity();
  for (std::size_t w = s.size(); w >= 2; --w) {
    const double x = growth_fit(s, Scale::kSlow, w).exponent;
    EXPECT_GT(x, 0);
    EXPECT_LT(x, prev);
    prev = x;
  }
  EXPECT_LT(prev, 0.5);
}

TEST(GrowthFit, ScaledMonotonicity) {
  Gen g(36);
  for (int t = 0; t < 200; ++t) {
    std::vector<std::pair<double, double>> s;
    double v = 2;
    for (int i = 1; i <= 8; ++i) {
      v *= 1.5 + static_cast<double>(g.range(0, 100)) / 10;
      s.emplace_back(i * 3, v);
    }
    const double c = 1 + static_cast<double>(g.range(1, 1000)) / 10;
    auto scaled = s;
    for (auto& [n, val] : scaled) val *= c;
    const double shift = std::abs(growth_fit(scaled, Scale::kSlow).exponent -
                                  growth_fit(s, Scale::kSlow).exponent);
    // Each log log value moves by a shift in [0, D], D taken at the smallest
    // value; the slope of such a shift vector is at most D sum|x - mean| / 2 / Sxx.
    const double vmin = s.front().second;
    const double d = std::log(std::log(c * vmin)) - std::log(std::log(vmin));
    double mean = 0, sxx = 0, sabs = 0;
    for (const auto& [n, val] : s) mean += std::log(n) / static_cast<double>(s.size());
    for (const auto& [n, val] : s) {
      sxx += (std::log(n) - mean) * (std::log(n) - mean);
      sabs += std::abs(std::log(n) - mean);
    }
    const double bound = d * sabs / 2 / sxx;
    ASSERT_LE(shift, bound + 1e-12);
  }
}

TEST(GrowthFit, Errors) {
  EXPECT_THROW(growth_fit({{2, 4}, {1, 8}}, Scale::kSlow), UsageError);
  EXPECT_THROW(growth_fit({{2, 1}, {3, 8}}, Scale::kSlow), UsageError);
  EXPECT_THROW(growth_fit({{2, 4}}, Scale::kSlow), UsageError);
  EXPECT_THROW(alpha_fit({{1, 0}, {2, 3}}), UsageError);
}

TEST(AlphaFit, Examples) {
  std::vector<std::pair<std::int64_t, std::int64_t>> full, one;
  for (std::int64_t n = 1; n <= 6; ++n) {
    full.emplace_back(n, (2 * n + 1) * (2 * n + 1));
    one.emplace_back(n, 1);
  }
  EXPECT_NEAR(alpha_fit(full).exponent, 1.0, 1e-12);
  EXPECT_NEAR(alpha_fit(full).slope, 1.0, 1e-12);
  EXPECT_NEAR(alpha_fit(one).exponent, 0.0, 1e-12);
  EXPECT_NEAR(alpha_fit({{27, 361}}).exponent, std::log(361.0) / std::log(3025.0), 1e-12);
  EXPECT_NEAR(alpha_fit({{27, 361}}).exponent, 0.734762707, 1e-6);
}

TEST(Bowen, ZeroRadiusIsBaseMetric) {
  const TorusTranslations act{{123456789u, 0}, {0, 987654321u}};
  const TorusPoint p{1u << 30, 0}, q{0, 1u << 29};
  EXPECT_DOUBLE_EQ(bowen_distance(act, TorusMetric{}, 0, p, q), TorusMetric{}(p, q));
}

TEST(Bowen, TranslationsAreIsometries) {
  Gen g(37);
  const TorusTranslations act{{static_cast<std::uint32_t>(g.bits()), static_cast<std::uint32_t>(g.bits())},
                              {static_cast<std::uint32_t>(g.bits()), static_cast<std::uint32_t>(g.bits())}};
  for (int t = 0; t < 200; ++t) {
    const TorusPoint p{static_cast<std::uint32_t>(g.bits()), static_cast<std::uint32_t>(g.bits())};
    const TorusPoint q{static_cast<std::uint32_t>(g.bits()), static_cast<std::uint32_t>(g.bits())};
    ASSERT_DOUBLE_EQ(bowen_distance(act, TorusMetric{}, 4, p, q), TorusMetric{}(p, q));
  }
}

TEST(Bowen, AutomorphismLipschitzBound) {
  const TorusAutomorphisms cat({2, 1, 1, 1});
  const double c = cat.lipschitz();
  Gen g(38);
  for (int t = 0; t < 1000; ++t) {
    const TorusPoint p{static_cast<std::uint32_t>(g.bits()), static_cast<std::uint32_t>(g.bits())};
    const TorusPoint q{p.x + static_cast<std::uint32_t>(g.range(0, 1 << 12)),
                       p.y + static_cast<std::uint32_t>(g.range(0, 1 << 12))};
    const std::int64_t n = g.range(0, 10);
    const double d = TorusMetric{}(p, q);
    ASSERT_LE(bowen_distance(cat, TorusMetric{}, n, p, q),
              std::pow(c, 2.0 * static_cast<double>(n)) * d * (1 + 1e-12));
  }
}

TEST(Bowen, AutomorphismComposes) {
  const TorusAutomorphisms cat({2, 1, 1, 1});
  const TorusPoint p{0x12345678u, 0x9abcdef0u};
  EXPECT_EQ(cat({1, 1}, p), cat({3, 0}, p));
  EXPECT_EQ(cat({-1, 0}, cat({1, 0}, p)), p);
  EXPECT_EQ(cat({1, 0}, p), (TorusPoint{2 * p.x + p.y, p.x + p.y}));
}

TEST(BowenSep, TranslationsConstantInN) {
  Gen g(39);
  std::vector<TorusPoint> sample;
  for (int i = 0; i < 60; ++i) {
    sample.push_back({static_cast<std::uint32_t>(g.bits()), static_cast<std::uint32_t>(g.bits())});
  }
  const TorusTranslations act{{0x9e3779b9u, 0x7f4a7c15u}, {0x6a09e667u, 0xbb67ae85u}};
  const auto rep = bowen_sep_check(act, TorusMetric{}, sample, {0, 1, 2, 3}, {0.2, 0.1, 0.05});
  for (const BowenCell& cell : rep.cells) {
    const auto base = bowen_sep(act, TorusMetric{}, sample, 0, cell.eps);
    EXPECT_EQ(cell.sep, base);
  }
  for (std::size_t i = 0; i + 1 < rep.cells.size(); ++i) {
    if (rep.cells[i].n == rep.cells[i + 1].n) {
      EXPECT_LE(rep.cells[i].sep, rep.cells[i + 1].sep);
    }
  }
  EXPECT_TRUE(rep.all_pass());
}

TEST(BowenSep, SinglePoint) {
  const TorusAutomorphisms cat({2, 1, 1, 1});
  const auto rep = bowen_sep_check(cat, TorusMetric{}, std::vector<TorusPoint>{{5, 7}}, {0, 1, 2},
                                   {0.1, 0.01});
  for (const BowenCell& cell : rep.cells) EXPECT_EQ(cell.sep, 1);
  EXPECT_TRUE(rep.all_pass());
}

TEST(BowenSep, BoxConstantFit) {
  EXPECT_EQ(fit_box_constant({{0.5, 1}}), 1);
  EXPECT_EQ(fit_box_constant({{0.1, 10}}), 1);
  EXPECT_EQ(fit_box_constant({{0.1, 11}}), 2);
}

}  // namespace
}  // namespace slowent::covernum
