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

#include "slowent/recurrence.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <set>

#include "slowent/parallel.hpp"

namespace slowent::recurrence {

RecurrencePattern RecurrencePattern::from_name(const lattice::Pattern& name01) {
  RecurrencePattern out;
  out.radius = name01.radius();
  for (const auto& c : name01.cells()) {
    if (c.symbol != name01.default_symbol()) out.sites.push_back(c.site);
  }
  return out;
}

RecurrencePattern recurrence_set(const cutstack::PointHandle& point, std::int64_t n) {
  return RecurrencePattern::from_name(cutstack::name01(point, n));
}

namespace {

// Nearest integer to num/den (den > 0), ties toward zero.
std::int64_t round_half_in(__int128 num, __int128 den) {
  const bool neg = num < 0;
  const __int128 a = neg ? -num : num;
  __int128 q = a / den;
  if (2 * (a % den) > den) ++q;
  return static_cast<std::int64_t>(neg ? -q : q);
}

}  // namespace

Site centroid_decode(const RecurrencePattern& r) {
  if (r.sites.empty()) throw UsageError("centroid_decode: empty recurrence set");
  __int128 sx = 0, sy = 0;
  for (const Site& s : r.sites) {
    sx += s.x;
    sy += s.y;
  }
  const auto d = static_cast<__int128>(r.sites.size());
  return {round_half_in(-sx, d), round_half_in(-sy, d)};
}

std::size_t distinct_pattern_count(std::span<const RecurrencePattern> patterns) {
  std::set<RecurrencePattern> seen(patterns.begin(), patterns.end());
  return seen.size();
}

std::vector<RecurrencePattern> recurrence_sets(std::span<const cutstack::PointHandle> points,
                                               std::int64_t n, unsigned threads) {
  std::vector<RecurrencePattern> out(points.size());
  parallel_for(points.size(), threads,
               [&](std::size_t i) { out[i] = recurrence_set(points[i], n); });
  return out;
}

std::vector<cutstack::PointHandle> all_positions(
    const std::shared_ptr<const cutstack::Construction>& construction, int stage,
    std::size_t limit) {
  if (stage < 1) throw UsageError("all_positions: stage must be >= 1");
  const BigInt total = cutstack::gamma_star_size(stage, construction->schedule());
  if (total > limit) throw DiagnosticError("all_positions: " + total.str() + " positions");
  std::vector<cutstack::Address> addresses{cutstack::Address{}};
  for (int j = 1; j < stage; ++j) {
    const auto level = construction->gamma(j).enumerate();
    std::vector<cutstack::Address> next;
    next.reserve(addresses.size() * level.size());
    for (const auto& a : addresses) {
      for (const Site& g : level) {
        cutstack::Address b = a;
        b.gammas.push_back(g);
        next.push_back(std::move(b));
      }
    }
    addresses = std::move(next);
  }
  std::vector<cutstack::PointHandle> out;
  out.reserve(addresses.size());
  for (const auto& a : addresses) out.push_back(cutstack::point_at(construction, a));
  return out;
}

DecodeTally decode_positions(std::span<const cutstack::PointHandle> points, int stage,
                             std::int64_t n, unsigned threads) {
  std::vector<cutstack::NameFactors> factors(points.size());
  std::vector<char> hit(points.size(), 0);
  parallel_for(points.size(), threads, [&](std::size_t i) {
    factors[i] = cutstack::name01_factors(points[i], n);
    // The mean of a product set is the pair of 1-D means.
    RecurrencePattern px{n, {}}, py{n, {}};
    for (std::int64_t x : factors[i].xs) px.sites.push_back({x, 0});
    for (std::int64_t y : factors[i].ys) py.sites.push_back({0, y});
    const Site u{centroid_decode(px).x, centroid_decode(py).y};
    hit[i] = u == points[i].position(stage) ? 1 : 0;
  });
  DecodeTally out;
  out.positions = static_cast<std::int64_t>(points.size());
  out.exact = std::count(hit.begin(), hit.end(), 1);
  out.distinct = std::set<cutstack::NameFactors>(factors.begin(), factors.end()).size();
  return out;
}

double log2_big(const BigInt& v) {
  if (v <= 0) throw UsageError("log2 of a non-positive integer");
  const unsigned bits = static_cast<unsigned>(msb(v)) + 1;
  if (bits <= 60) return std::log2(v.convert_to<double>());
  const unsigned shift = bits - 60;
  return std::log2(static_cast<BigInt>(v >> shift).convert_to<double>()) + shift;
}

bool RhoAlphaReport::all_pass() const {
  return std::all_of(rows.begin(), rows.end(), [](const RhoAlphaRow& r) { return r.pass; });
}

RhoAlphaReport rho_alpha_inequality_check(const std::vector<std::pair<std::int64_t, BigInt>>& covers,
                                          double alpha_hat, const Ratio& eps, int k) {
  RhoAlphaReport out;
  for (const auto& [n, cover] : covers) {
    RhoAlphaRow row;
    row.n = n;
    row.cover = cover;
    row.log2_cover = log2_big(cover);
    const double q = std::pow(2.0 * static_cast<double>(n) + 1.0, k);
    row.log2_bound = 2.0 * std::pow(q, alpha_hat + eps.to_double()) * std::log2(q);
    row.pass = row.log2_cover <= row.log2_bound;
    out.rows.push_back(row);
  }
  return out;
}

double alpha_pointwise(std::int64_t r_size, std::int64_t n, int k) {
  if (n == 0) return 1.0;
  return std::log(static_cast<double>(r_size)) /
         (k * std::log(2.0 * static_cast<double>(n) + 1.0));
}

void write_recurrence_csv(std::ostream& os, std::span<const RecurrenceRow> rows) {
  os << "n,point_id,R_size,alpha_pointwise\n";
  for (const auto& r : rows) {
    os << r.n << ',' << r.point_id << ',' << r.r_size << ',' << r.alpha_pointwise << '\n';
  }
}

}  // namespace slowent::recurrence
