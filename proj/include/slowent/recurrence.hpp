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

#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "slowent/cutstack.hpp"
#include "slowent/lattice.hpp"
#include "slowent/ratio.hpp"

namespace slowent::recurrence {

using lattice::Site;

/// R_n(A,x) = {u in Q_n : T^u x in A}, sorted lexicographically.
struct RecurrencePattern {
  std::int64_t radius = 0;
  std::vector<Site> sites;

  static RecurrencePattern from_name(const lattice::Pattern& name01);
  friend auto operator<=>(const RecurrencePattern&, const RecurrencePattern&) = default;
};

RecurrencePattern recurrence_set(const cutstack::PointHandle& point, std::int64_t n);

/// -mean(R) rounded to the nearest site, ties toward zero.
Site centroid_decode(const RecurrencePattern& r);

std::size_t distinct_pattern_count(std::span<const RecurrencePattern> patterns);

/// Recurrence sets of every point at radius n, evaluated across `threads`.
std::vector<RecurrencePattern> recurrence_sets(std::span<const cutstack::PointHandle> points,
                                               std::int64_t n, unsigned threads = 1);

/// Every A-position of the given stage, as points with fixed addresses.
/// Throws DiagnosticError above `limit` positions.
std::vector<cutstack::PointHandle> all_positions(
    const std::shared_ptr<const cutstack::Construction>& construction, int stage,
    std::size_t limit = std::size_t{1} << 20);

struct DecodeTally {
  std::int64_t positions = 0;
  std::int64_t exact = 0;
  std::size_t distinct = 0;
};

/// Decode every stage-i position from R_n (via the product structure of
/// construction names) and count exact hits and distinct
/// patterns.
DecodeTally decode_positions(std::span<const cutstack::PointHandle> points, int stage,
                             std::int64_t n, unsigned threads = 1);

struct RhoAlphaRow {
  std::int64_t n = 0;
  BigInt cover;
  double log2_cover = 0;
  double log2_bound = 0;  // 2 |Q_n|^(alpha+eps) log2 |Q_n|
  bool pass = false;
};

struct RhoAlphaReport {
  std::vector<RhoAlphaRow> rows;
  [[nodiscard]] bool all_pass() const;
};

/// Checks N <= 2^(2 |Q_n|^(alpha_hat + eps) log2 |Q_n|) per scale.
RhoAlphaReport rho_alpha_inequality_check(const std::vector<std::pair<std::int64_t, BigInt>>& covers,
                                          double alpha_hat, const Ratio& eps, int k = 2);

double log2_big(const BigInt& v);

struct RecurrenceRow {
  std::int64_t n = 0;
  std::size_t point_id = 0;
  std::int64_t r_size = 0;
  double alpha_pointwise = 0;  // log|R_n| / log|Q_n|
};

double alpha_pointwise(std::int64_t r_size, std::int64_t n, int k = 2);

void write_recurrence_csv(std::ostream& os, std::span<const RecurrenceRow> rows);

}  // namespace slowent::recurrence
