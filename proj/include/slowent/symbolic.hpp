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
#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "slowent/cutstack.hpp"
#include "slowent/lattice.hpp"
#include "slowent/partitions.hpp"
#include "slowent/ratio.hpp"

namespace slowent::symbolic {

using lattice::Pattern;
using lattice::Site;
using lattice::Symbol;

/// A local rule on Q_m windows, inducing (πx)_u = rule(x restricted to u + Q_m).
class SlidingBlockCode {
 public:
  using Rule = std::function<Symbol(const Pattern& window)>;

  SlidingBlockCode(std::int64_t radius, Rule rule);

  /// m = 0 rule given as a symbol table; unlisted symbols map to themselves.
  static SlidingBlockCode symbol_map(std::map<Symbol, Symbol> table);
  static SlidingBlockCode identity();
  /// π'(0) = 0, π'(a) = π'(b) = 1.
  static SlidingBlockCode erasure();

  [[nodiscard]] std::int64_t radius() const { return radius_; }
  [[nodiscard]] Symbol evaluate(const Pattern& window) const;
  [[nodiscard]] const std::optional<std::map<Symbol, Symbol>>& table() const { return table_; }

 private:
  std::int64_t radius_ = 0;
  Rule rule_;
  std::optional<std::map<Symbol, Symbol>> table_;
};

/// The code applied on Q_n; needs input radius >= n + m.
Pattern apply_code(const SlidingBlockCode& code, const Pattern& input, std::int64_t n);

/// (S^u x) restricted to Q_n.
Pattern translate(const Pattern& x, Site u, std::int64_t n);

/// A {0,1} name with an a/b label on each 1-cell.
struct OverlayName {
  Pattern base;
  std::vector<Symbol> bits;  // kA or kB, aligned with base.cells()

  /// Pattern over {0, a, b}.
  [[nodiscard]] Pattern flatten() const;
  static OverlayName from_flat(const Pattern& flat);
  friend bool operator==(const OverlayName&, const OverlayName&) = default;
};

/// The fair bit at site v (relative to the point) for a given overlay seed.
Symbol overlay_bit(std::uint64_t overlay_seed, Site v);

OverlayName overlay_name(const cutstack::PointHandle& point, std::int64_t n);

/// {0 (infinite), a, b}.
const partitions::CoFinitePartition& overlay_partition();

Ratio overlay_distance(const OverlayName& x, const OverlayName& y);

/// V(s, r) = sum_{j <= r} C(s, j).
BigInt hamming_ball_volume(std::int64_t s, std::int64_t r);

/// floor(2^s / V(s, d-1)) with d = ceil(eps s).
BigInt hamming_cover_lower(std::int64_t core_size, const Ratio& eps);

/// Greedy lexicographic code over all 2^s words with pairwise distance >= d.
std::int64_t lexicode_size(int s, int d);

double binary_entropy(double p);

}  // namespace slowent::symbolic
