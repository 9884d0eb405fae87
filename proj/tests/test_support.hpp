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
#include <map>
#include <vector>

#include "slowent/lattice.hpp"
#include "slowent/ratio.hpp"
#include "slowent/rng.hpp"

namespace slowent::testing {

using lattice::Pattern;
using lattice::Site;
using lattice::Symbol;

/// Deterministic generator for property tests.
class Gen {
 public:
  explicit Gen(std::uint64_t seed, std::uint64_t index = 0)
      : rng_(seed, stream::kTest, index) {}

  std::uint64_t bits() { return rng_.bits(counter_++); }
  std::int64_t range(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(rng_.below(static_cast<std::uint64_t>(hi - lo + 1), counter_));
  }
  bool chance(std::uint64_t percent) { return rng_.below(100, counter_) < percent; }

  /// Random pattern on Q_radius: each site non-default with the given
  /// probability, symbols uniform on [1, alphabet).
  Pattern pattern(std::int64_t radius, Symbol alphabet, std::uint64_t percent,
                  Symbol def = 0) {
    std::vector<lattice::Cell> cells;
    for (std::int64_t x = -radius; x <= radius; ++x) {
      for (std::int64_t y = -radius; y <= radius; ++y) {
        if (!chance(percent)) continue;
        Symbol s = static_cast<Symbol>(range(1, alphabet - 1));
        if (s == def) s = 0;
        cells.push_back({{x, y}, s});
      }
    }
    return Pattern::from_cells(radius, def, std::move(cells));
  }

  std::vector<Site> sites(std::int64_t radius, std::uint64_t percent) {
    std::vector<Site> out;
    for (std::int64_t x = -radius; x <= radius; ++x) {
      for (std::int64_t y = -radius; y <= radius; ++y) {
        if (chance(percent)) out.push_back({x, y});
      }
    }
    return out;
  }

 private:
  CounterRng rng_;
  std::uint64_t counter_ = 0;
};

/// Dense oracle for pattern_distance: plain loops over the box.
inline Ratio dense_distance(const Pattern& a, const Pattern& b) {
  const std::int64_t n = a.radius();
  std::int64_t differ = 0, either = 0;
  for (std::int64_t x = -n; x <= n; ++x) {
    for (std::int64_t y = -n; y <= n; ++y) {
      const Symbol p = a.at({x, y}), q = b.at({x, y});
      if (p != a.default_symbol() || q != b.default_symbol()) ++either;
      if (p != q) ++differ;
    }
  }
  return Ratio::of_counts(differ, either);
}

}  // namespace slowent::testing
