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

#include "slowent/symbolic.hpp"

#include <bit>
#include <cmath>

#include "slowent/rng.hpp"

namespace slowent::symbolic {

SlidingBlockCode::SlidingBlockCode(std::int64_t radius, Rule rule)
    : radius_(radius), rule_(std::move(rule)) {
  if (radius_ < 0) throw UsageError("sliding block code: negative radius");
  if (!rule_) throw UsageError("sliding block code: empty rule");
}

SlidingBlockCode SlidingBlockCode::symbol_map(std::map<Symbol, Symbol> table) {
  auto rule = [table](const Pattern& w) {
    const Symbol s = w.at({0, 0});
    const auto it = table.find(s);
    return it == table.end() ? s : it->second;
  };
  SlidingBlockCode out(0, rule);
  out.table_ = std::move(table);
  return out;
}

SlidingBlockCode SlidingBlockCode::identity() { return symbol_map({}); }

SlidingBlockCode SlidingBlockCode::erasure() {
  return symbol_map({{lattice::kZero, lattice::kZero},
                     {lattice::kA, lattice::kOne},
                     {lattice::kB, lattice::kOne}});
}

Symbol SlidingBlockCode::evaluate(const Pattern& window) const {
  if (window.radius() != radius_) throw UsageError("sliding block code: window radius mismatch");
  return rule_(window);
}

Pattern apply_code(const SlidingBlockCode& code, const Pattern& input, std::int64_t n) {
  const std::int64_t m = code.radius();
  if (n < 0 || input.radius() < n + m) {
    throw UsageError("apply_code: input radius " + std::to_string(input.radius()) +
                     " < output radius + window radius " + std::to_string(n + m));
  }
  const Symbol out_default = code.evaluate(Pattern(m, input.default_symbol()));
  if (const auto& table = code.table()) {
    auto map = [&](Symbol s) {
      const auto it = table->find(s);
      return it == table->end() ? s : it->second;
    };
    return input.restrict(n).relabel(map, out_default);
  }
  std::vector<lattice::Cell> cells;
  for (std::int64_t x = -n; x <= n; ++x) {
    for (std::int64_t y = -n; y <= n; ++y) {
      const Symbol s = code.evaluate(input.window({x, y}, m));
      if (s != out_default) cells.push_back({{x, y}, s});
    }
  }
  return Pattern::from_sorted(n, out_default, std::move(cells));
}

Pattern translate(const Pattern& x, Site u, std::int64_t n) { return x.window(u, n); }

Pattern OverlayName::flatten() const {
  const auto cells = base.cells();
  if (cells.size() != bits.size()) throw UsageError("overlay: bits do not match base core");
  std::vector<lattice::Cell> out;
  out.reserve(cells.size());
  for (std::size_t i = 0; i < cells.size(); ++i) out.push_back({cells[i].site, bits[i]});
  return Pattern::from_sorted(base.radius(), base.default_symbol(), std::move(out));
}

OverlayName OverlayName::from_flat(const Pattern& flat) {
  OverlayName out;
  std::vector<lattice::Cell> base;
  for (const auto& c : flat.cells()) {
    if (c.symbol != lattice::kA && c.symbol != lattice::kB) {
      throw UsageError("overlay: core symbols must be a or b");
    }
    base.push_back({c.site, lattice::kOne});
    out.bits.push_back(c.symbol);
  }
  out.base = Pattern::from_sorted(flat.radius(), flat.default_symbol(), std::move(base));
  return out;
}

Symbol overlay_bit(std::uint64_t overlay_seed, Site v) {
  const std::uint64_t index =
      CounterRng::mix(static_cast<std::uint64_t>(v.x)) ^ static_cast<std::uint64_t>(v.y);
  return (CounterRng(overlay_seed, stream::kOverlay, index).bits(0) & 1) ? lattice::kB
                                                                          : lattice::kA;
}

OverlayName overlay_name(const cutstack::PointHandle& point, std::int64_t n) {
  OverlayName out;
  out.base = cutstack::name01(point, n);
  const std::uint64_t seed = point.overlay_seed();
  out.bits.reserve(out.base.core_size());
  for (const auto& c : out.base.cells()) out.bits.push_back(overlay_bit(seed, c.site));
  return out;
}

const partitions::CoFinitePartition& overlay_partition() {
  static const partitions::CoFinitePartition p({lattice::kZero, lattice::kA, lattice::kB},
                                               lattice::kZero);
  return p;
}

Ratio overlay_distance(const OverlayName& x, const OverlayName& y) {
  return partitions::name_metric(x.flatten(), y.flatten(), overlay_partition());
}

BigInt hamming_ball_volume(std::int64_t s, std::int64_t r) {
  if (s < 0) throw UsageError("hamming_ball_volume: negative length");
  BigInt sum = 0;
  BigInt binom = 1;
  for (std::int64_t j = 0; j <= std::min(r, s); ++j) {
    sum += binom;
    binom = binom * (s - j) / (j + 1);
  }
  return sum;
}

BigInt hamming_cover_lower(std::int64_t core_size, const Ratio& eps) {
  if (core_size < 1) throw UsageError("hamming_cover_lower: core size must be >= 1");
  if (eps <= Ratio{0} || eps >= Ratio{1, 2}) {
    throw UsageError("hamming_cover_lower: eps must lie in (0, 1/2)");
  }
  const std::int64_t d = (eps.num() * core_size + eps.den() - 1) / eps.den();
  const BigInt total = BigInt(1) << static_cast<unsigned>(core_size);
  return total / hamming_ball_volume(core_size, d - 1);
}

std::int64_t lexicode_size(int s, int d) {
  if (s < 1 || s > 24) throw UsageError("lexicode_size: length must be in [1, 24]");
  const std::uint32_t words = 1u << s;
  std::vector<bool> covered(words, false);
  std::int64_t size = 0;
  std::vector<std::uint32_t> ball{0};  // masks of weight < d
  for (std::uint32_t e = 1; e < words; ++e) {
    if (std::popcount(e) < d) ball.push_back(e);
  }
  for (std::uint32_t w = 0; w < words; ++w) {
    if (covered[w]) continue;
    ++size;
    for (std::uint32_t e : ball) covered[w ^ e] = true;
  }
  return size;
}

double binary_entropy(double p) {
  if (p <= 0 || p >= 1) return 0;
  return -p * std::log2(p) - (1 - p) * std::log2(1 - p);
}

}  // namespace slowent::symbolic
