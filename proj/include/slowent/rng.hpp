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

namespace slowent {

/// Stateless counter-based generator: every draw is a pure function of
/// (seed, purpose tag, index, counter). Adding new streams never perturbs
/// existing ones.
class CounterRng {
 public:
  constexpr CounterRng(std::uint64_t seed, std::uint64_t tag,
                       std::uint64_t index = 0)
      : key_(mix(mix(seed ^ 0x9e3779b97f4a7c15ULL) ^ tag) ^
             mix(index + 0x632be59bd9b4e019ULL)) {}

  static constexpr std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// 64 random bits for the given counter value.
  [[nodiscard]] constexpr std::uint64_t bits(std::uint64_t counter) const {
    return mix(key_ ^ mix(counter));
  }

  /// Uniform integer in [0, bound) by rejection; `counter` is advanced past
  /// the draws consumed.
  [[nodiscard]] std::uint64_t below(std::uint64_t bound,
                                    std::uint64_t& counter) const {
    if (bound <= 1) return 0;
    const std::uint64_t limit = -bound % bound;  // 2^64 mod bound
    for (;;) {
      const std::uint64_t x = bits(counter++);
      const unsigned __int128 m = static_cast<unsigned __int128>(x) * bound;
      if (static_cast<std::uint64_t>(m) >= limit) {
        return static_cast<std::uint64_t>(m >> 64);
      }
    }
  }

  /// Uniform double in [0, 1).
  [[nodiscard]] double unit(std::uint64_t counter) const {
    return static_cast<double>(bits(counter) >> 11) * 0x1.0p-53;
  }

 private:
  std::uint64_t key_;
};

/// Purpose tags for derived streams.
namespace stream {
inline constexpr std::uint64_t kGamma = 0x67616d6d61ULL;     // "gamma"
inline constexpr std::uint64_t kOverlay = 0x6f7665726cULL;   // "overl"
inline constexpr std::uint64_t kSample = 0x73616d706cULL;    // "sampl"
inline constexpr std::uint64_t kTest = 0x7465737473ULL;      // "tests"
inline constexpr std::uint64_t kTorus = 0x746f727573ULL;     // "torus"
}  // namespace stream

}  // namespace slowent
