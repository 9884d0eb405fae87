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
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "slowent/lattice.hpp"
#include "slowent/partitions.hpp"
#include "slowent/ratio.hpp"

namespace slowent::cutstack {

using lattice::Pattern;
using lattice::Site;

/// Radii r(1) < r(2) < ... with s(i) = r(i+1) - r(i) and m(i) = s(i)^theta.
/// Stages are 1-based; m and s exist for i < stages().
class Schedule {
 public:
  /// Greedy: m(i) = c r(i) + 1, s(i) = m(i)^(1/theta), r(i+1) = r(i) + s(i).
  static Schedule build(int stages, const Ratio& theta = Ratio{1, 3}, std::int64_t c = 2,
                        const BigInt& r1 = 1);

  /// Explicit radii; not validated (see violations()).
  static Schedule from_radii(std::vector<BigInt> radii, const Ratio& theta, std::int64_t c);

  /// Schedule file syntax only; see violations().
  static Schedule parse(std::istream& is);
  static Schedule read(std::istream& is);  // parse, then throw on any violation
  void write(std::ostream& os) const;

  [[nodiscard]] int stages() const { return static_cast<int>(r_.size()); }
  [[nodiscard]] const Ratio& theta() const { return theta_; }
  [[nodiscard]] std::int64_t spacing_factor() const { return c_; }
  [[nodiscard]] const BigInt& r(int i) const;
  [[nodiscard]] BigInt s(int i) const;
  /// Exact integer (1/theta)-th root of s(i), if s(i) is a perfect power.
  [[nodiscard]] std::optional<BigInt> m(int i) const;

  /// Invariant violations, one message each; empty when valid.
  [[nodiscard]] std::vector<std::string> violations() const;

  /// log(prod_{j<=i} r(j)) / log r(i); tends to 1 under the growth condition.
  [[nodiscard]] double product_exponent(int i) const;

 private:
  std::vector<BigInt> r_;
  Ratio theta_{1, 3};
  std::int64_t c_ = 2;
};

/// Γ_i = Q_{s(i)} ∩ m(i) Z^2.
struct GammaLevel {
  std::int64_t spacing = 1;
  std::int64_t radius = 0;

  [[nodiscard]] std::int64_t half_count() const { return radius / spacing; }
  [[nodiscard]] bool contains(Site v) const;
  [[nodiscard]] std::vector<Site> enumerate() const;
};

/// (2 (s div m) + 1)^2.
BigInt gamma_size(const GammaLevel& level);

/// (γ_1, ..., γ_{i-1}) with γ_j in Γ_j, the identity of a stage-i A-position.
struct Address {
  std::vector<Site> gammas;
  [[nodiscard]] int stage() const { return static_cast<int>(gammas.size()) + 1; }
  [[nodiscard]] Site compose() const;
  friend bool operator==(const Address&, const Address&) = default;
};

/// |Γ_1| ... |Γ_{i-1}|: the number of A-positions at stage i.
BigInt gamma_star_size(int stage, const Schedule& schedule);

/// The schedule's levels as 64-bit tables plus the lattice-counting engine.
/// Stage j's arrangement occupies Q_{r(j)} (stage 1: the single A cell);
/// it is tiled by copies of stage j-1 centred on Γ_{j-1}.
class Construction {
 public:
  explicit Construction(Schedule schedule);

  [[nodiscard]] const Schedule& schedule() const { return schedule_; }
  /// Largest stage whose radius and levels fit in 64 bits.
  [[nodiscard]] int depth() const { return depth_; }

  [[nodiscard]] std::int64_t r(int i) const;
  [[nodiscard]] GammaLevel gamma(int i) const;  // 1 <= i < depth()
  /// Extent of the stage-i arrangement: 0 for stage 1, r(i) otherwise.
  [[nodiscard]] std::int64_t extent(int i) const { return i == 1 ? 0 : r(i); }

  /// Top-down unique decomposition of v over Γ_{i-1}, ..., Γ_1.
  [[nodiscard]] std::optional<Address> decompose(Site v, int stage) const;

  /// |L_k(j) ∩ [a, b]| where L_k(j) is the set of stage-j coordinates lying
  /// in a copy of the stage-k arrangement (k <= j). L_1(j) is the 1-D
  /// sumset of the first j-1 levels.
  [[nodiscard]] std::int64_t count_1d(int k, int j, std::int64_t a, std::int64_t b) const;
  void enumerate_1d(int k, int j, std::int64_t a, std::int64_t b,
                    std::vector<std::int64_t>& out) const;
  /// Smallest k with x in L_k(j), for |x| <= extent(j).
  [[nodiscard]] int provenance_1d(std::int64_t x, int j) const;
  [[nodiscard]] std::int64_t size_1d(int k, int j) const;

  /// Sites of the box c + Q_n (inside the stage-j arrangement) created at
  /// stage <= k.
  [[nodiscard]] std::int64_t count_created_by(int k, int j, Site c, std::int64_t n) const;

 private:
  void enumerate_1d_impl(int k, int j, std::int64_t a, std::int64_t b, std::int64_t shift,
                         std::vector<std::int64_t>& out) const;

  Schedule schedule_;
  int depth_ = 0;
  std::vector<std::int64_t> r_;   // index i, r_[0] unused
  std::vector<std::int64_t> m_;   // index i < depth
  std::vector<std::int64_t> s_;
  std::vector<std::vector<std::int64_t>> size_;  // size_[k][j]
};

/// A point of A: its address γ_1, γ_2, ... Levels below the sampled stage
/// (or given explicitly) are fixed; higher levels are drawn on demand from
/// (seed, level), so evaluation never mutates the handle.
class PointHandle {
 public:
  PointHandle(std::shared_ptr<const Construction> construction, int base_stage,
              std::vector<Site> fixed, std::uint64_t seed);

  [[nodiscard]] const Construction& construction() const { return *construction_; }
  [[nodiscard]] int base_stage() const { return base_stage_; }
  [[nodiscard]] std::uint64_t seed() const { return seed_; }
  [[nodiscard]] std::uint64_t overlay_seed() const;

  [[nodiscard]] Site gamma(int level) const;
  [[nodiscard]] Address address(int stage) const;
  /// Position in the stage-j arrangement: γ_1 + ... + γ_{j-1}.
  [[nodiscard]] Site position(int stage) const;

  /// Smallest stage >= base whose arrangement contains position + Q_n.
  [[nodiscard]] int stage_for_window(std::int64_t n) const;
  /// Smallest stage >= base whose arrangement contains position + v.
  [[nodiscard]] int stage_for_site(Site v) const;

 private:
  std::shared_ptr<const Construction> construction_;
  int base_stage_ = 1;
  std::vector<Site> fixed_;
  std::uint64_t seed_ = 0;
};

/// γ_j uniform and independent on Γ_j for j < stage.
PointHandle sample_point(std::shared_ptr<const Construction> construction, int stage,
                         std::uint64_t seed);

/// A point with the given address prefix; higher levels drawn from `seed`.
PointHandle point_at(std::shared_ptr<const Construction> construction, const Address& address,
                     std::uint64_t seed = 0);

/// 1 iff T^v x is in A.
int color01_at(const PointHandle& point, Site v);

/// The 1-cells of a name form a product set xs × ys (offsets from the
/// point, ascending).
struct NameFactors {
  std::vector<std::int64_t> xs;
  std::vector<std::int64_t> ys;
  friend auto operator<=>(const NameFactors&, const NameFactors&) = default;
};

NameFactors name01_factors(const PointHandle& point, std::int64_t n);

/// The {0,1} name on Q_n, assembled from 1-D lattice enumeration.
Pattern name01(const PointHandle& point, std::int64_t n);

/// |{v in Q_n : T^v x in A}| by lattice counting.
std::int64_t core_count(const PointHandle& point, std::int64_t n);

/// |{v in Q_n : T^v x created at a stage <= k}| by lattice counting.
std::int64_t created_count(const PointHandle& point, int k, std::int64_t n);

struct SiteOrigin {
  int stage = 1;       // stage that created the cell
  Site residual;       // position inside that stage's arrangement
  friend bool operator==(const SiteOrigin&, const SiteOrigin&) = default;
};

SiteOrigin locate_site(const PointHandle& point, Site v);

/// (P,n)-names of construction points for the two-atom partition {A^c, A}.
class ConstructionNames final : public partitions::NameProvider {
 public:
  explicit ConstructionNames(std::vector<PointHandle> points);

  std::size_t point_count() const override { return points_.size(); }
  const partitions::CoFinitePartition& partition() const override { return partition_; }
  Pattern name(std::size_t point, std::int64_t n) const override;
  std::int64_t core_count(std::size_t point, std::int64_t m) const override;

  [[nodiscard]] const PointHandle& point(std::size_t i) const { return points_.at(i); }

 private:
  std::vector<PointHandle> points_;
  partitions::CoFinitePartition partition_;
};

}  // namespace slowent::cutstack
