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

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "slowent/lattice.hpp"
#include "slowent/ratio.hpp"

namespace slowent::partitions {

using lattice::Pattern;
using lattice::Site;
using lattice::Symbol;

/// A finite partition with exactly one infinite-measure atom; the remaining
/// atoms form the core. Atom indices put the infinite atom at 0 and the core
/// labels after it in the given order.
class CoFinitePartition {
 public:
  CoFinitePartition(std::vector<Symbol> labels, Symbol infinite_atom);

  /// {0 (infinite), 1}: the partition {complement of A, A}.
  static CoFinitePartition two_atom();

  [[nodiscard]] Symbol infinite_atom() const { return labels_.front(); }
  [[nodiscard]] std::span<const Symbol> labels() const { return labels_; }
  [[nodiscard]] std::span<const Symbol> core_labels() const {
    return std::span<const Symbol>(labels_).subspan(1);
  }
  [[nodiscard]] std::size_t size() const { return labels_.size(); }
  [[nodiscard]] bool contains(Symbol s) const;
  [[nodiscard]] std::size_t index_of(Symbol s) const;

 private:
  std::vector<Symbol> labels_;  // infinite atom first
};

/// Source of (P,n)-names for a fixed family of points, addressed by index.
/// Implementations must return consistent windows: name(p, n) is the
/// restriction of name(p, n') for n' > n. Reads must be thread-safe.
class NameProvider {
 public:
  virtual ~NameProvider() = default;

  [[nodiscard]] virtual std::size_t point_count() const = 0;
  [[nodiscard]] virtual const CoFinitePartition& partition() const = 0;
  [[nodiscard]] virtual Pattern name(std::size_t point, std::int64_t n) const = 0;

  /// Number of core visits of `point` within Q_m.
  [[nodiscard]] virtual std::int64_t core_count(std::size_t point, std::int64_t m) const {
    return static_cast<std::int64_t>(name(point, m).core_size());
  }
};

/// Names given explicitly, one per point, all at a common maximal radius.
class PatternNames final : public NameProvider {
 public:
  PatternNames(CoFinitePartition partition, std::vector<Pattern> names);

  std::size_t point_count() const override { return names_.size(); }
  const CoFinitePartition& partition() const override { return partition_; }
  Pattern name(std::size_t point, std::int64_t n) const override;

 private:
  CoFinitePartition partition_;
  std::vector<Pattern> names_;
};

/// d_{P,n}: disagreements over sites where either name visits the core,
/// with 0/0 read as 0. Names must share the box and use the infinite atom as
/// their default symbol.
Ratio name_metric(const Pattern& x_name, const Pattern& y_name,
                  const CoFinitePartition& partition);

/// d_{A,n}: |Rx Δ Ry| / |Rx ∪ Ry| with 0/0 read as 0.
Ratio recurrence_metric(std::span<const Site> rx, std::span<const Site> ry);

/// The {0,1} name on Q_n whose 1-cells are `sites`.
Pattern two_atom_name(std::span<const Site> sites, std::int64_t n);

/// P^F: the name at u is the tuple of P-names at u+f, f in F, encoded in
/// mixed radix over atom indices, so the all-infinite tuple is symbol 0.
class OrbitRefinement final : public NameProvider {
 public:
  OrbitRefinement(const NameProvider& base, std::vector<Site> offsets);

  std::size_t point_count() const override { return base_.point_count(); }
  const CoFinitePartition& partition() const override { return refined_; }
  Pattern name(std::size_t point, std::int64_t n) const override;

  [[nodiscard]] std::span<const Site> offsets() const { return offsets_; }

 private:
  const NameProvider& base_;
  std::vector<Site> offsets_;
  std::int64_t reach_ = 0;
  CoFinitePartition refined_;
};

OrbitRefinement refine_by_orbit(const NameProvider& provider, std::vector<Site> offsets);

/// A partition realised as one label per cell of a built arrangement.
struct CellLabeling {
  CoFinitePartition partition;
  std::vector<Symbol> cell_labels;
};

/// Δ(P,R): mass of cells whose atom index differs, over the mass of cells in
/// core(P) ∪ core(R). Atoms are matched by index.
BigRational partition_delta(const CellLabeling& p, const CellLabeling& r,
                            std::span<const BigRational> cell_mass);

/// Smallest m with at least (2n+1)^2 core visits in Q_m, found by doubling
/// then bisection. Throws DiagnosticError once m would exceed `search_cap`.
std::int64_t rescale_radius(const NameProvider& provider, std::size_t point,
                            std::int64_t n, std::int64_t search_cap = std::int64_t{1} << 40);

/// d_{P,m(x,n)}(x,y) + d_{P,m(y,n)}(x,y).
Ratio rescaled_metric(const NameProvider& provider, std::size_t x, std::size_t y,
                      std::int64_t n, std::int64_t search_cap = std::int64_t{1} << 40);

}  // namespace slowent::partitions
