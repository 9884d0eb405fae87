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
#include <span>
#include <vector>

#include "slowent/cutstack.hpp"
#include "slowent/lattice.hpp"
#include "slowent/ratio.hpp"

namespace slowent::cutstack {

struct ArrangementCell {
  lattice::Symbol color = lattice::kZero;
  int provenance = 1;  // stage that created the cell
  friend bool operator==(const ArrangementCell&, const ArrangementCell&) = default;
};

/// An explicit rank-1 arrangement: cells on Q_r, each of the same width
/// 1/D. Stored densely in lexicographic site order.
class Arrangement {
 public:
  /// The stage-1 arrangement: one cell of width 1.
  static Arrangement single(lattice::Symbol color);

  [[nodiscard]] int stage() const { return stage_; }
  [[nodiscard]] std::int64_t radius() const { return radius_; }
  [[nodiscard]] const BigInt& width_denominator() const { return width_den_; }
  [[nodiscard]] BigRational width() const { return BigRational(BigInt(1), width_den_); }
  [[nodiscard]] double log_width() const { return log_width_; }

  [[nodiscard]] std::size_t cell_count() const { return cells_.size(); }
  [[nodiscard]] const ArrangementCell& at(Site v) const;
  [[nodiscard]] std::span<const ArrangementCell> cells() const { return cells_; }
  [[nodiscard]] Site site_of(std::size_t index) const;

  /// Total mass of cells created at stage <= k.
  [[nodiscard]] BigRational mass_created_by(int k) const;
  [[nodiscard]] BigRational total_mass() const;

 private:
  friend Arrangement generic_cut_tile(const Arrangement&, std::int64_t, std::span<const Site>,
                                      std::int64_t, lattice::Symbol);

  int stage_ = 1;
  std::int64_t radius_ = 0;
  BigInt width_den_ = 1;
  double log_width_ = 0;
  std::vector<ArrangementCell> cells_;
};

/// Cut every cell into m equal pieces, translate piece j to psi[j], fill the
/// rest of Q_{r_next} with new cells of `new_color`. Throws UsageError on a
/// placement that is out of bounds or closer than 2r + 1 to another.
Arrangement generic_cut_tile(const Arrangement& arr, std::int64_t m, std::span<const Site> psi,
                             std::int64_t r_next, lattice::Symbol new_color);

/// Exact mass of cells created before the arrangement's stage that sit at
/// distance < i from the boundary (distance r - ||v||).
BigRational boundary_mass(const Arrangement& arr, std::int64_t i);

/// The construction's stage-i arrangement built cell by cell: A-cells
/// coloured 1, everything added later coloured 0.
Arrangement build_arrangement(const Construction& construction, int stage);

struct MassLedger {
  std::vector<BigRational> width;       // w(1..i)
  std::vector<BigRational> stage_mass;  // total mass of the stage-j arrangement
  std::vector<BigRational> new_mass;    // mass added at stage j
  std::vector<BigRational> mass_a;      // μ(A) as seen at stage j
};

/// Exact widths and masses up to stage i. Stage 1 is the single A-cell.
MassLedger mass_ledger(const Schedule& schedule, int stage);

}  // namespace slowent::cutstack
