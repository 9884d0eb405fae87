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

#include "slowent/partitions.hpp"

#include <algorithm>
#include <limits>
#include <string>

namespace slowent::partitions {

using lattice::Cell;
using lattice::in_box;

CoFinitePartition::CoFinitePartition(std::vector<Symbol> labels, Symbol infinite_atom) {
  auto it = std::find(labels.begin(), labels.end(), infinite_atom);
  if (it == labels.end()) throw UsageError("partition: infinite atom not among labels");
  labels.erase(it);
  labels.insert(labels.begin(), infinite_atom);
  std::vector<Symbol> sorted = labels;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw UsageError("partition: duplicate labels");
  }
  labels_ = std::move(labels);
}

CoFinitePartition CoFinitePartition::two_atom() {
  return CoFinitePartition({lattice::kZero, lattice::kOne}, lattice::kZero);
}

bool CoFinitePartition::contains(Symbol s) const {
  return std::find(labels_.begin(), labels_.end(), s) != labels_.end();
}

std::size_t CoFinitePartition::index_of(Symbol s) const {
  auto it = std::find(labels_.begin(), labels_.end(), s);
  if (it == labels_.end()) {
    throw UsageError("symbol #" + std::to_string(s) + " is not in the partition");
  }
  return static_cast<std::size_t>(it - labels_.begin());
}

PatternNames::PatternNames(CoFinitePartition partition, std::vector<Pattern> names)
    : partition_(std::move(partition)), names_(std::move(names)) {
  for (const Pattern& p : names_) {
    if (p.default_symbol() != partition_.infinite_atom()) {
      throw UsageError("PatternNames: default symbol must be the infinite atom");
    }
  }
}

Pattern PatternNames::name(std::size_t point, std::int64_t n) const {
  return names_.at(point).restrict(n);
}

Ratio name_metric(const Pattern& x_name, const Pattern& y_name,
                  const CoFinitePartition& partition) {
  for (const Pattern* p : {&x_name, &y_name}) {
    if (p->default_symbol() != partition.infinite_atom()) {
      throw UsageError("name_metric: name default must be the infinite atom");
    }
    for (const Cell& c : p->cells()) {
      if (!partition.contains(c.symbol)) {
        throw UsageError("name_metric: symbol #" + std::to_string(c.symbol) +
                         " not in partition");
      }
    }
  }
  return lattice::pattern_distance(x_name, y_name);
}

Ratio recurrence_metric(std::span<const Site> rx, std::span<const Site> ry) {
  std::vector<Site> a(rx.begin(), rx.end()), b(ry.begin(), ry.end());
  std::sort(a.begin(), a.end());
  a.erase(std::unique(a.begin(), a.end()), a.end());
  std::sort(b.begin(), b.end());
  b.erase(std::unique(b.begin(), b.end()), b.end());
  std::vector<Site> common;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(common));
  const auto both = static_cast<std::int64_t>(common.size());
  const auto uni = static_cast<std::int64_t>(a.size() + b.size()) - both;
  return Ratio::of_counts(uni - both, uni);
}

Pattern two_atom_name(std::span<const Site> sites, std::int64_t n) {
  std::vector<Cell> cells;
  cells.reserve(sites.size());
  for (const Site& s : sites) cells.push_back({s, lattice::kOne});
  return Pattern::from_cells(n, lattice::kZero, std::move(cells));
}

namespace {

CoFinitePartition refined_partition(const CoFinitePartition& base, std::size_t arity) {
  const std::uint64_t r = base.size();
  std::uint64_t count = 1;
  for (std::size_t i = 0; i < arity; ++i) {
    if (count > std::numeric_limits<Symbol>::max() / r) {
      throw UsageError("refine_by_orbit: refined alphabet exceeds 32-bit symbols");
    }
    count *= r;
  }
  std::vector<Symbol> labels(count);
  for (std::uint64_t i = 0; i < count; ++i) labels[i] = static_cast<Symbol>(i);
  return CoFinitePartition(std::move(labels), 0);
}

}  // namespace

OrbitRefinement::OrbitRefinement(const NameProvider& base, std::vector<Site> offsets)
    : base_(base),
      offsets_(std::move(offsets)),
      refined_(refined_partition(base.partition(), offsets_.size())) {
  if (std::find(offsets_.begin(), offsets_.end(), Site{0, 0}) == offsets_.end()) {
    throw UsageError("refine_by_orbit: F must contain 0");
  }
  for (const Site& f : offsets_) reach_ = std::max(reach_, f.norm());
}

Pattern OrbitRefinement::name(std::size_t point, std::int64_t n) const {
  const Pattern wide = base_.name(point, n + reach_);
  const CoFinitePartition& p = base_.partition();
  std::vector<Site> candidates;
  candidates.reserve(wide.core_size() * offsets_.size());
  for (const Cell& c : wide.cells()) {
    for (const Site& f : offsets_) {
      const Site u = c.site - f;
      if (in_box(u, n)) candidates.push_back(u);
    }
  }
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
  std::vector<Cell> cells;
  cells.reserve(candidates.size());
  const std::uint64_t radix = p.size();
  for (const Site& u : candidates) {
    std::uint64_t code = 0;
    for (std::size_t i = offsets_.size(); i-- > 0;) {
      code = code * radix + p.index_of(wide.at(u + offsets_[i]));
    }
    cells.push_back({u, static_cast<Symbol>(code)});
  }
  return Pattern::from_sorted(n, 0, std::move(cells));
}

OrbitRefinement refine_by_orbit(const NameProvider& provider, std::vector<Site> offsets) {
  return OrbitRefinement(provider, std::move(offsets));
}

BigRational partition_delta(const CellLabeling& p, const CellLabeling& r,
                            std::span<const BigRational> cell_mass) {
  if (p.partition.size() != r.partition.size()) {
    throw UsageError("partition_delta: label-count mismatch");
  }
  if (p.cell_labels.size() != cell_mass.size() || r.cell_labels.size() != cell_mass.size()) {
    throw UsageError("partition_delta: labelings must cover every cell");
  }
  BigRational moved = 0, core = 0;
  for (std::size_t c = 0; c < cell_mass.size(); ++c) {
    const std::size_t ip = p.partition.index_of(p.cell_labels[c]);
    const std::size_t ir = r.partition.index_of(r.cell_labels[c]);
    if (ip != ir) moved += cell_mass[c];
    if (ip != 0 || ir != 0) core += cell_mass[c];
  }
  if (core == 0) return 0;
  return moved / core;
}

std::int64_t rescale_radius(const NameProvider& provider, std::size_t point,
                            std::int64_t n, std::int64_t search_cap) {
  if (n < 0) throw UsageError("rescale_radius: negative radius");
  const std::int64_t target = lattice::box_site_count64(n);
  auto enough = [&](std::int64_t m) { return provider.core_count(point, m) >= target; };
  if (enough(0)) return 0;
  std::int64_t lo = 0, hi = 1;  // invariant: !enough(lo)
  while (!enough(hi)) {
    lo = hi;
    if (hi > search_cap / 2) {
      throw DiagnosticError("rescale_radius: fewer than |Q_" + std::to_string(n) +
                            "| core visits within the search cap");
    }
    hi *= 2;
  }
  while (hi - lo > 1) {
    const std::int64_t mid = lo + (hi - lo) / 2;
    (enough(mid) ? hi : lo) = mid;
  }
  return hi;
}

Ratio rescaled_metric(const NameProvider& provider, std::size_t x, std::size_t y,
                      std::int64_t n, std::int64_t search_cap) {
  const CoFinitePartition& p = provider.partition();
  const std::int64_t mx = rescale_radius(provider, x, n, search_cap);
  const std::int64_t my = rescale_radius(provider, y, n, search_cap);
  const Ratio dx = name_metric(provider.name(x, mx), provider.name(y, mx), p);
  if (mx == my) return dx + dx;
  return dx + name_metric(provider.name(x, my), provider.name(y, my), p);
}

}  // namespace slowent::partitions
