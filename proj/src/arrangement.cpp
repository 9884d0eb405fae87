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

#include "slowent/arrangement.hpp"

#include <algorithm>
#include <cmath>

namespace slowent::cutstack {

namespace {

std::size_t index_in(std::int64_t radius, Site v) {
  const std::int64_t side = 2 * radius + 1;
  return static_cast<std::size_t>((v.x + radius) * side + (v.y + radius));
}

}  // namespace

Arrangement Arrangement::single(lattice::Symbol color) {
  Arrangement out;
  out.cells_.push_back({color, 1});
  return out;
}

const ArrangementCell& Arrangement::at(Site v) const {
  if (v.norm() > radius_) throw UsageError("arrangement: site outside Q_r");
  return cells_[index_in(radius_, v)];
}

Site Arrangement::site_of(std::size_t index) const {
  const std::int64_t side = 2 * radius_ + 1;
  const auto i = static_cast<std::int64_t>(index);
  return {i / side - radius_, i % side - radius_};
}

BigRational Arrangement::mass_created_by(int k) const {
  const auto n = std::count_if(cells_.begin(), cells_.end(),
                               [k](const ArrangementCell& c) { return c.provenance <= k; });
  return BigRational(BigInt(n), width_den_);
}

BigRational Arrangement::total_mass() const {
  return BigRational(BigInt(cells_.size()), width_den_);
}

Arrangement generic_cut_tile(const Arrangement& arr, std::int64_t m, std::span<const Site> psi,
                             std::int64_t r_next, lattice::Symbol new_color) {
  if (m < 1) throw UsageError("cut_tile: m must be >= 1");
  if (static_cast<std::int64_t>(psi.size()) != m) {
    throw UsageError("cut_tile: placement map must have exactly m entries");
  }
  const std::int64_t r = arr.radius_;
  for (const Site& p : psi) {
    if (p.norm() + r > r_next) throw UsageError("cut_tile: placement out of bounds");
  }
  std::vector<Site> sorted(psi.begin(), psi.end());
  std::sort(sorted.begin(), sorted.end());
  // Spacing: boxes of radius r around distinct placements must not meet.
  for (std::size_t a = 0; a < sorted.size(); ++a) {
    for (std::size_t b = a + 1; b < sorted.size(); ++b) {
      if (sorted[b].x - sorted[a].x > 2 * r) break;
      if ((sorted[b] - sorted[a]).norm() <= 2 * r) {
        throw UsageError("cut_tile: placements closer than 2r + 1");
      }
    }
  }
  Arrangement out;
  out.stage_ = arr.stage_ + 1;
  out.radius_ = r_next;
  out.width_den_ = arr.width_den_ * m;
  out.log_width_ = arr.log_width_ - std::log(static_cast<double>(m));
  const std::int64_t side = 2 * r_next + 1;
  out.cells_.assign(static_cast<std::size_t>(side * side), {new_color, out.stage_});
  for (const Site& p : psi) {
    for (std::size_t i = 0; i < arr.cells_.size(); ++i) {
      out.cells_[index_in(r_next, p + arr.site_of(i))] = arr.cells_[i];
    }
  }
  return out;
}

BigRational boundary_mass(const Arrangement& arr, std::int64_t i) {
  std::int64_t n = 0;
  const auto cells = arr.cells();
  for (std::size_t k = 0; k < cells.size(); ++k) {
    if (cells[k].provenance < arr.stage() && arr.radius() - arr.site_of(k).norm() < i) ++n;
  }
  return BigRational(BigInt(n), arr.width_denominator());
}

Arrangement build_arrangement(const Construction& construction, int stage) {
  Arrangement arr = Arrangement::single(lattice::kOne);
  for (int j = 1; j < stage; ++j) {
    const auto psi = construction.gamma(j).enumerate();
    arr = generic_cut_tile(arr, static_cast<std::int64_t>(psi.size()), psi, construction.r(j + 1),
                           lattice::kZero);
  }
  return arr;
}

MassLedger mass_ledger(const Schedule& schedule, int stage) {
  if (stage < 1 || stage > schedule.stages()) throw UsageError("mass_ledger: bad stage");
  MassLedger out;
  BigRational w = 1;
  for (int j = 1; j <= stage; ++j) {
    if (j > 1) {
      const auto m = schedule.m(j - 1);
      if (!m) throw UsageError("mass_ledger: level without integer m");
      const BigInt side = 2 * (schedule.s(j - 1) / *m) + 1;
      w /= BigRational(side * side);
    }
    out.width.push_back(w);
    const BigInt side = 2 * schedule.r(j) + 1;
    const BigRational mass = j == 1 ? BigRational(1) : BigRational(side * side) * w;
    out.new_mass.push_back(j == 1 ? mass : mass - out.stage_mass.back());
    out.stage_mass.push_back(mass);
    out.mass_a.push_back(BigRational(gamma_star_size(j, schedule)) * w);
  }
  return out;
}

}  // namespace slowent::cutstack
