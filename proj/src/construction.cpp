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

#include <limits>

#include "slowent/cutstack.hpp"
#include "slowent/rng.hpp"

namespace slowent::cutstack {

namespace {

constexpr std::int64_t kRadiusCap = std::int64_t{1} << 61;

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return -floor_div(-a, b); }

std::int64_t to64(const BigInt& v) {
  if (v > kRadiusCap || v < -kRadiusCap) throw DiagnosticError("value exceeds 64-bit range");
  return v.convert_to<std::int64_t>();
}

std::int64_t checked_product(std::int64_t a, std::int64_t b) {
  const __int128 p = static_cast<__int128>(a) * b;
  if (p > std::numeric_limits<std::int64_t>::max()) {
    throw DiagnosticError("site count exceeds 64-bit range");
  }
  return static_cast<std::int64_t>(p);
}

}  // namespace

Construction::Construction(Schedule schedule) : schedule_(std::move(schedule)) {
  const auto bad = schedule_.violations();
  if (!bad.empty()) throw UsageError("construction: invalid schedule: " + bad.front());
  r_.push_back(0);
  m_.push_back(0);
  s_.push_back(0);
  depth_ = 0;
  for (int i = 1; i <= schedule_.stages(); ++i) {
    if (schedule_.r(i) > kRadiusCap) break;
    r_.push_back(schedule_.r(i).convert_to<std::int64_t>());
    depth_ = i;
    if (i > 1) {
      const BigInt m = *schedule_.m(i - 1);
      if (m <= 2 * schedule_.r(i - 1)) {
        throw UsageError("construction: copies overlap at level " + std::to_string(i - 1) +
                         " (need m > 2r)");
      }
      m_.push_back(to64(m));
      s_.push_back(to64(schedule_.s(i - 1)));
    }
  }
  size_.assign(static_cast<std::size_t>(depth_) + 1,
               std::vector<std::int64_t>(static_cast<std::size_t>(depth_) + 1, 0));
  for (int k = 1; k <= depth_; ++k) {
    size_[k][k] = 2 * extent(k) + 1;
    for (int j = k + 1; j <= depth_; ++j) {
      const std::int64_t t = s_[j - 1] / m_[j - 1];
      size_[k][j] = (2 * t + 1) * size_[k][j - 1];
    }
  }
}

std::int64_t Construction::r(int i) const {
  if (i < 1 || i > depth_) {
    throw DiagnosticError("stage " + std::to_string(i) + " beyond 64-bit depth " +
                          std::to_string(depth_));
  }
  return r_[static_cast<std::size_t>(i)];
}

GammaLevel Construction::gamma(int i) const {
  if (i < 1 || i >= depth_) {
    throw DiagnosticError("level " + std::to_string(i) + " beyond 64-bit depth " +
                          std::to_string(depth_));
  }
  return {m_[static_cast<std::size_t>(i)], s_[static_cast<std::size_t>(i)]};
}

std::optional<Address> Construction::decompose(Site v, int stage) const {
  if (stage < 1) throw UsageError("decompose: stage must be >= 1");
  if (stage > depth_) static_cast<void>(r(stage));  // throws
  Address out;
  out.gammas.assign(static_cast<std::size_t>(stage - 1), Site{});
  const std::int64_t r1 = r_[1];
  for (int j = stage - 1; j >= 1; --j) {
    const std::int64_t m = m_[j];
    const std::int64_t t_max = s_[j] / m;
    const std::int64_t bound = r_[j] - r1;
    auto pick = [&](std::int64_t x) -> std::optional<std::int64_t> {
      const std::int64_t t = std::clamp(floor_div(x + m / 2, m), -t_max, t_max);
      const std::int64_t rem = x - m * t;
      if (rem > bound || rem < -bound) return std::nullopt;
      return m * t;
    };
    const auto gx = pick(v.x);
    const auto gy = pick(v.y);
    if (!gx || !gy) return std::nullopt;
    out.gammas[static_cast<std::size_t>(j - 1)] = {*gx, *gy};
    v = v - Site{*gx, *gy};
  }
  if (v != Site{}) return std::nullopt;
  return out;
}

std::int64_t Construction::size_1d(int k, int j) const {
  if (k < 1 || k > j || j > depth_) throw UsageError("size_1d: need 1 <= k <= j <= depth");
  return size_[k][j];
}

std::int64_t Construction::count_1d(int k, int j, std::int64_t a, std::int64_t b) const {
  if (k < 1 || k > j || j > depth_) throw UsageError("count_1d: need 1 <= k <= j <= depth");
  const std::int64_t e = extent(j);
  a = std::max(a, -e);
  b = std::min(b, e);
  if (a > b) return 0;
  if (j == k) return b - a + 1;
  const std::int64_t m = m_[j - 1];
  const std::int64_t t_max = s_[j - 1] / m;
  const std::int64_t rc = extent(j - 1);
  const std::int64_t t_lo = std::max(ceil_div(a - rc, m), -t_max);
  const std::int64_t t_hi = std::min(floor_div(b + rc, m), t_max);
  if (t_lo > t_hi) return 0;
  std::int64_t f_lo = std::max(ceil_div(a + rc, m), t_lo);
  std::int64_t f_hi = std::min(floor_div(b - rc, m), t_hi);
  std::int64_t total = 0;
  auto partial = [&](std::int64_t t) { total += count_1d(k, j - 1, a - m * t, b - m * t); };
  if (f_lo > f_hi) {
    for (std::int64_t t = t_lo; t <= t_hi; ++t) partial(t);
    return total;
  }
  total += (f_hi - f_lo + 1) * size_[k][j - 1];
  for (std::int64_t t = t_lo; t < f_lo; ++t) partial(t);
  for (std::int64_t t = f_hi + 1; t <= t_hi; ++t) partial(t);
  return total;
}

void Construction::enumerate_1d(int k, int j, std::int64_t a, std::int64_t b,
                                std::vector<std::int64_t>& out) const {
  if (k < 1 || k > j || j > depth_) throw UsageError("enumerate_1d: need 1 <= k <= j <= depth");
  enumerate_1d_impl(k, j, a, b, 0, out);
}

void Construction::enumerate_1d_impl(int k, int j, std::int64_t a, std::int64_t b,
                                     std::int64_t shift, std::vector<std::int64_t>& out) const {
  const std::int64_t e = extent(j);
  a = std::max(a, -e);
  b = std::min(b, e);
  if (a > b) return;
  if (j == k) {
    for (std::int64_t x = a; x <= b; ++x) out.push_back(x + shift);
    return;
  }
  const std::int64_t m = m_[j - 1];
  const std::int64_t t_max = s_[j - 1] / m;
  const std::int64_t rc = extent(j - 1);
  const std::int64_t t_lo = std::max(ceil_div(a - rc, m), -t_max);
  const std::int64_t t_hi = std::min(floor_div(b + rc, m), t_max);
  for (std::int64_t t = t_lo; t <= t_hi; ++t) {
    enumerate_1d_impl(k, j - 1, a - m * t, b - m * t, shift + m * t, out);
  }
}

int Construction::provenance_1d(std::int64_t x, int j) const {
  if (j < 1 || j > depth_) static_cast<void>(r(j));
  if (x > extent(j) || x < -extent(j)) throw UsageError("provenance_1d: site outside stage");
  while (j > 1) {
    const std::int64_t m = m_[j - 1];
    const std::int64_t t_max = s_[j - 1] / m;
    const std::int64_t t = std::clamp(floor_div(x + m / 2, m), -t_max, t_max);
    const std::int64_t rem = x - m * t;
    const std::int64_t rc = extent(j - 1);
    if (rem > rc || rem < -rc) return j;
    x = rem;
    --j;
  }
  return 1;
}

std::int64_t Construction::count_created_by(int k, int j, Site c, std::int64_t n) const {
  if (k >= j) {
    const std::int64_t e = extent(j);
    auto clip = [&](std::int64_t lo, std::int64_t hi) {
      return std::max<std::int64_t>(0, std::min(hi, e) - std::max(lo, -e) + 1);
    };
    return checked_product(clip(c.x - n, c.x + n), clip(c.y - n, c.y + n));
  }
  return checked_product(count_1d(k, j, c.x - n, c.x + n), count_1d(k, j, c.y - n, c.y + n));
}

PointHandle::PointHandle(std::shared_ptr<const Construction> construction, int base_stage,
                         std::vector<Site> fixed, std::uint64_t seed)
    : construction_(std::move(construction)),
      base_stage_(base_stage),
      fixed_(std::move(fixed)),
      seed_(seed) {
  if (!construction_) throw UsageError("PointHandle: null construction");
  if (base_stage_ < 1) throw UsageError("PointHandle: stage must be >= 1");
  static_cast<void>(construction_->r(base_stage_));
  for (std::size_t l = 0; l < fixed_.size(); ++l) {
    if (!construction_->gamma(static_cast<int>(l) + 1).contains(fixed_[l])) {
      throw UsageError("PointHandle: gamma " + std::to_string(l + 1) + " not in its level");
    }
  }
}

std::uint64_t PointHandle::overlay_seed() const {
  return CounterRng(seed_, stream::kOverlay).bits(0);
}

Site PointHandle::gamma(int level) const {
  if (level < 1) throw UsageError("gamma: level must be >= 1");
  if (static_cast<std::size_t>(level) <= fixed_.size()) {
    return fixed_[static_cast<std::size_t>(level - 1)];
  }
  const GammaLevel g = construction_->gamma(level);
  const std::int64_t t = g.half_count();
  const CounterRng rng(seed_, stream::kGamma, static_cast<std::uint64_t>(level));
  std::uint64_t counter = 0;
  const auto span = static_cast<std::uint64_t>(2 * t + 1);
  const std::int64_t tx = static_cast<std::int64_t>(rng.below(span, counter)) - t;
  const std::int64_t ty = static_cast<std::int64_t>(rng.below(span, counter)) - t;
  return {tx * g.spacing, ty * g.spacing};
}

Address PointHandle::address(int stage) const {
  Address out;
  for (int l = 1; l < stage; ++l) out.gammas.push_back(gamma(l));
  return out;
}

Site PointHandle::position(int stage) const {
  Site out;
  for (int l = 1; l < stage; ++l) out = out + gamma(l);
  return out;
}

int PointHandle::stage_for_window(std::int64_t n) const {
  if (n < 0) throw UsageError("window radius must be >= 0");
  Site pos = position(base_stage_);
  for (int j = base_stage_; j <= construction_->depth(); ++j) {
    if (j > base_stage_) pos = pos + gamma(j - 1);
    if (pos.norm() <= construction_->extent(j) - n) return j;
  }
  throw DiagnosticError("window Q_" + std::to_string(n) + " needs more stages than the " +
                        std::to_string(construction_->depth()) + " available");
}

int PointHandle::stage_for_site(Site v) const {
  Site pos = position(base_stage_);
  for (int j = base_stage_; j <= construction_->depth(); ++j) {
    if (j > base_stage_) pos = pos + gamma(j - 1);
    if ((pos + v).norm() <= construction_->extent(j)) return j;
  }
  throw DiagnosticError("site needs more stages than the " +
                        std::to_string(construction_->depth()) + " available");
}

PointHandle sample_point(std::shared_ptr<const Construction> construction, int stage,
                         std::uint64_t seed) {
  return PointHandle(std::move(construction), stage, {}, seed);
}

PointHandle point_at(std::shared_ptr<const Construction> construction, const Address& address,
                     std::uint64_t seed) {
  return PointHandle(std::move(construction), address.stage(), address.gammas, seed);
}

int color01_at(const PointHandle& point, Site v) {
  const Construction& c = point.construction();
  const int j = point.stage_for_site(v);
  const Site w = point.position(j) + v;
  return c.provenance_1d(w.x, j) == 1 && c.provenance_1d(w.y, j) == 1 ? 1 : 0;
}

NameFactors name01_factors(const PointHandle& point, std::int64_t n) {
  const Construction& c = point.construction();
  const int j = point.stage_for_window(n);
  const Site pos = point.position(j);
  NameFactors out;
  c.enumerate_1d(1, j, pos.x - n, pos.x + n, out.xs);
  c.enumerate_1d(1, j, pos.y - n, pos.y + n, out.ys);
  for (auto& x : out.xs) x -= pos.x;
  for (auto& y : out.ys) y -= pos.y;
  return out;
}

Pattern name01(const PointHandle& point, std::int64_t n) {
  const NameFactors f = name01_factors(point, n);
  std::vector<lattice::Cell> cells;
  cells.reserve(f.xs.size() * f.ys.size());
  for (std::int64_t x : f.xs) {
    for (std::int64_t y : f.ys) cells.push_back({{x, y}, lattice::kOne});
  }
  return Pattern::from_sorted(n, lattice::kZero, std::move(cells));
}

std::int64_t core_count(const PointHandle& point, std::int64_t n) {
  return created_count(point, 1, n);
}

std::int64_t created_count(const PointHandle& point, int k, std::int64_t n) {
  if (k < 1) throw UsageError("created_count: stage must be >= 1");
  const int j = point.stage_for_window(n);
  return point.construction().count_created_by(k, j, point.position(j), n);
}

SiteOrigin locate_site(const PointHandle& point, Site v) {
  const Construction& c = point.construction();
  int j = point.stage_for_site(v);
  Site w = point.position(j) + v;
  while (j > 1) {
    const GammaLevel g = c.gamma(j - 1);
    const std::int64_t t_max = g.half_count();
    const std::int64_t rc = c.extent(j - 1);
    auto near = [&](std::int64_t x) {
      return g.spacing * std::clamp(floor_div(x + g.spacing / 2, g.spacing), -t_max, t_max);
    };
    const Site rem = w - Site{near(w.x), near(w.y)};
    if (rem.norm() > rc) break;
    w = rem;
    --j;
  }
  return {j, w};
}

ConstructionNames::ConstructionNames(std::vector<PointHandle> points)
    : points_(std::move(points)), partition_(partitions::CoFinitePartition::two_atom()) {}

Pattern ConstructionNames::name(std::size_t point, std::int64_t n) const {
  return name01(points_.at(point), n);
}

std::int64_t ConstructionNames::core_count(std::size_t point, std::int64_t m) const {
  return cutstack::core_count(points_.at(point), m);
}

}  // namespace slowent::cutstack
