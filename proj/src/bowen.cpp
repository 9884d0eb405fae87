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

#include "slowent/bowen.hpp"

#include <algorithm>
#include <cmath>

namespace slowent::covernum {

namespace {

Mat2 mul(const Mat2& a, const Mat2& b) {
  return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3],
          a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]};
}

// Matrices mod 2^32 act exactly on the 2^-32 grid; uint32 products wrap.
using Mat2u = std::array<std::uint32_t, 4>;

Mat2u mul(const Mat2u& a, const Mat2u& b) {
  return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3],
          a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]};
}

Mat2u wrap(const Mat2& a) {
  return {static_cast<std::uint32_t>(a[0]), static_cast<std::uint32_t>(a[1]),
          static_cast<std::uint32_t>(a[2]), static_cast<std::uint32_t>(a[3])};
}

double row_norm(const Mat2& a) {
  return static_cast<double>(std::max(std::llabs(a[0]) + std::llabs(a[1]),
                                      std::llabs(a[2]) + std::llabs(a[3])));
}

}  // namespace

TorusAutomorphisms::TorusAutomorphisms(Mat2 m) : m_(m) {
  const std::int64_t det = m[0] * m[3] - m[1] * m[2];
  if (det != 1 && det != -1) throw UsageError("TorusAutomorphisms: need det = ±1");
  inv_ = {det * m[3], -det * m[1], -det * m[2], det * m[0]};
  lipschitz_ = std::max({row_norm(m_), row_norm(inv_), row_norm(mul(m_, m_)),
                         row_norm(mul(inv_, inv_))});
}

TorusPoint TorusAutomorphisms::operator()(Site u, const TorusPoint& p) const {
  std::int64_t e = u.x + 2 * u.y;
  Mat2u base = wrap(e >= 0 ? m_ : inv_);
  if (e < 0) e = -e;
  Mat2u acc{1, 0, 0, 1};
  while (e > 0) {
    if (e & 1) acc = mul(acc, base);
    base = mul(base, base);
    e >>= 1;
  }
  return {acc[0] * p.x + acc[1] * p.y, acc[2] * p.x + acc[3] * p.y};
}

bool BowenReport::all_pass() const {
  return std::all_of(cells.begin(), cells.end(), [](const BowenCell& c) { return c.pass; });
}

double fit_box_constant(const std::vector<std::pair<double, std::int64_t>>& sep_at_eps) {
  for (double c = 1;; c += 1) {
    bool ok = true;
    for (const auto& [eps, sep] : sep_at_eps) {
      if (std::log(static_cast<double>(sep)) > std::log(c) + c * std::log(1.0 / eps)) {
        ok = false;
        break;
      }
    }
    if (ok) return c;
  }
}

BowenReport finish_bowen_report(double lipschitz, int k, std::vector<BowenCell> cells) {
  BowenReport r;
  r.lipschitz = lipschitz;
  std::vector<std::pair<double, std::int64_t>> base;
  for (const BowenCell& c : cells)
    if (c.n == 0) base.emplace_back(c.eps, c.sep);
  if (base.empty()) {
    for (const BowenCell& c : cells) base.emplace_back(c.eps, c.sep);
  }
  r.box_constant = fit_box_constant(base);
  if (base.size() >= 2) {
    auto [lo, hi] = std::minmax_element(base.begin(), base.end());
    if (lo->first != hi->first && lo->second > 0 && hi->second > 0) {
      r.box_dimension = std::log(static_cast<double>(lo->second) / hi->second) /
                        std::log(hi->first / lo->first);
    }
  }
  const double c1 = lipschitz, c2 = r.box_constant;
  r.lemma_constant = c2 * std::pow(std::max(c1, 2.0), k * c2);
  for (BowenCell& c : cells) {
    const double log_sep = std::log(static_cast<double>(c.sep));
    c.log_bound_proof =
        std::log(c2) + c2 * (static_cast<double>(k * c.n) * std::log(c1) - std::log(c.eps));
    c.log_bound_lemma = static_cast<double>(c.n) * std::log(r.lemma_constant) -
                        r.lemma_constant * std::log(c.eps);
    c.pass = log_sep <= c.log_bound_proof && log_sep <= c.log_bound_lemma;
  }
  r.cells = std::move(cells);
  return r;
}

}  // namespace slowent::covernum
