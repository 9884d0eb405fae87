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

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include "slowent/covernum.hpp"
#include "slowent/lattice.hpp"

namespace slowent::covernum {

using lattice::Site;

/// d_n^∞(x, y) = max over u in Q_n of d(T^u x, T^u y).
template <class Action, class Metric, class Point>
double bowen_distance(const Action& act, const Metric& d, std::int64_t n, const Point& x,
                      const Point& y) {
  double best = 0;
  for (std::int64_t a = -n; a <= n; ++a) {
    for (std::int64_t b = -n; b <= n; ++b) {
      best = std::max(best, d(act({a, b}, x), act({a, b}, y)));
    }
  }
  return best;
}

/// d_n^∞(x, y) >= eps, stopping at the first witness.
template <class Action, class Metric, class Point>
bool bowen_separated(const Action& act, const Metric& d, std::int64_t n, const Point& x,
                     const Point& y, double eps) {
  if (d(x, y) >= eps) return true;
  for (std::int64_t a = -n; a <= n; ++a) {
    for (std::int64_t b = -n; b <= n; ++b) {
      if (d(act({a, b}, x), act({a, b}, y)) >= eps) return true;
    }
  }
  return false;
}

/// Point of the 2-torus on the grid 2^-32 Z^2 / Z^2; translations and
/// integer matrices act exactly.
struct TorusPoint {
  std::uint32_t x = 0;
  std::uint32_t y = 0;
  friend bool operator==(const TorusPoint&, const TorusPoint&) = default;
};

/// Sup of the circular coordinate distances, in [0, 1/2].
struct TorusMetric {
  double operator()(const TorusPoint& p, const TorusPoint& q) const {
    return std::max(circle(p.x - q.x), circle(p.y - q.y));
  }
  static double circle(std::uint32_t delta) {
    const std::uint32_t d = std::min(delta, static_cast<std::uint32_t>(0u - delta));
    return static_cast<double>(d) * 0x1.0p-32;
  }
};

/// T_1 = x + t1, T_2 = x + t2: commuting isometries.
struct TorusTranslations {
  TorusPoint t1, t2;
  TorusPoint operator()(Site u, const TorusPoint& p) const {
    return {static_cast<std::uint32_t>(p.x + static_cast<std::uint32_t>(u.x) * t1.x +
                                       static_cast<std::uint32_t>(u.y) * t2.x),
            static_cast<std::uint32_t>(p.y + static_cast<std::uint32_t>(u.x) * t1.y +
                                       static_cast<std::uint32_t>(u.y) * t2.y)};
  }
  [[nodiscard]] double lipschitz() const { return 1.0; }
};

using Mat2 = std::array<std::int64_t, 4>;  // row-major

/// T_1 = M, T_2 = M^2 for an integer matrix M of determinant ±1, acting on
/// the torus; T^u = M^(u1 + 2 u2).
class TorusAutomorphisms {
 public:
  explicit TorusAutomorphisms(Mat2 m);

  TorusPoint operator()(Site u, const TorusPoint& p) const;

  /// max over T_1^{±1}, T_2^{±1} of the row-sum norm, which bounds the
  /// Lipschitz constant for the sup metric.
  [[nodiscard]] double lipschitz() const { return lipschitz_; }

 private:
  Mat2 m_, inv_;
  double lipschitz_ = 1;
};

/// One (n, eps) cell of a Bowen separation check.
struct BowenCell {
  std::int64_t n = 0;
  double eps = 0;
  std::int64_t sep = 0;
  double log_bound_proof = 0;  // log(C2 * (C1^(k n) / eps)^C2)
  double log_bound_lemma = 0;  // log(C^n / eps^C)
  bool pass = false;
};

struct BowenReport {
  double lipschitz = 1;      // C1
  double box_constant = 1;   // C2, fitted at n = 0
  double lemma_constant = 1; // C
  double box_dimension = 0;  // log-ratio estimate from the eps list
  std::vector<BowenCell> cells;
  [[nodiscard]] bool all_pass() const;
};

/// Smallest integer C2 >= 1 with sep <= C2 (1/eps)^C2 for every (eps, sep).
double fit_box_constant(const std::vector<std::pair<double, std::int64_t>>& sep_at_eps);

/// First-fit d_n^∞-separated subset size over `sample`.
template <class Action, class Metric, class Point>
std::int64_t bowen_sep(const Action& act, const Metric& d, const std::vector<Point>& sample,
                       std::int64_t n, double eps) {
  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    bool ok = true;
    for (std::size_t k : kept) {
      if (!bowen_separated(act, d, n, sample[k], sample[i], eps)) {
        ok = false;
        break;
      }
    }
    if (ok) kept.push_back(i);
  }
  return static_cast<std::int64_t>(kept.size());
}

BowenReport finish_bowen_report(double lipschitz, int k,
                                std::vector<BowenCell> cells);

/// sep(sample, d_n^∞, eps) for every cell, checked against
/// C2 (C1^(kn)/eps)^C2 and C^n/eps^C with C = C2 max(C1,2)^(k C2).
template <class Action, class Metric, class Point>
BowenReport bowen_sep_check(const Action& act, const Metric& d,
                            const std::vector<Point>& sample,
                            const std::vector<std::int64_t>& n_list,
                            const std::vector<double>& eps_list, int k = 2) {
  std::vector<BowenCell> cells;
  for (std::int64_t n : n_list) {
    for (double eps : eps_list) {
      BowenCell c;
      c.n = n;
      c.eps = eps;
      c.sep = bowen_sep(act, d, sample, n, eps);
      cells.push_back(c);
    }
  }
  return finish_bowen_report(act.lipschitz(), k, std::move(cells));
}

}  // namespace slowent::covernum
