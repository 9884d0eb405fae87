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
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "slowent/ratio.hpp"

namespace slowent::covernum {

struct MetricOptions {
  bool require_unit_range = false;  // entries in [0, 1]
  bool check_triangle = false;      // O(n^3) validation
};

/// A finite weighted point set with an exact symmetric distance matrix.
class MetricSample {
 public:
  using Options = MetricOptions;

  MetricSample() = default;
  MetricSample(std::vector<Ratio> masses, std::vector<Ratio> distances);
  MetricSample(std::vector<Ratio> masses, std::vector<Ratio> distances, Options opts);

  /// Assembles the matrix by evaluating `dist(i, j)` for i < j across
  /// `threads` workers; the result does not depend on the thread count.
  static MetricSample build(std::vector<Ratio> masses,
                            const std::function<Ratio(std::size_t, std::size_t)>& dist,
                            unsigned threads = 1, Options opts = {});

  static MetricSample uniform(std::size_t n,
                              const std::function<Ratio(std::size_t, std::size_t)>& dist,
                              unsigned threads = 1, Options opts = {});

  [[nodiscard]] std::size_t size() const { return masses_.size(); }
  [[nodiscard]] const Ratio& mass(std::size_t i) const { return masses_[i]; }
  [[nodiscard]] const Ratio& distance(std::size_t i, std::size_t j) const {
    return dist_[i * size() + j];
  }
  [[nodiscard]] std::span<const Ratio> masses() const { return masses_; }

  /// Sorted distinct off-diagonal distance values.
  [[nodiscard]] std::vector<Ratio> distance_levels() const;

 private:
  void validate(Options opts) const;

  std::vector<Ratio> masses_;
  std::vector<Ratio> dist_;
};

struct CoverEstimate {
  std::int64_t lower = 0;
  std::int64_t upper = 0;
  std::optional<std::int64_t> exact;
  std::vector<std::string> methods;
  Ratio epsilon_diam;
  Ratio epsilon_mass;
};

inline constexpr std::size_t kBruteForceLimit = 20;

/// Minimal number of point subsets of diameter <= eps_diam covering mass
/// >= (1 - eps_mass) of the total. Exhaustive over unions of maximal
/// cliques; refuses instances above `limit` points.
std::int64_t exact_cover_number(const MetricSample& s, const Ratio& eps_diam,
                                const Ratio& eps_mass, std::size_t limit = kBruteForceLimit);

/// Greedy cover by closed eps_diam/2 balls centred at uncovered points,
/// heaviest first, ties to the smallest id.
std::int64_t greedy_cover_upper(const MetricSample& s, const Ratio& eps_diam,
                                const Ratio& eps_mass);

/// First-fit eps-separated subset (d >= eps) scanning by id.
std::vector<std::size_t> first_fit_separated(
    std::size_t n, const std::function<bool(std::size_t, std::size_t)>& separated);

std::int64_t max_separated_lower(const MetricSample& s, const Ratio& eps);

/// Lower, upper and (when small enough) exact covering numbers. The lower
/// bound uses the first distance level strictly above eps_diam.
CoverEstimate estimate_cover(const MetricSample& s, const Ratio& eps_diam,
                             const Ratio& eps_mass, std::size_t limit = kBruteForceLimit);

void write_cover_csv_header(std::ostream& os);
void write_cover_csv_row(std::ostream& os, std::int64_t n, const CoverEstimate& e);

enum class Scale { kSlow, kExp, kAlpha };
std::string to_string(Scale s);

struct GrowthFit {
  Scale scale = Scale::kSlow;
  std::vector<std::pair<double, double>> samples;  // (n, value)
  std::vector<double> x, y;                        // transformed
  std::size_t window_begin = 0;                    // window is [begin, size)
  double exponent = 0;   // slope for kSlow/kExp; max pointwise ratio for kAlpha
  double slope = 0;      // least-squares slope over the window
  double residual = 0;   // RMS residual of the window fit
  double limsup = 0;     // max over suffix windows (pointwise max for kAlpha)
  std::size_t limsup_begin = 0;
};

/// Least-squares growth exponent over the last `window` samples (0 = all).
/// kSlow fits log log value against log n; kExp fits log2 value against n.
GrowthFit growth_fit(std::vector<std::pair<double, double>> samples, Scale scale,
                     std::size_t window = 0);

/// log|R_n| / log|Q_n| per scale: max over the window plus the regression
/// slope of log|R_n| on log|Q_n| (left at 0 for a single sample).
GrowthFit alpha_fit(const std::vector<std::pair<std::int64_t, std::int64_t>>& counts,
                    int k = 2, std::size_t window = 0);

void write_fit_csv(std::ostream& os, const GrowthFit& fit);

}  // namespace slowent::covernum
