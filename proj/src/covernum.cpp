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

#include "slowent/covernum.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>

#include "slowent/parallel.hpp"

namespace slowent::covernum {

// ---------------------------------------------------------------------------
// MetricSample

MetricSample::MetricSample(std::vector<Ratio> masses, std::vector<Ratio> distances)
    : MetricSample(std::move(masses), std::move(distances), Options{}) {}

MetricSample::MetricSample(std::vector<Ratio> masses, std::vector<Ratio> distances,
                           Options opts)
    : masses_(std::move(masses)), dist_(std::move(distances)) {
  validate(opts);
}

MetricSample MetricSample::build(std::vector<Ratio> masses,
                                 const std::function<Ratio(std::size_t, std::size_t)>& dist,
                                 unsigned threads, Options opts) {
  const std::size_t n = masses.size();
  std::vector<Ratio> d(n * n);
  parallel_for(n, threads, [&](std::size_t i) {
    for (std::size_t j = i + 1; j < n; ++j) d[i * n + j] = dist(i, j);
  });
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) d[i * n + j] = d[j * n + i];
  }
  return MetricSample(std::move(masses), std::move(d), opts);
}

MetricSample MetricSample::uniform(std::size_t n,
                                   const std::function<Ratio(std::size_t, std::size_t)>& dist,
                                   unsigned threads, Options opts) {
  return build(std::vector<Ratio>(n, Ratio{1}), dist, threads, opts);
}

void MetricSample::validate(Options opts) const {
  const std::size_t n = masses_.size();
  if (dist_.size() != n * n) throw UsageError("MetricSample: matrix size mismatch");
  for (const Ratio& m : masses_) {
    if (m < Ratio{0}) throw UsageError("MetricSample: negative mass");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (distance(i, i) != Ratio{0}) throw UsageError("MetricSample: non-zero diagonal");
    for (std::size_t j = 0; j < n; ++j) {
      const Ratio& d = distance(i, j);
      if (d != distance(j, i)) throw UsageError("MetricSample: matrix not symmetric");
      if (d < Ratio{0}) throw UsageError("MetricSample: negative distance");
      if (opts.require_unit_range && Ratio{1} < d) {
        throw UsageError("MetricSample: distance above 1");
      }
    }
  }
  if (opts.check_triangle) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k)
          if (distance(i, j) + distance(j, k) < distance(i, k)) {
            throw UsageError("MetricSample: triangle inequality violated");
          }
  }
}

std::vector<Ratio> MetricSample::distance_levels() const {
  std::vector<Ratio> out;
  for (std::size_t i = 0; i < size(); ++i)
    for (std::size_t j = i + 1; j < size(); ++j) out.push_back(distance(i, j));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// Mass bookkeeping on a common denominator

namespace {

using Wide = __int128;

struct Weights {
  std::vector<Wide> w;
  Wide total = 0;
  Wide need = 0;  // covered weight must reach this

  Weights(std::span<const Ratio> masses, const Ratio& eps_mass) {
    if (eps_mass < Ratio{0}) throw UsageError("epsilon_mass must be non-negative");
    constexpr Wide kCap = Wide{1} << 100;
    Wide den = 1;
    for (const Ratio& m : masses) {
      const Wide g = std::gcd(static_cast<std::int64_t>(den % m.den()), m.den());
      den = den / (g == 0 ? 1 : g) * m.den();
      if (den > kCap) throw DiagnosticError("mass denominators too large");
    }
    w.reserve(masses.size());
    for (const Ratio& m : masses) {
      w.push_back(static_cast<Wide>(m.num()) * (den / m.den()));
      total += w.back();
      if (total > kCap) throw DiagnosticError("total mass too large");
    }
    // covered >= (1 - p/q) total  <=>  covered * q >= (q - p) * total
    const Wide p = eps_mass.num(), q = eps_mass.den();
    if (p >= q) {
      need = 0;
    } else {
      const Wide lhs = (q - p) * total;
      need = lhs / q + (lhs % q != 0);
    }
  }
};

void bron_kerbosch(std::uint64_t r, std::uint64_t p, std::uint64_t x,
                   const std::vector<std::uint64_t>& adj, std::vector<std::uint64_t>& out) {
  if (p == 0 && x == 0) {
    out.push_back(r);
    return;
  }
  const std::uint64_t px = p | x;
  const int pivot = std::countr_zero(px);
  std::uint64_t candidates = p & ~adj[pivot];
  while (candidates != 0) {
    const int v = std::countr_zero(candidates);
    const std::uint64_t bit = std::uint64_t{1} << v;
    bron_kerbosch(r | bit, p & adj[v], x & adj[v], adj, out);
    p &= ~bit;
    x |= bit;
    candidates &= ~bit;
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Covering and separation numbers

std::int64_t exact_cover_number(const MetricSample& s, const Ratio& eps_diam,
                                const Ratio& eps_mass, std::size_t limit) {
  const std::size_t n = s.size();
  constexpr std::size_t kHardLimit = 26;
  if (n > std::min(limit, kHardLimit)) {
    throw DiagnosticError("exact_cover_number: " + std::to_string(n) +
                          " points exceeds the brute-force limit of " +
                          std::to_string(std::min(limit, kHardLimit)) +
                          "; use greedy_cover_upper / max_separated_lower bounds");
  }
  const Weights wt(s.masses(), eps_mass);
  if (wt.need <= 0) return 0;

  // close-graph adjacency without self loops
  std::vector<std::uint64_t> adj(n, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j && s.distance(i, j) <= eps_diam) adj[i] |= std::uint64_t{1} << j;
  std::vector<std::uint64_t> cliques;
  const std::uint64_t all = n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
  bron_kerbosch(0, all, 0, adj, cliques);
  std::sort(cliques.begin(), cliques.end());

  auto weight = [&](std::uint64_t mask) {
    Wide sum = 0;
    while (mask != 0) {
      sum += wt.w[static_cast<std::size_t>(std::countr_zero(mask))];
      mask &= mask - 1;
    }
    return sum;
  };

  std::vector<std::uint8_t> seen(std::size_t{1} << n, 0);
  std::vector<std::uint64_t> frontier{0};
  seen[0] = 1;
  for (std::int64_t count = 1; !frontier.empty(); ++count) {
    std::vector<std::uint64_t> next;
    for (std::uint64_t mask : frontier) {
      for (std::uint64_t c : cliques) {
        const std::uint64_t m = mask | c;
        if (seen[m]) continue;
        seen[m] = 1;
        if (weight(m) >= wt.need) return count;
        next.push_back(m);
      }
    }
    frontier = std::move(next);
  }
  throw DiagnosticError("exact_cover_number: required mass unreachable");
}

std::int64_t greedy_cover_upper(const MetricSample& s, const Ratio& eps_diam,
                                const Ratio& eps_mass) {
  const std::size_t n = s.size();
  const Weights wt(s.masses(), eps_mass);
  const Ratio radius = eps_diam / Ratio{2};
  std::vector<std::vector<std::size_t>> ball(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (s.distance(i, j) <= radius) ball[i].push_back(j);

  std::vector<char> covered(n, 0);
  Wide got = 0;
  std::int64_t sets = 0;
  while (got < wt.need) {
    std::size_t best = n;
    Wide best_gain = -1;
    for (std::size_t i = 0; i < n; ++i) {
      if (covered[i]) continue;
      Wide gain = 0;
      for (std::size_t j : ball[i])
        if (!covered[j]) gain += wt.w[j];
      if (gain > best_gain) {
        best_gain = gain;
        best = i;
      }
    }
    if (best == n) throw DiagnosticError("greedy_cover_upper: required mass unreachable");
    for (std::size_t j : ball[best]) {
      if (!covered[j]) {
        covered[j] = 1;
        got += wt.w[j];
      }
    }
    ++sets;
  }
  return sets;
}

std::vector<std::size_t> first_fit_separated(
    std::size_t n, const std::function<bool(std::size_t, std::size_t)>& separated) {
  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < n; ++i) {
    bool ok = true;
    for (std::size_t k : kept) {
      if (!separated(k, i)) {
        ok = false;
        break;
      }
    }
    if (ok) kept.push_back(i);
  }
  return kept;
}

std::int64_t max_separated_lower(const MetricSample& s, const Ratio& eps) {
  return static_cast<std::int64_t>(
      first_fit_separated(s.size(), [&](std::size_t i, std::size_t j) {
        return s.distance(i, j) >= eps;
      }).size());
}

CoverEstimate estimate_cover(const MetricSample& s, const Ratio& eps_diam,
                             const Ratio& eps_mass, std::size_t limit) {
  CoverEstimate e;
  e.epsilon_diam = eps_diam;
  e.epsilon_mass = eps_mass;
  const Weights wt(s.masses(), eps_mass);

  // Each set of diameter <= eps_diam holds at most one point of a set that is
  // separated at any level above eps_diam; uncovered separated points may
  // carry at most total - need of the weight.
  const std::vector<Ratio> levels = s.distance_levels();
  auto above = std::upper_bound(levels.begin(), levels.end(), eps_diam);
  std::vector<std::size_t> sep;
  if (above == levels.end()) {
    if (s.size() > 0) sep.push_back(0);
  } else {
    const Ratio eps_plus = *above;
    sep = first_fit_separated(s.size(), [&](std::size_t i, std::size_t j) {
      return s.distance(i, j) >= eps_plus;
    });
    e.methods.push_back("separated@" + eps_plus.str());
  }
  if (above == levels.end()) {
    e.lower = wt.need > 0 ? 1 : 0;
  } else {
    std::vector<Wide> sw;
    Wide sep_total = 0;
    for (std::size_t i : sep) {
      sw.push_back(wt.w[i]);
      sep_total += wt.w[i];
    }
    std::sort(sw.rbegin(), sw.rend());
    const Wide slack = wt.total - wt.need;
    Wide acc = 0;
    std::int64_t k = 0;
    while (acc < sep_total - slack && k < static_cast<std::int64_t>(sw.size())) {
      acc += sw[static_cast<std::size_t>(k++)];
    }
    e.lower = std::max<std::int64_t>(k, wt.need > 0 ? 1 : 0);
  }
  e.upper = greedy_cover_upper(s, eps_diam, eps_mass);
  e.methods.push_back("greedy");
  if (s.size() <= limit) {
    e.exact = exact_cover_number(s, eps_diam, eps_mass, limit);
    e.methods.push_back("exact");
  }
  return e;
}

void write_cover_csv_header(std::ostream& os) {
  os << "n,epsilon_diam,epsilon_mass,lower,upper,exact\n";
}

void write_cover_csv_row(std::ostream& os, std::int64_t n, const CoverEstimate& e) {
  os << n << ',' << e.epsilon_diam << ',' << e.epsilon_mass << ',' << e.lower << ','
     << e.upper << ',';
  if (e.exact) os << *e.exact;
  os << '\n';
}

// ---------------------------------------------------------------------------
// Growth fitting

std::string to_string(Scale s) {
  switch (s) {
    case Scale::kSlow: return "slow";
    case Scale::kExp: return "exp";
    case Scale::kAlpha: return "alpha";
  }
  return "?";
}

namespace {

struct LineFit {
  double slope = 0;
  double residual = 0;
};

LineFit least_squares(std::span<const double> x, std::span<const double> y) {
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  LineFit f;
  f.slope = sxx > 0 ? sxy / sxx : 0.0;
  double ss = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (my + f.slope * (x[i] - mx));
    ss += r * r;
  }
  f.residual = std::sqrt(ss / n);
  return f;
}

std::size_t window_start(std::size_t size, std::size_t window, std::size_t min = 2) {
  if (window == 0 || window > size) window = size;
  if (window < min) throw UsageError("growth fit: need at least 2 samples in the window");
  return size - window;
}

}  // namespace

GrowthFit growth_fit(std::vector<std::pair<double, double>> samples, Scale scale,
                     std::size_t window) {
  if (scale == Scale::kAlpha) throw UsageError("growth_fit: use alpha_fit for kAlpha");
  for (std::size_t i = 1; i < samples.size(); ++i) {
    if (!(samples[i - 1].first < samples[i].first)) {
      throw UsageError("growth_fit: scales n must be strictly increasing");
    }
  }
  GrowthFit f;
  f.scale = scale;
  f.window_begin = window_start(samples.size(), window);
  for (const auto& [n, v] : samples) {
    if (scale == Scale::kSlow) {
      if (!(n > 0) || !(v > 1)) throw UsageError("growth_fit: slow scale needs n > 0, value > 1");
      f.x.push_back(std::log(n));
      f.y.push_back(std::log(std::log(v)));
    } else {
      if (!(v > 0)) throw UsageError("growth_fit: exp scale needs value > 0");
      f.x.push_back(n);
      f.y.push_back(std::log2(v));
    }
  }
  f.samples = std::move(samples);
  const std::span<const double> xs(f.x), ys(f.y);
  const LineFit main = least_squares(xs.subspan(f.window_begin), ys.subspan(f.window_begin));
  f.exponent = f.slope = main.slope;
  f.residual = main.residual;
  f.limsup = -std::numeric_limits<double>::infinity();
  for (std::size_t b = 0; b + 2 <= f.x.size(); ++b) {
    const double s = least_squares(xs.subspan(b), ys.subspan(b)).slope;
    if (s > f.limsup) {
      f.limsup = s;
      f.limsup_begin = b;
    }
  }
  return f;
}

GrowthFit alpha_fit(const std::vector<std::pair<std::int64_t, std::int64_t>>& counts, int k,
                    std::size_t window) {
  GrowthFit f;
  f.scale = Scale::kAlpha;
  f.window_begin = window_start(counts.size(), window, 1);
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const auto [n, r] = counts[i];
    if (i > 0 && counts[i - 1].first >= n) {
      throw UsageError("alpha_fit: scales n must be strictly increasing");
    }
    if (n < 1) throw UsageError("alpha_fit: scales must be >= 1");
    if (r < 1) throw UsageError("alpha_fit: recurrence counts must be >= 1");
    f.samples.emplace_back(static_cast<double>(n), static_cast<double>(r));
    f.x.push_back(static_cast<double>(k) * std::log(2.0 * static_cast<double>(n) + 1.0));
    f.y.push_back(std::log(static_cast<double>(r)));
  }
  const std::span<const double> xs(f.x), ys(f.y);
  if (xs.size() - f.window_begin >= 2) {
    const LineFit reg = least_squares(xs.subspan(f.window_begin), ys.subspan(f.window_begin));
    f.slope = reg.slope;
    f.residual = reg.residual;
  }
  f.exponent = -std::numeric_limits<double>::infinity();
  f.limsup = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < f.x.size(); ++i) {
    const double pointwise = f.y[i] / f.x[i];
    if (i >= f.window_begin) f.exponent = std::max(f.exponent, pointwise);
    if (pointwise > f.limsup) {
      f.limsup = pointwise;
      f.limsup_begin = i;
    }
  }
  return f;
}

void write_fit_csv(std::ostream& os, const GrowthFit& fit) {
  os << "n,value,transformed_x,transformed_y,in_window\n";
  const auto old = os.precision(17);
  for (std::size_t i = 0; i < fit.samples.size(); ++i) {
    os << fit.samples[i].first << ',' << fit.samples[i].second << ',' << fit.x[i] << ','
       << fit.y[i] << ',' << (i >= fit.window_begin ? 1 : 0) << '\n';
  }
  os.precision(old);
}

}  // namespace slowent::covernum
