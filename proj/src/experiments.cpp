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

#include "slowent/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "slowent/arrangement.hpp"
#include "slowent/bowen.hpp"
#include "slowent/covernum.hpp"
#include "slowent/parallel.hpp"
#include "slowent/partitions.hpp"
#include "slowent/recurrence.hpp"
#include "slowent/rng.hpp"
#include "slowent/symbolic.hpp"

namespace slowent::expcli {

using cutstack::Construction;
using cutstack::PointHandle;
using cutstack::Schedule;
using lattice::Pattern;
using lattice::Site;

namespace {

constexpr std::size_t kExhaustiveLimit = 10000;

std::string ratio_str(const Ratio& r) { return r.str(); }

Ratio ratio_field(const Json& j, const std::string& where) {
  try {
    if (j.is_number_integer()) return Ratio{j.get<std::int64_t>()};
    if (j.is_string()) return Ratio::parse(j.get<std::string>());
  } catch (const UsageError& e) {
    throw UsageError(where + ": " + e.what());
  }
  throw UsageError(where + ": expected a rational like \"1/3\"");
}

BigInt big_field(const Json& j, const std::string& where) {
  try {
    if (j.is_number_integer()) return BigInt(j.get<std::int64_t>());
    if (j.is_string()) return BigInt(j.get<std::string>());
  } catch (const std::exception&) {
  }
  throw UsageError(where + ": expected an integer");
}

template <class T>
T int_field(const Json& j, const std::string& where) {
  if (!j.is_number_integer()) throw UsageError(where + ": expected an integer");
  return j.get<T>();
}

std::uint64_t point_seed(std::uint64_t seed, std::uint64_t i) {
  return CounterRng(seed, stream::kSample, i).bits(0);
}

std::vector<PointHandle> sample_points(const std::shared_ptr<const Construction>& c, int stage,
                                       std::int64_t count, std::uint64_t seed) {
  std::vector<PointHandle> out;
  out.reserve(static_cast<std::size_t>(count));
  for (std::int64_t i = 0; i < count; ++i) {
    out.push_back(cutstack::sample_point(c, stage, point_seed(seed, static_cast<std::uint64_t>(i))));
  }
  return out;
}

// Scales 2r(1), 2r(2), ... with dyadic intermediates, kept while every point
// can evaluate them.
std::vector<std::int64_t> default_scales(const Construction& c,
                                         const std::vector<PointHandle>& points,
                                         std::int64_t cap, std::vector<std::string>& notes) {
  std::set<std::int64_t> raw;
  for (int i = 1; i <= c.depth(); ++i) {
    const std::int64_t top = 2 * c.r(i);
    if (top > cap) break;
    raw.insert(top);
    for (std::int64_t n = 1; n < top; n *= 2) raw.insert(n);
  }
  std::vector<std::int64_t> out;
  for (std::int64_t n : raw) {
    bool ok = true;
    for (const auto& p : points) {
      try {
        static_cast<void>(p.stage_for_window(n));
      } catch (const DiagnosticError&) {
        ok = false;
        break;
      }
    }
    if (!ok) {
      notes.push_back("scales capped at the maximal feasible n = " +
                      (out.empty() ? std::string("none") : std::to_string(out.back())));
      break;
    }
    out.push_back(n);
  }
  return out;
}

Verdict asserted(std::string scope, std::string name, std::string invariant, bool pass,
                 std::string detail) {
  return {std::move(scope), std::move(name), std::move(invariant),
          pass ? Status::kPass : Status::kFail, std::move(detail)};
}

Verdict reported(std::string scope, std::string name, std::string invariant, std::string detail) {
  return {std::move(scope), std::move(name), std::move(invariant), Status::kReported,
          std::move(detail)};
}

std::string fmt(double v, int digits = 6) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(digits);
  os << v;
  return os.str();
}

Json big_json(const BigInt& v) { return v.str(); }

Pattern random_pattern(const CounterRng& rng, std::uint64_t& counter, std::int64_t radius,
                       lattice::Symbol alphabet, std::uint64_t density_percent) {
  std::vector<lattice::Cell> cells;
  for (std::int64_t x = -radius; x <= radius; ++x) {
    for (std::int64_t y = -radius; y <= radius; ++y) {
      if (rng.below(100, counter) >= density_percent) continue;
      const auto s = static_cast<lattice::Symbol>(1 + rng.below(alphabet - 1, counter));
      cells.push_back({{x, y}, s});
    }
  }
  return Pattern::from_sorted(radius, lattice::kZero, std::move(cells));
}

// ---------------------------------------------------------------- kinds

void metric_props(const ExperimentConfig& cfg, Report& rep) {
  const std::int64_t radius = cfg.scales.empty() ? 2 : cfg.scales.front();
  const partitions::CoFinitePartition fine({0, 1, 2}, 0);
  const partitions::CoFinitePartition coarse({0, 1}, 0);
  auto coarsen = [](lattice::Symbol s) { return s == 2 ? lattice::kOne : s; };
  const CounterRng rng(cfg.seed, stream::kTest, 1);
  std::uint64_t counter = 0;
  std::int64_t tri = 0, sym = 0, ident = 0, refine = 0;
  for (std::int64_t t = 0; t < cfg.sample_size; ++t) {
    const Pattern x = random_pattern(rng, counter, radius, 3, 30);
    const Pattern y = random_pattern(rng, counter, radius, 3, 30);
    const Pattern z = random_pattern(rng, counter, radius, 3, 30);
    const Ratio xy = partitions::name_metric(x, y, fine);
    const Ratio yz = partitions::name_metric(y, z, fine);
    const Ratio xz = partitions::name_metric(x, z, fine);
    if (xz > xy + yz) ++tri;
    if (xy != partitions::name_metric(y, x, fine)) ++sym;
    if (partitions::name_metric(x, x, fine) != Ratio{}) ++ident;
    const Ratio cxy = partitions::name_metric(x.relabel(coarsen, 0), y.relabel(coarsen, 0), coarse);
    if (cxy > xy) ++refine;
  }
  const std::string scope = "global";
  const std::string n = std::to_string(cfg.sample_size) + " random triples on Q_" +
                        std::to_string(radius);
  rep.verdicts.push_back(asserted(scope, "triangle", "d(x,z) <= d(x,y) + d(y,z)", tri == 0,
                                  std::to_string(tri) + " violations in " + n));
  rep.verdicts.push_back(asserted(scope, "symmetry", "d(x,y) = d(y,x)", sym == 0,
                                  std::to_string(sym) + " violations in " + n));
  rep.verdicts.push_back(asserted(scope, "identity", "d(x,x) = 0", ident == 0,
                                  std::to_string(ident) + " violations in " + n));
  rep.verdicts.push_back(asserted(scope, "refinement", "d_P <= d_R when R refines P",
                                  refine == 0, std::to_string(refine) + " violations in " + n));
}

void cover_scan(const ExperimentConfig& cfg, unsigned threads, Report& rep) {
  const auto c = std::make_shared<const Construction>(cfg.schedule.resolve());
  const auto points = sample_points(c, cfg.stage, cfg.sample_size, cfg.seed);
  const auto scales =
      cfg.scales.empty() ? default_scales(*c, points, 64, rep.notes) : cfg.scales;
  const cutstack::ConstructionNames names(points);
  Table t{"cover", {"n", "epsilon_diam", "epsilon_mass", "lower", "upper", "exact"}, {}};
  bool sandwich = true;
  std::vector<std::pair<double, double>> growth;
  for (std::int64_t n : scales) {
    std::vector<Pattern> pats(points.size());
    parallel_for(points.size(), threads, [&](std::size_t i) { pats[i] = names.name(i, n); });
    const auto sample = covernum::MetricSample::uniform(
        points.size(),
        [&](std::size_t i, std::size_t j) {
          return partitions::name_metric(pats[i], pats[j], names.partition());
        },
        threads);
    for (std::size_t e = 0; e < cfg.eps.size(); ++e) {
      const auto est = covernum::estimate_cover(sample, cfg.eps[e].diam, cfg.eps[e].mass);
      sandwich = sandwich && est.lower <= est.upper &&
                 (!est.exact || (est.lower <= *est.exact && *est.exact <= est.upper));
      t.rows.push_back({n, ratio_str(cfg.eps[e].diam), ratio_str(cfg.eps[e].mass), est.lower,
                        est.upper, est.exact ? Json(*est.exact) : Json(nullptr)});
      if (e == 0) growth.emplace_back(static_cast<double>(n), static_cast<double>(est.upper));
    }
  }
  rep.tables.push_back(std::move(t));
  rep.verdicts.push_back(asserted(cfg.schedule.label(), "cover-sandwich",
                                  "separated lower <= exact <= greedy upper", sandwich,
                                  std::to_string(scales.size()) + " scales"));
  std::vector<std::pair<double, double>> usable;
  for (const auto& [n, v] : growth) {
    if (n >= 2 && v >= 3) usable.emplace_back(n, v);
  }
  if (usable.size() >= 2) {
    const auto fit = covernum::growth_fit(usable, covernum::Scale::kSlow);
    rep.verdicts.push_back(reported(cfg.schedule.label(), "rho-slow-fit",
                                    "slope of log log N against log n",
                                    "exponent " + fmt(fit.exponent) + ", limsup " +
                                        fmt(fit.limsup) + " over " +
                                        std::to_string(usable.size()) + " scales"));
  } else {
    rep.notes.push_back("too few scales with N >= 3 for a slow-scale fit");
  }
}

struct RecurrenceOutcome {
  recurrence::DecodeTally tally;
  BigInt gamma_star;
  bool exhaustive = true;
};

RecurrenceOutcome stage_two_recurrence(const std::shared_ptr<const Construction>& c,
                                       const ExperimentConfig& cfg, std::int64_t n,
                                       unsigned threads) {
  RecurrenceOutcome out;
  out.gamma_star = cutstack::gamma_star_size(2, c->schedule());
  std::vector<PointHandle> points;
  if (out.gamma_star <= kExhaustiveLimit) {
    points = recurrence::all_positions(c, 2);
  } else {
    out.exhaustive = false;
    points = sample_points(c, 2, cfg.sample_size, cfg.seed);
  }
  out.tally = recurrence::decode_positions(points, 2, n, threads);
  return out;
}

void recurrence_kind(const ExperimentConfig& cfg, unsigned threads, Report& rep) {
  const auto c = std::make_shared<const Construction>(cfg.schedule.resolve());
  const std::string scope = cfg.schedule.label();
  const std::vector<std::int64_t> scales =
      cfg.scales.empty() ? std::vector<std::int64_t>{2 * c->r(2)} : cfg.scales;
  Table t{"recurrence_positions", {"n", "positions", "exhaustive", "distinct", "decoded_exact"}, {}};
  for (std::int64_t n : scales) {
    const auto o = stage_two_recurrence(c, cfg, n, threads);
    t.rows.push_back({n, o.tally.positions, o.exhaustive, o.tally.distinct, o.tally.exact});
    const std::string d = "n = " + std::to_string(n) + ": " + std::to_string(o.tally.distinct) +
                          " distinct of " + std::to_string(o.tally.positions) +
                          (o.exhaustive ? " (all positions)" : " (sampled)");
    rep.verdicts.push_back(asserted(scope, "distinct-patterns",
                                    "R_n injective on stage-2 positions",
                                    o.tally.distinct == static_cast<std::size_t>(o.tally.positions), d));
    const std::string dd = std::to_string(o.tally.exact) + "/" +
                           std::to_string(o.tally.positions) + " at n = " + std::to_string(n);
    if (cfg.schedule.c >= 5) {
      rep.verdicts.push_back(asserted(scope, "centroid-decoder",
                                      "decode(R_n) recovers the position", o.tally.exact == o.tally.positions, dd));
    } else {
      rep.verdicts.push_back(reported(scope, "centroid-decoder",
                                      "decode(R_n) recovers the position", dd));
    }
  }
  rep.tables.push_back(std::move(t));

  // alpha for the centred stage-3 point
  const auto centre = cutstack::point_at(c, cutstack::Address{{Site{}, Site{}}});
  std::vector<std::pair<std::int64_t, std::int64_t>> counts;
  std::vector<recurrence::RecurrenceRow> rows;
  for (int i = 1; i <= 2; ++i) {
    const std::int64_t n = 2 * c->r(i);
    const std::int64_t size = cutstack::core_count(centre, n);
    counts.emplace_back(n, size);
    rows.push_back({n, 0, size, recurrence::alpha_pointwise(size, n)});
  }
  Table a{"alpha", {"n", "point_id", "R_size", "alpha_pointwise"}, {}};
  for (const auto& r : rows) a.rows.push_back({r.n, r.point_id, r.r_size, r.alpha_pointwise});
  rep.tables.push_back(std::move(a));
  const auto fit = covernum::alpha_fit(counts);
  rep.verdicts.push_back(reported(scope, "alpha", "max pointwise log|R_n|/log|Q_n| over {2r(1), 2r(2)}",
                                  "alpha " + fmt(fit.exponent) + " vs 1 - theta = " +
                                      fmt(1 - cfg.schedule.theta.to_double()) +
                                      "; finite-scale surrogate of a limsup"));
}

void overlay_kind(const ExperimentConfig& cfg, Report& rep) {
  const auto c = std::make_shared<const Construction>(cfg.schedule.resolve());
  const auto points = sample_points(c, cfg.stage, cfg.sample_size, cfg.seed);
  const std::int64_t n = cfg.scales.empty() ? 27 : cfg.scales.front();
  const auto erase = symbolic::SlidingBlockCode::erasure();
  Table t{"overlay", {"point_id", "n", "core", "a_count"}, {}};
  std::int64_t bad = 0, cells = 0, a_count = 0;
  std::set<std::int64_t> cores;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto o = symbolic::overlay_name(points[i], n);
    if (symbolic::apply_code(erase, o.flatten(), n) != cutstack::name01(points[i], n)) ++bad;
    const auto a = std::count(o.bits.begin(), o.bits.end(), lattice::kA);
    cells += static_cast<std::int64_t>(o.bits.size());
    a_count += a;
    cores.insert(static_cast<std::int64_t>(o.bits.size()));
    t.rows.push_back({i, n, o.bits.size(), a});
  }
  rep.tables.push_back(std::move(t));
  const std::string scope = cfg.schedule.label();
  rep.verdicts.push_back(asserted(scope, "erasure-factor", "apply_code(erasure) o overlay = name01",
                                  bad == 0, std::to_string(bad) + " mismatches over " +
                                                std::to_string(points.size()) + " points"));
  const double sigma = std::sqrt(static_cast<double>(cells)) / 2;
  const double dev = std::abs(static_cast<double>(a_count) - static_cast<double>(cells) / 2);
  rep.verdicts.push_back(asserted(scope, "fair-bits", "a-frequency within 5 sigma of 1/2",
                                  cells == 0 || dev <= 5 * sigma,
                                  std::to_string(a_count) + " a of " + std::to_string(cells)));
  Table h{"hamming_bound", {"core", "eps", "lower_bound", "binary_entropy"}, {}};
  for (std::int64_t s : cores) {
    for (const auto& e : cfg.eps) {
      if (s < 1 || e.diam >= Ratio{1, 2}) continue;
      h.rows.push_back({s, ratio_str(e.diam), big_json(symbolic::hamming_cover_lower(s, e.diam)),
                        symbolic::binary_entropy(e.diam.to_double())});
    }
  }
  rep.tables.push_back(std::move(h));
}

struct RatioOutcome {
  double median = 0;
  double ledger = 0;
  std::int64_t n = 0;
};

RatioOutcome ratio_et(const std::shared_ptr<const Construction>& c, const ExperimentConfig& cfg,
                      std::int64_t n, std::int64_t count, Table* table) {
  const auto ledger = cutstack::mass_ledger(c->schedule(), 2);
  const BigRational expect = ledger.mass_a[1] / ledger.new_mass[1];
  const auto points = sample_points(c, 3, count, cfg.seed);
  std::vector<double> ratios;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const std::int64_t a = cutstack::created_count(points[i], 1, n);
    const std::int64_t b = cutstack::created_count(points[i], 2, n) - a;
    const double r = b == 0 ? 0.0 : static_cast<double>(a) / static_cast<double>(b);
    ratios.push_back(r);
    if (table) table->rows.push_back({i, n, a, b, r});
  }
  std::sort(ratios.begin(), ratios.end());
  RatioOutcome out;
  out.n = n;
  const std::size_t k = ratios.size();
  out.median = k == 0 ? 0 : (k % 2 ? ratios[k / 2] : (ratios[k / 2 - 1] + ratios[k / 2]) / 2);
  out.ledger = expect.convert_to<double>();
  return out;
}

Verdict ratio_verdict(const std::string& scope, const RatioOutcome& o) {
  const bool pass = o.ledger > 0 && std::abs(o.median / o.ledger - 1) <= 0.15;
  return asserted(scope, "ratio-ergodic", "median visits(A)/visits(stage 2) within 15% of mass ratio",
                  pass, "median " + fmt(o.median) + " vs ledger " + fmt(o.ledger) + " at n = " +
                            std::to_string(o.n));
}

void ratio_kind(const ExperimentConfig& cfg, Report& rep) {
  const auto c = std::make_shared<const Construction>(cfg.schedule.resolve());
  const std::int64_t n = cfg.scales.empty() ? 5000 : cfg.scales.front();
  Table t{"ratio_et", {"point_id", "n", "visits_A", "visits_stage2", "ratio"}, {}};
  const auto o = ratio_et(c, cfg, n, cfg.sample_size, &t);
  rep.tables.push_back(std::move(t));
  rep.verdicts.push_back(ratio_verdict(cfg.schedule.label(), o));
}

std::vector<covernum::TorusPoint> torus_sample(std::uint64_t seed, std::int64_t count) {
  const CounterRng rng(seed, stream::kTorus);
  std::vector<covernum::TorusPoint> out;
  for (std::int64_t i = 0; i < count; ++i) {
    const std::uint64_t b = rng.bits(static_cast<std::uint64_t>(i));
    out.push_back({static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)});
  }
  return out;
}

void bowen_kind(const ExperimentConfig& cfg, Report& rep, std::int64_t points,
                std::vector<std::int64_t> trans_n, std::vector<std::int64_t> cat_n) {
  const auto sample = torus_sample(cfg.seed, points);
  const std::vector<double> eps{0.1, 0.05};
  const covernum::TorusTranslations trans{{0x9e3779b9u, 0x7f4a7c15u}, {0x85ebca6bu, 0xc2b2ae35u}};
  const auto tr = covernum::bowen_sep_check(trans, covernum::TorusMetric{}, sample, trans_n, eps);
  Table t{"bowen", {"action", "n", "eps", "sep", "log_bound_proof", "log_bound_lemma", "pass"}, {}};
  bool isometry = true;
  for (const auto& cell : tr.cells) {
    const auto base = std::find_if(tr.cells.begin(), tr.cells.end(), [&](const auto& b) {
      return b.n == trans_n.front() && b.eps == cell.eps;
    });
    isometry = isometry && cell.sep == base->sep;
    t.rows.push_back({"translation", cell.n, cell.eps, cell.sep, cell.log_bound_proof,
                      cell.log_bound_lemma, cell.pass});
  }
  const covernum::TorusAutomorphisms cat({2, 1, 1, 1});
  const auto cr = covernum::bowen_sep_check(cat, covernum::TorusMetric{}, sample, cat_n, eps);
  for (const auto& cell : cr.cells) {
    t.rows.push_back({"cat-map", cell.n, cell.eps, cell.sep, cell.log_bound_proof,
                      cell.log_bound_lemma, cell.pass});
  }
  rep.tables.push_back(std::move(t));
  rep.verdicts.push_back(asserted("global", "bowen-isometry",
                                  "sep(d_n) = sep(d) for commuting translations", isometry,
                                  std::to_string(tr.cells.size()) + " cells"));
  rep.verdicts.push_back(asserted("global", "bowen-lipschitz", "sep(d_n, eps) <= C^n / eps^C",
                                  cr.all_pass() && tr.all_pass(),
                                  "C1 = " + fmt(cr.lipschitz, 1) + ", C2 = " +
                                      fmt(cr.box_constant, 1) + ", C = " +
                                      fmt(cr.lemma_constant, 1)));
}

// ---------------------------------------------------------------- verify-all

void verify_variant(const ScheduleSpec& spec, const ExperimentConfig& cfg, unsigned threads,
                    Report& rep, Table& exponents) {
  const std::string scope = spec.label();
  const Schedule sched = spec.resolve();
  const auto bad = sched.violations();
  rep.verdicts.push_back(asserted(scope, "schedule-valid", "m(i) integer and m(i) > c r(i)",
                                  bad.empty(), bad.empty() ? "ok" : bad.front()));
  if (!bad.empty()) return;
  const auto c = std::make_shared<const Construction>(sched);
  const int depth = c->depth();

  // Γ sizes
  const auto level1 = c->gamma(1);
  const BigInt formula = cutstack::gamma_size(level1);
  std::int64_t brute = 0;
  for (std::int64_t x = -level1.radius; x <= level1.radius; ++x) {
    if (x % level1.spacing == 0) ++brute;
  }
  rep.verdicts.push_back(asserted(scope, "gamma-size", "(2 s/m + 1)^2 equals lattice count",
                                  formula == BigInt(brute) * brute,
                                  "|Gamma_1| = " + formula.str()));

  // decompose round trip on random addresses of the deepest stage
  {
    const CounterRng rng(cfg.seed, stream::kTest, 2);
    std::uint64_t counter = 0;
    std::int64_t fails = 0;
    for (std::int64_t t = 0; t < cfg.sample_size; ++t) {
      cutstack::Address a;
      for (int j = 1; j < depth; ++j) {
        const auto g = c->gamma(j);
        const auto span = static_cast<std::uint64_t>(2 * g.half_count() + 1);
        const std::int64_t tx = static_cast<std::int64_t>(rng.below(span, counter)) - g.half_count();
        const std::int64_t ty = static_cast<std::int64_t>(rng.below(span, counter)) - g.half_count();
        a.gammas.push_back({tx * g.spacing, ty * g.spacing});
      }
      const auto back = c->decompose(a.compose(), depth);
      if (!back || *back != a) ++fails;
    }
    rep.verdicts.push_back(asserted(scope, "decompose-roundtrip", "decompose(compose(a)) = a",
                                    fails == 0, std::to_string(fails) + " failures in " +
                                                    std::to_string(cfg.sample_size)));
  }

  // mass ledger
  {
    const int top = std::min(depth, 3);
    const auto led = cutstack::mass_ledger(sched, top);
    bool unit = true, increasing = true;
    std::string masses;
    for (int j = 0; j < top; ++j) {
      unit = unit && led.mass_a[j] == 1;
      if (j > 0) increasing = increasing && led.stage_mass[j] > led.stage_mass[j - 1];
      masses += (j ? ", " : "") + led.stage_mass[j].str();
    }
    rep.verdicts.push_back(asserted(scope, "mass-of-A", "mu(A) = 1 at every stage", unit,
                                    std::to_string(top) + " stages"));
    rep.verdicts.push_back(asserted(scope, "mass-increasing", "stage masses strictly increase",
                                    increasing, "masses " + masses));
    if (lattice::box_site_count(c->r(2)) <= 1000000) {
      const auto arr = cutstack::build_arrangement(*c, 2);
      rep.verdicts.push_back(asserted(scope, "cut-tile-mass",
                                      "explicit stage-2 arrangement matches the ledger",
                                      arr.total_mass() == led.stage_mass[1] &&
                                          arr.mass_created_by(1) == 1,
                                      "total " + arr.total_mass().str()));
    }
  }

  // recurrence at stage 2
  const std::int64_t n2 = 2 * c->r(2);
  if (depth >= 3) {
    const auto o = stage_two_recurrence(c, cfg, n2, threads);
    const std::string d = std::to_string(o.tally.distinct) + " distinct of " +
                          std::to_string(o.tally.positions) +
                          (o.exhaustive ? " positions" : " sampled positions") + " at n = " +
                          std::to_string(n2);
    rep.verdicts.push_back(asserted(scope, "distinct-patterns",
                                    "R_n injective on stage-2 positions",
                                    o.tally.distinct == static_cast<std::size_t>(o.tally.positions), d));
    const std::string dd = std::to_string(o.tally.exact) + "/" + std::to_string(o.tally.positions);
    if (spec.c >= 5) {
      rep.verdicts.push_back(asserted(scope, "centroid-decoder", "decode(R_n) recovers the position",
                                      o.tally.exact == o.tally.positions, dd));
    } else {
      rep.verdicts.push_back(reported(scope, "centroid-decoder", "decode(R_n) recovers the position", dd));
    }
  }

  // exponents
  const double theta = spec.theta.to_double();
  double alpha_hat = 1;
  if (depth >= 3) {
    const auto centre = cutstack::point_at(c, cutstack::Address{{Site{}, Site{}}});
    std::vector<std::pair<std::int64_t, std::int64_t>> counts;
    for (int i = 1; i <= 2; ++i) {
      const std::int64_t n = 2 * c->r(i);
      counts.emplace_back(n, cutstack::core_count(centre, n));
    }
    const auto fit = covernum::alpha_fit(counts);
    alpha_hat = fit.exponent;
    exponents.rows.push_back({scope, "alpha", 2, fit.exponent, 1 - theta});
    rep.verdicts.push_back(asserted(scope, "alpha-vs-theta", "alpha within 0.1 of 1 - theta",
                                    std::abs(fit.exponent - (1 - theta)) <= 0.1,
                                    fmt(fit.exponent) + " vs " + fmt(1 - theta)));
  }
  double last = 0;
  for (int i = 1; i + 1 <= depth; ++i) {
    const double e = recurrence::log2_big(cutstack::gamma_star_size(i + 1, sched)) /
                     recurrence::log2_big(sched.r(i + 1));
    exponents.rows.push_back({scope, "gamma_star", i, e, 2 * (1 - theta)});
    last = e;
  }
  rep.verdicts.push_back(asserted(scope, "gamma-star-vs-theta",
                                  "log|Gamma*_i| / log r(i+1) within 0.1 of 2(1 - theta)",
                                  std::abs(last - 2 * (1 - theta)) <= 0.1,
                                  fmt(last) + " vs " + fmt(2 * (1 - theta)) + " at the deepest level"));

  // Prop 1.5 inequality with distinct-pattern cover counts
  if (depth >= 3) {
    const auto points = sample_points(c, 3, cfg.sample_size, cfg.seed);
    std::vector<std::pair<std::int64_t, BigInt>> covers;
    for (int i = 1; i <= 2; ++i) {
      const std::int64_t n = 2 * c->r(i);
      std::vector<cutstack::NameFactors> f(points.size());
      bool feasible = true;
      try {
        parallel_for(points.size(), threads,
                     [&](std::size_t k) { f[k] = cutstack::name01_factors(points[k], n); });
      } catch (const DiagnosticError&) {
        feasible = false;
      }
      if (!feasible) continue;
      covers.emplace_back(n, BigInt(std::set<cutstack::NameFactors>(f.begin(), f.end()).size()));
    }
    const auto chk = recurrence::rho_alpha_inequality_check(covers, alpha_hat, Ratio{1, 20});
    rep.verdicts.push_back(asserted(scope, "cover-vs-recurrence",
                                    "N(A, d_{A,n}, eps) <= 2^(2 |Q_n|^(alpha+eps) log|Q_n|)",
                                    chk.all_pass(), std::to_string(chk.rows.size()) + " scales"));
  }

  // ratio ergodic theorem
  if (depth >= 3) {
    const std::int64_t n = std::min<std::int64_t>(5000, c->r(3) / 4);
    const auto o = ratio_et(c, cfg, n, cfg.sample_size, nullptr);
    rep.verdicts.push_back(ratio_verdict(scope, o));
  }

  // erasure factor
  {
    const auto points = sample_points(c, std::min(depth, 3), std::min<std::int64_t>(cfg.sample_size, 50),
                                      cfg.seed);
    const auto erase = symbolic::SlidingBlockCode::erasure();
    std::int64_t mism = 0;
    for (const auto& p : points) {
      const auto o = symbolic::overlay_name(p, 27);
      if (symbolic::apply_code(erase, o.flatten(), 27) != cutstack::name01(p, 27)) ++mism;
    }
    rep.verdicts.push_back(asserted(scope, "erasure-factor", "apply_code(erasure) o overlay = name01",
                                    mism == 0, std::to_string(mism) + " mismatches"));
  }
}

ScheduleSpec broken_spec() {
  ScheduleSpec s;
  s.theta = Ratio{1, 3};
  s.c = 2;
  // m(i) = 2 r(i): r = 1, 1 + 8, 9 + 18^3
  s.radii = std::vector<BigInt>{1, 9, 9 + 18 * 18 * 18};
  return s;
}

}  // namespace

// ---------------------------------------------------------------- config

cutstack::Schedule ScheduleSpec::resolve() const {
  if (radii) return Schedule::from_radii(*radii, theta, c);
  if (!file.empty()) {
    std::ifstream in(file);
    if (!in) throw UsageError("schedule file '" + file + "' not readable");
    return Schedule::read(in);
  }
  return Schedule::build(stages, theta, c, r1);
}

std::string ScheduleSpec::label() const {
  std::string out = "theta=" + theta.str() + ",c=" + std::to_string(c);
  if (radii) {
    out += ",r=(";
    for (std::size_t i = 0; i < radii->size(); ++i) out += (i ? "," : "") + (*radii)[i].str();
    out += ")";
  } else if (!file.empty()) {
    out += ",file=" + std::filesystem::path(file).filename().string();
  }
  return out;
}

Json ScheduleSpec::to_json() const {
  Json j;
  if (radii) {
    Json r = Json::array();
    for (const auto& v : *radii) r.push_back(v.str());
    j["radii"] = r;
  } else if (!file.empty()) {
    j["file"] = file;
  } else {
    j["stages"] = stages;
    j["r1"] = r1.str();
  }
  j["theta"] = theta.str();
  j["c"] = c;
  return j;
}

ScheduleSpec ScheduleSpec::from_json(const Json& j, const std::string& where,
                                     const std::filesystem::path& base_dir) {
  if (!j.is_object()) throw UsageError(where + ": expected an object");
  ScheduleSpec s;
  for (const auto& [key, v] : j.items()) {
    const std::string w = where + "." + key;
    if (key == "radii") {
      if (!v.is_array() || v.empty()) throw UsageError(w + ": expected a non-empty array");
      std::vector<BigInt> r;
      for (std::size_t i = 0; i < v.size(); ++i) r.push_back(big_field(v[i], w + "[" + std::to_string(i) + "]"));
      s.radii = std::move(r);
    } else if (key == "file") {
      if (!v.is_string()) throw UsageError(w + ": expected a path");
      std::filesystem::path p = v.get<std::string>();
      if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
      s.file = p.string();
    } else if (key == "stages") {
      s.stages = int_field<int>(v, w);
    } else if (key == "theta") {
      s.theta = ratio_field(v, w);
    } else if (key == "c") {
      s.c = int_field<std::int64_t>(v, w);
    } else if (key == "r1") {
      s.r1 = big_field(v, w);
    } else {
      throw UsageError(w + ": unknown field");
    }
  }
  if (s.radii && !s.file.empty()) throw UsageError(where + ": give radii or file, not both");
  if (!s.file.empty()) {
    std::ifstream in(s.file);
    if (!in) throw UsageError(where + ".file: '" + s.file + "' not readable");
    const Schedule sched = Schedule::read(in);
    s.theta = sched.theta();
    s.c = sched.spacing_factor();
  }
  return s;
}

std::string to_string(Kind k) {
  switch (k) {
    case Kind::kMetricProps: return "metric-props";
    case Kind::kCoverScan: return "cover-scan";
    case Kind::kRecurrence: return "recurrence";
    case Kind::kOverlay: return "overlay";
    case Kind::kRatioEt: return "ratio-et";
    case Kind::kBowen: return "bowen";
    case Kind::kVerifyAll: return "verify-all";
  }
  return "?";
}

Kind parse_kind(const std::string& s) {
  for (Kind k : {Kind::kMetricProps, Kind::kCoverScan, Kind::kRecurrence, Kind::kOverlay,
                 Kind::kRatioEt, Kind::kBowen, Kind::kVerifyAll}) {
    if (to_string(k) == s) return k;
  }
  throw UsageError("config.kind: unknown experiment kind '" + s + "'");
}

std::string to_string(Status s) {
  switch (s) {
    case Status::kPass: return "pass";
    case Status::kFail: return "fail";
    case Status::kReported: return "reported";
  }
  return "?";
}

ExperimentConfig ExperimentConfig::from_json(const Json& j, const std::filesystem::path& base_dir) {
  if (!j.is_object()) throw UsageError("config: expected a JSON object");
  ExperimentConfig cfg;
  for (const auto& [key, v] : j.items()) {
    const std::string w = "config." + key;
    if (key == "kind") {
      if (!v.is_string()) throw UsageError(w + ": expected a string");
      cfg.kind = parse_kind(v.get<std::string>());
    } else if (key == "schedule") {
      cfg.schedule = ScheduleSpec::from_json(v, w, base_dir);
    } else if (key == "seed") {
      if (v.is_number_unsigned() || (v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
        cfg.seed = v.get<std::uint64_t>();
      } else if (v.is_string()) {
        try {
          cfg.seed = std::stoull(v.get<std::string>());
        } catch (const std::exception&) {
          throw UsageError(w + ": expected an unsigned 64-bit integer");
        }
      } else {
        throw UsageError(w + ": expected an unsigned 64-bit integer");
      }
    } else if (key == "sample_size") {
      cfg.sample_size = int_field<std::int64_t>(v, w);
      if (cfg.sample_size < 1) throw UsageError(w + ": must be >= 1");
    } else if (key == "stage") {
      cfg.stage = int_field<int>(v, w);
      if (cfg.stage < 1) throw UsageError(w + ": must be >= 1");
    } else if (key == "scales") {
      if (!v.is_array()) throw UsageError(w + ": expected an array");
      for (std::size_t i = 0; i < v.size(); ++i) {
        const auto n = int_field<std::int64_t>(v[i], w + "[" + std::to_string(i) + "]");
        if (n < 0) throw UsageError(w + ": radii must be >= 0");
        cfg.scales.push_back(n);
      }
    } else if (key == "eps") {
      if (!v.is_array()) throw UsageError(w + ": expected an array");
      for (std::size_t i = 0; i < v.size(); ++i) {
        const std::string wi = w + "[" + std::to_string(i) + "]";
        if (!v[i].is_object() || !v[i].contains("diam") || !v[i].contains("mass")) {
          throw UsageError(wi + ": expected {\"diam\": ..., \"mass\": ...}");
        }
        cfg.eps.push_back({ratio_field(v[i]["diam"], wi + ".diam"),
                           ratio_field(v[i]["mass"], wi + ".mass")});
      }
    } else if (key == "variants") {
      if (!v.is_array()) throw UsageError(w + ": expected an array");
      for (std::size_t i = 0; i < v.size(); ++i) {
        cfg.variants.push_back(ScheduleSpec::from_json(v[i], w + "[" + std::to_string(i) + "]", base_dir));
      }
    } else if (key == "include_broken") {
      if (!v.is_boolean()) throw UsageError(w + ": expected a boolean");
      cfg.include_broken = v.get<bool>();
    } else {
      throw UsageError(w + ": unknown field");
    }
  }
  if (cfg.eps.empty()) cfg.eps.push_back({});
  return cfg;
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("config '" + path.string() + "' not readable");
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw UsageError("config '" + path.string() + "': " + e.what());
  }
  return from_json(j, path.parent_path());
}

Json ExperimentConfig::to_json() const {
  Json j;
  j["kind"] = to_string(kind);
  j["schedule"] = schedule.to_json();
  j["seed"] = seed;
  j["sample_size"] = sample_size;
  j["stage"] = stage;
  j["scales"] = scales;
  Json e = Json::array();
  for (const auto& p : eps) e.push_back({{"diam", p.diam.str()}, {"mass", p.mass.str()}});
  j["eps"] = e;
  if (kind == Kind::kVerifyAll) {
    Json v = Json::array();
    for (const auto& s : variants) v.push_back(s.to_json());
    j["variants"] = v;
    j["include_broken"] = include_broken;
  }
  return j;
}

// ---------------------------------------------------------------- report

bool Report::ok() const {
  return std::none_of(verdicts.begin(), verdicts.end(),
                      [](const Verdict& v) { return v.status == Status::kFail; });
}

Json Report::to_json() const {
  Json j;
  j["config"] = config;
  j["ok"] = ok();
  Json vs = Json::array();
  for (const auto& v : verdicts) {
    vs.push_back({{"scope", v.scope},
                  {"name", v.name},
                  {"invariant", v.invariant},
                  {"status", to_string(v.status)},
                  {"detail", v.detail}});
  }
  j["verdicts"] = vs;
  Json ts = Json::object();
  for (const auto& t : tables) ts[t.name] = {{"columns", t.columns}, {"rows", t.rows}};
  j["tables"] = ts;
  j["notes"] = notes;
  return j;
}

void write_table_csv(std::ostream& os, const Table& t) {
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
  os << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) os << ',';
      if (row[i].is_string()) {
        const std::string s = row[i].get<std::string>();
        if (s.find_first_of(",\"") != std::string::npos) {
          os << '"';
          for (char ch : s) os << (ch == '"' ? std::string("\"\"") : std::string(1, ch));
          os << '"';
        } else {
          os << s;
        }
      } else if (!row[i].is_null()) {
        os << row[i].dump();
      }
    }
    os << '\n';
  }
}

void Report::write_artifacts(const std::filesystem::path& dir) const {
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "report.json") << to_json().dump(2) << '\n';
  for (const auto& t : tables) {
    std::ofstream out(dir / (t.name + ".csv"));
    write_table_csv(out, t);
  }
}

Report run_experiment(const ExperimentConfig& config, unsigned threads) {
  if (config.kind == Kind::kVerifyAll) return verify_all(config, threads);
  Report rep;
  rep.config = config.to_json();
  switch (config.kind) {
    case Kind::kMetricProps: metric_props(config, rep); break;
    case Kind::kCoverScan: cover_scan(config, threads, rep); break;
    case Kind::kRecurrence: recurrence_kind(config, threads, rep); break;
    case Kind::kOverlay: overlay_kind(config, rep); break;
    case Kind::kRatioEt: ratio_kind(config, rep); break;
    case Kind::kBowen:
      bowen_kind(config, rep, config.sample_size,
                 config.scales.empty() ? std::vector<std::int64_t>{0, 1, 2, 4, 8, 16, 32, 64}
                                       : config.scales,
                 {0, 1, 2, 4});
      break;
    case Kind::kVerifyAll: break;
  }
  return rep;
}

Report verify_all(const ExperimentConfig& config, unsigned threads) {
  Report rep;
  ExperimentConfig cfg = config;
  if (cfg.variants.empty()) {
    for (const Ratio theta : {Ratio{1, 3}, Ratio{1, 4}}) {
      for (const std::int64_t c : {2, 5}) {
        ScheduleSpec s;
        s.theta = theta;
        s.c = c;
        cfg.variants.push_back(s);
      }
    }
  }
  rep.config = cfg.to_json();
  ExperimentConfig small = cfg;
  small.sample_size = std::min<std::int64_t>(cfg.sample_size, 200);
  small.scales = {2};
  metric_props(small, rep);
  bowen_kind(cfg, rep, std::min<std::int64_t>(cfg.sample_size, 200), {0, 1, 2, 4, 8}, {0, 1, 2});
  Table exponents{"exponents", {"variant", "quantity", "index", "measured", "target"}, {}};
  for (const auto& v : cfg.variants) verify_variant(v, cfg, threads, rep, exponents);
  if (cfg.include_broken) {
    const ScheduleSpec b = broken_spec();
    const auto bad = b.resolve().violations();
    rep.verdicts.push_back(asserted(b.label(), "broken-schedule-rejected",
                                    "validation flags m(i) = 2 r(i)", !bad.empty(),
                                    bad.empty() ? "accepted" : bad.front()));
  }
  rep.tables.push_back(std::move(exponents));
  rep.notes.push_back("Asymptotic quantities are finite-stage surrogates over the computable stages.");
  return rep;
}

}  // namespace slowent::expcli
