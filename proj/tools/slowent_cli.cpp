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

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "slowent/covernum.hpp"
#include "slowent/cutstack.hpp"
#include "slowent/experiments.hpp"
#include "slowent/partitions.hpp"
#include "slowent/rng.hpp"

namespace {

using namespace slowent;
using expcli::ExperimentConfig;
using expcli::Kind;

struct Globals {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string format = "json";
  unsigned threads = 1;
};

ExperimentConfig load_config(const Globals& g, Kind kind) {
  ExperimentConfig cfg = g.config.empty() ? ExperimentConfig{} : ExperimentConfig::load(g.config);
  if (cfg.eps.empty()) cfg.eps.push_back({});
  cfg.kind = kind;
  if (g.seed) cfg.seed = *g.seed;
  return cfg;
}

int emit(const Globals& g, const expcli::Report& rep) {
  if (!g.out.empty()) rep.write_artifacts(g.out);
  if (g.format == "csv") {
    for (const auto& t : rep.tables) {
      std::cout << "# " << t.name << '\n';
      expcli::write_table_csv(std::cout, t);
    }
    for (const auto& v : rep.verdicts) {
      std::cerr << to_string(v.status) << "  " << v.scope << "  " << v.name << "  " << v.detail
                << '\n';
    }
  } else {
    std::cout << rep.to_json().dump(2) << '\n';
  }
  return rep.ok() ? 0 : 1;
}

int run_kind(const Globals& g, Kind kind) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto rep = expcli::run_experiment(load_config(g, kind), g.threads);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::cerr << "runtime " << secs << " s\n";
  return emit(g, rep);
}

std::vector<cutstack::PointHandle> sampled(const ExperimentConfig& cfg,
                                           std::shared_ptr<const cutstack::Construction> c) {
  std::vector<cutstack::PointHandle> pts;
  for (std::int64_t i = 0; i < cfg.sample_size; ++i) {
    pts.push_back(cutstack::sample_point(
        c, cfg.stage, CounterRng(cfg.seed, stream::kSample, static_cast<std::uint64_t>(i)).bits(0)));
  }
  return pts;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Slow entropy toolkit: name metrics, covers, and a rank-one Z^2 construction"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--config", g.config, "experiment config (JSON)");
  app.add_option("--seed", g.seed, "master seed (overrides the config)");
  app.add_option("--out", g.out, "artifact directory");
  app.add_option("--format", g.format, "stdout format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--threads", g.threads, "worker threads (speed only)")->check(CLI::Range(1u, 256u));

  auto* sched = app.add_subcommand("schedule", "build or check a schedule");
  sched->require_subcommand(1);
  sched->fallthrough();
  auto* build = sched->add_subcommand("build", "greedy schedule");
  int stages = 3;
  std::string theta = "1/3";
  std::int64_t c = 2;
  std::string r1 = "1";
  build->add_option("--stages", stages);
  build->add_option("--theta", theta);
  build->add_option("--c", c);
  build->add_option("--r1", r1);
  auto* check = sched->add_subcommand("check", "validate a schedule file");
  std::string schedule_file;
  check->add_option("file", schedule_file)->required()->check(CLI::ExistingFile);

  auto* sample = app.add_subcommand("sample", "sample construction points");
  auto* names = app.add_subcommand("names", "(P,n)-names of sampled points");
  auto* distmat = app.add_subcommand("distmat", "name-metric distance matrix");
  std::int64_t radius = 3;
  names->add_option("-n,--radius", radius);
  distmat->add_option("-n,--radius", radius);
  auto* cover = app.add_subcommand("cover", "covering-number scan");
  auto* recur = app.add_subcommand("recur", "recurrence sets and decoder");
  auto* fit = app.add_subcommand("fit", "growth exponent from n,value CSV");
  std::string fit_input;
  std::string fit_scale = "slow";
  std::size_t fit_window = 0;
  fit->add_option("input", fit_input)->required()->check(CLI::ExistingFile);
  fit->add_option("--scale", fit_scale)->check(CLI::IsMember({"slow", "exp", "alpha"}));
  fit->add_option("--window", fit_window);
  auto* overlay = app.add_subcommand("overlay", "Bernoulli overlay names");
  auto* ratio = app.add_subcommand("ratio-et", "ratio ergodic theorem check");
  auto* bowen = app.add_subcommand("bowen", "Bowen separation checks on the torus");
  auto* verify = app.add_subcommand("verify", "run every check across schedule variants");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*build) {
      const auto s = cutstack::Schedule::build(stages, Ratio::parse(theta), c, BigInt(r1));
      if (!g.out.empty()) {
        std::ofstream out(g.out);
        s.write(out);
      } else {
        s.write(std::cout);
      }
      return 0;
    }
    if (*check) {
      std::ifstream in(schedule_file);
      const auto s = cutstack::Schedule::parse(in);
      const auto bad = s.violations();
      for (const auto& v : bad) std::cout << "violation: " << v << '\n';
      for (int i = 1; i <= s.stages(); ++i) {
        std::cout << "stage " << i << " r " << s.r(i);
        if (i < s.stages()) {
          const auto m = s.m(i);
          std::cout << " s " << s.s(i) << " m " << (m ? m->str() : std::string("-"));
        }
        std::cout << " product_exponent " << s.product_exponent(i) << '\n';
      }
      std::cout << (bad.empty() ? "valid" : "invalid") << '\n';
      return bad.empty() ? 0 : 1;
    }
    if (*sample || *names || *distmat) {
      const auto cfg = load_config(g, Kind::kCoverScan);
      const auto con = std::make_shared<const cutstack::Construction>(cfg.schedule.resolve());
      const auto pts = sampled(cfg, con);
      if (*sample) {
        std::cout << "point_id,stage,level,gx,gy\n";
        for (std::size_t i = 0; i < pts.size(); ++i) {
          const auto a = pts[i].address(cfg.stage);
          for (std::size_t l = 0; l < a.gammas.size(); ++l) {
            std::cout << i << ',' << cfg.stage << ',' << l + 1 << ',' << a.gammas[l].x << ','
                      << a.gammas[l].y << '\n';
          }
        }
        return 0;
      }
      const cutstack::ConstructionNames provider(pts);
      if (*names) {
        for (std::size_t i = 0; i < pts.size(); ++i) {
          std::cout << "# point " << i << '\n';
          lattice::write_pattern(std::cout, provider.name(i, radius));
        }
        return 0;
      }
      std::vector<lattice::Pattern> pats;
      for (std::size_t i = 0; i < pts.size(); ++i) pats.push_back(provider.name(i, radius));
      const auto m = covernum::MetricSample::uniform(
          pts.size(),
          [&](std::size_t i, std::size_t j) {
            return partitions::name_metric(pats[i], pats[j], provider.partition());
          },
          g.threads);
      std::cout << "i,j,distance\n";
      for (std::size_t i = 0; i < m.size(); ++i) {
        for (std::size_t j = 0; j < m.size(); ++j) {
          std::cout << i << ',' << j << ',' << m.distance(i, j) << '\n';
        }
      }
      return 0;
    }
    if (*fit) {
      std::ifstream in(fit_input);
      std::string line;
      std::vector<std::pair<double, double>> samples;
      std::vector<std::pair<std::int64_t, std::int64_t>> counts;
      while (std::getline(in, line)) {
        if (line.empty() || !(std::isdigit(static_cast<unsigned char>(line[0])) || line[0] == '-')) continue;
        std::istringstream ls(line);
        std::string a, b;
        std::getline(ls, a, ',');
        std::getline(ls, b, ',');
        try {
          samples.emplace_back(std::stod(a), std::stod(b));
          if (fit_scale == "alpha") counts.emplace_back(std::stoll(a), std::stoll(b));
        } catch (const std::exception&) {
          throw UsageError("fit: bad row '" + line + "'");
        }
      }
      const auto f = fit_scale == "alpha"
                         ? covernum::alpha_fit(counts, 2, fit_window)
                         : covernum::growth_fit(samples,
                                                fit_scale == "slow" ? covernum::Scale::kSlow
                                                                    : covernum::Scale::kExp,
                                                fit_window);
      if (g.format == "csv") {
        covernum::write_fit_csv(std::cout, f);
      } else {
        expcli::Json j;
        j["scale"] = covernum::to_string(f.scale);
        j["exponent"] = f.exponent;
        j["slope"] = f.slope;
        j["residual"] = f.residual;
        j["limsup"] = f.limsup;
        j["window_begin"] = f.window_begin;
        std::cout << j.dump(2) << '\n';
      }
      return 0;
    }
    if (*cover) return run_kind(g, Kind::kCoverScan);
    if (*recur) return run_kind(g, Kind::kRecurrence);
    if (*overlay) return run_kind(g, Kind::kOverlay);
    if (*ratio) return run_kind(g, Kind::kRatioEt);
    if (*bowen) return run_kind(g, Kind::kBowen);
    if (*verify) return run_kind(g, Kind::kVerifyAll);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const DiagnosticError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
