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

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "slowent/cutstack.hpp"

namespace slowent::cutstack {

namespace {

constexpr int kMaxStages = 64;

BigInt ipow(const BigInt& b, std::int64_t e) {
  BigInt out = 1;
  for (std::int64_t i = 0; i < e; ++i) out *= b;
  return out;
}

// Largest x >= 0 with x^e <= v.
BigInt iroot(const BigInt& v, std::int64_t e) {
  if (v <= 1 || e == 1) return v;
  BigInt hi = 1;
  while (ipow(hi, e) <= v) hi *= 2;
  BigInt lo = hi / 2;
  while (hi - lo > 1) {
    BigInt mid = (lo + hi) / 2;
    if (ipow(mid, e) <= v) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

double log_big(const BigInt& v) {
  // log via the top bits; exact enough for diagnostics.
  const unsigned bits = static_cast<unsigned>(msb(v)) + 1;
  if (bits <= 60) return std::log(v.convert_to<double>());
  const unsigned shift = bits - 60;
  return std::log(static_cast<BigInt>(v >> shift).convert_to<double>()) +
         shift * std::log(2.0);
}

}  // namespace

Schedule Schedule::build(int stages, const Ratio& theta, std::int64_t c, const BigInt& r1) {
  if (stages < 1 || stages > kMaxStages) {
    throw UsageError("build_schedule: stage count must be in [1, " +
                     std::to_string(kMaxStages) + "]");
  }
  if (theta.num() != 1 || theta.den() < 2) {
    throw UsageError("build_schedule: theta must be 1/q with integer q >= 2");
  }
  if (c < 1) throw UsageError("build_schedule: spacing factor must be positive");
  if (r1 < 1) throw UsageError("build_schedule: r1 must be >= 1");
  Schedule out;
  out.theta_ = theta;
  out.c_ = c;
  out.r_.push_back(r1);
  for (int i = 1; i < stages; ++i) {
    const BigInt m = c * out.r_.back() + 1;
    out.r_.push_back(out.r_.back() + ipow(m, theta.den()));
  }
  return out;
}

Schedule Schedule::from_radii(std::vector<BigInt> radii, const Ratio& theta, std::int64_t c) {
  if (radii.empty()) throw UsageError("schedule: no radii");
  if (static_cast<int>(radii.size()) > kMaxStages) throw UsageError("schedule: too many stages");
  Schedule out;
  out.r_ = std::move(radii);
  out.theta_ = theta;
  out.c_ = c;
  return out;
}

const BigInt& Schedule::r(int i) const {
  if (i < 1 || i > stages()) throw UsageError("schedule: stage " + std::to_string(i) + " out of range");
  return r_[static_cast<std::size_t>(i - 1)];
}

BigInt Schedule::s(int i) const {
  if (i < 1 || i >= stages()) throw UsageError("schedule: no level " + std::to_string(i));
  return r(i + 1) - r(i);
}

std::optional<BigInt> Schedule::m(int i) const {
  const BigInt s_i = s(i);
  if (s_i < 1 || theta_.num() < 1) return std::nullopt;
  // m^q = s^p
  const BigInt target = ipow(s_i, theta_.num());
  const BigInt root = iroot(target, theta_.den());
  if (ipow(root, theta_.den()) != target) return std::nullopt;
  return root;
}

std::vector<std::string> Schedule::violations() const {
  std::vector<std::string> out;
  if (theta_.num() <= 0 || theta_ >= Ratio{1}) out.push_back("theta " + theta_.str() + " not in (0,1)");
  if (c_ < 1) out.push_back("spacing factor c = " + std::to_string(c_) + " must be positive");
  if (r_.empty()) {
    out.push_back("no radii");
    return out;
  }
  if (r_.front() < 1) out.push_back("r(1) = " + r_.front().str() + " must be >= 1");
  for (int i = 1; i < stages(); ++i) {
    const std::string tag = "level " + std::to_string(i) + ": ";
    if (r(i + 1) <= r(i)) {
      out.push_back(tag + "radii not strictly increasing");
      continue;
    }
    const auto m_i = m(i);
    if (!m_i) {
      out.push_back(tag + "s = " + s(i).str() + " has no integer root m with m^(1/theta) = s");
      continue;
    }
    if (*m_i <= c_ * r(i)) {
      out.push_back(tag + "m = " + m_i->str() + " not > c*r = " + BigInt(c_ * r(i)).str());
    }
    if (s(i) % *m_i != 0) out.push_back(tag + "m does not divide s");
  }
  return out;
}

double Schedule::product_exponent(int i) const {
  const BigInt& ri = r(i);
  if (ri <= 1) return 1.0;
  double sum = 0;
  for (int j = 1; j <= i; ++j) sum += log_big(r(j));
  return sum / log_big(ri);
}

void Schedule::write(std::ostream& os) const {
  os << "theta " << theta_.num() << '/' << theta_.den() << '\n';
  os << "c " << c_ << '\n';
  for (int i = 1; i <= stages(); ++i) os << "r " << i << ' ' << r(i) << '\n';
}

Schedule Schedule::parse(std::istream& is) {
  std::optional<Ratio> theta;
  std::optional<std::int64_t> c;
  std::vector<std::pair<int, BigInt>> radii;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string key;
    if (!(ls >> key)) continue;
    const std::string where = "schedule line " + std::to_string(lineno) + ": ";
    std::string a, b, extra;
    if (key == "theta") {
      if (!(ls >> a) || (ls >> extra)) throw UsageError(where + "expected 'theta p/q'");
      theta = Ratio::parse(a);
    } else if (key == "c") {
      if (!(ls >> a) || (ls >> extra)) throw UsageError(where + "expected 'c <int>'");
      c = Ratio::parse(a).num();
      if (Ratio::parse(a).den() != 1) throw UsageError(where + "c must be an integer");
    } else if (key == "r") {
      if (!(ls >> a >> b) || (ls >> extra)) throw UsageError(where + "expected 'r <i> <value>'");
      const Ratio idx = Ratio::parse(a);
      BigInt value;
      try {
        value = BigInt(b);
      } catch (const std::exception&) {
        throw UsageError(where + "bad radius '" + b + "'");
      }
      if (idx.den() != 1 || idx.num() < 1) throw UsageError(where + "bad stage index");
      radii.emplace_back(static_cast<int>(idx.num()), value);
    } else {
      throw UsageError(where + "unknown key '" + key + "'");
    }
  }
  if (!theta) throw UsageError("schedule: missing 'theta' header");
  if (!c) throw UsageError("schedule: missing 'c' header");
  std::sort(radii.begin(), radii.end(),
            [](const auto& x, const auto& y) { return x.first < y.first; });
  std::vector<BigInt> r;
  for (std::size_t k = 0; k < radii.size(); ++k) {
    if (radii[k].first != static_cast<int>(k) + 1) {
      throw UsageError("schedule: stage indices must be 1..N without gaps or repeats");
    }
    r.push_back(radii[k].second);
  }
  return from_radii(std::move(r), *theta, *c);
}

Schedule Schedule::read(std::istream& is) {
  Schedule out = parse(is);
  const auto bad = out.violations();
  if (!bad.empty()) {
    std::string msg = "schedule invalid:";
    for (const auto& v : bad) msg += "\n  " + v;
    throw UsageError(msg);
  }
  return out;
}

bool GammaLevel::contains(Site v) const {
  return v.norm() <= radius && v.x % spacing == 0 && v.y % spacing == 0;
}

std::vector<Site> GammaLevel::enumerate() const {
  const std::int64_t t = half_count();
  std::vector<Site> out;
  out.reserve(static_cast<std::size_t>((2 * t + 1) * (2 * t + 1)));
  for (std::int64_t a = -t; a <= t; ++a) {
    for (std::int64_t b = -t; b <= t; ++b) out.push_back({a * spacing, b * spacing});
  }
  return out;
}

BigInt gamma_size(const GammaLevel& level) {
  if (level.spacing < 1 || level.radius < 0) throw UsageError("gamma_size: bad level");
  const BigInt side = 2 * BigInt(level.half_count()) + 1;
  return side * side;
}

Site Address::compose() const {
  Site out;
  for (const Site& g : gammas) out = out + g;
  return out;
}

BigInt gamma_star_size(int stage, const Schedule& schedule) {
  if (stage < 1 || stage > schedule.stages()) throw UsageError("gamma_star_size: bad stage");
  BigInt out = 1;
  for (int j = 1; j < stage; ++j) {
    const auto m = schedule.m(j);
    if (!m) throw UsageError("gamma_star_size: level " + std::to_string(j) + " has no integer m");
    const BigInt side = 2 * (schedule.s(j) / *m) + 1;
    out *= side * side;
  }
  return out;
}

}  // namespace slowent::cutstack
