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

#include "slowent/lattice.hpp"

#include <algorithm>
#include <cassert>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace slowent::lattice {

std::ostream& operator<<(std::ostream& os, const Site& s) {
  return os << '(' << s.x << ',' << s.y << ')';
}

BigInt box_site_count(std::int64_t n, int k) {
  if (n < 0 || k < 1) throw UsageError("box_site_count: need n >= 0, k >= 1");
  BigInt side = 2 * BigInt(n) + 1;
  BigInt out = 1;
  for (int i = 0; i < k; ++i) out *= side;
  return out;
}

std::int64_t box_site_count64(std::int64_t n) {
  const BigInt c = box_site_count(n, 2);
  if (c > std::numeric_limits<std::int64_t>::max()) {
    throw DiagnosticError("box_site_count64: |Q_n| exceeds 64 bits");
  }
  return static_cast<std::int64_t>(c);
}

std::vector<Site> box_sites(std::int64_t n) {
  std::vector<Site> out;
  out.reserve(static_cast<std::size_t>((2 * n + 1) * (2 * n + 1)));
  for (std::int64_t x = -n; x <= n; ++x) {
    for (std::int64_t y = -n; y <= n; ++y) out.push_back({x, y});
  }
  return out;
}

// ---------------------------------------------------------------------------
// SymbolTable

SymbolTable::SymbolTable() {
  for (const char* n : {"0", "1", "a", "b"}) intern(n);
}

Symbol SymbolTable::intern(const std::string& name) {
  if (name.empty() || name.front() == '#' ||
      name.find_first_of(" \t\n") != std::string::npos) {
    throw UsageError("invalid symbol name '" + name + "'");
  }
  auto it = by_name_.find(name);
  if (it != by_name_.end()) return it->second;
  while (by_id_.count(next_)) ++next_;
  by_name_[name] = next_;
  by_id_[next_] = name;
  return next_++;
}

std::string SymbolTable::name(Symbol id) const {
  auto it = by_id_.find(id);
  return it != by_id_.end() ? it->second : "#" + std::to_string(id);
}

std::optional<Symbol> SymbolTable::find(const std::string& name) const {
  if (!name.empty() && name.front() == '#') {
    try {
      return static_cast<Symbol>(std::stoul(name.substr(1)));
    } catch (const std::exception&) {
      return std::nullopt;
    }
  }
  auto it = by_name_.find(name);
  if (it == by_name_.end()) return std::nullopt;
  return it->second;
}

const SymbolTable& SymbolTable::standard() {
  static const SymbolTable table;
  return table;
}

// ---------------------------------------------------------------------------
// Pattern

Pattern::Pattern(std::int64_t radius, Symbol default_symbol)
    : radius_(radius), default_(default_symbol) {
  if (radius < 0) throw UsageError("Pattern: negative radius");
}

Pattern Pattern::from_cells(std::int64_t radius, Symbol default_symbol,
                            std::vector<Cell> cells) {
  Pattern p(radius, default_symbol);
  std::sort(cells.begin(), cells.end());
  std::vector<Cell> kept;
  kept.reserve(cells.size());
  for (const Cell& c : cells) {
    if (!in_box(c.site, radius)) {
      std::ostringstream os;
      os << "Pattern: site " << c.site << " outside Q_" << radius;
      throw UsageError(os.str());
    }
    if (!kept.empty() && kept.back().site == c.site) {
      if (kept.back().symbol != c.symbol) {
        std::ostringstream os;
        os << "Pattern: conflicting symbols at " << c.site;
        throw UsageError(os.str());
      }
      continue;
    }
    kept.push_back(c);
  }
  std::erase_if(kept, [&](const Cell& c) { return c.symbol == default_symbol; });
  p.cells_ = std::move(kept);
  return p;
}

Pattern Pattern::from_sorted(std::int64_t radius, Symbol default_symbol,
                             std::vector<Cell> cells) {
  Pattern p(radius, default_symbol);
#ifndef NDEBUG
  for (std::size_t i = 0; i < cells.size(); ++i) {
    assert(in_box(cells[i].site, radius));
    assert(cells[i].symbol != default_symbol);
    assert(i == 0 || cells[i - 1].site < cells[i].site);
  }
#endif
  p.cells_ = std::move(cells);
  return p;
}

Pattern Pattern::from_sorted_dropping(std::int64_t radius, Symbol def,
                                      std::vector<Cell> cells) {
  std::erase_if(cells, [&](const Cell& c) { return c.symbol == def; });
  return from_sorted(radius, def, std::move(cells));
}

Symbol Pattern::at(Site s) const {
  auto it = std::lower_bound(cells_.begin(), cells_.end(), s,
                             [](const Cell& c, Site v) { return c.site < v; });
  if (it != cells_.end() && it->site == s) return it->symbol;
  return default_;
}

Pattern Pattern::restrict(std::int64_t n) const {
  if (n < 0 || n > radius_) throw UsageError("Pattern::restrict: radius out of range");
  std::vector<Cell> out;
  for (const Cell& c : cells_) {
    if (in_box(c.site, n)) out.push_back(c);
  }
  return from_sorted(n, default_, std::move(out));
}

Pattern Pattern::window(Site u, std::int64_t n) const {
  if (n < 0 || u.norm() + n > radius_) {
    throw UsageError("Pattern::window: window leaves the pattern's box");
  }
  std::vector<Cell> out;
  for (const Cell& c : cells_) {
    const Site v = c.site - u;
    if (in_box(v, n)) out.push_back({v, c.symbol});
  }
  return from_sorted(n, default_, std::move(out));
}

Ratio pattern_distance(const Pattern& a, const Pattern& b) {
  if (a.radius() != b.radius()) throw UsageError("pattern_distance: box mismatch");
  if (a.default_symbol() != b.default_symbol()) {
    throw UsageError("pattern_distance: default symbol mismatch");
  }
  auto ia = a.cells().begin(), ea = a.cells().end();
  auto ib = b.cells().begin(), eb = b.cells().end();
  std::int64_t differ = 0, either = 0;
  while (ia != ea || ib != eb) {
    ++either;
    if (ib == eb || (ia != ea && ia->site < ib->site)) {
      ++differ;
      ++ia;
    } else if (ia == ea || ib->site < ia->site) {
      ++differ;
      ++ib;
    } else {
      if (ia->symbol != ib->symbol) ++differ;
      ++ia;
      ++ib;
    }
  }
  return Ratio::of_counts(differ, either);
}

void write_pattern(std::ostream& os, const Pattern& p, const SymbolTable& table) {
  os << "box " << p.radius() << " default " << table.name(p.default_symbol()) << '\n';
  for (const Cell& c : p.cells()) {
    os << c.site.x << ' ' << c.site.y << ' ' << table.name(c.symbol) << '\n';
  }
}

Pattern read_pattern(std::istream& is, const SymbolTable& table) {
  std::string kw_box, kw_default, def_name;
  std::int64_t n = 0;
  if (!(is >> kw_box >> n >> kw_default >> def_name) || kw_box != "box" ||
      kw_default != "default") {
    throw UsageError("pattern: expected header 'box <n> default <sym>'");
  }
  auto lookup = [&](const std::string& name) {
    auto s = table.find(name);
    if (!s) throw UsageError("pattern: unknown symbol '" + name + "'");
    return *s;
  };
  const Symbol def = lookup(def_name);
  std::vector<Cell> cells;
  std::int64_t x = 0, y = 0;
  std::string sym;
  while (is >> x >> y >> sym) cells.push_back({{x, y}, lookup(sym)});
  if (!is.eof()) throw UsageError("pattern: malformed cell line");
  for (const Cell& c : cells) {
    if (c.symbol == def) throw UsageError("pattern: cell carries the default symbol");
  }
  const std::size_t count = cells.size();
  Pattern p = Pattern::from_cells(n, def, std::move(cells));
  if (p.core_size() != count) throw UsageError("pattern: duplicate cell");
  return p;
}

std::string to_text(const Pattern& p, const SymbolTable& table) {
  std::ostringstream os;
  write_pattern(os, p, table);
  return os.str();
}

Pattern from_text(const std::string& text, const SymbolTable& table) {
  std::istringstream is(text);
  return read_pattern(is, table);
}

// ---------------------------------------------------------------------------
// LatticeSet

namespace {

void check_level(const ArithmeticLevel& l) {
  if (l.spacing < 1 || l.radius < 0) {
    throw UsageError("arithmetic level needs spacing >= 1 and radius >= 0");
  }
}

bool contains_1d_sorted(std::int64_t x, std::span<const ArithmeticLevel> levels,
                        std::span<const std::int64_t> reach) {
  if (levels.empty()) return x == 0;
  const ArithmeticLevel& l = levels.front();
  const std::int64_t rest = reach.size() > 1 ? reach[1] : 0;
  const std::int64_t t_max = l.radius / l.spacing;
  auto floor_div = [](std::int64_t a, std::int64_t b) {
    return a / b - ((a % b != 0) && ((a < 0) != (b < 0)));
  };
  const std::int64_t lo = std::max(-t_max, -floor_div(-(x - rest), l.spacing));
  const std::int64_t hi = std::min(t_max, floor_div(x + rest, l.spacing));
  for (std::int64_t t = lo; t <= hi; ++t) {
    if (contains_1d_sorted(x - t * l.spacing, levels.subspan(1), reach.subspan(1))) {
      return true;
    }
  }
  return false;
}

std::vector<std::int64_t> enumerate_1d(std::span<const ArithmeticLevel> levels,
                                       std::size_t limit) {
  std::vector<std::int64_t> cur{0};
  for (const ArithmeticLevel& l : levels) {
    std::vector<std::int64_t> next;
    const std::int64_t t_max = l.radius / l.spacing;
    for (std::int64_t t = -t_max; t <= t_max; ++t) {
      for (std::int64_t v : cur) {
        next.push_back(v + t * l.spacing);
        if (next.size() > 4 * limit) throw DiagnosticError("LatticeSet: enumeration limit");
      }
    }
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
    cur = std::move(next);
  }
  return cur;
}

}  // namespace

bool contains_1d(std::int64_t x, std::span<const ArithmeticLevel> levels) {
  std::vector<ArithmeticLevel> sorted(levels.begin(), levels.end());
  for (const auto& l : sorted) check_level(l);
  std::sort(sorted.begin(), sorted.end(),
            [](const ArithmeticLevel& a, const ArithmeticLevel& b) {
              return a.spacing > b.spacing;
            });
  // reach[i] = sum of (radius rounded down to the lattice) over levels i..end
  std::vector<std::int64_t> reach(sorted.size() + 1, 0);
  for (std::size_t i = sorted.size(); i-- > 0;) {
    reach[i] = reach[i + 1] + (sorted[i].radius / sorted[i].spacing) * sorted[i].spacing;
  }
  return contains_1d_sorted(x, sorted, reach);
}

LatticeSet::LatticeSet() : base_{Site{0, 0}} {}

LatticeSet LatticeSet::explicit_set(std::vector<Site> sites) {
  std::sort(sites.begin(), sites.end());
  sites.erase(std::unique(sites.begin(), sites.end()), sites.end());
  LatticeSet s;
  s.base_ = std::move(sites);
  return s;
}

LatticeSet LatticeSet::arithmetic(ArithmeticLevel level) {
  check_level(level);
  LatticeSet s;
  s.levels_.push_back(level);
  return s;
}

bool LatticeSet::contains(Site v) const {
  for (const Site& e : base_) {
    const Site r = v - e;
    if (contains_1d(r.x, levels_) && contains_1d(r.y, levels_)) return true;
  }
  return false;
}

std::vector<Site> LatticeSet::enumerate(std::size_t limit) const {
  const std::vector<std::int64_t> line = enumerate_1d(levels_, limit);
  if (!base_.empty() && line.size() * line.size() > limit) {
    throw DiagnosticError("LatticeSet: enumeration limit exceeded");
  }
  std::vector<Site> out;
  for (const Site& e : base_) {
    for (std::int64_t gx : line) {
      for (std::int64_t gy : line) out.push_back(e + Site{gx, gy});
    }
    if (out.size() > 4 * limit) throw DiagnosticError("LatticeSet: enumeration limit exceeded");
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  if (out.size() > limit) throw DiagnosticError("LatticeSet: enumeration limit exceeded");
  return out;
}

LatticeSet sumset(const LatticeSet& u, const LatticeSet& v) {
  std::vector<Site> base;
  base.reserve(u.base_.size() * v.base_.size());
  for (const Site& a : u.base_) {
    for (const Site& b : v.base_) base.push_back(a + b);
  }
  LatticeSet out = LatticeSet::explicit_set(std::move(base));
  out.levels_ = u.levels_;
  out.levels_.insert(out.levels_.end(), v.levels_.begin(), v.levels_.end());
  return out;
}

}  // namespace slowent::lattice
