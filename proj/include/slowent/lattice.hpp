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

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "slowent/ratio.hpp"

namespace slowent::lattice {

/// A point of Z^2. All experiments run at rank k = 2.
struct Site {
  std::int64_t x = 0;
  std::int64_t y = 0;

  friend constexpr auto operator<=>(const Site&, const Site&) = default;
  friend constexpr Site operator+(Site a, Site b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Site operator-(Site a, Site b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Site operator-(Site a) { return {-a.x, -a.y}; }

  /// Sup-norm.
  [[nodiscard]] constexpr std::int64_t norm() const {
    const std::int64_t ax = x < 0 ? -x : x;
    const std::int64_t ay = y < 0 ? -y : y;
    return ax > ay ? ax : ay;
  }
};

std::ostream& operator<<(std::ostream& os, const Site& s);

/// |Q_n| = (2n+1)^k, exact.
BigInt box_site_count(std::int64_t n, int k = 2);

/// (2n+1)^2 as a machine integer; throws if it does not fit.
std::int64_t box_site_count64(std::int64_t n);

/// True iff s lies in Q_n.
constexpr bool in_box(Site s, std::int64_t n) { return s.norm() <= n; }

/// Every site of Q_n in lexicographic order.
std::vector<Site> box_sites(std::int64_t n);

using Symbol = std::uint32_t;

/// Display names for symbol ids. Ids 0, 1, 2, 3 are pre-registered as
/// '0', '1', 'a', 'b'; the infinite atom's id is chosen per partition.
class SymbolTable {
 public:
  SymbolTable();

  Symbol intern(const std::string& name);
  [[nodiscard]] std::string name(Symbol id) const;
  [[nodiscard]] std::optional<Symbol> find(const std::string& name) const;

  static const SymbolTable& standard();

 private:
  std::map<std::string, Symbol> by_name_;
  std::map<Symbol, std::string> by_id_;
  Symbol next_ = 0;
};

inline constexpr Symbol kZero = 0;
inline constexpr Symbol kOne = 1;
inline constexpr Symbol kA = 2;
inline constexpr Symbol kB = 3;

struct Cell {
  Site site;
  Symbol symbol = 0;
  friend auto operator<=>(const Cell&, const Cell&) = default;
};

/// A coloring of Q_n stored sparsely: only sites whose symbol differs from
/// the default are kept, sorted lexicographically by site.
class Pattern {
 public:
  Pattern() = default;
  Pattern(std::int64_t radius, Symbol default_symbol);

  /// Canonicalizes: drops default-valued cells and sorts. Throws UsageError
  /// on out-of-box or conflicting duplicate sites.
  static Pattern from_cells(std::int64_t radius, Symbol default_symbol,
                            std::vector<Cell> cells);

  /// Cells already sorted, unique, in-box and non-default; checked only in
  /// debug builds.
  static Pattern from_sorted(std::int64_t radius, Symbol default_symbol,
                             std::vector<Cell> cells);

  [[nodiscard]] std::int64_t radius() const { return radius_; }
  [[nodiscard]] Symbol default_symbol() const { return default_; }
  [[nodiscard]] std::span<const Cell> cells() const { return cells_; }
  [[nodiscard]] std::size_t core_size() const { return cells_.size(); }

  [[nodiscard]] Symbol at(Site s) const;

  /// Restriction to Q_n, n <= radius.
  [[nodiscard]] Pattern restrict(std::int64_t n) const;

  /// The pattern v -> x_{u+v} on Q_n; requires ||u|| + n <= radius.
  [[nodiscard]] Pattern window(Site u, std::int64_t n) const;

  /// Relabel each stored symbol through `f`; the default becomes
  /// `new_default`.
  template <class F>
  [[nodiscard]] Pattern relabel(F&& f, Symbol new_default) const {
    std::vector<Cell> out;
    out.reserve(cells_.size());
    for (const Cell& c : cells_) out.push_back({c.site, f(c.symbol)});
    return from_sorted_dropping(radius_, new_default, std::move(out));
  }

  friend bool operator==(const Pattern&, const Pattern&) = default;

 private:
  static Pattern from_sorted_dropping(std::int64_t radius, Symbol def,
                                      std::vector<Cell> cells);

  std::int64_t radius_ = 0;
  Symbol default_ = 0;
  std::vector<Cell> cells_;
};

/// Fraction of disagreeing sites among sites where either pattern is
/// non-default; 0/0 reads as 0. Throws UsageError on mismatched box or
/// default symbol.
Ratio pattern_distance(const Pattern& a, const Pattern& b);

void write_pattern(std::ostream& os, const Pattern& p,
                   const SymbolTable& table = SymbolTable::standard());
Pattern read_pattern(std::istream& is,
                     const SymbolTable& table = SymbolTable::standard());
std::string to_text(const Pattern& p,
                    const SymbolTable& table = SymbolTable::standard());
Pattern from_text(const std::string& text,
                  const SymbolTable& table = SymbolTable::standard());

/// Q_s ∩ mZ^2.
struct ArithmeticLevel {
  std::int64_t spacing = 1;
  std::int64_t radius = 0;
  friend bool operator==(const ArithmeticLevel&, const ArithmeticLevel&) = default;
};

/// A finite lattice set E + L_1 + ... + L_t: an explicit site set plus a
/// sum of arithmetic boxes. An explicit set has no levels; a pure
/// descriptor has E = {0}.
class LatticeSet {
 public:
  LatticeSet();  // {0}
  static LatticeSet explicit_set(std::vector<Site> sites);
  static LatticeSet arithmetic(ArithmeticLevel level);

  [[nodiscard]] bool contains(Site v) const;
  [[nodiscard]] bool is_explicit() const { return levels_.empty(); }
  [[nodiscard]] std::span<const Site> base() const { return base_; }
  [[nodiscard]] std::span<const ArithmeticLevel> levels() const { return levels_; }

  /// All members in lexicographic order; throws DiagnosticError when more
  /// than `limit` sites would be produced.
  [[nodiscard]] std::vector<Site> enumerate(std::size_t limit = 1u << 22) const;

  friend LatticeSet sumset(const LatticeSet& u, const LatticeSet& v);

 private:
  std::vector<Site> base_;                // sorted, unique
  std::vector<ArithmeticLevel> levels_;   // in insertion order
};

/// Minkowski sum. Descriptor parts compose without enumeration; explicit
/// parts are summed directly.
LatticeSet sumset(const LatticeSet& u, const LatticeSet& v);

/// Membership of x in the 1-D sum of (m Z ∩ [-s, s]) over `levels`.
bool contains_1d(std::int64_t x, std::span<const ArithmeticLevel> levels);

}  // namespace slowent::lattice
