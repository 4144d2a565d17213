#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "kcl/error.hpp"
#include "kcl/measure_space.hpp"
#include "kcl/operator_core.hpp"

namespace kcl {

/// A finitely presented self-map of N = {1, 2, ...} with counting measure:
/// an optional finite exception table, and n -> a*n + b everywhere else.
class SymbolicMap {
 public:
  using Value = std::uint64_t;

  static SymbolicMap affine(Value a, Value b) { return table_then_affine({}, a, b); }

  static SymbolicMap table_then_affine(std::map<Value, Value> table, Value a, Value b) {
    if (a < 1) throw error(errc::invalid_parameter, "affine slope must be at least 1");
    for (const auto& [from, to] : table)
      if (from < 1 || to < 1)
        throw error(errc::invalid_parameter, "table entries must map N into N");
    SymbolicMap m;
    m.a_ = a;
    m.b_ = b;
    m.table_ = std::move(table);
    return m;
  }

  Value slope() const noexcept { return a_; }
  Value offset() const noexcept { return b_; }
  const std::map<Value, Value>& table() const noexcept { return table_; }

  Value operator()(Value n) const {
    if (auto it = table_.find(n); it != table_.end()) return it->second;
    Value out;
    if (__builtin_mul_overflow(a_, n, &out) || __builtin_add_overflow(out, b_, &out))
      throw error(errc::overflow, "affine image of " + std::to_string(n) + " overflows");
    return out;
  }

  /// All n >= 1 with sigma(n) = m.
  std::vector<Value> preimages(Value m) const {
    std::vector<Value> out;
    for (const auto& [from, to] : table_)
      if (to == m) out.push_back(from);
    if (m > b_ && (m - b_) % a_ == 0) {
      Value n = (m - b_) / a_;
      if (n >= 1 && !table_.contains(n)) out.push_back(n);
    }
    return out;
  }

  /// Onto N. The affine tail misses infinitely many values unless it is the
  /// identity, so only that case needs the finite check below it.
  bool is_surjective() const {
    if (a_ != 1 || b_ != 0) return false;
    Value limit = 1;
    for (const auto& [from, to] : table_) limit = std::max({limit, from, to});
    for (Value m = 1; m <= limit; ++m)
      if (preimages(m).empty()) return false;
    return true;
  }

  std::string spec() const {
    std::string tail = "affine:" + std::to_string(a_) + ":" + std::to_string(b_);
    if (table_.empty()) return tail;
    std::string s = "table:{";
    bool first = true;
    for (const auto& [from, to] : table_) {
      if (!first) s += ",";
      s += std::to_string(from) + "->" + std::to_string(to);
      first = false;
    }
    return s + "};" + tail;
  }

 private:
  Value a_ = 1;
  Value b_ = 0;
  std::map<Value, Value> table_;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

inline std::uint64_t parse_natural(std::string_view s, std::string_view context) {
  s = trim(s);
  if (s.empty()) throw error(errc::parse_error, "empty number in '" + std::string(context) + "'");
  std::uint64_t v = 0;
  for (char c : s) {
    if (c < '0' || c > '9')
      throw error(errc::parse_error, "bad number '" + std::string(s) + "' in '" + std::string(context) + "'");
    if (__builtin_mul_overflow(v, 10u, &v) || __builtin_add_overflow(v, std::uint64_t(c - '0'), &v))
      throw error(errc::parse_error, "number too large in '" + std::string(context) + "'");
  }
  return v;
}

}  // namespace detail

/// Parses `affine:<a>:<b>` or `table:{i->j,...};affine:<a>:<b>`.
inline SymbolicMap parse_symbolic(std::string_view text) {
  std::map<SymbolicMap::Value, SymbolicMap::Value> table;
  std::string_view rest = text;
  if (rest.starts_with("table:")) {
    auto close = rest.find("};");
    if (rest.size() < 7 || rest[6] != '{' || close == std::string_view::npos)
      throw error(errc::parse_error, "expected table:{...};affine:<a>:<b> in '" + std::string(text) + "'");
    auto body = rest.substr(7, close - 7);
    while (!detail::trim(body).empty()) {
      auto comma = body.find(',');
      auto entry = body.substr(0, comma);
      auto arrow = entry.find("->");
      if (arrow == std::string_view::npos)
        throw error(errc::parse_error, "table entry '" + std::string(entry) + "' lacks '->'");
      auto from = detail::parse_natural(entry.substr(0, arrow), text);
      auto to = detail::parse_natural(entry.substr(arrow + 2), text);
      if (!table.emplace(from, to).second)
        throw error(errc::parse_error, "duplicate table key " + std::to_string(from));
      if (comma == std::string_view::npos) break;
      body = body.substr(comma + 1);
    }
    rest = rest.substr(close + 2);
  }
  if (!rest.starts_with("affine:"))
    throw error(errc::parse_error, "expected affine:<a>:<b> in '" + std::string(text) + "'");
  rest = rest.substr(7);
  auto colon = rest.find(':');
  if (colon == std::string_view::npos)
    throw error(errc::parse_error, "expected affine:<a>:<b> in '" + std::string(text) + "'");
  auto a = detail::parse_natural(rest.substr(0, colon), text);
  auto b = detail::parse_natural(rest.substr(colon + 1), text);
  return SymbolicMap::table_then_affine(std::move(table), a, b);
}

namespace detail {

inline bool in_range_memo(const SymbolicMap& sigma, std::size_t k, SymbolicMap::Value n,
                          std::set<std::pair<std::size_t, SymbolicMap::Value>>& misses) {
  if (k == 0) return true;
  if (misses.contains({k, n})) return false;
  for (auto pre : sigma.preimages(n))
    if (in_range_memo(sigma, k - 1, pre, misses)) return true;
  misses.insert({k, n});
  return false;
}

}  // namespace detail

/// n in R(sigma^k), decided by solving backwards through preimages.
inline bool in_range(const SymbolicMap& sigma, std::size_t k, SymbolicMap::Value n) {
  if (n < 1) throw error(errc::invalid_parameter, "symbolic points start at 1");
  std::set<std::pair<std::size_t, SymbolicMap::Value>> misses;
  return detail::in_range_memo(sigma, k, n, misses);
}

/// Pairs (k, n_k) with n_k in R(sigma^{k-1}) but not in R(sigma^k).
struct WitnessSequence {
  std::vector<std::pair<std::size_t, SymbolicMap::Value>> entries;
  std::size_t depth = 0;
};

struct WitnessSearch {
  WitnessSequence sequence;         // everything found, complete when found == true
  bool found = false;
  std::optional<std::size_t> not_found_at;  // first k with no witness within bound
};

/// Search bound for step k: a*k + b + 64, grown to cover the orbit of 1 when
/// the slope makes ranges thin out geometrically, plus the table's extent.
inline SymbolicMap::Value default_search_bound(const SymbolicMap& sigma, std::size_t k) {
  using V = SymbolicMap::Value;
  constexpr V kCap = V(1) << 40;
  V bound = sigma.slope() * k + sigma.offset() + 64;
  if (sigma.slope() >= 2) {
    V orbit = 1;
    for (std::size_t i = 0; i < k && orbit < kCap; ++i) orbit = orbit * sigma.slope() + sigma.offset();
    bound = std::max(bound, std::min(orbit, kCap) + 64);
  }
  for (const auto& [from, to] : sigma.table()) bound = std::max({bound, from + 64, to + 64});
  return bound;
}

/// Bounded search for a witness sequence of depth K. Exhausting the search
/// is evidence of infinite ascent up to depth K, never a certificate.
inline WitnessSearch witness_sequence(const SymbolicMap& sigma, std::size_t depth,
                                      std::optional<SymbolicMap::Value> bound_override = std::nullopt) {
  if (depth < 1) throw error(errc::invalid_parameter, "witness depth must be at least 1");
  WitnessSearch out;
  out.sequence.depth = depth;
  std::set<SymbolicMap::Value> used;
  for (std::size_t k = 1; k <= depth; ++k) {
    auto bound = bound_override.value_or(default_search_bound(sigma, k));
    std::optional<SymbolicMap::Value> pick;
    for (SymbolicMap::Value n = 1; n <= bound && !pick; ++n) {
      if (used.contains(n)) continue;
      if (in_range(sigma, k - 1, n) && !in_range(sigma, k, n)) pick = n;
    }
    if (!pick) {
      out.not_found_at = k;
      return out;
    }
    used.insert(*pick);
    out.sequence.entries.emplace_back(k, *pick);
  }
  out.found = true;
  return out;
}

/// Re-checks membership conditions and distinctness of a witness sequence.
inline bool verify_witnesses(const SymbolicMap& sigma, const WitnessSequence& seq) {
  std::set<SymbolicMap::Value> seen;
  for (const auto& [k, n] : seq.entries) {
    if (k < 1 || !seen.insert(n).second) return false;
    if (!in_range(sigma, k - 1, n) || in_range(sigma, k, n)) return false;
  }
  return true;
}

/// sigma on {1..n} plus an absorbing sink that collects every image above n.
/// Chain dimensions of the truncation approximate, but do not equal, those of
/// the operator on l^p(N).
inline OperatorMatrix truncated_matrix(const SymbolicMap& sigma, std::size_t n) {
  if (n < 1) throw error(errc::invalid_parameter, "truncation size must be at least 1");
  std::vector<std::string> points;
  for (std::size_t i = 1; i <= n; ++i) points.push_back(std::to_string(i));
  points.push_back("sink");
  auto space = new_space(std::move(points), std::vector<Rational>(n + 1, Rational(1)));
  std::vector<Atom> assignment(n + 1, n);
  for (std::size_t i = 1; i <= n; ++i) {
    SymbolicMap::Value y;
    try {
      y = sigma(i);
    } catch (const error&) {
      y = std::numeric_limits<SymbolicMap::Value>::max();
    }
    assignment[i - 1] = y <= n ? static_cast<Atom>(y - 1) : n;
  }
  return matrix_of(Transformation(space, std::move(assignment)));
}

}  // namespace kcl
