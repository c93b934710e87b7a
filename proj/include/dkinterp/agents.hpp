// Agent universes and agent groups.
//
// A session fixes a finite, ordered universe of named agents. Groups are
// non-empty subsets of that universe, stored as bit sets over the agents'
// positions so that subset tests and set differences are single operations.

#pragma once

#include <algorithm>
#include <bit>
#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace dkinterp {

using AgentId = std::uint8_t;

inline constexpr std::size_t kMaxAgents = 32;

class Group {
 public:
  static Group singleton(AgentId a) { return Group(std::uint32_t{1} << a); }

  static Group from_bits(std::uint32_t bits) {
    if (bits == 0) throw std::invalid_argument("a group must be non-empty");
    return Group(bits);
  }

  static Group from_members(const std::vector<AgentId>& members) {
    std::uint32_t bits = 0;
    for (AgentId a : members) bits |= std::uint32_t{1} << a;
    return from_bits(bits);
  }

  std::uint32_t bits() const { return bits_; }
  std::size_t size() const { return static_cast<std::size_t>(std::popcount(bits_)); }
  bool contains(AgentId a) const { return (bits_ >> a) & 1u; }
  bool subset_of(Group other) const { return (bits_ & ~other.bits_) == 0; }
  bool is_singleton(AgentId a) const { return bits_ == (std::uint32_t{1} << a); }

  // Group minus one agent; empty when the group was exactly {a}.
  std::optional<Group> without(AgentId a) const {
    std::uint32_t rest = bits_ & ~(std::uint32_t{1} << a);
    if (rest == 0) return std::nullopt;
    return Group(rest);
  }

  std::vector<AgentId> members() const {
    std::vector<AgentId> out;
    for (std::uint32_t b = bits_; b != 0; b &= b - 1) {
      out.push_back(static_cast<AgentId>(std::countr_zero(b)));
    }
    return out;
  }

  friend bool operator==(Group, Group) = default;

  // Lexicographic order on the ascending member lists: {a} < {a,b} < {b}.
  friend std::strong_ordering operator<=>(Group x, Group y) {
    std::uint32_t a = x.bits_, b = y.bits_;
    while (a != 0 && b != 0) {
      int ia = std::countr_zero(a), ib = std::countr_zero(b);
      if (ia != ib) return ia <=> ib;
      a &= a - 1;
      b &= b - 1;
    }
    if (a == 0 && b == 0) return std::strong_ordering::equal;
    return a == 0 ? std::strong_ordering::less : std::strong_ordering::greater;
  }

 private:
  explicit Group(std::uint32_t bits) : bits_(bits) {}
  std::uint32_t bits_;
};

class AgentUniverse {
 public:
  explicit AgentUniverse(std::vector<std::string> names) : names_(std::move(names)) {
    if (names_.empty()) throw std::invalid_argument("agent universe must be non-empty");
    if (names_.size() > kMaxAgents) {
      throw std::invalid_argument("agent universe holds at most 32 agents");
    }
    for (std::size_t i = 0; i < names_.size(); ++i) {
      if (!valid_name(names_[i])) {
        throw std::invalid_argument("invalid agent name '" + names_[i] + "'");
      }
      for (std::size_t j = 0; j < i; ++j) {
        if (names_[i] == names_[j]) {
          throw std::invalid_argument("duplicate agent name '" + names_[i] + "'");
        }
      }
    }
  }

  // "a,b,c" -> universe {a, b, c}; whitespace around names is ignored.
  static AgentUniverse parse_csv(std::string_view csv) {
    std::vector<std::string> names;
    std::size_t start = 0;
    while (start <= csv.size()) {
      std::size_t comma = csv.find(',', start);
      if (comma == std::string_view::npos) comma = csv.size();
      std::string_view item = csv.substr(start, comma - start);
      while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
      while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
      names.emplace_back(item);
      start = comma + 1;
    }
    return AgentUniverse(std::move(names));
  }

  std::size_t size() const { return names_.size(); }
  const std::string& name(AgentId a) const { return names_.at(a); }
  const std::vector<std::string>& names() const { return names_; }

  std::optional<AgentId> find(std::string_view name) const {
    for (std::size_t i = 0; i < names_.size(); ++i) {
      if (names_[i] == name) return static_cast<AgentId>(i);
    }
    return std::nullopt;
  }

  AgentId require(std::string_view name) const {
    if (auto a = find(name)) return *a;
    throw std::invalid_argument("unknown agent '" + std::string(name) + "'");
  }

  bool contains(Group g) const { return g.subset_of(full()); }

  Group full() const {
    return Group::from_bits(names_.size() == 32 ? ~std::uint32_t{0}
                                                : (std::uint32_t{1} << names_.size()) - 1);
  }

  // Every non-empty subset, in canonical group order.
  std::vector<Group> all_groups() const;

  bool operator==(const AgentUniverse&) const = default;

 private:
  static bool valid_name(const std::string& s) {
    if (s.empty()) return false;
    for (char c : s) {
      bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                c == '_';
      if (!ok) return false;
    }
    return true;
  }

  std::vector<std::string> names_;
};

inline std::vector<Group> AgentUniverse::all_groups() const {
  if (names_.size() > 20) throw std::length_error("too many agents to enumerate all groups");
  std::vector<Group> out;
  std::uint32_t limit = std::uint32_t{1} << names_.size();
  for (std::uint32_t b = 1; b < limit; ++b) out.push_back(Group::from_bits(b));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace dkinterp
