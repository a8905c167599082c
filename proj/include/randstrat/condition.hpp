#pragma once

#include <bit>
#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "randstrat/arena.hpp"

namespace randstrat {

/// Subset of a colour universe of at most 32 colours, as a bitmask.
class ColourSet {
 public:
  constexpr ColourSet() = default;
  constexpr explicit ColourSet(std::uint32_t bits) : bits_(bits) {}
  ColourSet(std::initializer_list<ColourId> cs) {
    for (ColourId c : cs) insert(c);
  }

  static constexpr ColourSet full(int n) { return ColourSet(n >= 32 ? ~0u : ((1u << n) - 1u)); }

  constexpr bool contains(ColourId c) const { return (bits_ >> c) & 1u; }
  void insert(ColourId c) { bits_ |= (1u << c); }
  void erase(ColourId c) { bits_ &= ~(1u << c); }
  constexpr bool empty() const { return bits_ == 0; }
  int size() const { return std::popcount(bits_); }
  constexpr std::uint32_t bits() const { return bits_; }
  constexpr bool subset_of(ColourSet o) const { return (bits_ & ~o.bits_) == 0; }
  constexpr bool intersects(ColourSet o) const { return (bits_ & o.bits_) != 0; }

  std::vector<ColourId> members() const {
    std::vector<ColourId> out;
    for (ColourId c = 0; c < 32; ++c)
      if (contains(c)) out.push_back(c);
    return out;
  }

  friend constexpr ColourSet operator|(ColourSet a, ColourSet b) { return ColourSet(a.bits_ | b.bits_); }
  friend constexpr ColourSet operator&(ColourSet a, ColourSet b) { return ColourSet(a.bits_ & b.bits_); }
  friend constexpr ColourSet operator-(ColourSet a, ColourSet b) { return ColourSet(a.bits_ & ~b.bits_); }
  friend constexpr auto operator<=>(ColourSet, ColourSet) = default;

 private:
  std::uint32_t bits_ = 0;
};

using MullerFamily = std::set<ColourSet>;

struct Reach { ColourSet target; };
struct Safety { ColourSet bad; };
struct Buchi { ColourSet target; };
struct CoBuchi { ColourSet bad; };
struct Parity { std::map<ColourId, int> priority; };
struct Muller { MullerFamily family; };

using Condition = std::variant<Reach, Safety, Buchi, CoBuchi, Parity, Muller>;

/// Reach and Safety are decided on the visited colours (prefix events); the
/// others on the colours seen infinitely often. An empty infinity set is
/// losing for Muller and parity.
inline bool inf_set_verdict(const Condition& cond, ColourSet inf, ColourSet visited) {
  struct Visitor {
    ColourSet inf, visited;
    bool operator()(const Reach& c) const { return c.target.intersects(visited); }
    bool operator()(const Safety& c) const { return !c.bad.intersects(visited); }
    bool operator()(const Buchi& c) const { return c.target.intersects(inf); }
    bool operator()(const CoBuchi& c) const { return !c.bad.intersects(inf); }
    bool operator()(const Parity& c) const {
      int best = -1;
      for (ColourId col : inf.members()) {
        auto it = c.priority.find(col);
        if (it == c.priority.end()) continue;
        if (best < 0 || it->second < best) best = it->second;
      }
      return best >= 0 && best % 2 == 0;
    }
    bool operator()(const Muller& c) const { return !inf.empty() && c.family.count(inf) > 0; }
  };
  return std::visit(Visitor{inf, visited}, cond);
}

/// Nonempty subsets of the n-colour universe that are not in `family`.
inline MullerFamily muller_complement(const MullerFamily& family, int num_colours) {
  MullerFamily out;
  const std::uint32_t all = ColourSet::full(num_colours).bits();
  for (std::uint32_t s = 1; s <= all && s != 0; ++s)
    if ((s & ~all) == 0 && !family.count(ColourSet(s))) out.insert(ColourSet(s));
  return out;
}

inline bool is_prefix_condition(const Condition& c) {
  return std::holds_alternative<Reach>(c) || std::holds_alternative<Safety>(c);
}

/// Maps colour names to ids; used when parsing condition strings.
using ColourResolver = std::function<ColourId(std::string_view)>;

inline ColourResolver resolver_for(const Arena& a) {
  return [&a](std::string_view name) { return a.find_colour(name); };
}

inline ColourResolver resolver_for(const std::vector<std::string>& colours) {
  return [colours](std::string_view name) -> ColourId {
    for (std::size_t i = 0; i < colours.size(); ++i)
      if (colours[i] == name) return static_cast<ColourId>(i);
    throw Error(ErrorKind::unknown_identifier, "colour '" + std::string(name) + "'");
  };
}

namespace detail {

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == sep) {
      out.push_back(cur);
      cur.clear();
    } else if (ch != ' ') {
      cur.push_back(ch);
    }
  }
  out.push_back(cur);
  return out;
}

inline ColourSet colour_list(std::string_view body, const ColourResolver& resolve) {
  ColourSet set;
  for (const auto& name : split(body, ','))
    if (!name.empty()) set.insert(resolve(name));
  return set;
}

}  // namespace detail

/// Parses `reach:c1,c2`, `safety:c`, `buchi:c`, `cobuchi:c`,
/// `parity:c1=0,c2=1` and `muller:{a};{a,c}`.
inline Condition parse_condition(std::string_view text, const ColourResolver& resolve) {
  auto colon = text.find(':');
  if (colon == std::string_view::npos)
    throw Error(ErrorKind::malformed_document, "condition '" + std::string(text) + "' lacks a ':'");
  std::string_view head = text.substr(0, colon), body = text.substr(colon + 1);
  if (head == "reach") return Reach{detail::colour_list(body, resolve)};
  if (head == "safety") return Safety{detail::colour_list(body, resolve)};
  if (head == "buchi") return Buchi{detail::colour_list(body, resolve)};
  if (head == "cobuchi") return CoBuchi{detail::colour_list(body, resolve)};
  if (head == "parity") {
    Parity p;
    for (const auto& item : detail::split(body, ',')) {
      if (item.empty()) continue;
      auto eq = item.find('=');
      if (eq == std::string::npos) throw Error(ErrorKind::malformed_document, "parity entry '" + item + "'");
      int prio = -1;
      try {
        prio = std::stoi(item.substr(eq + 1));
      } catch (const std::exception&) {
      }
      if (prio < 0) throw Error(ErrorKind::malformed_document, "bad priority in '" + item + "'");
      p.priority[resolve(item.substr(0, eq))] = prio;
    }
    return p;
  }
  if (head == "muller") {
    Muller m;
    for (const auto& item : detail::split(body, ';')) {
      if (item.empty()) continue;
      if (item.size() < 2 || item.front() != '{' || item.back() != '}')
        throw Error(ErrorKind::malformed_document, "muller set '" + item + "' must be braced");
      ColourSet s = detail::colour_list(std::string_view(item).substr(1, item.size() - 2), resolve);
      if (s.empty()) throw Error(ErrorKind::malformed_document, "the empty set cannot belong to a Muller family");
      m.family.insert(s);
    }
    return m;
  }
  throw Error(ErrorKind::malformed_document, "unknown condition kind '" + std::string(head) + "'");
}

inline std::string format_colour_set(ColourSet s, const std::vector<std::string>& names) {
  std::string out = "{";
  bool first = true;
  for (ColourId c : s.members()) {
    if (!first) out += ",";
    out += names.at(static_cast<std::size_t>(c));
    first = false;
  }
  return out + "}";
}

}  // namespace randstrat
