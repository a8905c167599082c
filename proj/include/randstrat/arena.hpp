#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "randstrat/distribution.hpp"
#include "randstrat/error.hpp"

namespace randstrat {

using VertexId = int;
using ActionId = int;
using ColourId = int;
using SignalId = int;

enum class Side { eve, adam };

inline Side opponent(Side s) { return s == Side::eve ? Side::adam : Side::eve; }
inline std::string_view to_string(Side s) { return s == Side::eve ? "eve" : "adam"; }

/// Reserved signal name standing for "nothing observed yet".
inline constexpr std::string_view kBlankSignal = "blank";

namespace detail {

/// Dense interning of string identifiers.
class NameTable {
 public:
  int intern(const std::string& name) {
    auto it = index_.find(name);
    if (it != index_.end()) return it->second;
    int id = static_cast<int>(names_.size());
    names_.push_back(name);
    index_.emplace(name, id);
    return id;
  }
  int add_unique(const std::string& name, std::string_view what) {
    if (index_.count(name)) throw Error(ErrorKind::duplicate_id, std::string(what) + " '" + name + "'");
    return intern(name);
  }
  std::optional<int> find(std::string_view name) const {
    auto it = index_.find(std::string(name));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }
  bool contains(std::string_view name) const { return find(name).has_value(); }
  const std::string& name(int id) const { return names_.at(static_cast<std::size_t>(id)); }
  const std::vector<std::string>& names() const { return names_; }
  int size() const { return static_cast<int>(names_.size()); }

 private:
  std::vector<std::string> names_;
  std::map<std::string, int, std::less<>> index_;
};

}  // namespace detail

/// A finite stochastic game arena with partial observation.
///
/// Vertices, both action sets, colours and both signal alphabets are interned
/// to dense ids. The transition function is total on V x X x Y. Colouring and
/// observation maps are partial. Instances are immutable once built.
class Arena {
 public:
  int num_vertices() const { return vertices_.size(); }
  int num_actions(Side s) const { return actions_[idx(s)].size(); }
  int num_colours() const { return colours_.size(); }
  int num_signals(Side s) const { return signals_[idx(s)].size(); }

  const std::string& vertex_name(VertexId v) const { return vertices_.name(v); }
  const std::string& action_name(Side s, ActionId a) const { return actions_[idx(s)].name(a); }
  const std::string& colour_name(ColourId c) const { return colours_.name(c); }
  const std::string& signal_name(Side s, SignalId g) const { return signals_[idx(s)].name(g); }
  const std::vector<std::string>& vertex_names() const { return vertices_.names(); }
  const std::vector<std::string>& action_names(Side s) const { return actions_[idx(s)].names(); }
  const std::vector<std::string>& colour_names() const { return colours_.names(); }
  const std::vector<std::string>& signal_names(Side s) const { return signals_[idx(s)].names(); }

  VertexId find_vertex(std::string_view name) const { return require(vertices_, name, "vertex"); }
  ActionId find_action(Side s, std::string_view name) const { return require(actions_[idx(s)], name, "action"); }
  ColourId find_colour(std::string_view name) const { return require(colours_, name, "colour"); }
  SignalId find_signal(Side s, std::string_view name) const { return require(signals_[idx(s)], name, "signal"); }
  std::optional<VertexId> lookup_vertex(std::string_view name) const { return vertices_.find(name); }
  std::optional<ColourId> lookup_colour(std::string_view name) const { return colours_.find(name); }

  const Distribution<VertexId>& transition(VertexId v, ActionId x, ActionId y) const {
    return delta_[index(v, x, y)];
  }

  std::optional<ColourId> colour(VertexId v) const { return colouring_[static_cast<std::size_t>(v)]; }
  std::optional<SignalId> vertex_signal(Side s, VertexId v) const {
    return vertex_obs_[idx(s)][static_cast<std::size_t>(v)];
  }
  std::optional<SignalId> action_signal(Side s, ActionId a) const {
    return action_obs_[idx(s)][static_cast<std::size_t>(a)];
  }

  /// Vertices whose colour belongs to `colours`.
  std::set<VertexId> vertices_coloured(const std::set<ColourId>& colours) const {
    std::set<VertexId> out;
    for (VertexId v = 0; v < num_vertices(); ++v)
      if (auto c = colour(v); c && colours.count(*c)) out.insert(v);
    return out;
  }

  /// True when every action pair at `v` leads back to `v` surely.
  bool is_sink(VertexId v) const {
    for (ActionId x = 0; x < num_actions(Side::eve); ++x)
      for (ActionId y = 0; y < num_actions(Side::adam); ++y) {
        const auto& d = transition(v, x, y);
        if (!(d.is_dirac() && d.front().first == v)) return false;
      }
    return true;
  }

  /// Vertex set closed under every transition: no positive-probability edge
  /// leaves it.
  bool is_closed(const std::set<VertexId>& set) const {
    for (VertexId v : set)
      for (ActionId x = 0; x < num_actions(Side::eve); ++x)
        for (ActionId y = 0; y < num_actions(Side::adam); ++y)
          for (const auto& [r, w] : transition(v, x, y))
            if (!set.count(r)) return false;
    return true;
  }

 private:
  friend class ArenaBuilder;

  static std::size_t idx(Side s) { return s == Side::eve ? 0 : 1; }
  std::size_t index(VertexId v, ActionId x, ActionId y) const {
    return (static_cast<std::size_t>(v) * num_actions(Side::eve) + x) * num_actions(Side::adam) + y;
  }
  static int require(const detail::NameTable& t, std::string_view name, std::string_view what) {
    auto id = t.find(name);
    if (!id) throw Error(ErrorKind::unknown_identifier, std::string(what) + " '" + std::string(name) + "'");
    return *id;
  }

  detail::NameTable vertices_;
  detail::NameTable actions_[2];
  detail::NameTable colours_;
  detail::NameTable signals_[2];
  std::vector<Distribution<VertexId>> delta_;
  std::vector<std::optional<ColourId>> colouring_;
  std::vector<std::optional<SignalId>> vertex_obs_[2];
  std::vector<std::optional<SignalId>> action_obs_[2];
};

/// Incremental construction of an `Arena`; `build()` checks every invariant.
class ArenaBuilder {
 public:
  VertexId add_vertex(const std::string& name, std::optional<std::string> colour = std::nullopt,
                      std::optional<std::string> eve_signal = std::nullopt,
                      std::optional<std::string> adam_signal = std::nullopt) {
    VertexId v = a_.vertices_.add_unique(name, "vertex");
    a_.colouring_.push_back(colour ? std::optional<ColourId>(a_.colours_.intern(*colour)) : std::nullopt);
    a_.vertex_obs_[0].push_back(eve_signal ? std::optional<SignalId>(signal(Side::eve, *eve_signal)) : std::nullopt);
    a_.vertex_obs_[1].push_back(adam_signal ? std::optional<SignalId>(signal(Side::adam, *adam_signal)) : std::nullopt);
    return v;
  }

  ActionId add_action(Side s, const std::string& name, std::optional<std::string> obs = std::nullopt) {
    auto i = Arena::idx(s);
    ActionId a = a_.actions_[i].add_unique(name, "action");
    a_.action_obs_[i].push_back(obs ? std::optional<SignalId>(signal(s, *obs)) : std::nullopt);
    return a;
  }

  ColourId add_colour(const std::string& name) { return a_.colours_.intern(name); }
  SignalId add_signal(Side s, const std::string& name) { return signal(s, name); }

  void set_transition(VertexId v, ActionId x, ActionId y, Distribution<VertexId> d) {
    pending_[{v, x, y}] = std::move(d);
  }

  bool has_transition(VertexId v, ActionId x, ActionId y) const { return pending_.count({v, x, y}) > 0; }

  /// Sets the same successor distribution for every action pair at `v`.
  void set_all(VertexId v, const Distribution<VertexId>& d) {
    for (ActionId x = 0; x < a_.num_actions(Side::eve); ++x)
      for (ActionId y = 0; y < a_.num_actions(Side::adam); ++y) set_transition(v, x, y, d);
  }

  const Arena& peek() const { return a_; }

  Arena build() {
    const int nv = a_.num_vertices(), nx = a_.num_actions(Side::eve), ny = a_.num_actions(Side::adam);
    if (nv == 0) throw Error(ErrorKind::invalid_arena, "arena has no vertices");
    if (nx == 0 || ny == 0) throw Error(ErrorKind::invalid_arena, "both players need at least one action");
    for (Side s : {Side::eve, Side::adam})
      for (const auto& n : a_.action_names(s))
        if (a_.vertices_.contains(n))
          throw Error(ErrorKind::duplicate_id, "action '" + n + "' clashes with a vertex id");
    a_.delta_.assign(static_cast<std::size_t>(nv) * nx * ny, {});
    for (VertexId v = 0; v < nv; ++v)
      for (ActionId x = 0; x < nx; ++x)
        for (ActionId y = 0; y < ny; ++y) {
          auto it = pending_.find({v, x, y});
          const std::string where = "(" + a_.vertex_name(v) + ", " + a_.action_name(Side::eve, x) + ", " +
                                    a_.action_name(Side::adam, y) + ")";
          if (it == pending_.end()) throw Error(ErrorKind::invalid_arena, "no transition for " + where);
          const auto& d = it->second;
          if (d.total() != 1)
            throw Error(ErrorKind::distribution_not_normalised,
                        where + " weights sum to " + format_rational(d.total()));
          for (const auto& [r, w] : d)
            if (r < 0 || r >= nv || w <= 0) throw Error(ErrorKind::invalid_arena, "bad successor at " + where);
          a_.delta_[a_.index(v, x, y)] = d;
        }
    return a_;
  }

 private:
  SignalId signal(Side s, const std::string& name) {
    if (name == kBlankSignal) throw Error(ErrorKind::duplicate_id, "signal id 'blank' is reserved");
    return a_.signals_[Arena::idx(s)].intern(name);
  }

  Arena a_;
  std::map<std::tuple<VertexId, ActionId, ActionId>, Distribution<VertexId>> pending_;
};

struct ArenaClass {
  bool synchronous = false;
  bool observable_actions = false;
  bool perfect_information = false;
  bool simple = false;
};

namespace detail {

template <class F>
bool injective(int n, F&& f) {
  std::set<int> seen;
  for (int i = 0; i < n; ++i) {
    auto v = f(i);
    if (!v || !seen.insert(*v).second) return false;
  }
  return true;
}

/// Which coordinate the transition at `q` depends on.
struct Dependence {
  bool on_eve = false;
  bool on_adam = false;
};

inline Dependence dependence(const Arena& a, VertexId q) {
  Dependence d;
  const int nx = a.num_actions(Side::eve), ny = a.num_actions(Side::adam);
  for (ActionId x = 0; x < nx; ++x)
    for (ActionId y = 0; y < ny; ++y) {
      if (!(a.transition(q, x, y) == a.transition(q, 0, y))) d.on_eve = true;
      if (!(a.transition(q, x, y) == a.transition(q, x, 0))) d.on_adam = true;
    }
  return d;
}

}  // namespace detail

inline ArenaClass classify(const Arena& a) {
  ArenaClass c;
  auto total = [&](Side s) {
    for (VertexId v = 0; v < a.num_vertices(); ++v)
      if (!a.vertex_signal(s, v)) return false;
    for (ActionId x = 0; x < a.num_actions(s); ++x)
      if (!a.action_signal(s, x)) return false;
    return true;
  };
  c.synchronous = total(Side::eve) && total(Side::adam);
  if (!c.synchronous) return c;
  c.observable_actions =
      detail::injective(a.num_actions(Side::eve), [&](int x) { return a.action_signal(Side::eve, x); }) &&
      detail::injective(a.num_actions(Side::adam), [&](int y) { return a.action_signal(Side::adam, y); });
  c.perfect_information =
      detail::injective(a.num_vertices(), [&](int v) { return a.vertex_signal(Side::eve, v); }) &&
      detail::injective(a.num_vertices(), [&](int v) { return a.vertex_signal(Side::adam, v); });
  if (c.perfect_information) {
    c.simple = true;
    for (VertexId q = 0; q < a.num_vertices() && c.simple; ++q) {
      auto d = detail::dependence(a, q);
      if (d.on_eve && d.on_adam) c.simple = false;
    }
  }
  return c;
}

/// The player whose action determines the move at `q` in a simple arena;
/// vertices whose transition ignores both actions are reported as Eve's.
inline Side controller(const Arena& a, VertexId q) {
  auto d = detail::dependence(a, q);
  return d.on_adam && !d.on_eve ? Side::adam : Side::eve;
}

struct PlayStep {
  ActionId eve = 0;
  ActionId adam = 0;
  VertexId next = 0;
};

struct PlayPrefix {
  VertexId start = 0;
  std::vector<PlayStep> steps;
};

/// Signals seen by `side` along the prefix: for each visited vertex its signal,
/// then the signal of that side's own action at that vertex. Undefined
/// observations contribute nothing.
inline std::vector<SignalId> observation_trace(const Arena& a, const PlayPrefix& prefix, Side side) {
  std::vector<SignalId> trace;
  VertexId cur = prefix.start;
  if (cur < 0 || cur >= a.num_vertices()) throw Error(ErrorKind::inconsistent_prefix, "start vertex out of range");
  auto push_vertex = [&](VertexId v) {
    if (auto s = a.vertex_signal(side, v)) trace.push_back(*s);
  };
  push_vertex(cur);
  for (const auto& st : prefix.steps) {
    if (st.eve < 0 || st.eve >= a.num_actions(Side::eve) || st.adam < 0 || st.adam >= a.num_actions(Side::adam) ||
        st.next < 0 || st.next >= a.num_vertices())
      throw Error(ErrorKind::inconsistent_prefix, "identifier out of range");
    if (!a.transition(cur, st.eve, st.adam).contains(st.next))
      throw Error(ErrorKind::inconsistent_prefix, "zero-probability move " + a.vertex_name(cur) + " -> " +
                                                      a.vertex_name(st.next));
    ActionId own = side == Side::eve ? st.eve : st.adam;
    if (auto s = a.action_signal(side, own)) trace.push_back(*s);
    cur = st.next;
    push_vertex(cur);
  }
  return trace;
}

}  // namespace randstrat
