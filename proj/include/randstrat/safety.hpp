#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "randstrat/arena.hpp"
#include "randstrat/condition.hpp"
#include "randstrat/pomdp.hpp"
#include "randstrat/strategy.hpp"

namespace randstrat {

using VertexSet = std::set<VertexId>;

namespace detail {

inline void require_absorbing(const Arena& arena, const VertexSet& bad) {
  for (VertexId v : bad)
    if (v < 0 || v >= arena.num_vertices()) throw Error(ErrorKind::unknown_identifier, "bad vertex out of range");
  if (!arena.is_closed(bad)) throw Error(ErrorKind::bad_not_absorbing, "bad vertices must be absorbing");
}

using Mask = std::vector<bool>;

/// q is in Apre(Y, X) if some nonempty set A of Adam actions, played with
/// full support, keeps every successor in Y and reaches X with positive
/// probability whatever Eve plays.
inline bool adam_pre(const Arena& arena, VertexId q, const Mask& y_set, const Mask& x_set) {
  const int nx = arena.num_actions(Side::eve), ny = arena.num_actions(Side::adam);
  // actions that stay in Y against every Eve action are the only candidates
  std::vector<ActionId> stay;
  for (ActionId y = 0; y < ny; ++y) {
    bool ok = true;
    for (ActionId x = 0; x < nx && ok; ++x) ok = support_within(arena.transition(q, x, y), y_set);
    if (ok) stay.push_back(y);
  }
  if (stay.empty()) return false;
  // the largest candidate set is best: adding actions only helps meeting X
  for (ActionId x = 0; x < nx; ++x) {
    bool meets = false;
    for (ActionId y : stay) meets = meets || support_meets(arena.transition(q, x, y), x_set);
    if (!meets) return false;
  }
  return true;
}

}  // namespace detail

/// Vertices from which Adam reaches `bad` almost surely whatever Eve does.
inline VertexSet adam_almost_sure_reach_region(const Arena& arena, const VertexSet& bad) {
  detail::require_absorbing(arena, bad);
  const auto n = static_cast<std::size_t>(arena.num_vertices());
  detail::Mask y(n, true);
  while (true) {
    detail::Mask x(n, false);
    for (VertexId b : bad) x[static_cast<std::size_t>(b)] = true;
    bool grew = true;
    while (grew) {
      grew = false;
      for (VertexId q = 0; q < static_cast<VertexId>(n); ++q)
        if (!x[static_cast<std::size_t>(q)] && y[static_cast<std::size_t>(q)] && detail::adam_pre(arena, q, y, x)) {
          x[static_cast<std::size_t>(q)] = true;
          grew = true;
        }
    }
    if (x == y) break;
    y = x;
  }
  VertexSet out;
  for (std::size_t q = 0; q < n; ++q)
    if (y[q]) out.insert(static_cast<VertexId>(q));
  return out;
}

/// Total preorder on vertices, lowest class first. `classes[0]` is Adam's
/// almost-sure region; every other vertex has a safe action.
struct PreorderClasses {
  std::vector<VertexSet> classes;
  std::map<VertexId, ActionId> safe_action;

  int class_of(VertexId v) const {
    for (std::size_t i = 0; i < classes.size(); ++i)
      if (classes[i].count(v)) return static_cast<int>(i);
    return -1;
  }
};

/// Checks the defining properties of a preorder for `bad`; returns a
/// description of the first violation.
inline std::optional<std::string> preorder_violation(const Arena& arena, const VertexSet& bad,
                                                     const PreorderClasses& p) {
  if (p.classes.empty()) return "no classes";
  if (p.classes[0] != adam_almost_sure_reach_region(arena, bad)) return "bottom class is not Adam's almost-sure region";
  const int nx = arena.num_actions(Side::eve), ny = arena.num_actions(Side::adam);
  std::vector<int> cls(static_cast<std::size_t>(arena.num_vertices()), -1);
  for (std::size_t i = 0; i < p.classes.size(); ++i)
    for (VertexId v : p.classes[i]) {
      if (cls[static_cast<std::size_t>(v)] >= 0) return "vertex " + arena.vertex_name(v) + " in two classes";
      cls[static_cast<std::size_t>(v)] = static_cast<int>(i);
    }
  for (VertexId v = 0; v < arena.num_vertices(); ++v)
    if (cls[static_cast<std::size_t>(v)] < 0) return "vertex " + arena.vertex_name(v) + " in no class";
  const int top = static_cast<int>(p.classes.size()) - 1;
  for (VertexId q = 0; q < arena.num_vertices(); ++q) {
    const int c = cls[static_cast<std::size_t>(q)];
    if (c == 0) continue;
    if (p.classes[static_cast<std::size_t>(c)].empty()) return "empty class";
    auto it = p.safe_action.find(q);
    if (it == p.safe_action.end()) return "no safe action at " + arena.vertex_name(q);
    for (ActionId y = 0; y < ny; ++y) {
      bool keeps = true;
      for (const auto& [r, w] : arena.transition(q, it->second, y))
        keeps = keeps && cls[static_cast<std::size_t>(r)] >= c;
      if (c == top && !keeps) return "safe action leaves the top class at " + arena.vertex_name(q);
      if (keeps) continue;
      bool escape = false;
      for (ActionId x = 0; x < nx && !escape; ++x)
        for (const auto& [r, w] : arena.transition(q, x, y)) escape = escape || cls[static_cast<std::size_t>(r)] > c;
      if (!escape) return "safe action condition fails at " + arena.vertex_name(q);
    }
  }
  return std::nullopt;
}

/// Builds the preorder by peeling classes from the top: each class is the
/// greatest set of remaining vertices that have an action which, against
/// every Adam action, either stays within the set and the classes above or
/// is matched by some Eve action reaching a class above.
inline PreorderClasses safety_preorder(const Arena& arena, const VertexSet& bad) {
  const VertexSet bottom = adam_almost_sure_reach_region(arena, bad);
  const auto n = static_cast<std::size_t>(arena.num_vertices());
  const int nx = arena.num_actions(Side::eve), ny = arena.num_actions(Side::adam);
  detail::Mask above(n, false), remaining(n, false);
  for (std::size_t v = 0; v < n; ++v) remaining[v] = !bottom.count(static_cast<VertexId>(v));
  std::vector<VertexSet> top_down;
  std::map<VertexId, ActionId> safe;
  auto safe_in = [&](VertexId q, const detail::Mask& s) -> std::optional<ActionId> {
    detail::Mask allowed(n);
    for (std::size_t v = 0; v < n; ++v) allowed[v] = s[v] || above[v];
    for (ActionId x = 0; x < nx; ++x) {
      bool ok = true;
      for (ActionId y = 0; y < ny && ok; ++y) {
        if (detail::support_within(arena.transition(q, x, y), allowed)) continue;
        bool escape = false;
        for (ActionId x2 = 0; x2 < nx && !escape; ++x2) escape = detail::support_meets(arena.transition(q, x2, y), above);
        ok = escape;
      }
      if (ok) return x;
    }
    return std::nullopt;
  };
  while (std::find(remaining.begin(), remaining.end(), true) != remaining.end()) {
    detail::Mask s = remaining;
    bool shrunk = true;
    while (shrunk) {
      shrunk = false;
      for (VertexId q = 0; q < static_cast<VertexId>(n); ++q)
        if (s[static_cast<std::size_t>(q)] && !safe_in(q, s)) {
          s[static_cast<std::size_t>(q)] = false;
          shrunk = true;
        }
    }
    VertexSet cls;
    for (VertexId q = 0; q < static_cast<VertexId>(n); ++q)
      if (s[static_cast<std::size_t>(q)]) {
        cls.insert(q);
        safe[q] = *safe_in(q, s);
      }
    if (cls.empty()) throw Error(ErrorKind::peeling_stuck, "remaining vertices admit no class");
    for (VertexId q : cls) {
      above[static_cast<std::size_t>(q)] = true;
      remaining[static_cast<std::size_t>(q)] = false;
    }
    top_down.push_back(std::move(cls));
  }
  PreorderClasses out;
  out.classes.push_back(bottom);
  out.classes.insert(out.classes.end(), top_down.rbegin(), top_down.rend());
  out.safe_action = std::move(safe);
  if (auto why = preorder_violation(arena, bad, out))
    throw Error(ErrorKind::peeling_stuck, "constructed preorder is inconsistent: " + *why);
  return out;
}

/// The two-mode positive strategy: in Sound Eve plays the safe action of the
/// current vertex, in Chance she plays uniformly; whenever the observed class
/// changes the mode is redrawn uniformly. The memory also records the class
/// last observed, so it has 2 * (number of classes) states.
inline Strategy sound_chance_strategy(const Arena& arena, const PreorderClasses& p) {
  const int ns = arena.num_signals(Side::eve), k = static_cast<int>(p.classes.size());
  std::vector<std::optional<int>> signal_class(static_cast<std::size_t>(ns));
  std::vector<std::optional<ActionId>> signal_safe(static_cast<std::size_t>(ns));
  for (VertexId v = 0; v < arena.num_vertices(); ++v) {
    auto sig = arena.vertex_signal(Side::eve, v);
    if (!sig) throw Error(ErrorKind::vertex_signal_insufficient, "vertex " + arena.vertex_name(v) + " sends Eve no signal");
    const int c = p.class_of(v);
    if (c < 0) throw Error(ErrorKind::precondition, "vertex " + arena.vertex_name(v) + " in no class");
    auto& sc = signal_class[static_cast<std::size_t>(*sig)];
    if (sc && *sc != c)
      throw Error(ErrorKind::vertex_signal_insufficient,
                  "signal '" + arena.signal_name(Side::eve, *sig) + "' does not determine the class");
    sc = c;
    if (c > 0) {
      auto& ss = signal_safe[static_cast<std::size_t>(*sig)];
      const ActionId a = p.safe_action.at(v);
      if (ss && *ss != a)
        throw Error(ErrorKind::vertex_signal_insufficient,
                    "signal '" + arena.signal_name(Side::eve, *sig) + "' does not determine the safe action");
      ss = a;
    }
  }
  for (ActionId x = 0; x < arena.num_actions(Side::eve); ++x)
    if (auto sig = arena.action_signal(Side::eve, x); sig && signal_class[static_cast<std::size_t>(*sig)])
      throw Error(ErrorKind::vertex_signal_insufficient,
                  "signal '" + arena.signal_name(Side::eve, *sig) + "' is sent by both a vertex and an action");

  std::vector<std::string> memory;
  for (int c = 0; c < k; ++c) {
    memory.push_back("Sound@" + std::to_string(c));
    memory.push_back("Chance@" + std::to_string(c));
  }
  auto sound = [](int c) { return 2 * c; };
  auto chance = [](int c) { return 2 * c + 1; };
  const auto uniform_actions = Distribution<ActionId>::uniform([&] {
    std::vector<ActionId> all;
    for (ActionId x = 0; x < arena.num_actions(Side::eve); ++x) all.push_back(x);
    return all;
  }());
  StrategyBuilder b(arena, Side::eve, memory);
  b.init(Distribution<MemoryId>::uniform({sound(0), chance(0)}));
  for (SignalId g = kBlank; g < ns; ++g) {
    const std::optional<int> c = g == kBlank ? std::nullopt : signal_class[static_cast<std::size_t>(g)];
    for (MemoryId m = 0; m < 2 * k; ++m) {
      const int cur = m / 2;
      if (!c || *c == cur)
        b.update(g, m, Distribution<MemoryId>::dirac(m));
      else
        b.update(g, m, Distribution<MemoryId>::uniform({sound(*c), chance(*c)}));
      const bool is_sound = m % 2 == 0;
      if (!is_sound) {
        b.act(g, m, uniform_actions);
      } else {
        const std::optional<ActionId> a = g == kBlank ? std::nullopt : signal_safe[static_cast<std::size_t>(g)];
        b.act(g, m, Distribution<ActionId>::dirac(a.value_or(0)));
      }
    }
  }
  return b.build(StrategyKind::general);
}

/// True iff no observation-based Adam strategy reaches `bad` almost surely
/// against `eve` from `start`.
inline bool verify_positive(const Arena& arena, const Strategy& eve, VertexId start, const VertexSet& bad) {
  detail::require_absorbing(arena, bad);
  return !pomdp_qualitative(arena, belief_support_mdp(arena, eve, start), bad, QualitativeQuestion::almost_sure_reach);
}

/// Vertices carrying one of `colours`; these must form an absorbing set
/// for the safety analysis.
inline VertexSet vertices_with_colours(const Arena& arena, ColourSet colours) {
  VertexSet out;
  for (VertexId v = 0; v < arena.num_vertices(); ++v)
    if (auto c = arena.colour(v); c && colours.contains(*c)) out.insert(v);
  return out;
}

}  // namespace randstrat
