#pragma once

#include <string>
#include <vector>

#include "randstrat/strategy.hpp"

namespace randstrat {

inline std::vector<ActionId> all_actions(const Arena& a, Side side) {
  std::vector<ActionId> out;
  for (ActionId x = 0; x < a.num_actions(side); ++x) out.push_back(x);
  return out;
}

/// Memoryless behavioural strategy drawing uniformly among all actions at
/// every step.
inline Strategy uniform_behavioural(const Arena& a, Side side) {
  StrategyBuilder b(a, side, {"m"});
  b.init(Distribution<MemoryId>::dirac(0)).identity_update().act_all(0, Distribution<ActionId>::uniform(all_actions(a, side)));
  return b.build(StrategyKind::behavioural);
}

/// Memoryless pure strategy always playing `action`.
inline Strategy constant_action(const Arena& a, Side side, ActionId action) {
  StrategyBuilder b(a, side, {"m"});
  b.init(Distribution<MemoryId>::dirac(0)).identity_update().act_all(0, Distribution<ActionId>::dirac(action));
  return b.build(StrategyKind::pure);
}

namespace detail {

inline std::vector<bool> vertex_signal_mask(const Arena& a, Side side) {
  std::vector<bool> is_vertex(static_cast<std::size_t>(a.num_signals(side)), false);
  for (VertexId v = 0; v < a.num_vertices(); ++v)
    if (auto s = a.vertex_signal(side, v)) is_vertex[static_cast<std::size_t>(*s)] = true;
  for (ActionId x = 0; x < a.num_actions(side); ++x)
    if (auto s = a.action_signal(side, x); s && is_vertex[static_cast<std::size_t>(*s)])
      throw Error(ErrorKind::precondition, "signal '" + a.signal_name(side, *s) + "' is both a vertex and an action signal");
  return is_vertex;
}

}  // namespace detail

/// Pure strategy counting vertex observations: plays `at_step` at step `t`
/// (the t-th vertex observed, counting from 1) and `otherwise` elsewhere.
inline Strategy act_at_step(const Arena& a, Side side, int t, ActionId at_step, ActionId otherwise) {
  if (t < 1) throw Error(ErrorKind::precondition, "step index starts at 1");
  auto is_vertex = detail::vertex_signal_mask(a, side);
  std::vector<std::string> memory;
  for (int k = 0; k <= t + 1; ++k) memory.push_back("seen" + std::to_string(k));
  const MemoryId last = t + 1;
  StrategyBuilder b(a, side, memory);
  b.init(Distribution<MemoryId>::dirac(0));
  for (MemoryId m = 0; m <= last; ++m)
    for (SignalId g = kBlank; g < a.num_signals(side); ++g) {
      const bool counts = g != kBlank && is_vertex[static_cast<std::size_t>(g)];
      b.update(g, m, Distribution<MemoryId>::dirac(counts ? std::min(m + 1, last) : m));
      b.act(g, m, Distribution<ActionId>::dirac(m == t ? at_step : otherwise));
    }
  return b.build(StrategyKind::pure);
}

/// The general strategy with memory {a,b} x {even,odd} for the "who wins"
/// arena: from an even state the next vertex observation moves to a uniformly
/// drawn odd state, from an odd state to the even state of the same letter;
/// the action played is the letter of the memory state.
inline Strategy four_memory_who_wins(const Arena& a) {
  const ActionId xa = a.find_action(Side::eve, "a"), xb = a.find_action(Side::eve, "b");
  auto is_vertex = detail::vertex_signal_mask(a, Side::eve);
  enum : MemoryId { a_even, a_odd, b_even, b_odd };
  StrategyBuilder b(a, Side::eve, {"a_even", "a_odd", "b_even", "b_odd"});
  b.init(Distribution<MemoryId>::dirac(a_even));
  const auto to_odd = Distribution<MemoryId>::uniform({a_odd, b_odd});
  for (SignalId g = kBlank; g < a.num_signals(Side::eve); ++g) {
    const bool vertex = g != kBlank && is_vertex[static_cast<std::size_t>(g)];
    for (MemoryId m : {a_even, a_odd, b_even, b_odd}) {
      Distribution<MemoryId> next = Distribution<MemoryId>::dirac(m);
      if (vertex) {
        if (m == a_even || m == b_even)
          next = to_odd;
        else
          next = Distribution<MemoryId>::dirac(m == a_odd ? a_even : b_even);
      }
      b.update(g, m, next);
      b.act(g, m, Distribution<ActionId>::dirac(m == a_even || m == a_odd ? xa : xb));
    }
  }
  return b.build(StrategyKind::general);
}

/// Adam's answer to a behavioural Eve on the "who wins" arena whose
/// observations carry no information: Adam replays Eve's deterministic memory
/// from his own observations (his vertex signal arrives with hers, his action
/// signal with hers) and, at `init`, plays A with probability 1-p and B with
/// probability p, where p is Eve's probability of playing a.
inline Strategy mirror_counter_who_wins(const Arena& arena, const Strategy& eve) {
  if (eve.side() != Side::eve || eve.kind() == StrategyKind::mixed || eve.kind() == StrategyKind::general)
    throw Error(ErrorKind::precondition, "mirror counter needs a pure or behavioural Eve strategy");
  const SignalId eve_vertex = *arena.vertex_signal(Side::eve, 0);
  const SignalId eve_action = *arena.action_signal(Side::eve, 0);
  for (VertexId v = 0; v < arena.num_vertices(); ++v)
    if (arena.vertex_signal(Side::eve, v) != eve_vertex)
      throw Error(ErrorKind::precondition, "Eve's vertex signal is not constant");
  for (ActionId x = 0; x < arena.num_actions(Side::eve); ++x)
    if (arena.action_signal(Side::eve, x) != eve_action)
      throw Error(ErrorKind::precondition, "Eve's action signal is not constant");
  auto is_vertex = detail::vertex_signal_mask(arena, Side::adam);
  const ActionId xa = arena.find_action(Side::eve, "a");
  const ActionId ya = arena.find_action(Side::adam, "A"), yb = arena.find_action(Side::adam, "B");
  const SignalId at_init = *arena.vertex_signal(Side::adam, arena.find_vertex("init"));
  StrategyBuilder b(arena, Side::adam, eve.memory_names());
  b.init(eve.init());
  for (MemoryId m = 0; m < eve.memory_size(); ++m)
    for (SignalId g = kBlank; g < arena.num_signals(Side::adam); ++g) {
      if (g == kBlank)
        b.update(g, m, Distribution<MemoryId>::dirac(m));
      else
        b.update(g, m, eve.update(is_vertex[static_cast<std::size_t>(g)] ? eve_vertex : eve_action, m));
      if (g == at_init) {
        const Rational p = eve.act(eve_vertex, m).weight(xa);
        std::map<ActionId, Rational> d{{ya, 1 - p}, {yb, p}};
        b.act(g, m, Distribution<ActionId>::from_map(std::move(d)));
      } else {
        b.act(g, m, Distribution<ActionId>::dirac(ya));
      }
    }
  return b.build(StrategyKind::behavioural);
}

}  // namespace randstrat
