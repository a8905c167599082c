#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "randstrat/arena.hpp"
#include "randstrat/strategy.hpp"

namespace randstrat {

namespace detail {

inline std::vector<SignalId> vertex_signals(const Arena& a, Side side) {
  std::set<SignalId> out;
  for (VertexId v = 0; v < a.num_vertices(); ++v)
    if (auto s = a.vertex_signal(side, v)) out.insert(*s);
  return {out.begin(), out.end()};
}

}  // namespace detail

/// Mixed strategy with the same play distribution as the behavioural
/// `strategy` for the first `horizon` steps, against any adversary.
///
/// In a synchronous arena the k-th decision happens right after the k-th
/// vertex signal, so every random draw is identified by (k, signal, memory).
/// Each pure component fixes one action for every such key and counts
/// observations to know k; its weight is the product of the probabilities of
/// the chosen actions. After the horizon the components play the first
/// action in the support.
inline Strategy behavioural_to_mixed(const Strategy& strategy, const Arena& arena, int horizon) {
  if (strategy.kind() != StrategyKind::behavioural && strategy.kind() != StrategyKind::pure)
    throw Error(ErrorKind::kind_violation, "expected a behavioural strategy");
  if (horizon < 1) throw Error(ErrorKind::precondition, "horizon must be positive");
  if (!classify(arena).synchronous)
    throw Error(ErrorKind::not_synchronous, "behavioural to mixed translation needs a synchronous arena");
  const Side side = strategy.side();
  const auto vsigs = detail::vertex_signals(arena, side);
  auto det = [](const Distribution<MemoryId>& d) { return d.front().first; };

  // keys (step, signal, memory) at which an action is drawn, by forward exploration
  using Key = std::tuple<int, SignalId, MemoryId>;
  std::vector<Key> keys;
  std::set<MemoryId> before{det(strategy.init())};
  for (int k = 0; k < horizon; ++k) {
    std::set<MemoryId> after;
    for (MemoryId m : before)
      for (SignalId g : vsigs) {
        const MemoryId m1 = det(strategy.update(g, m));
        keys.emplace_back(k, g, m1);
        for (const auto& [x, p] : strategy.act(g, m1)) {
          auto sig = arena.action_signal(side, x);
          after.insert(det(strategy.update(*sig, m1)));
        }
      }
    before = std::move(after);
  }
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());

  const int cap = 2 * horizon + 1;  // observation counts beyond the horizon are merged
  std::vector<std::string> memory;
  for (int o = 0; o <= cap; ++o)
    for (MemoryId m = 0; m < strategy.memory_size(); ++m)
      memory.push_back("o" + std::to_string(o) + ":" + strategy.memory_name(m));
  auto node = [&](int o, MemoryId m) { return o * strategy.memory_size() + m; };

  std::vector<std::pair<Rational, Strategy>> components;
  std::map<Key, ActionId> choice;
  auto build = [&](const Rational& weight) {
    StrategyBuilder b(arena, side, memory);
    b.init(Distribution<MemoryId>::dirac(node(0, det(strategy.init()))));
    for (int o = 0; o <= cap; ++o)
      for (MemoryId m = 0; m < strategy.memory_size(); ++m)
        for (SignalId g = kBlank; g < arena.num_signals(side); ++g) {
          const MemoryId mem = node(o, m);
          b.update(g, mem, Distribution<MemoryId>::dirac(
                               g == kBlank ? mem : node(std::min(o + 1, cap), det(strategy.update(g, m)))));
          ActionId x = strategy.act(g, m).front().first;
          if (o % 2 == 1 && o < cap) {
            auto it = choice.find(Key{(o - 1) / 2, g, m});
            if (it != choice.end()) x = it->second;
          }
          b.act(g, mem, Distribution<ActionId>::dirac(x));
        }
    components.emplace_back(weight, b.build(StrategyKind::pure));
  };
  auto enumerate = [&](auto&& self, std::size_t i, const Rational& weight) -> void {
    if (i == keys.size()) {
      build(weight);
      return;
    }
    const auto& [k, g, m] = keys[i];
    for (const auto& [x, p] : strategy.act(g, m)) {
      choice[keys[i]] = x;
      self(self, i + 1, weight * p);
    }
    choice.erase(keys[i]);
  };
  enumerate(enumerate, 0, Rational(1));
  return mixed_from_support(side, components);
}

/// Result of translating a mixed strategy into a behavioural one.
struct KuhnTranslation {
  Strategy strategy;
  /// Observation histories reached with probability zero, where the
  /// conditional action distribution is undefined and the first action is
  /// played instead.
  std::vector<std::vector<SignalId>> zero_probability_histories;
};

/// Behavioural strategy whose memory is the observation history (up to
/// `horizon` steps) and whose action after each history is the conditional
/// distribution of the mixed strategy's action given that history. Needs a
/// synchronous arena with observable actions, so that a history determines
/// the player's own past actions.
inline KuhnTranslation kuhn_translate(const Strategy& strategy, const Arena& arena, int horizon) {
  if (strategy.kind() != StrategyKind::mixed && strategy.kind() != StrategyKind::pure)
    throw Error(ErrorKind::kind_violation, "expected a mixed strategy");
  if (horizon < 1) throw Error(ErrorKind::precondition, "horizon must be positive");
  if (!classify(arena).observable_actions)
    throw Error(ErrorKind::not_observable_actions, "Kuhn translation needs observable actions");
  const Side side = strategy.side();
  const auto vsigs = detail::vertex_signals(arena, side);
  const int na = arena.num_actions(side);
  std::vector<SignalId> action_signal(static_cast<std::size_t>(na));
  for (ActionId x = 0; x < na; ++x) action_signal[static_cast<std::size_t>(x)] = *arena.action_signal(side, x);
  auto det = [](const Distribution<MemoryId>& d) { return d.front().first; };

  // a node stores, for every initial memory still consistent with the
  // history, its weight and the current memory
  struct Node {
    std::vector<SignalId> history;
    std::map<MemoryId, std::pair<Rational, MemoryId>> belief;
    std::map<SignalId, int> children;
    Distribution<ActionId> act;
  };
  std::vector<Node> nodes;
  const int off = 0;  // absorbs everything after the horizon or off the tree
  nodes.push_back(Node{{}, {}, {}, Distribution<ActionId>::dirac(0)});
  Node root{{}, {}, {}, Distribution<ActionId>::dirac(0)};
  for (const auto& [m, w] : strategy.init()) root.belief[m] = {w, m};
  nodes.push_back(root);
  std::vector<std::vector<SignalId>> zero;

  std::vector<int> frontier{1};
  for (int k = 0; k < horizon; ++k) {
    std::vector<int> next;
    for (int id : frontier)
      for (SignalId g : vsigs) {
        Node seen{nodes[static_cast<std::size_t>(id)].history, {}, {}, Distribution<ActionId>::dirac(0)};
        seen.history.push_back(g);
        Rational total(0);
        std::map<ActionId, Rational> acc;
        for (const auto& [m0, wm] : nodes[static_cast<std::size_t>(id)].belief) {
          const MemoryId m1 = det(strategy.update(g, wm.second));
          seen.belief[m0] = {wm.first, m1};
          total += wm.first;
          acc[strategy.act(g, m1).front().first] += wm.first;
        }
        if (total == 0) {
          zero.push_back(seen.history);
        } else {
          for (auto& [x, w] : acc) w /= total;
          seen.act = Distribution<ActionId>::from_map(std::move(acc));
        }
        const int seen_id = static_cast<int>(nodes.size());
        nodes[static_cast<std::size_t>(id)].children[g] = seen_id;
        nodes.push_back(seen);
        for (ActionId x = 0; x < na; ++x) {
          const SignalId sx = action_signal[static_cast<std::size_t>(x)];
          Node played{seen.history, {}, {}, Distribution<ActionId>::dirac(0)};
          played.history.push_back(sx);
          for (const auto& [m0, wm] : seen.belief) {
            const bool consistent = strategy.act(g, wm.second).front().first == x;
            played.belief[m0] = {consistent ? wm.first : Rational(0), det(strategy.update(sx, wm.second))};
          }
          const int played_id = static_cast<int>(nodes.size());
          nodes[static_cast<std::size_t>(seen_id)].children[sx] = played_id;
          nodes.push_back(std::move(played));
          if (k + 1 < horizon) next.push_back(played_id);
        }
      }
    frontier = std::move(next);
  }

  std::vector<std::string> memory;
  for (const auto& n : nodes) {
    if (&n == &nodes[static_cast<std::size_t>(off)]) {
      memory.push_back("off");
      continue;
    }
    std::string name = "h";
    for (SignalId g : n.history) name += "." + arena.signal_name(side, g);
    memory.push_back(name);
  }
  StrategyBuilder b(arena, side, memory);
  b.init(Distribution<MemoryId>::dirac(1));
  for (std::size_t id = 0; id < nodes.size(); ++id)
    for (SignalId g = kBlank; g < arena.num_signals(side); ++g) {
      auto it = nodes[id].children.find(g);
      const MemoryId to = g == kBlank ? static_cast<MemoryId>(id) : it == nodes[id].children.end() ? off : it->second;
      b.update(g, static_cast<MemoryId>(id), Distribution<MemoryId>::dirac(to));
      b.act(g, static_cast<MemoryId>(id), nodes[id].act);
    }
  return KuhnTranslation{b.build(StrategyKind::behavioural), std::move(zero)};
}

}  // namespace randstrat
