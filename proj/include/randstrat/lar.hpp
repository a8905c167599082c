#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "randstrat/arena.hpp"
#include "randstrat/condition.hpp"
#include "randstrat/parity.hpp"
#include "randstrat/strategy.hpp"

namespace randstrat {

/// Latest appearance record: colours ordered by most recent visit, and the
/// position (from 0) the last visited colour held before moving to the front.
struct LarState {
  std::vector<ColourId> order;
  int hit = 0;
  friend auto operator<=>(const LarState&, const LarState&) = default;
};

/// Moves `c` to the front of `order`; `hit` is its previous position.
inline LarState lar_visit(const std::vector<ColourId>& order, ColourId c) {
  auto it = std::find(order.begin(), order.end(), c);
  if (it == order.end()) throw Error(ErrorKind::precondition, "colour missing from the appearance record");
  LarState s{order, static_cast<int>(it - order.begin())};
  std::rotate(s.order.begin(), s.order.begin() + s.hit, s.order.begin() + s.hit + 1);
  return s;
}

/// Parity priority of a visit hitting position `hit` of `before`: the larger
/// the hit, the smaller the priority; even iff the colours up to and
/// including the hit form a set of `family`.
inline int lar_priority(const std::vector<ColourId>& before, int hit, const MullerFamily& family) {
  ColourSet prefix;
  for (int i = 0; i <= hit; ++i) prefix.insert(before[static_cast<std::size_t>(i)]);
  const int n = static_cast<int>(before.size());
  return 2 * (n - (hit + 1)) + (family.count(prefix) > 0 ? 0 : 1);
}

/// Parity game on arena vertices paired with appearance records. A visit
/// node (v, order before visiting v) carries the priority of the visit and
/// leads to the choice node (v, order after), where v's controller picks the
/// next vertex. Choice nodes have a neutral priority larger than every visit
/// priority.
struct LarProduct {
  struct Node {
    VertexId vertex = 0;
    std::vector<ColourId> order;
    bool choice = false;
  };
  std::vector<Node> nodes;
  ParityGame game;
  std::map<std::pair<VertexId, std::vector<ColourId>>, int> visit_index;
  std::map<std::pair<VertexId, std::vector<ColourId>>, int> choice_index;
  std::vector<ColourId> initial_order;

  int visit_node(VertexId v, const std::vector<ColourId>& order) const { return visit_index.at({v, order}); }
  int num_visit_nodes() const { return static_cast<int>(visit_index.size()); }
};

namespace detail {

inline void check_simple_muller_arena(const Arena& a) {
  if (!classify(a).simple) throw Error(ErrorKind::not_simple, "arena is not turn-based with perfect information");
  for (VertexId v = 0; v < a.num_vertices(); ++v) {
    if (!a.colour(v)) throw Error(ErrorKind::colouring_not_total, "vertex '" + a.vertex_name(v) + "' has no colour");
    for (ActionId x = 0; x < a.num_actions(Side::eve); ++x)
      for (ActionId y = 0; y < a.num_actions(Side::adam); ++y)
        if (a.transition(v, x, y).size() != 1)
          throw Error(ErrorKind::not_deterministic, "random move at vertex '" + a.vertex_name(v) + "'");
  }
}

/// Successor reached when v's controller plays `action`.
inline VertexId move_target(const Arena& a, VertexId v, ActionId action) {
  return controller(a, v) == Side::eve ? a.transition(v, action, 0).front().first
                                       : a.transition(v, 0, action).front().first;
}

}  // namespace detail

/// Product of a simple deterministic arena with the appearance record over
/// all its colours, from every vertex with the identity record.
inline LarProduct lar_reduction(const Arena& arena, const MullerFamily& family) {
  detail::check_simple_muller_arena(arena);
  LarProduct p;
  p.initial_order.resize(static_cast<std::size_t>(arena.num_colours()));
  std::iota(p.initial_order.begin(), p.initial_order.end(), 0);
  const int neutral = 2 * arena.num_colours();
  std::vector<int> work;
  auto add = [&](VertexId v, const std::vector<ColourId>& order, bool choice) {
    auto& index = choice ? p.choice_index : p.visit_index;
    auto [it, fresh] = index.emplace(std::make_pair(v, order), static_cast<int>(p.nodes.size()));
    if (fresh) {
      p.nodes.push_back({v, order, choice});
      work.push_back(it->second);
    }
    return it->second;
  };
  for (VertexId v = 0; v < arena.num_vertices(); ++v) add(v, p.initial_order, false);
  std::vector<std::vector<int>> succ;
  std::vector<int> prio;
  while (!work.empty()) {
    const int id = work.back();
    work.pop_back();
    const auto node = p.nodes[static_cast<std::size_t>(id)];
    std::vector<int> out;
    int priority = neutral;
    if (!node.choice) {
      const LarState after = lar_visit(node.order, *arena.colour(node.vertex));
      priority = lar_priority(node.order, after.hit, family);
      out.push_back(add(node.vertex, after.order, true));
    } else {
      const Side owner = controller(arena, node.vertex);
      for (ActionId x = 0; x < arena.num_actions(owner); ++x) {
        const int t = add(detail::move_target(arena, node.vertex, x), node.order, false);
        if (std::find(out.begin(), out.end(), t) == out.end()) out.push_back(t);
      }
    }
    if (succ.size() < p.nodes.size()) {
      succ.resize(p.nodes.size());
      prio.resize(p.nodes.size(), neutral);
    }
    succ[static_cast<std::size_t>(id)] = std::move(out);
    prio[static_cast<std::size_t>(id)] = priority;
  }
  succ.resize(p.nodes.size());
  prio.resize(p.nodes.size(), neutral);
  p.game.succ = std::move(succ);
  p.game.priority = std::move(prio);
  for (const auto& n : p.nodes) p.game.owner.push_back(n.choice ? controller(arena, n.vertex) : Side::eve);
  return p;
}

struct MullerSolution {
  std::vector<bool> eve_wins;
  /// Pure strategy whose memory is the appearance record after the latest
  /// visit; winning from every vertex of Eve's region.
  Strategy eve;
  int lar_states = 0;
};

/// Solves a simple deterministic Muller game through the appearance-record
/// parity game.
inline MullerSolution solve_simple_muller(const Arena& arena, const MullerFamily& family) {
  const LarProduct p = lar_reduction(arena, family);
  const ParitySolution sol = solve_parity(p.game);
  MullerSolution out;
  for (VertexId v = 0; v < arena.num_vertices(); ++v)
    out.eve_wins.push_back(sol.eve_wins[static_cast<std::size_t>(p.visit_node(v, p.initial_order))]);

  // memory: records reachable after a visit, plus the initial record
  std::map<std::vector<ColourId>, MemoryId> memory_of;
  std::vector<std::string> names;
  auto remember = [&](const std::vector<ColourId>& order) {
    auto [it, fresh] = memory_of.emplace(order, static_cast<MemoryId>(names.size()));
    if (fresh) {
      std::string name;
      for (ColourId c : order) name += (name.empty() ? "" : ">") + arena.colour_name(c);
      names.push_back(name);
    }
    return it->second;
  };
  std::vector<std::vector<ColourId>> order_of;
  auto close = [&](const std::vector<ColourId>& order) {
    if (memory_of.count(order)) return;
    remember(order);
    order_of.push_back(order);
  };
  close(p.initial_order);
  for (const auto& n : p.nodes)
    if (n.choice) close(n.order);
  // off-product observations must still land in a known record
  for (std::size_t i = 0; i < order_of.size(); ++i)
    for (VertexId v = 0; v < arena.num_vertices(); ++v) close(lar_visit(order_of[i], *arena.colour(v)).order);
  out.lar_states = static_cast<int>(names.size());
  std::vector<std::optional<VertexId>> vertex_of(static_cast<std::size_t>(arena.num_signals(Side::eve)));
  for (VertexId v = 0; v < arena.num_vertices(); ++v)
    vertex_of[static_cast<std::size_t>(*arena.vertex_signal(Side::eve, v))] = v;

  StrategyBuilder b(arena, Side::eve, names);
  b.init(Distribution<MemoryId>::dirac(0));
  for (MemoryId m = 0; m < static_cast<MemoryId>(names.size()); ++m)
    for (SignalId g = kBlank; g < arena.num_signals(Side::eve); ++g) {
      const auto v = g == kBlank ? std::nullopt : vertex_of[static_cast<std::size_t>(g)];
      if (!v) {
        b.update(g, m, Distribution<MemoryId>::dirac(m));
        b.act(g, m, Distribution<ActionId>::dirac(0));
        continue;
      }
      const auto after = lar_visit(order_of[static_cast<std::size_t>(m)], *arena.colour(*v)).order;
      b.update(g, m, Distribution<MemoryId>::dirac(remember(after)));
      // m is the record after visiting v: the choice node (v, m) decides
      ActionId x = 0;
      auto it = p.choice_index.find({*v, order_of[static_cast<std::size_t>(m)]});
      if (it != p.choice_index.end() && controller(arena, *v) == Side::eve) {
        const int target = sol.strategy[static_cast<std::size_t>(it->second)];
        if (target >= 0) {
          const VertexId w = p.nodes[static_cast<std::size_t>(target)].vertex;
          for (ActionId y = 0; y < arena.num_actions(Side::eve); ++y)
            if (detail::move_target(arena, *v, y) == w) {
              x = y;
              break;
            }
        }
      }
      b.act(g, m, Distribution<ActionId>::dirac(x));
    }
  out.eve = b.build(StrategyKind::pure);
  return out;
}

}  // namespace randstrat
