#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>
#include <vector>

#include "randstrat/arena.hpp"
#include "randstrat/condition.hpp"
#include "randstrat/graph.hpp"
#include "randstrat/strategy.hpp"

namespace randstrat {

/// Markov decision process left for the free player once the other side's
/// strategy is fixed. A state is the token position together with the fixed
/// player's execution state after it has observed that vertex, so the free
/// player is assumed to see the fixed player's memory.
struct AdversarialProduct {
  struct State {
    VertexId vertex = 0;
    ExecutionState fixed;
    friend auto operator<=>(const State&, const State&) = default;
  };

  std::vector<State> states;
  Side controller = Side::adam;
  Distribution<int> start;
  std::vector<std::vector<Distribution<int>>> moves;  // [state][free action]

  int size() const { return static_cast<int>(states.size()); }
  int num_actions() const { return moves.empty() ? 0 : static_cast<int>(moves.front().size()); }

  Adjacency graph() const {
    Adjacency adj(states.size());
    for (std::size_t s = 0; s < states.size(); ++s) {
      std::vector<int> succ;
      for (const auto& d : moves[s])
        for (const auto& [t, w] : d) succ.push_back(t);
      std::sort(succ.begin(), succ.end());
      succ.erase(std::unique(succ.begin(), succ.end()), succ.end());
      adj[s] = std::move(succ);
    }
    return adj;
  }
};

inline AdversarialProduct best_response_product(const Arena& arena, const Strategy& fixed, VertexId start) {
  const Side side = fixed.side();
  if (!(fixed.alphabet() == Alphabet::of(arena, side)))
    throw Error(ErrorKind::precondition, "strategy alphabet does not match the arena");
  if (start < 0 || start >= arena.num_vertices()) throw Error(ErrorKind::unknown_identifier, "start vertex");
  using State = AdversarialProduct::State;
  AdversarialProduct p;
  p.controller = opponent(side);
  std::map<State, int> index;
  std::queue<int> work;
  auto intern = [&](const State& s) {
    auto [it, fresh] = index.emplace(s, p.size());
    if (fresh) {
      p.states.push_back(s);
      work.push(it->second);
    }
    return it->second;
  };
  auto arrive = [&](VertexId v, const ExecutionState& e, const Rational& w, std::map<int, Rational>& acc) {
    auto sig = arena.vertex_signal(side, v);
    if (!sig) {
      acc[intern(State{v, e})] += w;
      return;
    }
    for (const auto& [e2, pe] : observe(fixed, e, *sig)) acc[intern(State{v, e2})] += w * pe;
  };
  std::map<int, Rational> start_acc;
  for (const auto& [e, w] : initial_states(fixed)) arrive(start, e, w, start_acc);
  p.start = Distribution<int>::from_map(std::move(start_acc));
  const int free_actions = arena.num_actions(p.controller);
  while (!work.empty()) {
    const int id = work.front();
    work.pop();
    const State cur = p.states[static_cast<std::size_t>(id)];
    std::vector<Distribution<int>> row;
    for (ActionId a = 0; a < free_actions; ++a) {
      std::map<int, Rational> acc;
      for (const auto& [x, px] : next_action(fixed, cur.fixed)) {
        auto sig = arena.action_signal(side, x);
        auto after = sig ? observe(fixed, cur.fixed, *sig) : Distribution<ExecutionState>::dirac(cur.fixed);
        const auto& moves = side == Side::eve ? arena.transition(cur.vertex, x, a) : arena.transition(cur.vertex, a, x);
        for (const auto& [e, pe] : after)
          for (const auto& [r, pr] : moves) arrive(r, e, px * pe * pr, acc);
      }
      row.push_back(Distribution<int>::from_map(std::move(acc)));
    }
    if (p.moves.size() <= static_cast<std::size_t>(id)) p.moves.resize(static_cast<std::size_t>(id) + 1);
    p.moves[static_cast<std::size_t>(id)] = std::move(row);
  }
  p.moves.resize(p.states.size());
  return p;
}

enum class Optimise { max, min };

/// Optimal values per state. `one` and `zero` are the states whose value is
/// exactly 1 or 0, decided on the graph; the remaining entries of `value`
/// come from value iteration.
struct MdpValues {
  std::vector<double> value;
  std::vector<bool> one;
  std::vector<bool> zero;
  long iterations = 0;
};

namespace detail {

/// States with a choice reaching `target` with probability 1: the greatest Z
/// such that Z equals the states that can move towards the target while
/// every used action keeps its support in Z.
inline std::vector<bool> almost_sure_reach_max(const AdversarialProduct& p, const std::vector<bool>& target) {
  const std::size_t n = p.states.size();
  std::vector<bool> z(n, true);
  while (true) {
    std::vector<bool> x = target;
    bool grew = true;
    while (grew) {
      grew = false;
      for (std::size_t s = 0; s < n; ++s) {
        if (x[s] || !z[s]) continue;
        for (const auto& d : p.moves[s])
          if (support_within(d, z) && support_meets(d, x)) {
            x[s] = true;
            grew = true;
            break;
          }
      }
    }
    if (x == z) return z;
    z = x;
  }
}

/// States from which every choice reaches `target` with positive probability.
inline std::vector<bool> positive_reach_all(const AdversarialProduct& p, const std::vector<bool>& target) {
  const std::size_t n = p.states.size();
  std::vector<bool> x = target;
  bool grew = true;
  while (grew) {
    grew = false;
    for (std::size_t s = 0; s < n; ++s) {
      if (x[s]) continue;
      bool all = !p.moves[s].empty();
      for (const auto& d : p.moves[s])
        if (!support_meets(d, x)) {
          all = false;
          break;
        }
      if (all) {
        x[s] = true;
        grew = true;
      }
    }
  }
  return x;
}

inline MdpValues reach_values(const AdversarialProduct& p, const std::vector<bool>& target, Optimise mode) {
  const std::size_t n = p.states.size();
  const Adjacency adj = p.graph();
  MdpValues out;
  if (mode == Optimise::max) {
    auto reach = backward_reach(adj, target);
    out.zero.assign(n, false);
    for (std::size_t s = 0; s < n; ++s) out.zero[s] = !reach[s];
    out.one = almost_sure_reach_max(p, target);
  } else {
    auto positive = positive_reach_all(p, target);
    out.zero.assign(n, false);
    for (std::size_t s = 0; s < n; ++s) out.zero[s] = !positive[s];
    // the chooser can avoid the target with positive probability iff it can
    // reach a value-0 state without passing through the target
    auto leak = backward_reach(adj, out.zero, [&](int s) { return !target[static_cast<std::size_t>(s)]; });
    out.one.assign(n, false);
    for (std::size_t s = 0; s < n; ++s) out.one[s] = target[s] || !leak[s];
  }
  out.value.assign(n, 0.0);
  std::vector<int> unknown;
  for (std::size_t s = 0; s < n; ++s) {
    if (out.one[s])
      out.value[s] = 1.0;
    else if (!out.zero[s])
      unknown.push_back(static_cast<int>(s));
  }
  std::vector<std::vector<std::vector<std::pair<int, double>>>> moves(n);
  for (int s : unknown)
    for (const auto& d : p.moves[static_cast<std::size_t>(s)]) {
      std::vector<std::pair<int, double>> row;
      for (const auto& [t, w] : d) row.emplace_back(t, w.get_d());
      moves[static_cast<std::size_t>(s)].push_back(std::move(row));
    }
  constexpr double kTolerance = 1e-12;
  constexpr long kMaxIterations = 1'000'000;
  for (out.iterations = 0; out.iterations < kMaxIterations && !unknown.empty(); ++out.iterations) {
    double delta = 0.0;
    for (int s : unknown) {
      double best = mode == Optimise::max ? 0.0 : 1.0;
      for (const auto& row : moves[static_cast<std::size_t>(s)]) {
        double v = 0.0;
        for (const auto& [t, w] : row) v += w * out.value[static_cast<std::size_t>(t)];
        best = mode == Optimise::max ? std::max(best, v) : std::min(best, v);
      }
      delta = std::max(delta, std::abs(best - out.value[static_cast<std::size_t>(s)]));
      out.value[static_cast<std::size_t>(s)] = best;
    }
    if (delta < kTolerance) break;
  }
  return out;
}

inline MdpValues complement(MdpValues v) {
  for (auto& x : v.value) x = 1.0 - x;
  std::swap(v.one, v.zero);
  return v;
}

}  // namespace detail

/// Maximal end components among `allowed` states. Each returned component
/// is a set of states in which the chooser can stay forever and visit every
/// state infinitely often.
inline std::vector<std::vector<int>> maximal_end_components(const AdversarialProduct& p,
                                                            const std::vector<bool>& allowed) {
  const std::size_t n = p.states.size();
  std::vector<bool> alive = allowed;
  std::vector<std::vector<bool>> action_ok(n);
  for (std::size_t s = 0; s < n; ++s) action_ok[s].assign(p.moves[s].size(), true);
  while (true) {
    Adjacency adj(n);
    for (std::size_t s = 0; s < n; ++s) {
      if (!alive[s]) continue;
      for (std::size_t a = 0; a < p.moves[s].size(); ++a) {
        if (!action_ok[s][a]) continue;
        for (const auto& [t, w] : p.moves[s][a])
          if (alive[static_cast<std::size_t>(t)]) adj[s].push_back(t);
      }
    }
    auto scc = strongly_connected_components(adj);
    bool changed = false;
    for (std::size_t s = 0; s < n; ++s) {
      if (!alive[s]) continue;
      bool any = false;
      for (std::size_t a = 0; a < p.moves[s].size(); ++a) {
        if (!action_ok[s][a]) continue;
        for (const auto& [t, w] : p.moves[s][a])
          if (!alive[static_cast<std::size_t>(t)] || scc.component[static_cast<std::size_t>(t)] != scc.component[s]) {
            action_ok[s][a] = false;
            changed = true;
            break;
          }
        any = any || action_ok[s][a];
      }
      if (!any) {
        alive[s] = false;
        changed = true;
      }
    }
    if (changed) continue;
    std::map<int, std::vector<int>> groups;
    for (std::size_t s = 0; s < n; ++s)
      if (alive[s]) groups[scc.component[s]].push_back(static_cast<int>(s));
    std::vector<std::vector<int>> out;
    for (auto& [c, members] : groups) out.push_back(std::move(members));
    return out;
  }
}

/// Optimal value of `cond` for the free player (`max`) or the worst value
/// the free player can force on the objective (`min`).
inline MdpValues mdp_optimal(const Arena& arena, const AdversarialProduct& p, const Condition& cond, Optimise mode) {
  const std::size_t n = p.states.size();
  auto marked = [&](ColourSet colours) {
    std::vector<bool> m(n, false);
    for (std::size_t s = 0; s < n; ++s)
      if (auto c = arena.colour(p.states[s].vertex)) m[s] = colours.contains(*c);
    return m;
  };
  const Optimise other = mode == Optimise::max ? Optimise::min : Optimise::max;
  // states lying in an end component that meets `target`, or one avoiding `bad`
  auto winning_ecs = [&](const std::vector<bool>& allowed, const std::vector<bool>& needed) {
    std::vector<bool> win(n, false);
    for (const auto& mec : maximal_end_components(p, allowed)) {
      bool good = false;
      for (int s : mec) good = good || needed[static_cast<std::size_t>(s)];
      if (good)
        for (int s : mec) win[static_cast<std::size_t>(s)] = true;
    }
    return win;
  };
  auto buchi_max = [&](ColourSet target) {
    return detail::reach_values(p, winning_ecs(std::vector<bool>(n, true), marked(target)), Optimise::max);
  };
  auto cobuchi_max = [&](ColourSet bad) {
    auto b = marked(bad);
    std::vector<bool> allowed(n);
    for (std::size_t s = 0; s < n; ++s) allowed[s] = !b[s];
    return detail::reach_values(p, winning_ecs(allowed, allowed), Optimise::max);
  };
  if (auto r = std::get_if<Reach>(&cond)) return detail::reach_values(p, marked(r->target), mode);
  if (auto s = std::get_if<Safety>(&cond)) return detail::complement(detail::reach_values(p, marked(s->bad), other));
  if (auto b = std::get_if<Buchi>(&cond))
    return mode == Optimise::max ? buchi_max(b->target) : detail::complement(cobuchi_max(b->target));
  if (auto c = std::get_if<CoBuchi>(&cond))
    return mode == Optimise::max ? cobuchi_max(c->bad) : detail::complement(buchi_max(c->bad));
  throw Error(ErrorKind::unsupported_condition, "MDP analysis covers reach, safety, Buchi and co-Buchi only");
}

/// Value under the product's initial distribution.
inline double start_value(const AdversarialProduct& p, const MdpValues& v) {
  double total = 0.0;
  for (const auto& [s, w] : p.start) total += w.get_d() * v.value[static_cast<std::size_t>(s)];
  return total;
}

}  // namespace randstrat
