#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <queue>
#include <vector>

#include "randstrat/arena.hpp"
#include "randstrat/condition.hpp"
#include "randstrat/graph.hpp"
#include "randstrat/linalg.hpp"
#include "randstrat/strategy.hpp"

namespace randstrat {

struct ChainState {
  VertexId vertex = 0;
  ExecutionState eve;
  ExecutionState adam;

  friend auto operator<=>(const ChainState&, const ChainState&) = default;
};

/// Finite Markov chain obtained by fixing both players' strategies. A state
/// is the token position together with both execution states as they stand
/// before the vertex is observed.
struct ProductChain {
  std::vector<ChainState> states;
  Distribution<int> start;
  std::vector<Distribution<int>> step;

  int size() const { return static_cast<int>(states.size()); }

  Adjacency graph() const {
    Adjacency adj(states.size());
    for (std::size_t s = 0; s < states.size(); ++s)
      for (const auto& [t, w] : step[s]) adj[s].push_back(t);
    return adj;
  }
};

namespace detail {

inline Distribution<ExecutionState> deliver(const Strategy& s, const ExecutionState& e, std::optional<SignalId> sig) {
  return sig ? observe(s, e, *sig) : Distribution<ExecutionState>::dirac(e);
}

inline void check_players(const Arena& arena, const Strategy& eve, const Strategy& adam) {
  if (eve.side() != Side::eve || adam.side() != Side::adam)
    throw Error(ErrorKind::precondition, "strategies bound to the wrong sides");
  if (!(eve.alphabet() == Alphabet::of(arena, Side::eve)) || !(adam.alphabet() == Alphabet::of(arena, Side::adam)))
    throw Error(ErrorKind::precondition, "strategy alphabet does not match the arena");
}

}  // namespace detail

/// One round at vertex v: both players observe the vertex, draw actions,
/// observe their own action, then the token moves by the transition function.
inline Distribution<ChainState> chain_successors(const Arena& arena, const Strategy& eve, const Strategy& adam,
                                                 const ChainState& s) {
  std::map<ChainState, Rational> acc;
  const VertexId v = s.vertex;
  auto eve_seen = detail::deliver(eve, s.eve, arena.vertex_signal(Side::eve, v));
  auto adam_seen = detail::deliver(adam, s.adam, arena.vertex_signal(Side::adam, v));
  for (const auto& [e1, pe] : eve_seen)
    for (const auto& [a1, pa] : adam_seen)
      for (const auto& [x, px] : next_action(eve, e1))
        for (const auto& [y, py] : next_action(adam, a1)) {
          const Rational w = pe * pa * px * py;
          auto e2 = detail::deliver(eve, e1, arena.action_signal(Side::eve, x));
          auto a2 = detail::deliver(adam, a1, arena.action_signal(Side::adam, y));
          for (const auto& [r, pr] : arena.transition(v, x, y))
            for (const auto& [ee, pee] : e2)
              for (const auto& [aa, paa] : a2) acc[ChainState{r, ee, aa}] += w * pr * pee * paa;
        }
  return Distribution<ChainState>::from_map(std::move(acc));
}

inline ProductChain product_chain(const Arena& arena, const Strategy& eve, const Strategy& adam, VertexId start) {
  detail::check_players(arena, eve, adam);
  if (start < 0 || start >= arena.num_vertices()) throw Error(ErrorKind::unknown_identifier, "start vertex");
  ProductChain chain;
  std::map<ChainState, int> index;
  std::queue<int> work;
  auto intern = [&](const ChainState& s) {
    auto [it, fresh] = index.emplace(s, chain.size());
    if (fresh) {
      chain.states.push_back(s);
      work.push(it->second);
    }
    return it->second;
  };
  std::map<int, Rational> start_acc;
  for (const auto& [e, pe] : initial_states(eve))
    for (const auto& [a, pa] : initial_states(adam)) start_acc[intern(ChainState{start, e, a})] += pe * pa;
  chain.start = Distribution<int>::from_map(std::move(start_acc));
  while (!work.empty()) {
    int id = work.front();
    work.pop();
    auto succ = chain_successors(arena, eve, adam, chain.states[static_cast<std::size_t>(id)]);
    std::map<int, Rational> acc;
    for (const auto& [t, w] : succ) acc[intern(t)] += w;
    if (chain.step.size() <= static_cast<std::size_t>(id)) chain.step.resize(static_cast<std::size_t>(id) + 1);
    chain.step[static_cast<std::size_t>(id)] = Distribution<int>::from_map(std::move(acc));
  }
  chain.step.resize(chain.states.size());
  return chain;
}

/// Exact probability, from every state, of eventually visiting a marked state.
inline std::vector<Rational> reach_probabilities(const ProductChain& chain, const std::vector<bool>& target) {
  const std::size_t n = chain.states.size();
  Adjacency adj = chain.graph();
  std::vector<bool> can_reach = backward_reach(adj, target);
  std::vector<bool> zero(n);
  for (std::size_t s = 0; s < n; ++s) zero[s] = !can_reach[s];
  // states that may wander into a zero state before hitting the target
  std::vector<bool> leaky = backward_reach(adj, zero, [&](int s) { return !target[static_cast<std::size_t>(s)]; });
  std::vector<Rational> x(n, Rational(0));
  std::vector<int> unknown, pos(n, -1);
  for (std::size_t s = 0; s < n; ++s) {
    if (target[s] || !leaky[s])
      x[s] = 1;
    else if (!zero[s]) {
      pos[s] = static_cast<int>(unknown.size());
      unknown.push_back(static_cast<int>(s));
    }
  }
  if (unknown.empty()) return x;
  std::vector<SparseRow> a(unknown.size());
  std::vector<Rational> b(unknown.size(), Rational(0));
  for (std::size_t i = 0; i < unknown.size(); ++i) {
    const int s = unknown[i];
    a[i][static_cast<int>(i)] += 1;
    for (const auto& [t, w] : chain.step[static_cast<std::size_t>(s)]) {
      if (pos[t] >= 0)
        a[i][pos[t]] -= w;
      else
        b[i] += w * x[t];
    }
    for (auto it = a[i].begin(); it != a[i].end();) it = it->second == 0 ? a[i].erase(it) : std::next(it);
  }
  auto sol = solve_exact(std::move(a), std::move(b));
  for (std::size_t i = 0; i < unknown.size(); ++i) x[static_cast<std::size_t>(unknown[i])] = sol[i];
  return x;
}

inline ColourSet state_colours(const Arena& arena, const ProductChain& chain, const std::vector<int>& states) {
  ColourSet set;
  for (int s : states)
    if (auto c = arena.colour(chain.states[static_cast<std::size_t>(s)].vertex)) set.insert(*c);
  return set;
}

/// Bottom strongly connected components of the chain.
inline std::vector<std::vector<int>> bottom_components(const ProductChain& chain) {
  auto scc = strongly_connected_components(chain.graph());
  std::vector<std::vector<int>> out;
  for (std::size_t c = 0; c < scc.members.size(); ++c) {
    bool bottom = true;
    for (int s : scc.members[c])
      for (const auto& [t, w] : chain.step[static_cast<std::size_t>(s)])
        if (scc.component[static_cast<std::size_t>(t)] != static_cast<int>(c)) bottom = false;
    if (bottom) out.push_back(scc.members[c]);
  }
  return out;
}

/// Per-state probability that the play from that state satisfies `cond`.
inline std::vector<Rational> state_probabilities(const Arena& arena, const ProductChain& chain,
                                                 const Condition& cond) {
  const std::size_t n = chain.states.size();
  auto marked_by = [&](ColourSet colours) {
    std::vector<bool> m(n, false);
    for (std::size_t s = 0; s < n; ++s)
      if (auto c = arena.colour(chain.states[s].vertex)) m[s] = colours.contains(*c);
    return m;
  };
  if (auto r = std::get_if<Reach>(&cond)) return reach_probabilities(chain, marked_by(r->target));
  if (auto sf = std::get_if<Safety>(&cond)) {
    auto x = reach_probabilities(chain, marked_by(sf->bad));
    for (auto& v : x) v = 1 - v;
    return x;
  }
  std::vector<bool> good(n, false);
  for (const auto& comp : bottom_components(chain)) {
    ColourSet inf = state_colours(arena, chain, comp);
    if (inf_set_verdict(cond, inf, inf))
      for (int s : comp) good[static_cast<std::size_t>(s)] = true;
  }
  return reach_probabilities(chain, good);
}

/// Probability, under the chain's initial distribution, that the play
/// satisfies `cond`.
inline Rational chain_probability(const Arena& arena, const ProductChain& chain, const Condition& cond) {
  auto x = state_probabilities(arena, chain, cond);
  Rational p(0);
  for (const auto& [s, w] : chain.start) p += w * x[static_cast<std::size_t>(s)];
  return p;
}

/// Probability of every cylinder (vertex prefix) of length 1..max_length that
/// has positive probability.
inline std::map<std::vector<VertexId>, Rational> cylinder_probabilities(const ProductChain& chain,
                                                                       std::size_t max_length) {
  std::map<std::vector<VertexId>, Rational> out;
  std::map<std::vector<VertexId>, std::map<int, Rational>> layer;
  for (const auto& [s, w] : chain.start)
    layer[{chain.states[static_cast<std::size_t>(s)].vertex}][s] += w;
  for (std::size_t len = 1; len <= max_length && !layer.empty(); ++len) {
    std::map<std::vector<VertexId>, std::map<int, Rational>> next;
    for (const auto& [prefix, mass] : layer) {
      Rational total(0);
      for (const auto& [s, w] : mass) total += w;
      out[prefix] = total;
      if (len == max_length) continue;
      for (const auto& [s, w] : mass)
        for (const auto& [t, p] : chain.step[static_cast<std::size_t>(s)]) {
          auto ext = prefix;
          ext.push_back(chain.states[static_cast<std::size_t>(t)].vertex);
          next[ext][t] += w * p;
        }
    }
    layer = std::move(next);
  }
  return out;
}

}  // namespace randstrat
