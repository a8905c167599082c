#pragma once

#include <algorithm>
#include <vector>

#include "randstrat/arena.hpp"
#include "randstrat/error.hpp"
#include "randstrat/graph.hpp"

namespace randstrat {

/// Turn-based deterministic parity game: the smallest priority seen
/// infinitely often decides, even for Eve.
struct ParityGame {
  std::vector<Side> owner;
  std::vector<int> priority;
  Adjacency succ;

  int size() const { return static_cast<int>(owner.size()); }
};

struct ParitySolution {
  std::vector<bool> eve_wins;
  /// Winning successor for every vertex owned by the winner of its region;
  /// -1 for vertices owned by the loser.
  std::vector<int> strategy;
};

namespace detail {

inline void check_parity_game(const ParityGame& g) {
  const std::size_t n = g.owner.size();
  if (g.priority.size() != n || g.succ.size() != n)
    throw Error(ErrorKind::precondition, "parity game tables differ in length");
  for (std::size_t v = 0; v < n; ++v) {
    if (g.priority[v] < 0) throw Error(ErrorKind::precondition, "negative priority");
    if (g.succ[v].empty()) throw Error(ErrorKind::precondition, "parity game vertex without successor");
    for (int w : g.succ[v])
      if (w < 0 || static_cast<std::size_t>(w) >= n) throw Error(ErrorKind::precondition, "successor out of range");
  }
}

/// Attractor of `player` to `target` inside `alive`; records in `strategy`
/// an attracting successor for the player's vertices added on the way.
inline std::vector<bool> attractor(const ParityGame& g, const std::vector<bool>& alive, const std::vector<bool>& target,
                                   Side player, std::vector<int>& strategy) {
  const std::size_t n = g.owner.size();
  Adjacency pred(n);
  std::vector<int> escapes(n, 0);
  for (std::size_t v = 0; v < n; ++v) {
    if (!alive[v]) continue;
    for (int w : g.succ[v])
      if (alive[static_cast<std::size_t>(w)]) {
        pred[static_cast<std::size_t>(w)].push_back(static_cast<int>(v));
        ++escapes[v];
      }
  }
  std::vector<bool> in(n, false);
  std::vector<int> work;
  for (std::size_t v = 0; v < n; ++v)
    if (alive[v] && target[v]) {
      in[v] = true;
      work.push_back(static_cast<int>(v));
    }
  while (!work.empty()) {
    const int w = work.back();
    work.pop_back();
    for (int v : pred[static_cast<std::size_t>(w)]) {
      const auto vi = static_cast<std::size_t>(v);
      if (in[vi]) continue;
      if (g.owner[vi] == player) {
        in[vi] = true;
        strategy[vi] = w;
        work.push_back(v);
      } else if (--escapes[vi] == 0) {
        in[vi] = true;
        work.push_back(v);
      }
    }
  }
  return in;
}

/// Recursive solver on the subgame `alive`; fills `eve` and `strategy` for
/// the alive vertices.
inline void solve_parity_rec(const ParityGame& g, const std::vector<bool>& alive, std::vector<bool>& eve,
                             std::vector<int>& strategy) {
  const std::size_t n = g.owner.size();
  int p = -1;
  for (std::size_t v = 0; v < n; ++v)
    if (alive[v] && (p < 0 || g.priority[v] < p)) p = g.priority[v];
  if (p < 0) return;
  const Side i = p % 2 == 0 ? Side::eve : Side::adam;
  auto wins_i = [&](std::size_t v) { return eve[v] == (i == Side::eve); };

  std::vector<bool> top(n, false);
  for (std::size_t v = 0; v < n; ++v) top[v] = alive[v] && g.priority[v] == p;
  std::vector<int> attr_strategy(n, -1);
  const auto attr = attractor(g, alive, top, i, attr_strategy);
  std::vector<bool> rest(n);
  for (std::size_t v = 0; v < n; ++v) rest[v] = alive[v] && !attr[v];
  solve_parity_rec(g, rest, eve, strategy);

  std::vector<bool> lost(n, false);
  bool any_lost = false;
  for (std::size_t v = 0; v < n; ++v)
    if (rest[v] && !wins_i(v)) lost[v] = any_lost = true;

  if (!any_lost) {
    for (std::size_t v = 0; v < n; ++v) {
      if (!attr[v]) continue;
      eve[v] = i == Side::eve;
      if (g.owner[v] != i) {
        strategy[v] = -1;
      } else if (top[v]) {
        strategy[v] = -1;
        for (int w : g.succ[v])
          if (alive[static_cast<std::size_t>(w)]) {
            strategy[v] = w;
            break;
          }
      } else {
        strategy[v] = attr_strategy[v];
      }
    }
    return;
  }
  const Side j = opponent(i);
  std::vector<int> back_strategy(n, -1);
  const auto back = attractor(g, alive, lost, j, back_strategy);
  for (std::size_t v = 0; v < n; ++v) {
    if (!back[v] || lost[v]) continue;
    eve[v] = j == Side::eve;
    strategy[v] = g.owner[v] == j ? back_strategy[v] : -1;
  }
  std::vector<bool> remaining(n);
  for (std::size_t v = 0; v < n; ++v) remaining[v] = alive[v] && !back[v];
  solve_parity_rec(g, remaining, eve, strategy);
}

}  // namespace detail

/// Zielonka's recursive algorithm; both players get positional strategies on
/// their winning regions.
inline ParitySolution solve_parity(const ParityGame& g) {
  detail::check_parity_game(g);
  const std::size_t n = g.owner.size();
  ParitySolution out{std::vector<bool>(n, false), std::vector<int>(n, -1)};
  detail::solve_parity_rec(g, std::vector<bool>(n, true), out.eve_wins, out.strategy);
  return out;
}

}  // namespace randstrat
