#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <string_view>
#include <vector>

#include "randstrat/arena.hpp"
#include "randstrat/graph.hpp"
#include "randstrat/strategy.hpp"

namespace randstrat {

/// Decision process of an Adam who knows Eve's strategy but only sees his own
/// signals. A configuration is the token position with Eve's execution state
/// after she has observed it; a support is the set of configurations
/// compatible with Adam's observations so far.
struct SupportMDP {
  struct Config {
    VertexId vertex = 0;
    ExecutionState eve;
    friend auto operator<=>(const Config&, const Config&) = default;
  };
  struct Support {
    std::vector<int> members;  // sorted configuration ids
    SignalId adam_last = kBlank;
    friend auto operator<=>(const Support&, const Support&) = default;
  };

  std::vector<Config> configs;
  std::vector<std::vector<std::vector<int>>> config_succ;  // [config][adam action] -> successor configs
  std::vector<Support> supports;
  std::vector<std::vector<std::vector<int>>> support_succ;  // [support][adam action] -> successor supports
  int start = 0;

  int num_actions() const { return support_succ.empty() ? 0 : static_cast<int>(support_succ.front().size()); }
};

inline SupportMDP belief_support_mdp(const Arena& arena, const Strategy& eve, VertexId start) {
  if (eve.side() != Side::eve || !(eve.alphabet() == Alphabet::of(arena, Side::eve)))
    throw Error(ErrorKind::precondition, "expected an Eve strategy over this arena");
  if (start < 0 || start >= arena.num_vertices()) throw Error(ErrorKind::unknown_identifier, "start vertex");
  using Config = SupportMDP::Config;
  using Support = SupportMDP::Support;
  SupportMDP m;
  std::map<Config, int> config_index;
  std::queue<int> config_work;
  auto config = [&](const Config& c) {
    auto [it, fresh] = config_index.emplace(c, static_cast<int>(m.configs.size()));
    if (fresh) {
      m.configs.push_back(c);
      config_work.push(it->second);
    }
    return it->second;
  };
  auto arrive = [&](VertexId v, const ExecutionState& e, std::set<int>& out) {
    if (auto sig = arena.vertex_signal(Side::eve, v)) {
      for (const auto& [e2, w] : observe(eve, e, *sig)) out.insert(config(Config{v, e2}));
    } else {
      out.insert(config(Config{v, e}));
    }
  };
  std::set<int> initial;
  for (const auto& [e, w] : initial_states(eve)) arrive(start, e, initial);

  const int ny = arena.num_actions(Side::adam);
  auto expand_configs = [&] {
    while (!config_work.empty()) {
      const int id = config_work.front();
      config_work.pop();
      const Config c = m.configs[static_cast<std::size_t>(id)];
      std::vector<std::vector<int>> row;
      for (ActionId y = 0; y < ny; ++y) {
        std::set<int> succ;
        for (const auto& [x, px] : next_action(eve, c.eve)) {
          auto sig = arena.action_signal(Side::eve, x);
          auto after = sig ? observe(eve, c.eve, *sig) : Distribution<ExecutionState>::dirac(c.eve);
          for (const auto& [e, pe] : after)
            for (const auto& [r, pr] : arena.transition(c.vertex, x, y)) arrive(r, e, succ);
        }
        row.emplace_back(succ.begin(), succ.end());
      }
      if (m.config_succ.size() <= static_cast<std::size_t>(id)) m.config_succ.resize(static_cast<std::size_t>(id) + 1);
      m.config_succ[static_cast<std::size_t>(id)] = std::move(row);
    }
  };
  expand_configs();

  std::map<Support, int> support_index;
  std::queue<int> support_work;
  auto support = [&](Support s) {
    auto [it, fresh] = support_index.emplace(s, static_cast<int>(m.supports.size()));
    if (fresh) {
      m.supports.push_back(std::move(s));
      support_work.push(it->second);
    }
    return it->second;
  };
  {
    Support s0{std::vector<int>(initial.begin(), initial.end()), kBlank};
    if (auto sig = arena.vertex_signal(Side::adam, start)) s0.adam_last = *sig;
    m.start = support(std::move(s0));
  }
  while (!support_work.empty()) {
    const int id = support_work.front();
    support_work.pop();
    const Support cur = m.supports[static_cast<std::size_t>(id)];
    std::vector<std::vector<int>> row;
    for (ActionId y = 0; y < ny; ++y) {
      SignalId after_action = cur.adam_last;
      if (auto sig = arena.action_signal(Side::adam, y)) after_action = *sig;
      // successors grouped by the vertex signal Adam receives next
      std::map<std::optional<SignalId>, std::set<int>> parts;
      for (int c : cur.members)
        for (int t : m.config_succ[static_cast<std::size_t>(c)][static_cast<std::size_t>(y)])
          parts[arena.vertex_signal(Side::adam, m.configs[static_cast<std::size_t>(t)].vertex)].insert(t);
      std::vector<int> succ;
      for (auto& [sig, members] : parts)
        succ.push_back(support(Support{std::vector<int>(members.begin(), members.end()), sig ? *sig : after_action}));
      row.push_back(std::move(succ));
    }
    if (m.support_succ.size() <= static_cast<std::size_t>(id)) m.support_succ.resize(static_cast<std::size_t>(id) + 1);
    m.support_succ[static_cast<std::size_t>(id)] = std::move(row);
  }
  m.support_succ.resize(m.supports.size());
  return m;
}

enum class QualitativeQuestion { almost_sure_reach, positive_reach };

inline QualitativeQuestion parse_question(std::string_view s) {
  if (s == "almost_sure_reach") return QualitativeQuestion::almost_sure_reach;
  if (s == "positive_reach") return QualitativeQuestion::positive_reach;
  throw Error(ErrorKind::unsupported_question, "qualitative question '" + std::string(s) + "' is not supported");
}

/// Decides whether Adam, seeing only his signals, can reach `target`
/// almost surely (or with positive probability) against Eve's fixed strategy.
/// The target must be a closed set of vertices.
inline bool pomdp_qualitative(const Arena& arena, const SupportMDP& m, const std::set<VertexId>& target,
                              QualitativeQuestion question) {
  if (!arena.is_closed(target)) throw Error(ErrorKind::target_not_absorbing, "target vertices must be absorbing");
  const std::size_t ns = m.supports.size();
  auto in_target = [&](int c) { return target.count(m.configs[static_cast<std::size_t>(c)].vertex) > 0; };
  if (question == QualitativeQuestion::positive_reach) {
    for (const auto& s : m.supports)
      for (int c : s.members)
        if (in_target(c)) return true;
    return false;
  }
  // pairs (configuration, support) with the configuration in the support
  std::map<std::pair<int, int>, int> pair_index;
  std::vector<std::pair<int, int>> pairs;
  for (std::size_t s = 0; s < ns; ++s)
    for (int c : m.supports[s].members) {
      pair_index.emplace(std::make_pair(c, static_cast<int>(s)), static_cast<int>(pairs.size()));
      pairs.emplace_back(c, static_cast<int>(s));
    }
  const int ny = m.num_actions();
  std::vector<bool> good(ns, true);
  while (true) {
    std::vector<std::vector<bool>> allowed(ns, std::vector<bool>(static_cast<std::size_t>(ny), false));
    for (std::size_t s = 0; s < ns; ++s) {
      if (!good[s]) continue;
      for (int y = 0; y < ny; ++y) {
        bool ok = true;
        for (int t : m.support_succ[s][static_cast<std::size_t>(y)]) ok = ok && good[static_cast<std::size_t>(t)];
        allowed[s][static_cast<std::size_t>(y)] = ok;
      }
    }
    // edges of the pair graph restricted to allowed actions
    Adjacency adj(pairs.size());
    std::vector<bool> marked(pairs.size(), false);
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      const auto [c, s] = pairs[i];
      if (!good[static_cast<std::size_t>(s)]) continue;
      marked[i] = in_target(c);
      for (int y = 0; y < ny; ++y) {
        if (!allowed[static_cast<std::size_t>(s)][static_cast<std::size_t>(y)]) continue;
        for (int t : m.support_succ[static_cast<std::size_t>(s)][static_cast<std::size_t>(y)])
          for (int c2 : m.config_succ[static_cast<std::size_t>(c)][static_cast<std::size_t>(y)]) {
            auto it = pair_index.find({c2, t});
            if (it != pair_index.end()) adj[i].push_back(it->second);
          }
      }
    }
    auto reach = backward_reach(adj, marked);
    bool changed = false;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      const auto s = static_cast<std::size_t>(pairs[i].second);
      if (good[s] && !reach[i]) {
        good[s] = false;
        changed = true;
      }
    }
    if (!changed) return good[static_cast<std::size_t>(m.start)];
  }
}

}  // namespace randstrat
