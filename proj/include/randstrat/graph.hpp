#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

namespace randstrat {

using Adjacency = std::vector<std::vector<int>>;

/// Strongly connected components (iterative Tarjan). `component[v]` is the
/// component index of v; components come out in reverse topological order,
/// so every bottom component precedes the components that reach it.
struct SccDecomposition {
  std::vector<int> component;
  std::vector<std::vector<int>> members;
};

inline SccDecomposition strongly_connected_components(const Adjacency& adj) {
  const int n = static_cast<int>(adj.size());
  SccDecomposition out;
  out.component.assign(static_cast<std::size_t>(n), -1);
  std::vector<int> index(static_cast<std::size_t>(n), -1), low(static_cast<std::size_t>(n), 0);
  std::vector<bool> on_stack(static_cast<std::size_t>(n), false);
  std::vector<int> stack;
  std::vector<std::pair<int, std::size_t>> call;
  int counter = 0;
  for (int root = 0; root < n; ++root) {
    if (index[root] >= 0) continue;
    call.emplace_back(root, 0);
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!call.empty()) {
      auto& [v, pos] = call.back();
      if (pos < adj[v].size()) {
        int w = adj[v][pos++];
        if (index[w] < 0) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          call.emplace_back(w, 0);
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      if (low[v] == index[v]) {
        std::vector<int> comp;
        int w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          out.component[w] = static_cast<int>(out.members.size());
          comp.push_back(w);
        } while (w != v);
        std::sort(comp.begin(), comp.end());
        out.members.push_back(std::move(comp));
      }
      int finished = v;
      call.pop_back();
      if (!call.empty()) low[call.back().first] = std::min(low[call.back().first], low[finished]);
    }
  }
  return out;
}

/// Vertices that can reach a marked vertex, moving only through vertices for
/// which `through` holds (marked vertices are always included).
template <class Pred>
std::vector<bool> backward_reach(const Adjacency& adj, const std::vector<bool>& marked, Pred&& through) {
  const std::size_t n = adj.size();
  Adjacency rev(n);
  for (std::size_t v = 0; v < n; ++v)
    for (int w : adj[v]) rev[static_cast<std::size_t>(w)].push_back(static_cast<int>(v));
  std::vector<bool> seen = marked;
  std::vector<int> work;
  for (std::size_t v = 0; v < n; ++v)
    if (marked[v]) work.push_back(static_cast<int>(v));
  while (!work.empty()) {
    int w = work.back();
    work.pop_back();
    for (int v : rev[static_cast<std::size_t>(w)])
      if (!seen[static_cast<std::size_t>(v)] && through(v)) {
        seen[static_cast<std::size_t>(v)] = true;
        work.push_back(v);
      }
  }
  return seen;
}

inline std::vector<bool> backward_reach(const Adjacency& adj, const std::vector<bool>& marked) {
  return backward_reach(adj, marked, [](int) { return true; });
}

inline std::vector<bool> forward_reach(const Adjacency& adj, const std::vector<int>& from) {
  std::vector<bool> seen(adj.size(), false);
  std::vector<int> work;
  for (int v : from)
    if (!seen[static_cast<std::size_t>(v)]) {
      seen[static_cast<std::size_t>(v)] = true;
      work.push_back(v);
    }
  while (!work.empty()) {
    int v = work.back();
    work.pop_back();
    for (int w : adj[static_cast<std::size_t>(v)])
      if (!seen[static_cast<std::size_t>(w)]) {
        seen[static_cast<std::size_t>(w)] = true;
        work.push_back(w);
      }
  }
  return seen;
}

}  // namespace randstrat
