#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "randstrat/condition.hpp"

namespace randstrat {

struct ZielonkaTree {
  ColourSet label;
  bool in_f = false;
  std::vector<ZielonkaTree> children;
};

/// Tree of alternating F-membership: the children of a node are the maximal
/// nonempty subsets of its label whose membership in `family` differs from the
/// label's. Children are ordered by decreasing bitmask.
inline ZielonkaTree zielonka_tree(ColourSet universe, const MullerFamily& family) {
  ZielonkaTree node{universe, family.count(universe) > 0, {}};
  const std::uint32_t all = universe.bits();
  std::vector<ColourSet> opposite;
  for (std::uint32_t s = (all - 1) & all; s != 0; s = (s - 1) & all)
    if ((family.count(ColourSet(s)) > 0) != node.in_f) opposite.push_back(ColourSet(s));
  std::vector<ColourSet> maximal;
  for (ColourSet s : opposite) {
    bool dominated = false;
    for (ColourSet t : opposite) dominated = dominated || (s != t && s.subset_of(t));
    if (!dominated) maximal.push_back(s);
  }
  std::sort(maximal.begin(), maximal.end(), [](ColourSet x, ColourSet y) { return x.bits() > y.bits(); });
  for (ColourSet s : maximal) node.children.push_back(zielonka_tree(s, family));
  return node;
}

inline ZielonkaTree zielonka_tree(int num_colours, const MullerFamily& family) {
  return zielonka_tree(ColourSet::full(num_colours), family);
}

struct MemoryBounds {
  int pure = 1;
  int behavioural_upper = 1;
  int general = 1;
  friend bool operator==(const MemoryBounds&, const MemoryBounds&) = default;
};

/// Memory bounds in simple Muller games for the player avoiding F: sums
/// over children at nodes outside F, maximum at nodes in F. `pure` is tight,
/// `behavioural_upper` is only an upper bound (a node outside F whose
/// children are all leaves needs no memory), `general` is tight. The player
/// winning F gets the bounds of the tree of the complement family.
inline MemoryBounds memory_bounds(const ZielonkaTree& t) {
  if (t.children.empty()) return {};
  MemoryBounds out{0, 0, 0};
  bool all_leaves = true, some_leaf = false;
  for (const auto& c : t.children) {
    const MemoryBounds b = memory_bounds(c);
    const bool leaf = c.children.empty();
    all_leaves = all_leaves && leaf;
    some_leaf = some_leaf || leaf;
    if (t.in_f) {
      out.pure = std::max(out.pure, b.pure);
      out.behavioural_upper = std::max(out.behavioural_upper, b.behavioural_upper);
      out.general = std::max(out.general, b.general);
    } else {
      out.pure += b.pure;
      out.behavioural_upper += b.behavioural_upper;
      if (!leaf) out.general += b.general;
    }
  }
  if (!t.in_f) {
    if (all_leaves) out.behavioural_upper = 1;
    if (some_leaf) out.general += 1;
  }
  return out;
}

inline int leaf_count(const ZielonkaTree& t) {
  if (t.children.empty()) return 1;
  int n = 0;
  for (const auto& c : t.children) n += leaf_count(c);
  return n;
}

/// One node per line, indented two spaces per level, e.g. "{a,b} in F".
inline std::string format_tree(const ZielonkaTree& t, const std::vector<std::string>& names, int depth = 0) {
  std::string out(static_cast<std::size_t>(2 * depth), ' ');
  out += format_colour_set(t.label, names) + (t.in_f ? " in F\n" : " not in F\n");
  for (const auto& c : t.children) out += format_tree(c, names, depth + 1);
  return out;
}

}  // namespace randstrat
