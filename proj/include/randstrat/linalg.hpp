#pragma once

#include <cstddef>
#include <map>
#include <utility>
#include <vector>

#include "randstrat/error.hpp"
#include "randstrat/rational.hpp"

namespace randstrat {

/// Sparse row of a rational matrix: column -> nonzero coefficient.
using SparseRow = std::map<int, Rational>;

/// Solves A x = b exactly by Gauss-Jordan elimination on sparse rows.
/// A must be square and nonsingular.
inline std::vector<Rational> solve_exact(std::vector<SparseRow> a, std::vector<Rational> b) {
  const int n = static_cast<int>(a.size());
  if (static_cast<int>(b.size()) != n) throw Error(ErrorKind::precondition, "dimension mismatch");
  std::vector<int> pivot_row(static_cast<std::size_t>(n), -1);
  std::vector<bool> used(static_cast<std::size_t>(n), false);
  for (int col = 0; col < n; ++col) {
    // sparsest available row with a nonzero entry in this column
    int best = -1;
    for (int r = 0; r < n; ++r) {
      if (used[r]) continue;
      auto it = a[r].find(col);
      if (it == a[r].end()) continue;
      if (best < 0 || a[r].size() < a[best].size()) best = r;
    }
    if (best < 0) throw Error(ErrorKind::precondition, "singular system");
    used[best] = true;
    pivot_row[col] = best;
    Rational inv = 1 / a[best][col];
    for (auto& [c, v] : a[best]) v *= inv;
    b[best] *= inv;
    for (int r = 0; r < n; ++r) {
      if (r == best) continue;
      auto it = a[r].find(col);
      if (it == a[r].end()) continue;
      Rational f = it->second;
      for (const auto& [c, v] : a[best]) {
        Rational nv = a[r][c] - f * v;
        if (nv == 0)
          a[r].erase(c);
        else
          a[r][c] = std::move(nv);
      }
      b[r] -= f * b[best];
    }
  }
  std::vector<Rational> x(static_cast<std::size_t>(n));
  for (int col = 0; col < n; ++col) x[col] = b[pivot_row[col]];
  return x;
}

}  // namespace randstrat
