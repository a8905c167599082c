#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "randstrat/error.hpp"
#include "randstrat/rational.hpp"

namespace randstrat {

/// Finite-support probability distribution with exact weights.
///
/// The support is kept sorted by outcome, every stored weight is strictly
/// positive, and the weights of a validated distribution sum to exactly one.
/// `Distribution` is a value type; equality compares supports and weights.
template <class T>
class Distribution {
 public:
  using value_type = std::pair<T, Rational>;
  using const_iterator = typename std::vector<value_type>::const_iterator;

  Distribution() = default;

  static Distribution dirac(T outcome) {
    Distribution d;
    d.entries_.emplace_back(std::move(outcome), Rational(1));
    return d;
  }

  static Distribution uniform(const std::vector<T>& outcomes) {
    std::map<T, Rational> acc;
    const Rational w(1, static_cast<unsigned long>(outcomes.size()));
    for (const auto& o : outcomes) acc[o] += w;
    return from_map(std::move(acc));
  }

  /// Builds and validates: weights must be positive after merging duplicates
  /// and sum to one.
  static Distribution from_pairs(std::vector<value_type> pairs) {
    std::map<T, Rational> acc;
    for (auto& [o, w] : pairs) {
      if (w < 0) throw Error(ErrorKind::distribution_not_normalised, "negative weight");
      acc[o] += w;
    }
    return from_map(std::move(acc));
  }

  static Distribution from_map(std::map<T, Rational> acc) {
    for (auto& [o, w] : acc)
      if (w.canonicalize(); w < 0) throw Error(ErrorKind::distribution_not_normalised, "negative weight");
    Distribution d = unnormalised(std::move(acc));
    Rational total = d.total();
    if (total != 1)
      throw Error(ErrorKind::distribution_not_normalised, "weights sum to " + format_rational(total));
    return d;
  }

  /// Drops zero weights but does not check the total. Used for sub-distributions
  /// in intermediate computations.
  static Distribution unnormalised(std::map<T, Rational> acc) {
    Distribution d;
    d.entries_.reserve(acc.size());
    for (auto& [o, w] : acc) {
      w.canonicalize();
      if (w != 0) d.entries_.emplace_back(o, std::move(w));
    }
    return d;
  }

  Rational total() const {
    Rational t(0);
    for (const auto& [o, w] : entries_) t += w;
    return t;
  }

  Rational weight(const T& outcome) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), outcome,
                               [](const value_type& e, const T& o) { return e.first < o; });
    if (it != entries_.end() && !(outcome < it->first)) return it->second;
    return Rational(0);
  }

  bool contains(const T& outcome) const { return weight(outcome) != 0; }
  bool is_dirac() const { return entries_.size() == 1; }
  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }

  std::vector<T> support() const {
    std::vector<T> s;
    s.reserve(entries_.size());
    for (const auto& e : entries_) s.push_back(e.first);
    return s;
  }

  const_iterator begin() const { return entries_.begin(); }
  const_iterator end() const { return entries_.end(); }
  const value_type& front() const { return entries_.front(); }

  template <class U, class F>
  Distribution<U> map(F&& f) const {
    std::map<U, Rational> acc;
    for (const auto& [o, w] : entries_) acc[f(o)] += w;
    return Distribution<U>::unnormalised(std::move(acc));
  }

  friend bool operator==(const Distribution& a, const Distribution& b) { return a.entries_ == b.entries_; }
  friend bool operator<(const Distribution& a, const Distribution& b) { return a.entries_ < b.entries_; }

 private:
  std::vector<value_type> entries_;
};

/// Product of two independent distributions, combined by `f`.
template <class R, class A, class B, class F>
Distribution<R> combine(const Distribution<A>& a, const Distribution<B>& b, F&& f) {
  std::map<R, Rational> acc;
  for (const auto& [x, wx] : a)
    for (const auto& [y, wy] : b) acc[f(x, y)] += wx * wy;
  return Distribution<R>::unnormalised(std::move(acc));
}

namespace detail {

/// Whether every outcome of `d` is marked in `set` (outcomes are indices).
inline bool support_within(const Distribution<int>& d, const std::vector<bool>& set) {
  for (const auto& [t, w] : d)
    if (!set[static_cast<std::size_t>(t)]) return false;
  return true;
}

inline bool support_meets(const Distribution<int>& d, const std::vector<bool>& set) {
  for (const auto& [t, w] : d)
    if (set[static_cast<std::size_t>(t)]) return true;
  return false;
}

}  // namespace detail

}  // namespace randstrat
