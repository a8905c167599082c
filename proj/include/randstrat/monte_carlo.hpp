#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <thread>
#include <vector>

#include "randstrat/arena.hpp"
#include "randstrat/condition.hpp"
#include "randstrat/strategy.hpp"

namespace randstrat {

struct Estimate {
  double point = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  long samples = 0;
  std::uint64_t seed = 0;
  int workers = 1;
};

/// 99% Wilson score interval for `hits` successes out of `n`.
inline std::pair<double, double> wilson_interval(long hits, long n) {
  constexpr double z = 2.5758293035489004;
  const double nn = static_cast<double>(n), p = static_cast<double>(hits) / nn;
  const double denom = 1.0 + z * z / nn;
  const double centre = (p + z * z / (2.0 * nn)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / nn + z * z / (4.0 * nn * nn)) / denom;
  return {std::clamp(std::min(centre - half, p), 0.0, 1.0), std::clamp(std::max(centre + half, p), 0.0, 1.0)};
}

namespace detail {

template <class T>
const T& sample(const Distribution<T>& d, std::mt19937_64& rng) {
  if (d.is_dirac()) return d.front().first;
  const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  double acc = 0.0;
  for (const auto& [o, w] : d) {
    acc += w.get_d();
    if (u < acc) return o;
  }
  return (d.end() - 1)->first;
}

inline ExecutionState sample_observe(const Strategy& s, const ExecutionState& e, std::optional<SignalId> sig,
                                     std::mt19937_64& rng) {
  if (!sig) return e;
  return ExecutionState{sample(s.update(*sig, e.memory), rng), *sig};
}

/// One sampled play of `horizon` steps; true iff it satisfies the prefix
/// condition.
inline bool sample_play(const Arena& arena, const Strategy& eve, const Strategy& adam, VertexId start,
                        const Condition& cond, int horizon, std::mt19937_64& rng) {
  ColourSet visited;
  auto visit = [&](VertexId v) {
    if (auto c = arena.colour(v)) visited.insert(*c);
  };
  VertexId v = start;
  visit(v);
  ExecutionState e{sample(eve.init(), rng), kBlank}, a{sample(adam.init(), rng), kBlank};
  for (int t = 0; t < horizon; ++t) {
    e = sample_observe(eve, e, arena.vertex_signal(Side::eve, v), rng);
    a = sample_observe(adam, a, arena.vertex_signal(Side::adam, v), rng);
    const ActionId x = sample(next_action(eve, e), rng);
    const ActionId y = sample(next_action(adam, a), rng);
    e = sample_observe(eve, e, arena.action_signal(Side::eve, x), rng);
    a = sample_observe(adam, a, arena.action_signal(Side::adam, y), rng);
    v = sample(arena.transition(v, x, y), rng);
    visit(v);
  }
  return inf_set_verdict(cond, ColourSet{}, visited);
}

}  // namespace detail

/// Estimates the probability of a reach or safety condition within
/// `horizon` steps from `n` sampled plays. Worker w draws from a generator
/// seeded with (seed, w) and simulates a fixed share of the plays, so the
/// result depends only on (seed, n, workers).
inline Estimate monte_carlo(const Arena& arena, const Strategy& eve, const Strategy& adam, VertexId start,
                            const Condition& cond, int horizon, long n, std::uint64_t seed, int workers = 4) {
  if (!is_prefix_condition(cond))
    throw Error(ErrorKind::unsupported_condition, "sampling supports reach and safety conditions only");
  if (n < 1) throw Error(ErrorKind::precondition, "need at least one sample");
  if (horizon < 0) throw Error(ErrorKind::precondition, "horizon must be non-negative");
  if (start < 0 || start >= arena.num_vertices()) throw Error(ErrorKind::unknown_identifier, "start vertex");
  workers = std::max(1, workers);
  std::vector<long> hits(static_cast<std::size_t>(workers), 0);
  auto run = [&](int w) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(w)};
    std::mt19937_64 rng(seq);
    const long share = n / workers + (w < n % workers ? 1 : 0);
    long k = 0;
    for (long i = 0; i < share; ++i) k += detail::sample_play(arena, eve, adam, start, cond, horizon, rng);
    hits[static_cast<std::size_t>(w)] = k;
  };
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(run, w);
  run(0);
  for (auto& t : pool) t.join();
  long total = 0;
  for (long h : hits) total += h;
  Estimate est;
  est.point = static_cast<double>(total) / static_cast<double>(n);
  std::tie(est.ci_low, est.ci_high) = wilson_interval(total, n);
  est.samples = n;
  est.seed = seed;
  est.workers = workers;
  return est;
}

}  // namespace randstrat
