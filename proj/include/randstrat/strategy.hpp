#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "randstrat/arena.hpp"
#include "randstrat/distribution.hpp"

namespace randstrat {

using MemoryId = int;

/// Signal slot value meaning "no observation received yet".
inline constexpr SignalId kBlank = -1;

enum class StrategyKind { pure, behavioural, mixed, general };

inline std::string_view to_string(StrategyKind k) {
  switch (k) {
    case StrategyKind::pure: return "pure";
    case StrategyKind::behavioural: return "behavioural";
    case StrategyKind::mixed: return "mixed";
    case StrategyKind::general: return "general";
  }
  return "?";
}

inline StrategyKind parse_kind(std::string_view s) {
  if (s == "pure") return StrategyKind::pure;
  if (s == "behavioural") return StrategyKind::behavioural;
  if (s == "mixed") return StrategyKind::mixed;
  if (s == "general") return StrategyKind::general;
  throw Error(ErrorKind::malformed_document, "unknown strategy kind '" + std::string(s) + "'");
}

/// Sizes of the signal and action alphabets a strategy is written against.
struct Alphabet {
  int signals = 0;
  int actions = 0;

  static Alphabet of(const Arena& a, Side s) { return {a.num_signals(s), a.num_actions(s)}; }
  friend bool operator==(const Alphabet&, const Alphabet&) = default;
};

struct ExecutionState {
  MemoryId memory = 0;
  SignalId last_signal = kBlank;

  friend auto operator<=>(const ExecutionState&, const ExecutionState&) = default;
};

template <class T>
using SignalTable = std::vector<std::vector<Distribution<T>>>;  // [signal + 1][memory]

/// A finite-memory strategy: initial memory, memory update on each new
/// observation, and next-action function, each a distribution. Which
/// components may be randomised is fixed by `kind()`.
class Strategy {
 public:
  Side side() const { return side_; }
  StrategyKind kind() const { return kind_; }
  Alphabet alphabet() const { return alphabet_; }
  int memory_size() const { return static_cast<int>(memory_.size()); }
  const std::string& memory_name(MemoryId m) const { return memory_.at(static_cast<std::size_t>(m)); }
  const std::vector<std::string>& memory_names() const { return memory_; }

  const Distribution<MemoryId>& init() const { return init_; }
  const Distribution<MemoryId>& update(SignalId s, MemoryId m) const { return update_[slot(s)][idx(m)]; }
  const Distribution<ActionId>& act(SignalId s, MemoryId m) const { return act_[slot(s)][idx(m)]; }

  friend bool operator==(const Strategy& a, const Strategy& b) {
    return a.side_ == b.side_ && a.kind_ == b.kind_ && a.alphabet_ == b.alphabet_ && a.memory_ == b.memory_ &&
           a.init_ == b.init_ && a.update_ == b.update_ && a.act_ == b.act_;
  }

 private:
  friend Strategy make_strategy(Side, std::vector<std::string>, Distribution<MemoryId>, SignalTable<MemoryId>,
                                SignalTable<ActionId>, StrategyKind, Alphabet);
  friend Strategy embed_general(const Strategy&);

  static std::size_t slot(SignalId s) { return static_cast<std::size_t>(s + 1); }
  static std::size_t idx(MemoryId m) { return static_cast<std::size_t>(m); }

  Side side_ = Side::eve;
  StrategyKind kind_ = StrategyKind::pure;
  Alphabet alphabet_;
  std::vector<std::string> memory_;
  Distribution<MemoryId> init_;
  SignalTable<MemoryId> update_;
  SignalTable<ActionId> act_;
};

/// Validates shapes, totality and the randomisation allowed by `kind`.
inline Strategy make_strategy(Side side, std::vector<std::string> memory, Distribution<MemoryId> init,
                              SignalTable<MemoryId> update, SignalTable<ActionId> act, StrategyKind kind,
                              Alphabet alphabet) {
  const std::size_t nm = memory.size();
  if (nm == 0) throw Error(ErrorKind::non_total_map, "strategy needs at least one memory state");
  const std::size_t slots = static_cast<std::size_t>(alphabet.signals) + 1;
  auto check_table = [&](const auto& table, const char* what, int range) {
    if (table.size() != slots) throw Error(ErrorKind::non_total_map, std::string(what) + " table has wrong signal count");
    for (const auto& row : table) {
      if (row.size() != nm) throw Error(ErrorKind::non_total_map, std::string(what) + " table has wrong memory count");
      for (const auto& d : row) {
        if (d.empty()) throw Error(ErrorKind::non_total_map, std::string(what) + " entry missing");
        if (d.total() != 1)
          throw Error(ErrorKind::distribution_not_normalised, std::string(what) + " entry does not sum to 1");
        for (const auto& [o, w] : d)
          if (o < 0 || o >= range) throw Error(ErrorKind::unknown_identifier, std::string(what) + " target out of range");
      }
    }
  };
  check_table(update, "update", static_cast<int>(nm));
  check_table(act, "act", alphabet.actions);
  if (init.empty() || init.total() != 1)
    throw Error(ErrorKind::distribution_not_normalised, "initial memory distribution");
  for (const auto& [m, w] : init)
    if (m < 0 || m >= static_cast<int>(nm)) throw Error(ErrorKind::unknown_identifier, "initial memory out of range");

  auto all_dirac = [](const auto& table) {
    for (const auto& row : table)
      for (const auto& d : row)
        if (!d.is_dirac()) return false;
    return true;
  };
  const bool init_dirac = init.is_dirac(), update_dirac = all_dirac(update), act_dirac = all_dirac(act);
  auto violation = [&](const char* what) {
    throw Error(ErrorKind::kind_violation, std::string(to_string(kind)) + " strategy with randomised " + what);
  };
  switch (kind) {
    case StrategyKind::pure:
      if (!init_dirac) violation("initial memory");
      if (!update_dirac) violation("memory update");
      if (!act_dirac) violation("next action");
      break;
    case StrategyKind::behavioural:
      if (!init_dirac) violation("initial memory");
      if (!update_dirac) violation("memory update");
      break;
    case StrategyKind::mixed:
      if (!update_dirac) violation("memory update");
      if (!act_dirac) violation("next action");
      break;
    case StrategyKind::general:
      break;
  }
  Strategy s;
  s.side_ = side;
  s.kind_ = kind;
  s.alphabet_ = alphabet;
  s.memory_ = std::move(memory);
  s.init_ = std::move(init);
  s.update_ = std::move(update);
  s.act_ = std::move(act);
  return s;
}

/// Fills strategy tables entry by entry; unset entries are reported by
/// `build()` as a non-total map.
class StrategyBuilder {
 public:
  StrategyBuilder(Side side, Alphabet alphabet, std::vector<std::string> memory)
      : side_(side), alphabet_(alphabet), memory_(std::move(memory)) {
    const auto slots = static_cast<std::size_t>(alphabet.signals) + 1;
    update_.assign(slots, std::vector<Distribution<MemoryId>>(memory_.size()));
    act_.assign(slots, std::vector<Distribution<ActionId>>(memory_.size()));
  }

  StrategyBuilder(const Arena& arena, Side side, std::vector<std::string> memory)
      : StrategyBuilder(side, Alphabet::of(arena, side), std::move(memory)) {}

  int memory_size() const { return static_cast<int>(memory_.size()); }
  int num_signals() const { return alphabet_.signals; }

  StrategyBuilder& init(Distribution<MemoryId> d) {
    init_ = std::move(d);
    return *this;
  }
  StrategyBuilder& update(SignalId s, MemoryId m, Distribution<MemoryId> d) {
    update_.at(static_cast<std::size_t>(s + 1)).at(static_cast<std::size_t>(m)) = std::move(d);
    return *this;
  }
  StrategyBuilder& act(SignalId s, MemoryId m, Distribution<ActionId> d) {
    act_.at(static_cast<std::size_t>(s + 1)).at(static_cast<std::size_t>(m)) = std::move(d);
    return *this;
  }
  /// Same entry for every signal slot, blank included.
  StrategyBuilder& update_all(MemoryId m, const Distribution<MemoryId>& d) {
    for (SignalId s = kBlank; s < alphabet_.signals; ++s) update(s, m, d);
    return *this;
  }
  StrategyBuilder& act_all(MemoryId m, const Distribution<ActionId>& d) {
    for (SignalId s = kBlank; s < alphabet_.signals; ++s) act(s, m, d);
    return *this;
  }
  /// Memory never changes.
  StrategyBuilder& identity_update() {
    for (MemoryId m = 0; m < memory_size(); ++m) update_all(m, Distribution<MemoryId>::dirac(m));
    return *this;
  }

  Strategy build(StrategyKind kind) const {
    return make_strategy(side_, memory_, init_, update_, act_, kind, alphabet_);
  }

 private:
  Side side_;
  Alphabet alphabet_;
  std::vector<std::string> memory_;
  Distribution<MemoryId> init_;
  SignalTable<MemoryId> update_;
  SignalTable<ActionId> act_;
};

inline Distribution<ExecutionState> initial_states(const Strategy& s) {
  return s.init().map<ExecutionState>([](MemoryId m) { return ExecutionState{m, kBlank}; });
}

/// Delivers one observation: memory moves by the update function and the
/// signal becomes the latest one.
inline Distribution<ExecutionState> observe(const Strategy& s, const ExecutionState& state, SignalId signal) {
  if (signal < 0 || signal >= s.alphabet().signals)
    throw Error(ErrorKind::unknown_signal, "signal id " + std::to_string(signal));
  return s.update(signal, state.memory).map<ExecutionState>([&](MemoryId m) { return ExecutionState{m, signal}; });
}

inline const Distribution<ActionId>& next_action(const Strategy& s, const ExecutionState& state) {
  return s.act(state.last_signal, state.memory);
}

/// One decision: optionally deliver `incoming`, then read the next-action
/// function. Returns the marginal action distribution and the distribution of
/// the resulting execution state.
inline std::pair<Distribution<ActionId>, Distribution<ExecutionState>> step(const Strategy& s,
                                                                            const ExecutionState& state,
                                                                            std::optional<SignalId> incoming) {
  Distribution<ExecutionState> next =
      incoming ? observe(s, state, *incoming) : Distribution<ExecutionState>::dirac(state);
  std::map<ActionId, Rational> acc;
  for (const auto& [st, w] : next)
    for (const auto& [x, p] : next_action(s, st)) acc[x] += w * p;
  return {Distribution<ActionId>::from_map(std::move(acc)), std::move(next)};
}

inline Strategy embed_general(const Strategy& s) {
  Strategy g = s;
  g.kind_ = StrategyKind::general;
  return g;
}

/// Mixed strategy drawing component i with the given weight and then
/// following it deterministically. Memory is the disjoint union of the
/// component memories.
inline Strategy mixed_from_support(Side side, const std::vector<std::pair<Rational, Strategy>>& pairs) {
  if (pairs.empty()) throw Error(ErrorKind::weights_not_normalised, "no components");
  Rational total(0);
  for (const auto& [w, s] : pairs) {
    if (w <= 0) throw Error(ErrorKind::weights_not_normalised, "non-positive weight");
    if (s.kind() != StrategyKind::pure) throw Error(ErrorKind::kind_violation, "mixed components must be pure");
    if (s.side() != side) throw Error(ErrorKind::kind_violation, "component for the wrong side");
    if (!(s.alphabet() == pairs.front().second.alphabet()))
      throw Error(ErrorKind::kind_violation, "components over different alphabets");
    total += w;
  }
  if (total != 1) throw Error(ErrorKind::weights_not_normalised, "weights sum to " + format_rational(total));
  const Alphabet alpha = pairs.front().second.alphabet();
  std::vector<std::string> memory;
  std::vector<MemoryId> offset;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    offset.push_back(static_cast<MemoryId>(memory.size()));
    for (const auto& n : pairs[i].second.memory_names()) memory.push_back(std::to_string(i) + ":" + n);
  }
  StrategyBuilder b(side, alpha, memory);
  std::map<MemoryId, Rational> init;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto& [w, s] = pairs[i];
    for (const auto& [m, p] : s.init()) init[offset[i] + m] += w * p;
    for (MemoryId m = 0; m < s.memory_size(); ++m)
      for (SignalId g = kBlank; g < alpha.signals; ++g) {
        b.update(g, offset[i] + m, Distribution<MemoryId>::dirac(offset[i] + s.update(g, m).front().first));
        b.act(g, offset[i] + m, s.act(g, m));
      }
  }
  b.init(Distribution<MemoryId>::from_map(std::move(init)));
  return b.build(StrategyKind::mixed);
}

}  // namespace randstrat
