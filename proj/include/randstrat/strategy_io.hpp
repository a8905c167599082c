#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "randstrat/arena_io.hpp"
#include "randstrat/strategy.hpp"

namespace randstrat {

namespace detail {

inline std::string signal_label(const Arena& a, Side side, SignalId s) {
  return s == kBlank ? std::string(kBlankSignal) : a.signal_name(side, s);
}

inline int find_memory(const std::vector<std::string>& memory, const std::string& name, const std::string& where) {
  for (std::size_t i = 0; i < memory.size(); ++i)
    if (memory[i] == name) return static_cast<int>(i);
  throw Error(ErrorKind::unknown_identifier, where + ": unknown memory state '" + name + "'");
}

/// Reads a weighted list `[{key: name, "prob": "p/q"}, ...]`.
template <class Resolve>
Distribution<int> weighted_list(const Json& list, const char* key, Resolve&& resolve, const std::string& where) {
  if (list.is_string()) return Distribution<int>::dirac(resolve(list.get<std::string>()));
  if (!list.is_array()) throw Error(ErrorKind::malformed_document, where + ": expected a list of weighted entries");
  std::map<int, Rational> acc;
  for (std::size_t i = 0; i < list.size(); ++i) {
    const std::string at = where + "[" + std::to_string(i) + "]";
    Rational w = json_rational(field(list[i], "prob", at), at + ".prob");
    if (w < 0) throw Error(ErrorKind::distribution_not_normalised, at + ": negative weight");
    acc[resolve(string_field(list[i], key, at))] += w;
  }
  try {
    return Distribution<int>::from_map(std::move(acc));
  } catch (const Error& e) {
    throw Error(e.kind(), where + ": " + e.what());
  }
}

template <class T>
Json weighted_json(const Distribution<T>& d, const char* key, const std::vector<std::string>& names) {
  Json out = Json::array();
  for (const auto& [o, w] : d)
    out.push_back(Json{{key, names.at(static_cast<std::size_t>(o))}, {"prob", format_rational(w)}});
  return out;
}

}  // namespace detail

/// Reads the strategy document format against `arena`'s alphabets.
///
/// `update` and `act` are lists of entries `{signal, memory, to}`; `signal`
/// and `memory` may be "*", and `signal` may be "blank" for the slot used
/// before any observation. A fully named entry beats a partially named one,
/// which beats a double wildcard. In `update`, a target memory of "=" keeps
/// the current memory state.
inline Strategy parse_strategy(const Json& doc, const Arena& arena) {
  using detail::string_field;
  if (!doc.is_object()) throw Error(ErrorKind::malformed_document, "strategy document must be an object");
  const std::string side_name = string_field(doc, "side", "strategy");
  if (side_name != "eve" && side_name != "adam")
    throw Error(ErrorKind::malformed_document, "strategy.side must be \"eve\" or \"adam\"");
  const Side side = side_name == "eve" ? Side::eve : Side::adam;
  const StrategyKind kind = parse_kind(string_field(doc, "kind", "strategy"));
  const Json& mem = detail::array_field(doc, "memory", "strategy");
  std::vector<std::string> memory;
  for (std::size_t i = 0; i < mem.size(); ++i) {
    if (!mem[i].is_string())
      throw Error(ErrorKind::malformed_document, "strategy.memory[" + std::to_string(i) + "]: expected a string");
    for (const auto& m : memory)
      if (m == mem[i].get<std::string>()) throw Error(ErrorKind::duplicate_id, "memory state '" + m + "'");
    memory.push_back(mem[i].get<std::string>());
  }
  if (memory.empty()) throw Error(ErrorKind::non_total_map, "strategy.memory is empty");

  auto resolve_memory = [&](const std::string& where) {
    return [&memory, where](const std::string& n) { return detail::find_memory(memory, n, where); };
  };
  StrategyBuilder b(arena, side, memory);
  b.init(detail::weighted_list(detail::field(doc, "init", "strategy"), "memory", resolve_memory("strategy.init"),
                               "strategy.init"));

  auto fill = [&](const char* table, const char* key, auto&& set, auto&& resolve_target, bool allow_keep) {
    const Json& entries = detail::array_field(doc, table, "strategy");
    std::map<std::pair<SignalId, MemoryId>, int> specificity;
    for (std::size_t i = 0; i < entries.size(); ++i) {
      const std::string at = std::string("strategy.") + table + "[" + std::to_string(i) + "]";
      const std::string sig = string_field(entries[i], "signal", at);
      const std::string mname = string_field(entries[i], "memory", at);
      std::vector<SignalId> sigs;
      if (sig == "*") {
        for (SignalId s = kBlank; s < arena.num_signals(side); ++s) sigs.push_back(s);
      } else if (sig == kBlankSignal) {
        sigs.push_back(kBlank);
      } else {
        try {
          sigs.push_back(arena.find_signal(side, sig));
        } catch (const Error&) {
          throw Error(ErrorKind::unknown_signal, at + ": unknown signal '" + sig + "'");
        }
      }
      std::vector<MemoryId> mems;
      if (mname == "*") {
        for (MemoryId m = 0; m < static_cast<int>(memory.size()); ++m) mems.push_back(m);
      } else {
        mems.push_back(detail::find_memory(memory, mname, at));
      }
      const int rank = (sig != "*") + (mname != "*");
      const Json& to = detail::field(entries[i], "to", at);
      for (SignalId s : sigs)
        for (MemoryId m : mems) {
          auto [it, fresh] = specificity.emplace(std::make_pair(s, m), rank);
          if (!fresh) {
            if (it->second == rank)
              throw Error(ErrorKind::duplicate_id, at + ": entry for (" + detail::signal_label(arena, side, s) + ", " +
                                                       memory[static_cast<std::size_t>(m)] + ") given twice");
            if (it->second > rank) continue;
            it->second = rank;
          }
          if (allow_keep && to.is_string() && to.get<std::string>() == "=")
            set(s, m, Distribution<int>::dirac(m));
          else
            set(s, m, detail::weighted_list(to, key, resolve_target(at + ".to"), at + ".to"));
        }
    }
    for (SignalId s = kBlank; s < arena.num_signals(side); ++s)
      for (MemoryId m = 0; m < static_cast<int>(memory.size()); ++m)
        if (!specificity.count({s, m}))
          throw Error(ErrorKind::non_total_map, std::string("strategy.") + table + ": no entry for (" +
                                                    detail::signal_label(arena, side, s) + ", " +
                                                    memory[static_cast<std::size_t>(m)] + ")");
  };
  fill("update", "memory", [&](SignalId s, MemoryId m, Distribution<int> d) { b.update(s, m, std::move(d)); },
       resolve_memory, true);
  fill("act", "action", [&](SignalId s, MemoryId m, Distribution<int> d) { b.act(s, m, std::move(d)); },
       [&](const std::string& where) {
         return [&, where](const std::string& n) {
           try {
             return arena.find_action(side, n);
           } catch (const Error&) {
             throw Error(ErrorKind::unknown_identifier, where + ": unknown action '" + n + "'");
           }
         };
       },
       false);
  return b.build(kind);
}

inline Strategy parse_strategy(const std::string& text, const Arena& arena) {
  return parse_strategy(detail::parse_json(text), arena);
}

/// Serialises a strategy; rows that do not depend on the signal are written
/// once with a "*" signal.
inline Json strategy_to_json(const Strategy& s, const Arena& arena) {
  const Side side = s.side();
  std::vector<std::string> actions = arena.action_names(side);
  Json doc;
  doc["side"] = std::string(to_string(side));
  doc["kind"] = std::string(to_string(s.kind()));
  doc["memory"] = s.memory_names();
  doc["init"] = detail::weighted_json(s.init(), "memory", s.memory_names());
  auto table = [&](auto&& get, const char* key, const std::vector<std::string>& names) {
    Json out = Json::array();
    for (MemoryId m = 0; m < s.memory_size(); ++m) {
      bool uniform = true;
      for (SignalId g = 0; g < s.alphabet().signals; ++g)
        if (!(get(g, m) == get(kBlank, m))) uniform = false;
      if (uniform) {
        out.push_back(Json{{"signal", "*"}, {"memory", s.memory_name(m)},
                           {"to", detail::weighted_json(get(kBlank, m), key, names)}});
        continue;
      }
      for (SignalId g = kBlank; g < s.alphabet().signals; ++g)
        out.push_back(Json{{"signal", detail::signal_label(arena, side, g)}, {"memory", s.memory_name(m)},
                           {"to", detail::weighted_json(get(g, m), key, names)}});
    }
    return out;
  };
  doc["update"] = table([&](SignalId g, MemoryId m) -> const auto& { return s.update(g, m); }, "memory",
                        s.memory_names());
  doc["act"] = table([&](SignalId g, MemoryId m) -> const auto& { return s.act(g, m); }, "action", actions);
  return doc;
}

}  // namespace randstrat
