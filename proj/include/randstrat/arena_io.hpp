#pragma once

#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include <nlohmann/json.hpp>

#include "randstrat/arena.hpp"

namespace randstrat {

using Json = nlohmann::ordered_json;

namespace detail {

inline const Json& field(const Json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key))
    throw Error(ErrorKind::malformed_document, where + ": missing field '" + key + "'");
  return obj.at(key);
}

inline std::string string_field(const Json& obj, const char* key, const std::string& where) {
  const Json& v = field(obj, key, where);
  if (!v.is_string()) throw Error(ErrorKind::malformed_document, where + "." + key + ": expected a string");
  return v.get<std::string>();
}

inline std::optional<std::string> optional_string(const Json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key) || obj.at(key).is_null()) return std::nullopt;
  if (!obj.at(key).is_string())
    throw Error(ErrorKind::malformed_document, where + "." + key + ": expected a string");
  return obj.at(key).get<std::string>();
}

inline const Json& array_field(const Json& obj, const char* key, const std::string& where) {
  const Json& v = field(obj, key, where);
  if (!v.is_array()) throw Error(ErrorKind::malformed_document, where + "." + key + ": expected a list");
  return v;
}

inline Rational json_rational(const Json& v, const std::string& where) {
  try {
    if (v.is_string()) return parse_rational(v.get<std::string>());
    if (v.is_number_integer()) return Rational(v.get<long>());
  } catch (const Error& e) {
    throw Error(ErrorKind::malformed_document, where + ": " + e.what());
  }
  throw Error(ErrorKind::malformed_document, where + ": probability must be a \"num/den\" string");
}

inline Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::malformed_document, std::string("at byte ") + std::to_string(e.byte) + ": " + e.what());
  }
}

}  // namespace detail

/// Reads the arena document format. In a transition entry, `eve` or `adam`
/// may be "*" to cover every action of that player; an entry naming both
/// actions explicitly takes precedence over wildcard entries for the same
/// triple, and two entries of equal specificity for one triple are rejected.
inline Arena parse_arena(const Json& doc) {
  using detail::string_field;
  using detail::optional_string;
  if (!doc.is_object()) throw Error(ErrorKind::malformed_document, "arena document must be an object");
  ArenaBuilder b;
  if (doc.contains("colours")) {
    const Json& cs = detail::array_field(doc, "colours", "arena");
    for (std::size_t i = 0; i < cs.size(); ++i) {
      if (!cs[i].is_string())
        throw Error(ErrorKind::malformed_document, "colours[" + std::to_string(i) + "]: expected a string");
      b.add_colour(cs[i].get<std::string>());
    }
  }
  const Json& vs = detail::array_field(doc, "vertices", "arena");
  for (std::size_t i = 0; i < vs.size(); ++i) {
    std::string where = "vertices[" + std::to_string(i) + "]";
    b.add_vertex(string_field(vs[i], "id", where), optional_string(vs[i], "colour", where),
                 optional_string(vs[i], "eve_signal", where), optional_string(vs[i], "adam_signal", where));
  }
  for (Side s : {Side::eve, Side::adam}) {
    std::string key = s == Side::eve ? "eve_actions" : "adam_actions";
    std::string sig = s == Side::eve ? "eve_signal" : "adam_signal";
    const Json& as = detail::array_field(doc, key.c_str(), "arena");
    for (std::size_t i = 0; i < as.size(); ++i) {
      std::string where = key + "[" + std::to_string(i) + "]";
      b.add_action(s, string_field(as[i], "id", where), optional_string(as[i], sig.c_str(), where));
    }
  }
  const Arena& view = b.peek();
  auto resolve = [&](const std::string& name, Side s, const std::string& where) -> std::vector<ActionId> {
    if (name == "*") {
      std::vector<ActionId> all(static_cast<std::size_t>(view.num_actions(s)));
      for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<ActionId>(i);
      return all;
    }
    try {
      return {view.find_action(s, name)};
    } catch (const Error& e) {
      throw Error(e.kind(), where + ": " + e.what());
    }
  };
  // specificity: number of wildcards in the entry that last set the triple
  std::map<std::tuple<VertexId, ActionId, ActionId>, int> set_by;
  const Json& ts = detail::array_field(doc, "transitions", "arena");
  for (std::size_t i = 0; i < ts.size(); ++i) {
    std::string where = "transitions[" + std::to_string(i) + "]";
    std::string from = string_field(ts[i], "from", where);
    std::string eve = string_field(ts[i], "eve", where);
    std::string adam = string_field(ts[i], "adam", where);
    VertexId v;
    try {
      v = view.find_vertex(from);
    } catch (const Error& e) {
      throw Error(e.kind(), where + ": " + e.what());
    }
    int wildcards = (eve == "*") + (adam == "*");
    std::map<VertexId, Rational> acc;
    const Json& to = detail::array_field(ts[i], "to", where);
    for (std::size_t j = 0; j < to.size(); ++j) {
      std::string w2 = where + ".to[" + std::to_string(j) + "]";
      VertexId r;
      try {
        r = view.find_vertex(string_field(to[j], "vertex", w2));
      } catch (const Error& e) {
        if (e.kind() == ErrorKind::malformed_document) throw;
        throw Error(e.kind(), w2 + ": " + e.what());
      }
      Rational p = detail::json_rational(detail::field(to[j], "prob", w2), w2 + ".prob");
      if (p <= 0 || p > 1) throw Error(ErrorKind::distribution_not_normalised, w2 + ": probability out of (0,1]");
      acc[r] += p;
    }
    Rational total(0);
    for (const auto& [r, p] : acc) total += p;
    if (total != 1)
      throw Error(ErrorKind::distribution_not_normalised,
                  where + " (" + from + ", " + eve + ", " + adam + "): weights sum to " + format_rational(total));
    auto dist = Distribution<VertexId>::from_map(std::move(acc));
    for (ActionId x : resolve(eve, Side::eve, where))
      for (ActionId y : resolve(adam, Side::adam, where)) {
        auto key = std::make_tuple(v, x, y);
        auto it = set_by.find(key);
        if (it != set_by.end()) {
          if (it->second == wildcards)
            throw Error(ErrorKind::duplicate_id, where + ": transition (" + from + ", " + view.action_name(Side::eve, x) +
                                                     ", " + view.action_name(Side::adam, y) + ") defined twice");
          if (it->second < wildcards) continue;
        }
        set_by[key] = wildcards;
        b.set_transition(v, x, y, dist);
      }
  }
  return b.build();
}

inline Arena parse_arena(const std::string& text) { return parse_arena(detail::parse_json(text)); }

/// Fully expanded document: one transition entry per (v, x, y), no wildcards.
inline Json arena_to_json(const Arena& a) {
  Json doc = Json::object();
  doc["colours"] = a.colour_names();
  Json vs = Json::array();
  for (VertexId v = 0; v < a.num_vertices(); ++v) {
    Json e = Json::object();
    e["id"] = a.vertex_name(v);
    if (auto c = a.colour(v)) e["colour"] = a.colour_name(*c);
    if (auto s = a.vertex_signal(Side::eve, v)) e["eve_signal"] = a.signal_name(Side::eve, *s);
    if (auto s = a.vertex_signal(Side::adam, v)) e["adam_signal"] = a.signal_name(Side::adam, *s);
    vs.push_back(std::move(e));
  }
  doc["vertices"] = std::move(vs);
  for (Side s : {Side::eve, Side::adam}) {
    Json as = Json::array();
    for (ActionId x = 0; x < a.num_actions(s); ++x) {
      Json e = Json::object();
      e["id"] = a.action_name(s, x);
      if (auto g = a.action_signal(s, x)) e[s == Side::eve ? "eve_signal" : "adam_signal"] = a.signal_name(s, *g);
      as.push_back(std::move(e));
    }
    doc[s == Side::eve ? "eve_actions" : "adam_actions"] = std::move(as);
  }
  Json ts = Json::array();
  for (VertexId v = 0; v < a.num_vertices(); ++v)
    for (ActionId x = 0; x < a.num_actions(Side::eve); ++x)
      for (ActionId y = 0; y < a.num_actions(Side::adam); ++y) {
        Json e = Json::object();
        e["from"] = a.vertex_name(v);
        e["eve"] = a.action_name(Side::eve, x);
        e["adam"] = a.action_name(Side::adam, y);
        Json to = Json::array();
        for (const auto& [r, p] : a.transition(v, x, y))
          to.push_back(Json{{"vertex", a.vertex_name(r)}, {"prob", format_rational(p)}});
        e["to"] = std::move(to);
        ts.push_back(std::move(e));
      }
  doc["transitions"] = std::move(ts);
  return doc;
}

}  // namespace randstrat
