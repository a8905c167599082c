#pragma once

#include <openssl/evp.h>

#include <CLI11.hpp>
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "randstrat/randstrat.hpp"

namespace randstrat::cli {

struct Outcome {
  int exit_code = 0;
  Json report;
  std::string text;
  bool json = false;
  std::string report_path;
};

namespace detail {

namespace fs = std::filesystem;

/// Library error annotated with the input it came from.
struct InputError {
  ErrorKind kind;
  std::string message;
};

inline std::string strip_kind(const Error& e) {
  const std::string what = e.what();
  const auto pos = what.find(": ");
  return pos == std::string::npos ? what : what.substr(pos + 2);
}

inline fs::path gallery_dir() {
  if (const char* env = std::getenv("RANDSTRAT_GALLERY"); env && *env) return env;
  return RANDSTRAT_GALLERY_DIR;
}

inline std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr);
  std::ostringstream out;
  for (unsigned int i = 0; i < len; ++i) out << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
  return out.str();
}

inline std::optional<std::string> read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// A loaded input file: the name given on the command line and its text.
struct Input {
  std::string given;
  std::string text;
};

/// Accepts a path, a path without ".json", or a gallery entry given as
/// "NAME" or "gallery/NAME".
inline Input load_input(const std::string& given) {
  std::vector<fs::path> candidates{given, given + ".json"};
  std::string name = given;
  if (name.rfind("gallery/", 0) == 0) name = name.substr(8);
  candidates.push_back(gallery_dir() / name);
  candidates.push_back(gallery_dir() / (name + ".json"));
  for (const auto& c : candidates) {
    std::error_code ec;
    if (!fs::is_regular_file(c, ec)) continue;
    if (auto text = read_file(c)) return {given, *text};
  }
  throw InputError{ErrorKind::unknown_identifier, given + ": no such file or gallery entry"};
}

template <class F>
auto with_source(const std::string& source, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    throw InputError{e.kind(), source + ": " + strip_kind(e)};
  }
}

inline Json input_record(const Input& in) { return Json{{"path", in.given}, {"sha256", sha256_hex(in.text)}}; }

inline std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? sep : "") + parts[i];
  return out;
}

inline std::vector<std::string> vertex_names(const Arena& a, const VertexSet& s) {
  std::vector<std::string> out;
  for (VertexId v : s) out.push_back(a.vertex_name(v));
  return out;
}

inline VertexId find_vertex(const Arena& a, const std::string& name, const std::string& source) {
  return with_source(source, [&] { return a.find_vertex(name); });
}

inline Json classes_json(const Arena& a, const PreorderClasses& p) {
  Json out = Json::array();
  for (const auto& c : p.classes) out.push_back(vertex_names(a, c));
  return out;
}

inline std::string classes_text(const Arena& a, const PreorderClasses& p) {
  std::vector<std::string> parts;
  for (const auto& c : p.classes) parts.push_back("[" + join(vertex_names(a, c), ",") + "]");
  return join(parts, " < ");
}

inline std::string strategy_source(const std::string& arg) { return "strategy '" + arg + "'"; }

/// Resolves a built-in name or a strategy file for `side`.
inline Strategy load_strategy(const std::string& arg, const Arena& arena, Side side, const Condition& cond,
                              Json& inputs, const char* key) {
  const std::string source = strategy_source(arg);
  if (arg == "uniform-behavioural") return uniform_behavioural(arena, side);
  if (arg == "four-memory") {
    if (side != Side::eve) throw InputError{ErrorKind::precondition, source + ": built-in for Eve only"};
    return with_source(source, [&] { return four_memory_who_wins(arena); });
  }
  if (arg == "sound-chance") {
    if (side != Side::eve) throw InputError{ErrorKind::precondition, source + ": built-in for Eve only"};
    const auto* safety = std::get_if<Safety>(&cond);
    if (!safety) throw InputError{ErrorKind::precondition, source + ": needs a safety condition naming the bad colours"};
    return with_source(source, [&] {
      return sound_chance_strategy(arena, safety_preorder(arena, vertices_with_colours(arena, safety->bad)));
    });
  }
  const Input in = load_input(arg);
  inputs[key] = input_record(in);
  Strategy s = with_source(in.given, [&] { return parse_strategy(in.text, arena); });
  if (s.side() != side)
    throw InputError{ErrorKind::kind_violation, in.given + ": strategy is for the other player"};
  return s;
}

inline Outcome eval(const std::vector<std::string>& argv, const std::string& arena_arg, const std::string& eve_arg,
                    const std::string& adam_arg, const std::string& from, const std::string& condition, bool mc,
                    long n, int horizon, std::uint64_t seed, int workers) {
  Outcome out;
  out.report["command"] = argv;
  Json inputs;
  const Input arena_in = load_input(arena_arg);
  inputs["arena"] = input_record(arena_in);
  const Arena arena = with_source(arena_in.given, [&] { return parse_arena(arena_in.text); });
  const Condition cond = with_source("condition", [&] { return parse_condition(condition, resolver_for(arena)); });
  const Strategy eve = load_strategy(eve_arg, arena, Side::eve, cond, inputs, "eve");
  const Strategy adam = load_strategy(adam_arg, arena, Side::adam, cond, inputs, "adam");
  const VertexId start = find_vertex(arena, from, arena_in.given);
  out.report["inputs"] = inputs;
  Json results{{"from", from}, {"condition", condition}};
  std::ostringstream text;
  if (mc) {
    const Estimate est = with_source("monte carlo", [&] {
      return monte_carlo(arena, eve, adam, start, cond, horizon, n, seed, workers);
    });
    results["method"] = "monte-carlo";
    results["estimate"] = est.point;
    results["ci99"] = {est.ci_low, est.ci_high};
    results["samples"] = est.samples;
    results["horizon"] = horizon;
    results["seed"] = est.seed;
    results["workers"] = est.workers;
    text << "estimate " << est.point << " (99% CI [" << est.ci_low << ", " << est.ci_high << "], " << est.samples
         << " plays of " << horizon << " steps, seed " << est.seed << ", " << est.workers << " workers)\n";
  } else {
    const Rational p = with_source("evaluation", [&] {
      return chain_probability(arena, product_chain(arena, eve, adam, start), cond);
    });
    results["method"] = "exact";
    results["probability"] = format_rational(p);
    text << "probability of " << condition << " from " << from << ": " << format_rational(p) << "\n";
  }
  out.report["results"] = results;
  out.text = text.str();
  return out;
}

inline Outcome solve_safety(const std::vector<std::string>& argv, const std::string& arena_arg, const std::string& bad_arg) {
  Outcome out;
  out.report["command"] = argv;
  const Input arena_in = load_input(arena_arg);
  out.report["inputs"] = {{"arena", input_record(arena_in)}};
  const Arena arena = with_source(arena_in.given, [&] { return parse_arena(arena_in.text); });
  const ColourSet colours = with_source("--bad", [&] { return randstrat::detail::colour_list(bad_arg, resolver_for(arena)); });
  const VertexSet bad = vertices_with_colours(arena, colours);
  const auto p = with_source(arena_in.given, [&] { return safety_preorder(arena, bad); });
  const Strategy eve = with_source(arena_in.given, [&] { return sound_chance_strategy(arena, p); });
  Json safe = Json::object();
  for (const auto& [v, x] : p.safe_action) safe[arena.vertex_name(v)] = arena.action_name(Side::eve, x);
  Json verdicts = Json::object();
  std::ostringstream text;
  text << "classes: " << classes_text(arena, p) << "\n";
  text << "safe actions:";
  for (const auto& [v, x] : p.safe_action) text << " " << arena.vertex_name(v) << "->" << arena.action_name(Side::eve, x);
  text << "\npositive from:";
  for (VertexId v = 0; v < arena.num_vertices(); ++v) {
    const bool ok = verify_positive(arena, eve, v, bad);
    verdicts[arena.vertex_name(v)] = ok;
    text << " " << arena.vertex_name(v) << "=" << (ok ? "yes" : "no");
  }
  const Json doc = strategy_to_json(eve, arena);
  text << "\nstrategy (" << eve.memory_size() << " memory states):\n" << doc.dump(2) << "\n";
  out.report["results"] = {{"classes", classes_json(arena, p)},
                           {"safe_actions", safe},
                           {"verify_positive", verdicts},
                           {"strategy", doc}};
  out.text = text.str();
  return out;
}

inline Outcome solve_muller(const std::vector<std::string>& argv, const std::string& arena_arg, const std::string& condition) {
  Outcome out;
  out.report["command"] = argv;
  const Input arena_in = load_input(arena_arg);
  out.report["inputs"] = {{"arena", input_record(arena_in)}};
  const Arena arena = with_source(arena_in.given, [&] { return parse_arena(arena_in.text); });
  const Condition cond = with_source("condition", [&] { return parse_condition(condition, resolver_for(arena)); });
  const auto* muller = std::get_if<Muller>(&cond);
  if (!muller) throw InputError{ErrorKind::unsupported_condition, "condition: solve muller needs a muller: condition"};
  const auto product = with_source(arena_in.given, [&] { return lar_reduction(arena, muller->family); });
  const auto sol = with_source(arena_in.given, [&] { return solve_simple_muller(arena, muller->family); });
  VertexSet eve_region, adam_region;
  for (VertexId v = 0; v < arena.num_vertices(); ++v)
    (sol.eve_wins[static_cast<std::size_t>(v)] ? eve_region : adam_region).insert(v);
  const Json doc = strategy_to_json(sol.eve, arena);
  std::ostringstream text;
  text << "Eve wins from: [" << join(vertex_names(arena, eve_region), ",") << "]\n";
  text << "Adam wins from: [" << join(vertex_names(arena, adam_region), ",") << "]\n";
  text << "appearance-record product: " << product.num_visit_nodes() << " states; Eve memory: " << sol.lar_states
       << " records\n";
  text << "strategy:\n" << doc.dump(2) << "\n";
  out.report["results"] = {{"eve_region", vertex_names(arena, eve_region)},
                           {"adam_region", vertex_names(arena, adam_region)},
                           {"product_states", product.num_visit_nodes()},
                           {"memory", sol.lar_states},
                           {"strategy", doc}};
  out.text = text.str();
  return out;
}

inline Json tree_json(const ZielonkaTree& t, const std::vector<std::string>& names) {
  Json children = Json::array();
  for (const auto& c : t.children) children.push_back(tree_json(c, names));
  return Json{{"label", format_colour_set(t.label, names)}, {"in_f", t.in_f}, {"children", children}};
}

inline Json bounds_json(const MemoryBounds& b) {
  return Json{{"pure", b.pure}, {"behavioural_upper", b.behavioural_upper}, {"general", b.general}};
}

inline std::string bounds_text(const MemoryBounds& b) {
  return "pure=" + std::to_string(b.pure) + " behavioural_upper=" + std::to_string(b.behavioural_upper) +
         " general=" + std::to_string(b.general);
}

inline Outcome bounds(const std::vector<std::string>& argv, std::string family_arg, const std::string& colours_arg) {
  Outcome out;
  out.report["command"] = argv;
  if (family_arg.rfind("muller:", 0) != 0) family_arg = "muller:" + family_arg;
  std::vector<std::string> colours;
  for (const auto& c : randstrat::detail::split(colours_arg, ','))
    if (!c.empty()) colours.push_back(c);
  if (colours.empty()) throw InputError{ErrorKind::malformed_document, "--colours: no colours given"};
  const Condition cond = with_source("--muller", [&] { return parse_condition(family_arg, resolver_for(colours)); });
  const auto& family = std::get<Muller>(cond).family;
  const int k = static_cast<int>(colours.size());
  const auto tree = zielonka_tree(k, family);
  const auto avoiding = memory_bounds(tree);
  const auto winning = memory_bounds(zielonka_tree(k, muller_complement(family, k)));
  std::ostringstream text;
  text << format_tree(tree, colours);
  text << "player avoiding F: " << bounds_text(avoiding) << "\n";
  text << "player winning F: " << bounds_text(winning) << "\n";
  out.report["results"] = {{"colours", colours},
                           {"tree", tree_json(tree, colours)},
                           {"leaves", leaf_count(tree)},
                           {"avoiding_f", bounds_json(avoiding)},
                           {"winning_f", bounds_json(winning)}};
  out.text = text.str();
  return out;
}

inline Outcome classify_arena(const std::vector<std::string>& argv, const std::string& arena_arg) {
  Outcome out;
  out.report["command"] = argv;
  const Input arena_in = load_input(arena_arg);
  out.report["inputs"] = {{"arena", input_record(arena_in)}};
  const Arena arena = with_source(arena_in.given, [&] { return parse_arena(arena_in.text); });
  const ArenaClass c = classify(arena);
  out.report["results"] = {{"synchronous", c.synchronous},
                           {"observable_actions", c.observable_actions},
                           {"perfect_information", c.perfect_information},
                           {"simple", c.simple},
                           {"vertices", arena.num_vertices()},
                           {"eve_actions", arena.num_actions(Side::eve)},
                           {"adam_actions", arena.num_actions(Side::adam)},
                           {"colours", arena.colour_names()}};
  auto yn = [](bool b) { return b ? "yes" : "no"; };
  std::ostringstream text;
  text << "synchronous: " << yn(c.synchronous) << "\nobservable actions: " << yn(c.observable_actions)
       << "\nperfect information: " << yn(c.perfect_information) << "\nsimple: " << yn(c.simple) << "\n";
  out.text = text.str();
  return out;
}

inline std::vector<std::string> gallery_entries() {
  std::vector<std::string> names;
  std::error_code ec;
  for (const auto& e : fs::directory_iterator(gallery_dir(), ec))
    if (e.path().extension() == ".json") names.push_back(e.path().stem().string());
  std::sort(names.begin(), names.end());
  return names;
}

inline Outcome gallery_list(const std::vector<std::string>& argv) {
  Outcome out;
  out.report["command"] = argv;
  Json entries = Json::array();
  std::ostringstream text;
  for (const auto& name : gallery_entries()) {
    const Input in = load_input(name);
    const Json doc = with_source(name, [&] { return randstrat::detail::parse_json(in.text); });
    const std::string title = doc.value("name", "");
    const std::string kind = doc.contains("vertices") ? "arena" : "condition";
    entries.push_back({{"name", name}, {"kind", kind}, {"title", title}});
    text << name << " (" << kind << "): " << title << "\n";
  }
  out.report["results"] = {{"entries", entries}};
  out.text = text.str();
  return out;
}

inline Outcome gallery_export(const std::vector<std::string>& argv, const std::string& name) {
  Outcome out;
  out.report["command"] = argv;
  const auto names = gallery_entries();
  if (std::find(names.begin(), names.end(), name) == names.end())
    throw InputError{ErrorKind::unknown_identifier, name + ": no such gallery entry"};
  const Input in = load_input(name);
  out.report["inputs"] = {{"entry", input_record(in)}};
  Json doc = with_source(name, [&] { return randstrat::detail::parse_json(in.text); });
  if (doc.contains("vertices")) {
    const std::string title = doc.value("name", "");
    doc = arena_to_json(with_source(name, [&] { return parse_arena(in.text); }));
    if (!title.empty() && !doc.contains("name")) doc["name"] = title;
  }
  out.report["results"] = {{"document", doc}};
  out.text = doc.dump(2) + "\n";
  return out;
}

inline int exit_code_for(ErrorKind kind) {
  return kind == ErrorKind::unsupported_question || kind == ErrorKind::unsupported_condition ? 3 : 2;
}

}  // namespace detail

/// Runs one command line (without the program name). Never throws: errors
/// become exit code 2 (invalid input) or 3 (unsupported question) with an
/// error report.
inline Outcome run(const std::vector<std::string>& args) {
  CLI::App app{"Randomised strategies in stochastic graph games", "randstrat"};
  app.require_subcommand(1);
  bool json = false;
  app.add_flag("--json", json, "print the structured report instead of text");
  std::string report_path;
  app.add_option("--report", report_path, "also write the structured report to FILE");

  std::string arena, eve, adam = "uniform-behavioural", from, condition, bad, muller, colours, entry;
  bool exact = false, mc = false;
  long n = 10000;
  int horizon = 100, workers = 4;
  std::uint64_t seed = 1;

  auto* ev = app.add_subcommand("eval", "probability of a condition under a strategy pair");
  ev->add_option("--arena", arena, "arena file or gallery name")->required();
  ev->add_option("--eve", eve, "strategy file or built-in (uniform-behavioural, sound-chance, four-memory)")
      ->required();
  ev->add_option("--adam", adam, "strategy file or built-in (default uniform-behavioural)");
  ev->add_option("--from", from, "start vertex")->required();
  ev->add_option("--condition", condition, "e.g. reach:c1,c2 or buchi:c")->required();
  auto* exact_flag = ev->add_flag("--exact", exact, "exact rational value (default)");
  auto* mc_flag = ev->add_flag("--mc", mc, "Monte Carlo estimate");
  exact_flag->excludes(mc_flag);
  ev->add_option("--n", n, "number of sampled plays")->check(CLI::PositiveNumber);
  ev->add_option("--horizon", horizon, "steps per sampled play")->check(CLI::NonNegativeNumber);
  ev->add_option("--seed", seed, "random seed");
  ev->add_option("--workers", workers, "sampling threads")->check(CLI::PositiveNumber);

  auto* solve = app.add_subcommand("solve", "synthesise strategies");
  solve->require_subcommand(1);
  auto* safety = solve->add_subcommand("safety", "positive two-memory strategy for a concurrent safety game");
  safety->add_option("--arena", arena, "arena file or gallery name")->required();
  safety->add_option("--bad", bad, "comma-separated colours of the absorbing bad vertices")->required();
  auto* muller_cmd = solve->add_subcommand("muller", "simple deterministic Muller game via appearance records");
  muller_cmd->add_option("--arena", arena, "arena file or gallery name")->required();
  muller_cmd->add_option("--condition", condition, "muller:{a};{a,b};...")->required();

  auto* bnd = app.add_subcommand("bounds", "Zielonka tree and memory bounds of a Muller condition");
  bnd->add_option("--muller", muller, "sets separated by ';', e.g. {a};{a,b}")->required();
  bnd->add_option("--colours", colours, "comma-separated colour universe")->required();

  auto* cls = app.add_subcommand("classify", "arena classes");
  cls->add_option("--arena", arena, "arena file or gallery name")->required();

  auto* gal = app.add_subcommand("gallery", "bundled example games");
  gal->require_subcommand(1);
  auto* gal_list = gal->add_subcommand("list", "list gallery entries");
  auto* gal_export = gal->add_subcommand("export", "print a gallery entry");
  gal_export->add_option("name", entry, "entry name")->required();

  Outcome out;
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out.text = app.help();
    out.report = {{"command", args}, {"help", out.text}};
    return out;
  } catch (const CLI::ParseError& e) {
    out.exit_code = 2;
    out.text = std::string("error: ") + e.what() + "\n";
    out.report = {{"command", args}, {"error", {{"kind", "usage"}, {"message", e.what()}}}};
    return out;
  }
  try {
    if (ev->parsed()) {
      out = detail::eval(args, arena, eve, adam, from, condition, mc, n, horizon, seed, workers);
    } else if (safety->parsed()) {
      out = detail::solve_safety(args, arena, bad);
    } else if (muller_cmd->parsed()) {
      out = detail::solve_muller(args, arena, condition);
    } else if (bnd->parsed()) {
      out = detail::bounds(args, muller, colours);
    } else if (cls->parsed()) {
      out = detail::classify_arena(args, arena);
    } else if (gal_list->parsed()) {
      out = detail::gallery_list(args);
    } else if (gal_export->parsed()) {
      out = detail::gallery_export(args, entry);
    }
  } catch (const detail::InputError& e) {
    out = Outcome{detail::exit_code_for(e.kind), Json{}, "error: " + e.message + "\n"};
    out.report = {{"command", args}, {"error", {{"kind", std::string(to_string(e.kind))}, {"message", e.message}}}};
  } catch (const Error& e) {
    out = Outcome{detail::exit_code_for(e.kind()), Json{}, std::string("error: ") + e.what() + "\n"};
    out.report = {{"command", args},
                  {"error", {{"kind", std::string(to_string(e.kind()))}, {"message", detail::strip_kind(e)}}}};
  }
  out.json = json;
  out.report_path = report_path;
  return out;
}

}  // namespace randstrat::cli
