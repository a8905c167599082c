// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails or overruns its time budget.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "randstrat/randstrat.hpp"
#include "support/adversaries.hpp"
#include "support/gallery.hpp"
#include "support/muller_oracles.hpp"
#include "support/oracles.hpp"
#include "support/random_games.hpp"

using namespace randstrat;
using namespace randstrat::testing;

namespace {

struct Failure {
  std::string message;
};

void require(bool ok, const std::string& what) {
  if (!ok) throw Failure{what};
}

template <class T>
std::string str(const T& x) {
  std::ostringstream out;
  out << x;
  return out.str();
}

std::string str(const Rational& r) { return format_rational(r); }

template <class F>
void require_error(ErrorKind kind, F&& f, const std::string& what) {
  try {
    f();
  } catch (const Error& e) {
    require(e.kind() == kind, what + ": raised " + std::string(to_string(e.kind())));
    return;
  }
  throw Failure{what + ": no error raised"};
}

ColourSet colours(const Arena& a, std::initializer_list<const char*> names) {
  ColourSet s;
  for (const char* n : names) s.insert(a.find_colour(n));
  return s;
}

long factorial(int n) { return n <= 1 ? 1 : n * factorial(n - 1); }

MullerFamily random_family(std::mt19937_64& rng, int k) {
  MullerFamily f;
  for (std::uint32_t s = 1; s < (1u << k); ++s)
    if (uniform_int(rng, 0, 1)) f.insert(ColourSet(s));
  return f;
}

// 1. D.U.I.: uniform behavioural Eve reaches the exit with probability 1/4;
// every finite-support mixed strategy crashes surely.
std::string dui() {
  const Arena a = gallery_arena("dui");
  const VertexId start = a.find_vertex("start");
  const Condition reach = Reach{colours(a, {"circ"})};
  const Strategy idle = constant_action(a, Side::adam, 0);
  const Rational p = chain_probability(a, product_chain(a, uniform_behavioural(a, Side::eve), idle, start), reach);
  require(p == Rational(1, 4), "uniform behavioural value " + str(p));
  std::mt19937_64 rng(101);
  for (int i = 0; i < 20; ++i) {
    const int k = uniform_int(rng, 1, 4);
    std::vector<std::pair<Rational, Strategy>> support;
    std::vector<int> weights;
    int total = 0;
    for (int j = 0; j < k; ++j) {
      weights.push_back(uniform_int(rng, 1, 4));
      total += weights.back();
    }
    for (int j = 0; j < k; ++j) {
      Rational w(weights[static_cast<std::size_t>(j)], total);
      w.canonicalize();
      support.emplace_back(w, random_strategy(rng, a, Side::eve, StrategyKind::pure, uniform_int(rng, 1, 4)));
    }
    const Strategy mixed = mixed_from_support(Side::eve, support);
    const Rational q = chain_probability(a, product_chain(a, mixed, idle, start), reach);
    require(q == 0, "mixed support " + str(i) + " value " + str(q));
  }
  return "uniform 1/4, 20 mixed supports 0";
}

// 2. "Who wins" reachability: the uniform pair gives 1/2; the mirror counter
// holds every length-dependent behavioural Eve to at most 1/2.
std::string who_wins_reach() {
  const Arena a = gallery_arena("who_wins");
  const VertexId init = a.find_vertex("init");
  const Condition reach = Reach{colours(a, {"circ"})};
  const Rational p = chain_probability(
      a, product_chain(a, uniform_behavioural(a, Side::eve), uniform_behavioural(a, Side::adam), init), reach);
  require(p == Rational(1, 2), "uniform pair value " + str(p));
  std::mt19937_64 rng(102);
  Rational best(0);
  for (int i = 0; i < 50; ++i) {
    const Strategy eve = random_strategy(rng, a, Side::eve, StrategyKind::behavioural, uniform_int(rng, 1, 4));
    const Rational q = chain_probability(a, product_chain(a, eve, mirror_counter_who_wins(a, eve), init), reach);
    require(q <= Rational(1, 2), "sampled Eve " + str(i) + " value " + str(q));
    if (q > best) best = q;
  }
  return "uniform 1/2, 50 behavioural Eves capped (max " + str(best) + ")";
}

// 3. "Who wins" Buchi: every finite-memory behavioural Eve scores 0 against
// the mirror counter.
std::string who_wins_buchi() {
  const Arena a = gallery_arena("who_wins");
  const VertexId init = a.find_vertex("init");
  const Condition buchi = Buchi{colours(a, {"circ"})};
  std::mt19937_64 rng(103);
  for (int i = 0; i < 50; ++i) {
    const Strategy eve = random_strategy(rng, a, Side::eve, StrategyKind::behavioural, uniform_int(rng, 1, 4));
    const Rational q = chain_probability(a, product_chain(a, eve, mirror_counter_who_wins(a, eve), init), buchi);
    require(q == 0, "sampled Eve " + str(i) + " value " + str(q));
  }
  return "50 behavioural Eves at 0";
}

// 4. Four-memory general strategy: bottom unreachable in the full-information
// product; Buchi value 1 against memoryless and random two-memory Adams.
std::string four_memory() {
  const Arena a = gallery_arena("who_wins");
  const VertexId init = a.find_vertex("init"), bottom = a.find_vertex("bottom");
  const Strategy eve = four_memory_who_wins(a);
  const auto product = best_response_product(a, eve, init);
  for (const auto& s : product.states) require(s.vertex != bottom, "bottom reachable in the adversarial product");
  const Condition buchi = Buchi{colours(a, {"circ"})};
  const auto memoryless = memoryless_adversaries(a);
  for (const auto& adam : memoryless) {
    const Rational q = chain_probability(a, product_chain(a, eve, adam, init), buchi);
    require(q == 1, "memoryless Adam value " + str(q));
  }
  std::mt19937_64 rng(104);
  for (int i = 0; i < 100; ++i) {
    const Strategy adam = random_strategy(rng, a, Side::adam, StrategyKind::behavioural, 2);
    const Rational q = chain_probability(a, product_chain(a, eve, adam, init), buchi);
    require(q == 1, "random Adam " + str(i) + " value " + str(q));
  }
  return str(product.size()) + " product states avoid bottom; " + str(memoryless.size()) +
         " memoryless + 100 random Adams give 1";
}

// 5. Snowball: Adam running with probability eps each step wins with 1 - eps
// against Eve's best response.
std::string snowball_eps() {
  const Arena a = gallery_arena("snowball");
  const VertexId init = a.find_vertex("init"), safe = a.find_vertex("safe"), cross = a.find_vertex("cross");
  const ActionId run = a.find_action(Side::adam, "run"), hide = a.find_action(Side::adam, "hide");
  for (const Rational& eps : {Rational(1, 2), Rational(1, 10), Rational(1, 100)}) {
    StrategyBuilder b(a, Side::adam, {"m"});
    b.init(Distribution<MemoryId>::dirac(0)).identity_update();
    b.act_all(0, Distribution<ActionId>::from_pairs({{run, eps}, {hide, 1 - eps}}));
    const auto product = best_response_product(a, b.build(StrategyKind::behavioural), init);
    const double target = Rational(1 - eps).get_d();
    const auto adam_reach = mdp_optimal(a, product, Reach{colours(a, {"cross"})}, Optimise::min);
    const double adam_value = start_value(product, adam_reach);
    require(std::abs(adam_value - target) <= 1e-9, "eps " + str(eps) + ": Adam value " + str(adam_value));
    const auto eve_safe = mdp_optimal(a, product, Safety{colours(a, {"cross"})}, Optimise::max);
    const double eve_value = start_value(product, eve_safe);
    require(std::abs(1 - eve_value - target) <= 1e-9, "eps " + str(eps) + ": Eve best response " + str(eve_value));
    for (int s = 0; s < product.size(); ++s) {
      const auto i = static_cast<std::size_t>(s);
      const VertexId v = product.states[i].vertex;
      require(adam_reach.one[i] == (v == cross), "eps " + str(eps) + ": value-one states");
      require(adam_reach.zero[i] == (v == safe), "eps " + str(eps) + ": value-zero states");
    }
  }
  return "1/2, 9/10, 99/100 within 1e-9";
}

// 6. Snowball preorder, positivity of the sound/chance strategy and its value
// against Adam running at step t.
std::string snowball_sound_chance() {
  const Arena a = gallery_arena("snowball");
  const VertexSet bad{a.find_vertex("cross")};
  const auto p = safety_preorder(a, bad);
  const std::vector<VertexSet> expected{{a.find_vertex("cross")}, {a.find_vertex("init")}, {a.find_vertex("safe")}};
  require(p.classes == expected, "preorder classes differ");
  const Strategy eve = sound_chance_strategy(a, p);
  require(verify_positive(a, eve, a.find_vertex("init"), bad), "not positive from init");
  std::string values;
  for (int t = 1; t <= 3; ++t) {
    const Strategy adam =
        act_at_step(a, Side::adam, t, a.find_action(Side::adam, "run"), a.find_action(Side::adam, "hide"));
    const Rational q =
        chain_probability(a, product_chain(a, eve, adam, a.find_vertex("init")), Safety{colours(a, {"cross"})});
    // Sound keeps the ball; Chance must hold it for t-1 steps and throw at t.
    Rational expected_value(1, 2);
    for (int k = 0; k < t; ++k) expected_value *= Rational(1, 2);
    require(q == expected_value, "run at " + str(t) + ": " + str(q));
    values += (t > 1 ? ", " : "") + str(q);
  }
  return "[cross] < [init] < [safe], positive from init, run-at-t values " + values;
}

// 7. Random concurrent safety games: positivity outside the bottom class,
// bottom class equals Adam's almost-sure region, turn-based oracle agrees.
std::string safety_property() {
  std::mt19937_64 rng(107);
  int turn_based = 0, positive = 0;
  for (int i = 0; i < 200; ++i) {
    const bool tb = i % 2 == 0;
    const Arena a = random_safety_game(rng, 5, 3, tb);
    const VertexSet bad{a.find_vertex("bad")};
    const auto p = safety_preorder(a, bad);
    const auto adam_region = adam_almost_sure_reach_region(a, bad);
    require(p.classes[0] == adam_region, "game " + str(i) + ": bottom class differs from Adam's region");
    if (tb) {
      require(adam_region == turn_based_almost_sure(a, bad), "game " + str(i) + ": turn-based oracle disagrees");
      ++turn_based;
    }
    const Strategy eve = sound_chance_strategy(a, p);
    require(eve.memory_size() == 2 * static_cast<int>(p.classes.size()), "game " + str(i) + ": memory size");
    for (VertexId q = 0; q < a.num_vertices(); ++q) {
      if (p.classes[0].count(q)) continue;
      require(verify_positive(a, eve, q, bad), "game " + str(i) + ": not positive from " + a.vertex_name(q));
      ++positive;
    }
  }
  return "200 games, " + str(positive) + " positive vertices, " + str(turn_based) + " turn-based checked";
}

// 8. Branching condition tree and bounds; bound ordering on random families.
std::string zielonka() {
  const Json doc = detail::parse_json(read_gallery_text("branching_condition"));
  const auto names = doc.at("colours").get<std::vector<std::string>>();
  const auto family =
      std::get<Muller>(parse_condition("muller:" + doc.at("muller").get<std::string>(), resolver_for(names))).family;
  const auto tree = zielonka_tree(static_cast<int>(names.size()), family);
  const std::string expected_shape =
      "{a,b,c,d} not in F\n"
      "  {b,c,d} in F\n"
      "  {a,c,d} in F\n"
      "  {a,b,d} in F\n"
      "    {a,b} not in F\n"
      "      {b} in F\n"
      "      {a} in F\n";
  require(format_tree(tree, names) == expected_shape, "tree shape:\n" + format_tree(tree, names));
  const auto b = memory_bounds(tree);
  require(b == MemoryBounds{4, 3, 2},
          "bounds " + str(b.pure) + "/" + str(b.behavioural_upper) + "/" + str(b.general));
  std::mt19937_64 rng(108);
  for (int i = 0; i < 500; ++i) {
    const int k = uniform_int(rng, 1, 5);
    const auto r = memory_bounds(zielonka_tree(k, random_family(rng, k)));
    require(r.general <= r.behavioural_upper && r.behavioural_upper <= r.pure, "ordering on family " + str(i));
  }
  return "shape matches, bounds 4/3/2, 500 random orderings hold";
}

// 9. Parity solver against brute force; LAR product size; Muller strategies
// against every appearance-record adversary.
std::string muller_pipeline() {
  std::mt19937_64 rng(109);
  for (int i = 0; i < 300; ++i) {
    const auto g = random_parity_game(rng, 8, 5, 3);
    require(solve_parity(g).eve_wins == brute_force_parity(g), "parity game " + str(i));
  }
  int adversaries = 0, games = 0;
  for (int i = 0; i < 300; ++i) {
    const int k = uniform_int(rng, 1, 3);
    const auto g = random_turn_game(rng, 4, k, 2, 2);
    const auto f = random_family(rng, k);
    const Arena a = turn_game_arena(g, k);
    const auto product = lar_reduction(a, f);
    require(product.num_visit_nodes() <= a.num_vertices() * factorial(a.num_colours()),
            "Muller game " + str(i) + ": product has " + str(product.num_visit_nodes()) + " states");
    const auto s = solve_simple_muller(a, f);
    require(s.lar_states <= factorial(a.num_colours()), "Muller game " + str(i) + ": memory " + str(s.lar_states));
    ++games;
    for (VertexId v = 0; v < a.num_vertices(); ++v) {
      if (!s.eve_wins[static_cast<std::size_t>(v)]) continue;
      const bool complete = for_each_lar_adversary(a, s.eve, v, 1u << 12, [&](const Strategy& adam) {
        const Rational q = chain_probability(a, product_chain(a, s.eve, adam, v), Muller{f});
        require(q == 1, "Muller game " + str(i) + " from " + a.vertex_name(v) + ": value " + str(q));
        ++adversaries;
      });
      require(complete, "Muller game " + str(i) + ": adversary enumeration truncated");
    }
  }
  return "300 parity games, " + str(games) + " Muller games, " + str(adversaries) + " adversaries beaten";
}

void require_same_cylinders(const Arena& a, const Strategy& x, const Strategy& y, const Strategy& adam, int horizon,
                            const std::string& what) {
  for (VertexId v = 0; v < a.num_vertices(); ++v)
    require(cylinder_probabilities(product_chain(a, x, adam, v), static_cast<std::size_t>(horizon) + 1) ==
                cylinder_probabilities(product_chain(a, y, adam, v), static_cast<std::size_t>(horizon) + 1),
            what + " from " + a.vertex_name(v));
}

// 10. Kuhn translations preserve cylinders; documented errors on the D.U.I. and
// who-wins arenas.
std::string kuhn() {
  std::mt19937_64 rng(110);
  int checks = 0;
  for (int i = 0; i < 100; ++i) {
    ArenaShape shape;
    shape.observable_actions = true;
    shape.max_vertices = 3;
    const Arena a = random_arena(rng, shape);
    const Strategy mixed = random_strategy(rng, a, Side::eve, StrategyKind::mixed, 3);
    const auto k = kuhn_translate(mixed, a, 2);
    require(k.strategy.kind() == StrategyKind::behavioural, "kuhn_translate result is not behavioural");
    for (const auto& adam : memoryless_adversaries(a)) {
      require_same_cylinders(a, mixed, k.strategy, adam, 2, "kuhn_translate arena " + str(i));
      ++checks;
    }
  }
  for (int i = 0; i < 100; ++i) {
    ArenaShape shape;
    shape.synchronous = true;
    shape.max_vertices = 3;
    const Arena a = random_arena(rng, shape);
    const Strategy beh = random_strategy(rng, a, Side::eve, StrategyKind::behavioural, 2);
    const Strategy mixed = behavioural_to_mixed(beh, a, 2);
    for (const auto& adam : memoryless_adversaries(a)) {
      require_same_cylinders(a, beh, mixed, adam, 2, "behavioural_to_mixed arena " + str(i));
      ++checks;
    }
  }
  const Arena dui = gallery_arena("dui"), who = gallery_arena("who_wins");
  require_error(ErrorKind::not_synchronous, [&] { behavioural_to_mixed(uniform_behavioural(dui, Side::eve), dui, 2); },
                "behavioural_to_mixed on D.U.I.");
  const Strategy who_mixed = mixed_from_support(
      Side::eve, {{Rational(1, 2), constant_action(who, Side::eve, 0)}, {Rational(1, 2), constant_action(who, Side::eve, 1)}});
  require_error(ErrorKind::not_observable_actions, [&] { kuhn_translate(who_mixed, who, 2); },
                "kuhn_translate on who wins");
  const Strategy dui_mixed = mixed_from_support(
      Side::eve, {{Rational(1, 2), constant_action(dui, Side::eve, 0)}, {Rational(1, 2), constant_action(dui, Side::eve, 1)}});
  require_error(ErrorKind::not_observable_actions, [&] { kuhn_translate(dui_mixed, dui, 2); },
                "kuhn_translate on D.U.I.");
  return str(checks) + " adversary checks, errors raised";
}

// 11. Chain cylinders against the naive recursive product up to length 6.
std::string measure() {
  std::mt19937_64 rng(111);
  std::size_t prefixes = 0;
  for (int i = 0; i < 100; ++i) {
    ArenaShape shape;
    shape.max_vertices = 3;
    const Arena a = random_arena(rng, shape);
    const auto ke = static_cast<StrategyKind>(uniform_int(rng, 0, 3));
    const auto ka = static_cast<StrategyKind>(uniform_int(rng, 0, 3));
    const Strategy eve = random_strategy(rng, a, Side::eve, ke, 2);
    const Strategy adam = random_strategy(rng, a, Side::adam, ka, 2);
    const auto chain = cylinder_probabilities(product_chain(a, eve, adam, 0), 6);
    require(chain == naive_cylinders(a, eve, adam, 0, 6), "instance " + str(i));
    prefixes += chain.size();
  }
  return "100 instances, " + str(prefixes) + " prefixes equal";
}

struct Criterion {
  int id;
  const char* title;
  double budget_seconds;
  std::function<std::string()> check;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "D.U.I. values", 1, dui},
      {2, "who wins: reachability", 5, who_wins_reach},
      {3, "who wins: Buchi against behavioural Eve", 5, who_wins_buchi},
      {4, "who wins: four-memory general strategy", 30, four_memory},
      {5, "snowball: eps-run Adam", 5, snowball_eps},
      {6, "snowball: preorder and sound/chance", 10, snowball_sound_chance},
      {7, "random concurrent safety games", 600, safety_property},
      {8, "Zielonka tree and memory bounds", 60, zielonka},
      {9, "parity, appearance records, Muller strategies", 600, muller_pipeline},
      {10, "Kuhn translations", 300, kuhn},
      {11, "measure against naive product", 300, measure},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = true;
    try {
      detail = c.check();
    } catch (const Failure& f) {
      ok = false;
      detail = f.message;
    } catch (const std::exception& e) {
      ok = false;
      detail = std::string("exception: ") + e.what();
    }
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (ok && elapsed > c.budget_seconds) {
      ok = false;
      detail += "; over budget";
    }
    failures += ok ? 0 : 1;
    std::printf("%s %2d %s: %s (%.2f s, budget %.0f s)\n", ok ? "PASS" : "FAIL", c.id, c.title, detail.c_str(), elapsed,
                c.budget_seconds);
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
