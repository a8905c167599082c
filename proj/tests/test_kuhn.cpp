#include <gtest/gtest.h>

#include <random>

#include "randstrat/arena_io.hpp"
#include "randstrat/builtins.hpp"
#include "randstrat/chain.hpp"
#include "randstrat/kuhn.hpp"
#include "support/adversaries.hpp"
#include "support/gallery.hpp"
#include "support/random_games.hpp"

using namespace randstrat;
using randstrat::testing::gallery_arena;
using randstrat::testing::memoryless_adversaries;

namespace {

void expect_same_cylinders(const Arena& a, const Strategy& x, const Strategy& y, const Strategy& adam, int horizon) {
  for (VertexId v = 0; v < a.num_vertices(); ++v) {
    auto lhs = cylinder_probabilities(product_chain(a, x, adam, v), static_cast<std::size_t>(horizon) + 1);
    auto rhs = cylinder_probabilities(product_chain(a, y, adam, v), static_cast<std::size_t>(horizon) + 1);
    ASSERT_EQ(lhs, rhs) << "start " << a.vertex_name(v);
  }
}

/// One coin toss by Eve, who does not see where it landed.
Arena coin_arena() {
  ArenaBuilder b;
  b.add_colour("heads");
  const VertexId s = b.add_vertex("s", std::nullopt, "e_s", "a_s");
  const VertexId h = b.add_vertex("h", std::string("heads"), "e_s", "a_h");
  const VertexId t = b.add_vertex("t", std::nullopt, "e_s", "a_t");
  const ActionId a = b.add_action(Side::eve, "a", "e_a");
  const ActionId bb = b.add_action(Side::eve, "b", "e_b");
  b.add_action(Side::adam, "y", "a_y");
  b.set_transition(s, a, 0, Distribution<VertexId>::dirac(h));
  b.set_transition(s, bb, 0, Distribution<VertexId>::dirac(t));
  b.set_all(h, Distribution<VertexId>::dirac(h));
  b.set_all(t, Distribution<VertexId>::dirac(t));
  return b.build();
}

}  // namespace

TEST(BehaviouralToMixed, CoinSplitsIntoTwoHalves) {
  Arena a = coin_arena();
  Strategy m = behavioural_to_mixed(uniform_behavioural(a, Side::eve), a, 1);
  EXPECT_EQ(m.kind(), StrategyKind::mixed);
  ASSERT_EQ(m.init().size(), 2u);
  std::set<ActionId> first;
  for (const auto& [mem, w] : m.init()) {
    EXPECT_EQ(w, Rational(1, 2));
    auto e = observe(m, ExecutionState{mem, kBlank}, *a.vertex_signal(Side::eve, a.find_vertex("s")));
    first.insert(next_action(m, e.front().first).front().first);
  }
  EXPECT_EQ(first, (std::set<ActionId>{a.find_action(Side::eve, "a"), a.find_action(Side::eve, "b")}));
}

TEST(BehaviouralToMixed, WhoWinsTwoStepsGivesFourQuarters) {
  Arena who = gallery_arena("who_wins");
  Strategy m = behavioural_to_mixed(uniform_behavioural(who, Side::eve), who, 2);
  ASSERT_EQ(m.init().size(), 4u);
  for (const auto& [mem, w] : m.init()) EXPECT_EQ(w, Rational(1, 4));
}

TEST(BehaviouralToMixed, RejectsAsynchronousArena) {
  Arena dui = gallery_arena("dui");
  try {
    behavioural_to_mixed(uniform_behavioural(dui, Side::eve), dui, 2);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::not_synchronous);
  }
}

TEST(BehaviouralToMixed, PreservesCylindersOnRandomSynchronousArenas) {
  std::mt19937_64 rng(10);
  for (int i = 0; i < 100; ++i) {
    randstrat::testing::ArenaShape shape;
    shape.synchronous = true;
    shape.max_vertices = 3;
    Arena a = randstrat::testing::random_arena(rng, shape);
    Strategy beh = randstrat::testing::random_strategy(rng, a, Side::eve, StrategyKind::behavioural, 2);
    Strategy mixed = behavioural_to_mixed(beh, a, 2);
    for (const auto& adam : memoryless_adversaries(a)) expect_same_cylinders(a, beh, mixed, adam, 2);
    Strategy adam = randstrat::testing::random_strategy(rng, a, Side::adam, StrategyKind::general, 2);
    expect_same_cylinders(a, beh, mixed, adam, 2);
  }
}

TEST(KuhnTranslate, PreservesCylindersOnRandomObservableArenas) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 100; ++i) {
    randstrat::testing::ArenaShape shape;
    shape.observable_actions = true;
    shape.max_vertices = 3;
    Arena a = randstrat::testing::random_arena(rng, shape);
    ASSERT_TRUE(classify(a).observable_actions);
    Strategy mixed = randstrat::testing::random_strategy(rng, a, Side::eve, StrategyKind::mixed, 3);
    auto k = kuhn_translate(mixed, a, 2);
    EXPECT_EQ(k.strategy.kind(), StrategyKind::behavioural);
    for (const auto& adam : memoryless_adversaries(a)) expect_same_cylinders(a, mixed, k.strategy, adam, 2);
    Strategy adam = randstrat::testing::random_strategy(rng, a, Side::adam, StrategyKind::general, 2);
    expect_same_cylinders(a, mixed, k.strategy, adam, 2);
  }
}

TEST(KuhnTranslate, SinglePureComponentStaysPure) {
  Arena janken = gallery_arena("janken");
  Strategy pure = act_at_step(janken, Side::eve, 2, janken.find_action(Side::eve, "paper"),
                              janken.find_action(Side::eve, "rock"));
  auto k = kuhn_translate(pure, janken, 3);
  for (MemoryId m = 0; m < k.strategy.memory_size(); ++m)
    for (SignalId g = kBlank; g < janken.num_signals(Side::eve); ++g) EXPECT_EQ(k.strategy.act(g, m).size(), 1u);
  for (const auto& adam : memoryless_adversaries(janken)) expect_same_cylinders(janken, pure, k.strategy, adam, 3);
  // histories where Eve played something other than rock at the first step never happen
  EXPECT_FALSE(k.zero_probability_histories.empty());
}

TEST(KuhnTranslate, RejectsHiddenActions) {
  Arena who = gallery_arena("who_wins");
  Strategy mixed = behavioural_to_mixed(uniform_behavioural(who, Side::eve), who, 1);
  try {
    kuhn_translate(mixed, who, 2);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::not_observable_actions);
  }
}

TEST(KuhnTranslate, RoundTripThroughBehavioural) {
  Arena janken = gallery_arena("janken");
  Strategy beh = uniform_behavioural(janken, Side::eve);
  Strategy mixed = behavioural_to_mixed(beh, janken, 2);
  auto back = kuhn_translate(mixed, janken, 2);
  EXPECT_TRUE(back.zero_probability_histories.empty());
  for (const auto& adam : memoryless_adversaries(janken)) expect_same_cylinders(janken, beh, back.strategy, adam, 2);
}

TEST(KuhnTranslate, RepeatedLetterMeasureOnVisibleActions) {
  Json doc = Json::parse(randstrat::testing::read_gallery_text("who_wins"));
  for (auto& x : doc["eve_actions"]) x["eve_signal"] = "t_" + x["id"].get<std::string>();
  for (auto& y : doc["adam_actions"]) y["adam_signal"] = "u_" + y["id"].get<std::string>();
  Arena a = parse_arena(doc);
  ASSERT_TRUE(classify(a).observable_actions);
  const ActionId xa = a.find_action(Side::eve, "a"), xb = a.find_action(Side::eve, "b");
  Strategy mixed = mixed_from_support(Side::eve, {{Rational(1, 2), constant_action(a, Side::eve, xa)},
                                                  {Rational(1, 2), constant_action(a, Side::eve, xb)}});
  auto k = kuhn_translate(mixed, a, 2);
  const SignalId s = *a.vertex_signal(Side::eve, 0);
  auto e = initial_states(k.strategy).front().first;
  e = observe(k.strategy, e, s).front().first;
  EXPECT_EQ(next_action(k.strategy, e), Distribution<ActionId>::uniform({xa, xb}));
  for (ActionId x : {xa, xb}) {
    auto f = observe(k.strategy, e, *a.action_signal(Side::eve, x)).front().first;
    f = observe(k.strategy, f, s).front().first;
    EXPECT_EQ(next_action(k.strategy, f), Distribution<ActionId>::dirac(x));
  }
}
