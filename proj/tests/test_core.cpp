#include <gtest/gtest.h>

#include <random>

#include "randstrat/arena.hpp"
#include "randstrat/arena_io.hpp"
#include "support/gallery.hpp"
#include "support/random_games.hpp"

using namespace randstrat;
using randstrat::testing::gallery_arena;

TEST(Rational, ParsesAndCanonicalises) {
  EXPECT_EQ(parse_rational("2/4"), Rational(1, 2));
  EXPECT_EQ(format_rational(parse_rational("6/8")), "3/4");
  EXPECT_EQ(parse_rational(" 1 "), Rational(1));
  EXPECT_THROW(parse_rational("1/0"), Error);
  EXPECT_THROW(parse_rational("a/2"), Error);
  EXPECT_THROW(parse_rational("1/-2"), Error);
}

TEST(Distribution, MergesAndValidates) {
  auto d = Distribution<int>::from_pairs({{1, Rational(1, 4)}, {1, Rational(1, 4)}, {2, Rational(1, 2)}});
  EXPECT_EQ(d.size(), 2u);
  EXPECT_EQ(d.weight(1), Rational(1, 2));
  EXPECT_EQ(d.weight(3), Rational(0));
  EXPECT_THROW(Distribution<int>::from_pairs({{1, Rational(3, 4)}}), Error);
  EXPECT_TRUE(Distribution<int>::dirac(4).is_dirac());
  EXPECT_EQ(Distribution<int>::uniform({0, 1, 2}).weight(2), Rational(1, 3));
}

TEST(ParseArena, Snowball) {
  Arena a = gallery_arena("snowball");
  EXPECT_EQ(a.num_vertices(), 3);
  EXPECT_EQ(a.action_names(Side::eve), (std::vector<std::string>{"wait", "throw"}));
  EXPECT_EQ(a.action_names(Side::adam), (std::vector<std::string>{"run", "hide"}));
  VertexId init = a.find_vertex("init");
  EXPECT_EQ(a.transition(init, a.find_action(Side::eve, "throw"), a.find_action(Side::adam, "run")),
            Distribution<VertexId>::dirac(a.find_vertex("safe")));
}

TEST(ParseArena, SingleSelfLoop) {
  Arena a = parse_arena(std::string(R"({
    "vertices": [{"id": "q"}],
    "eve_actions": [{"id": "x"}], "adam_actions": [{"id": "y"}],
    "transitions": [{"from": "q", "eve": "x", "adam": "y", "to": [{"vertex": "q", "prob": "1"}]}]})"));
  EXPECT_EQ(a.num_vertices(), 1);
  EXPECT_TRUE(a.is_sink(0));
}

TEST(ParseArena, RejectsUnnormalisedDistribution) {
  const std::string doc = R"({
    "vertices": [{"id": "q"}, {"id": "r"}],
    "eve_actions": [{"id": "x"}], "adam_actions": [{"id": "y"}],
    "transitions": [
      {"from": "q", "eve": "x", "adam": "y", "to": [{"vertex": "q", "prob": "1/2"}, {"vertex": "r", "prob": "1/4"}]},
      {"from": "r", "eve": "*", "adam": "*", "to": [{"vertex": "r", "prob": "1"}]}]})";
  try {
    parse_arena(doc);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::distribution_not_normalised);
    EXPECT_NE(std::string(e.what()).find("(q, x, y)"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("3/4"), std::string::npos);
  }
}

TEST(ParseArena, ErrorKinds) {
  auto kind_of = [](const std::string& doc) {
    try {
      parse_arena(doc);
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::precondition;
  };
  EXPECT_EQ(kind_of("{not json"), ErrorKind::malformed_document);
  EXPECT_EQ(kind_of(R"({"vertices": []})"), ErrorKind::malformed_document);
  EXPECT_EQ(kind_of(R"({"vertices": [{"id": "q"}, {"id": "q"}], "eve_actions": [], "adam_actions": [],
                        "transitions": []})"),
            ErrorKind::duplicate_id);
  EXPECT_EQ(kind_of(R"({"vertices": [{"id": "q"}], "eve_actions": [{"id": "x"}], "adam_actions": [{"id": "y"}],
                        "transitions": [{"from": "q", "eve": "x", "adam": "y", "to": [{"vertex": "z", "prob": "1"}]}]})"),
            ErrorKind::unknown_identifier);
  EXPECT_EQ(kind_of(R"({"vertices": [{"id": "q"}], "eve_actions": [{"id": "q"}], "adam_actions": [{"id": "y"}],
                        "transitions": []})"),
            ErrorKind::duplicate_id);
  EXPECT_EQ(kind_of(R"({"vertices": [{"id": "q", "eve_signal": "blank"}], "eve_actions": [{"id": "x"}],
                        "adam_actions": [{"id": "y"}], "transitions": []})"),
            ErrorKind::duplicate_id);
}

TEST(ParseArena, GalleryRoundTrips) {
  for (const char* name : {"janken", "who_wins", "dui", "snowball"}) {
    Arena a = gallery_arena(name);
    Json once = arena_to_json(a);
    Json twice = arena_to_json(parse_arena(once));
    EXPECT_EQ(once, twice) << name;
  }
}

TEST(Classify, GalleryArenas) {
  auto who = classify(gallery_arena("who_wins"));
  EXPECT_TRUE(who.synchronous);
  EXPECT_FALSE(who.observable_actions);
  EXPECT_FALSE(who.perfect_information);

  EXPECT_FALSE(classify(gallery_arena("dui")).synchronous);

  auto snow = classify(gallery_arena("snowball"));
  EXPECT_TRUE(snow.perfect_information);
  EXPECT_TRUE(snow.observable_actions);
  EXPECT_FALSE(snow.simple);
}

TEST(Classify, ChainHoldsOnRandomArenas) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 300; ++i) {
    Arena a = randstrat::testing::random_arena(rng, {});
    auto c = classify(a);
    if (c.simple) EXPECT_TRUE(c.perfect_information);
    if (c.perfect_information) EXPECT_TRUE(c.synchronous);
    if (c.observable_actions) EXPECT_TRUE(c.synchronous);
    for (VertexId v = 0; v < a.num_vertices(); ++v)
      for (ActionId x = 0; x < a.num_actions(Side::eve); ++x)
        for (ActionId y = 0; y < a.num_actions(Side::adam); ++y) EXPECT_EQ(a.transition(v, x, y).total(), 1);
  }
}

TEST(ObservationTrace, Examples) {
  Arena dui = gallery_arena("dui");
  PlayPrefix p{dui.find_vertex("start"), {{0, 0, dui.find_vertex("middle")}, {1, 0, dui.find_vertex("exit")}}};
  EXPECT_TRUE(observation_trace(dui, p, Side::eve).empty());

  Arena who = gallery_arena("who_wins");
  PlayPrefix q{who.find_vertex("init"),
               {{who.find_action(Side::eve, "a"), who.find_action(Side::adam, "B"), who.find_vertex("delay")}}};
  auto trace = observation_trace(who, q, Side::eve);
  ASSERT_EQ(trace.size(), 3u);
  EXPECT_EQ(trace[0], trace[2]);
  EXPECT_NE(trace[0], trace[1]);

  Arena snow = gallery_arena("snowball");
  PlayPrefix r{snow.find_vertex("init"), {{0, 1, snow.find_vertex("init")}}};
  auto t = observation_trace(snow, r, Side::eve);
  EXPECT_EQ(t, (std::vector<SignalId>{*snow.vertex_signal(Side::eve, 0), *snow.action_signal(Side::eve, 0),
                                      *snow.vertex_signal(Side::eve, 0)}));
  PlayPrefix bad{snow.find_vertex("init"), {{0, 0, snow.find_vertex("safe")}}};
  EXPECT_THROW(observation_trace(snow, bad, Side::eve), Error);
}

TEST(ObservationTrace, LengthCountsDefinedObservations) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 200; ++i) {
    Arena a = randstrat::testing::random_arena(rng, {});
    auto prefix = randstrat::testing::random_prefix(rng, a, 4);
    for (Side s : {Side::eve, Side::adam}) {
      std::size_t expected = a.vertex_signal(s, prefix.start).has_value();
      for (const auto& st : prefix.steps) {
        expected += a.action_signal(s, s == Side::eve ? st.eve : st.adam).has_value();
        expected += a.vertex_signal(s, st.next).has_value();
      }
      EXPECT_EQ(observation_trace(a, prefix, s).size(), expected);
      if (classify(a).synchronous) EXPECT_EQ(expected, 2 * prefix.steps.size() + 1);
    }
  }
}
