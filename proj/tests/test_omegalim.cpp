#include <gtest/gtest.h>

#include <random>

#include "fuzzylim/omegalim.hpp"
#include "fuzzylim/oracle.hpp"
#include "support/automata.hpp"

using namespace fuzzylim;
using namespace fuzzylim::omegalim;
using fuzzylim::testing::all_lassos;
using fuzzylim::testing::random_automaton;
using fuzzylim::testing::toggle;

TEST(Run, ToggleExamples) {
  auto aut = toggle(Buchi{{"q1"}});
  auto ab = run(aut, LassoWord({}, {"a", "b"}));
  EXPECT_EQ(inf_states(ab), (StateSet{"q0", "q1"}));
  auto a = run(aut, LassoWord({}, {"a"}));
  EXPECT_EQ(a.cycle, (std::vector<State>{"q0"}));
  auto ba = run(aut, LassoWord({"b"}, {"a"}));
  EXPECT_EQ(ba.prefix, (std::vector<State>{"q0", "q1"}));
  EXPECT_EQ(ba.cycle, (std::vector<State>{"q0"}));
  EXPECT_EQ(inf_states(ba), StateSet{"q0"});
}

TEST(Run, UnknownSymbolIsInvalidWord) {
  auto aut = toggle(Buchi{{"q1"}});
  try {
    run(aut, LassoWord({"c"}, {"a"}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::invalid_word);
  }
  try {
    LassoWord({"a"}, {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::invalid_word);
  }
}

TEST(Automaton, RejectsIncompleteTransitions) {
  try {
    AutomatonSpec({"q0"}, {"a", "b"}, {{{"q0", "a"}, "q0"}}, "q0", Buchi{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::invalid_parameter);
  }
}

TEST(Accept, BuchiAndMuller) {
  auto buchi = toggle(Buchi{{"q1"}});
  EXPECT_TRUE(accepts(buchi, LassoWord({}, {"a", "b"})));
  EXPECT_FALSE(accepts(buchi, LassoWord({}, {"a"})));
  auto muller = toggle(Muller{{{"q0"}}});
  EXPECT_TRUE(accepts(muller, LassoWord({}, {"a"})));
  EXPECT_FALSE(accepts(muller, LassoWord({}, {"a", "b"})));
  auto everything = toggle(Muller{{{"q0"}, {"q1"}, {"q0", "q1"}}});
  for (const auto& w : all_lassos({"a", "b"}, 3, 4)) EXPECT_TRUE(accepts(everything, w));
}

TEST(WeakLimits, Examples) {
  auto aut = toggle(Buchi{{"q1"}});
  EXPECT_EQ(weak_limit_states(aut, run(aut, LassoWord({}, {"a", "b"}))), (StateSet{"q0", "q1"}));
  EXPECT_EQ(weak_limit_states(aut, run(aut, LassoWord({}, {"a"}))), StateSet{"q0"});
  RunLasso transient_only{{"q1"}, {"q0"}};
  EXPECT_EQ(weak_limit_states(aut, transient_only), StateSet{"q0"});
}

TEST(Oracle, SimulationAgreesOnToggle) {
  for (auto acc : {Acceptance{Buchi{{"q1"}}}, Acceptance{Muller{{{"q0"}}}}}) {
    auto aut = toggle(acc);
    for (const auto& w : all_lassos({"a", "b"}, 3, 4)) {
      EXPECT_EQ(oracle::accepts(aut, w), accepts(aut, w));
      EXPECT_EQ(oracle::simulated_inf_states(aut, w), inf_states(run(aut, w)));
    }
  }
}

// ---- properties ----

TEST(OmegaProperties, WeakLimitFormulationAgrees) {
  std::mt19937_64 rng(41);
  auto words = all_lassos({"a", "b"}, 3, 4);
  for (int t = 0; t < 100; ++t) {
    auto aut = random_automaton(rng, 3, t % 2 == 0);
    for (const auto& w : words) {
      auto r = run(aut, w);
      ASSERT_EQ(weak_limit_states(aut, r), inf_states(r));
      ASSERT_EQ(accepts_by_weak_limits(aut, w), accepts(aut, w));
      ASSERT_EQ(oracle::accepts(aut, w), accepts(aut, w));
    }
  }
}

TEST(OmegaProperties, UnrolledCycleKeepsInfStates) {
  std::mt19937_64 rng(42);
  auto words = all_lassos({"a", "b"}, 3, 4);
  for (int t = 0; t < 100; ++t) {
    auto aut = random_automaton(rng, 3, true);
    for (const auto& w : words) {
      std::vector<Symbol> twice = w.cycle;
      twice.insert(twice.end(), w.cycle.begin(), w.cycle.end());
      ASSERT_EQ(inf_states(run(aut, LassoWord(w.prefix, twice))), inf_states(run(aut, w)));
    }
  }
}

TEST(OmegaProperties, RotationAbsorbedIntoPrefix) {
  std::mt19937_64 rng(43);
  auto words = all_lassos({"a", "b"}, 3, 4);
  for (int t = 0; t < 100; ++t) {
    auto aut = random_automaton(rng, 3, false);
    for (const auto& w : words) {
      std::vector<Symbol> prefix = w.prefix;
      prefix.push_back(w.cycle.front());
      std::vector<Symbol> rotated(w.cycle.begin() + 1, w.cycle.end());
      rotated.push_back(w.cycle.front());
      ASSERT_EQ(inf_states(run(aut, LassoWord(prefix, rotated))), inf_states(run(aut, w)));
    }
  }
}

TEST(OmegaProperties, RunLassoIsTheRun) {
  // Unrolling the run lasso reproduces the state-by-state simulation.
  std::mt19937_64 rng(44);
  auto words = all_lassos({"a", "b"}, 3, 4);
  for (int t = 0; t < 50; ++t) {
    auto aut = random_automaton(rng, 3, true);
    for (const auto& w : words) {
      auto r = run(aut, w);
      ASSERT_FALSE(r.cycle.empty());
      State q = aut.initial();
      for (std::size_t i = 0; i < 40; ++i) {
        const State& expected =
            i < r.prefix.size() ? r.prefix[i] : r.cycle[(i - r.prefix.size()) % r.cycle.size()];
        ASSERT_EQ(q, expected);
        q = aut.step(q, w.at(i));
      }
    }
  }
}
