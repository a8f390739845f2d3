#include <gtest/gtest.h>

#include <algorithm>
#include <variant>

#include "common.hpp"
#include "oracles.hpp"

using namespace delayrobust;
using testsupport::make;
using testsupport::scenario;
using testsupport::w;

namespace {

bool contains_subsequence(const Word& s, const Word& sub) {
  return std::search(s.begin(), s.end(), sub.begin(), sub.end()) != s.end();
}

}  // namespace

TEST(Channel, TwoStateStructure) {
  ChannelSpec spec{1, EventId(13), 0, EventId(113)};
  Generator ch = make_channel(spec);
  EXPECT_EQ(ch.size(), (Size{2, 2}));
  EXPECT_EQ(ch.next(0, EventId(13)), 1u);
  EXPECT_EQ(ch.next(1, EventId(113)), 0u);
  EXPECT_TRUE(ch.is_marked(0));
  EXPECT_FALSE(ch.is_marked(1));
  EXPECT_TRUE(ch.alphabet().controllable(EventId(113)));
  EXPECT_FALSE(make_channel({1, EventId(12), 0, EventId(112)}).alphabet().controllable(EventId(112)));
  EXPECT_TRUE(isomorphic(sync(ch, ch), ch));
}

TEST(Channel, ClosedLanguageToDepthFour) {
  Language l = enumerate_language(make_channel({1, EventId(13), 0, EventId(113)}), 4);
  EXPECT_EQ(l.closed, (std::set<Word>{Word{}, w("13"), w("13.113"), w("13.113.13"), w("13.113.13.113")}));
}

TEST(Channel, SignalConvention) {
  EXPECT_EQ(conventional_signal(EventId(13), 0), EventId(113));
  EXPECT_EQ(conventional_signal(EventId(12), 1), EventId(212));
  EXPECT_EQ(conventional_signal(EventId(16), 2), EventId(316));
}

TEST(BuildChanneled, EmptyChannelSetIsPlainSync) {
  auto s = scenario("workcell.drb", "none");
  EXPECT_TRUE(s.channels.empty());
  EXPECT_TRUE(isomorphic(s.system.sup_prime, sync(s.controllers.behaviors)));
  EXPECT_TRUE(s.system.nulled.empty());
}

TEST(BuildChanneled, RelabelsOnlyTheRecipient) {
  auto s = scenario("workcell.drb", "case1");
  EXPECT_TRUE(s.system.sup_primes[0].alphabet().contains(EventId(113)));
  EXPECT_FALSE(s.system.sup_primes[0].alphabet().contains(EventId(13)));
  EXPECT_TRUE(s.system.sup_primes[1].alphabet().contains(EventId(13)));
  EXPECT_EQ(s.system.nulled, (std::set<EventId>{EventId(113)}));
  EXPECT_EQ(s.system.sup_prime.size(), (Size{112, 276}));
}

TEST(BuildChanneled, MalformedChannelsThrow) {
  auto s = scenario("workcell.drb", "none");
  std::vector<ChannelSpec> absent{{0, EventId(20), 0, EventId(120)}};
  EXPECT_THROW(build_channeled(s.controllers.behaviors, absent), ChannelError);
  std::vector<ChannelSpec> stale{{1, EventId(13), 0, EventId(11)}};
  EXPECT_THROW(build_channeled(s.controllers.behaviors, stale), ChannelError);
  std::vector<ChannelSpec> twice{{1, EventId(13), 0, EventId(113)}, {1, EventId(13), 0, EventId(413)}};
  EXPECT_THROW(build_channeled(s.controllers.behaviors, twice), ChannelError);
}

TEST(BuildChanneled, SameEventToTwoRecipientsUsesTwoChannels) {
  auto s = scenario("workcell.drb", "15:FEEDERLOC,15:LATHELOC");
  ASSERT_EQ(s.channels.size(), 2u);
  EXPECT_EQ(s.channels[0].signal, EventId(115));
  EXPECT_EQ(s.channels[1].signal, EventId(315));
  EXPECT_EQ(s.system.channels.size(), 2u);
  EXPECT_EQ(s.system.nulled, (std::set<EventId>{EventId(115), EventId(315)}));
}

TEST(BuildChanneled, ChannelDiscipline) {
  auto s = scenario("workcell.drb", "case2");
  for (const ChannelSpec& c : s.channels) {
    Generator ch = make_channel(c);
    for (const Word& t : enumerate_language(s.system.sup_prime, 8).closed) {
      Word p;
      for (EventId e : t)
        if (e == c.event || e == c.signal) p.push_back(e);
      EXPECT_TRUE(ch.accepts_closed(p)) << to_string(t);
    }
  }
}

TEST(Verdict, CaseOneRobust) {
  auto s = scenario("workcell.drb", "case1");
  Verdict v = check_delay_robustness(s.sup, s.system);
  EXPECT_TRUE(v.robust);
  EXPECT_EQ(v.channeled_size, (Size{112, 276}));
  EXPECT_EQ(v.reduced, (Size{70, 153}));
  EXPECT_FALSE(v.counterexample || v.nondeterminism || v.isomorphism_failure);
  auto det = determinize_if_possible(supqc(s.system.sup_prime, {s.system.nulled}));
  ASSERT_TRUE(std::holds_alternative<Generator>(det));
  EXPECT_TRUE(isomorphic(std::get<Generator>(det), s.sup));
}

TEST(Verdict, CaseTwoRobust) {
  auto s = scenario("workcell.drb", "case2");
  Verdict v = check_delay_robustness(s.sup, s.system);
  EXPECT_TRUE(v.robust);
  EXPECT_EQ(v.channeled_size, (Size{168, 444}));
  EXPECT_EQ(v.reduced, (Size{70, 153}));
}

TEST(Verdict, CaseThreeDelayCritical) {
  auto s = scenario("workcell.drb", "case3");
  Verdict v = check_delay_robustness(s.sup, s.system);
  EXPECT_FALSE(v.robust);
  ASSERT_TRUE(v.counterexample);
  EXPECT_FALSE(v.nondeterminism || v.isomorphism_failure);
  EXPECT_EQ(v.counterexample->kind, Counterexample::Kind::ExtraClosed);
  EXPECT_EQ(v.counterexample->projected, w("11.12.11.12.13.14.19.15"));
  EXPECT_TRUE(s.system.sup_prime.accepts_closed(v.counterexample->channeled));
  EXPECT_FALSE(s.sup.accepts_closed(v.counterexample->projected));
  auto violation = uncontrollable_spec_violation(s.bundle.plant_model(), v.counterexample->projected);
  ASSERT_TRUE(violation);
  EXPECT_TRUE(contains_subsequence(violation->word, w("13.14.19.15.16")));
}

TEST(Verdict, SuppliedControllersGiveTheSameVerdicts) {
  for (const char* preset : {"case1", "case2", "case3"}) {
    auto a = scenario("workcell.drb", preset);
    auto b = scenario("workcell.drb", preset, true);
    Verdict va = check_delay_robustness(a.sup, a.system), vb = check_delay_robustness(b.sup, b.system);
    EXPECT_EQ(va.robust, vb.robust) << preset;
    EXPECT_EQ(va.channeled_size, vb.channeled_size) << preset;
  }
}

TEST(Verdict, DecentralizedReferenceGivesTheSameVerdict) {
  for (const char* preset : {"case1", "case3", "case4"}) {
    auto s = scenario("workcell.drb", preset);
    std::vector<Generator> parts{s.bundle.plant_model().plant()};
    for (const auto& lc : s.controllers.locals) parts.push_back(lc.controller);
    Generator reference = sync(parts);
    EXPECT_EQ(check_delay_robustness(reference, s.system).robust, check_delay_robustness(s.sup, s.system).robust)
        << preset;
  }
}

TEST(Verdict, ExampleOneNondeterministicWithEqualLanguages) {
  auto s = scenario("example1.drb", "");
  Verdict v = check_delay_robustness(s.sup, s.system);
  EXPECT_FALSE(v.robust);
  EXPECT_TRUE(v.nondeterminism);
  EXPECT_FALSE(v.counterexample);
  EXPECT_FALSE(language_counterexample(s.sup, s.system));
  EXPECT_FALSE(has_observer_property(s.system.sup_prime, {s.system.nulled}));
  // After s = 20.10.120.12, no continuation projects to 11 although P(s).11 is marked in SUP.
  Word s_word = w("20.10.120.12");
  ASSERT_TRUE(s.system.sup_prime.accepts_closed(s_word));
  EXPECT_TRUE(s.sup.accepts_marked(w("20.10.12.11")));
  oracle::Table t = oracle::table_of(s.system.sup_prime);
  auto from = t.walk(oracle::str_of(s_word));
  ASSERT_TRUE(from);
  oracle::Table shifted = t;
  shifted.init = *from;
  EXPECT_FALSE(oracle::project_language(shifted, {120}, 1).closed.count({11}));
}

TEST(Verdict, ExampleTwoBlocking) {
  auto s = scenario("example2.drb", "");
  Verdict v = check_delay_robustness(s.sup, s.system);
  EXPECT_FALSE(v.robust);
  EXPECT_FALSE(nonblocking(s.system.sup_prime));
  EXPECT_TRUE(s.system.sup_prime.accepts_closed(w("22.13")));
  EXPECT_FALSE(s.sup.accepts_closed(w("22.13")));
}

TEST(Verdict, ExampleTwoAJointFailure) {
  EXPECT_TRUE(check_delay_robustness(scenario("example2a.drb", "only21").sup,
                                     scenario("example2a.drb", "only21").system)
                  .robust);
  auto s23 = scenario("example2a.drb", "only23");
  EXPECT_TRUE(check_delay_robustness(s23.sup, s23.system).robust);
  auto both = scenario("example2a.drb", "both");
  Verdict v = check_delay_robustness(both.sup, both.system);
  EXPECT_FALSE(v.robust);
  ASSERT_TRUE(v.counterexample);
  EXPECT_EQ(v.counterexample->projected, w("15.23.20.21.22.15"));
  EXPECT_FALSE(both.sup.accepts_closed(w("15.23.20.21.22.15")));
}

TEST(Verdict, ExactlyOnePieceOfEvidence) {
  for (auto [file, preset] : std::vector<std::pair<std::string, std::string>>{
           {"example1.drb", ""}, {"example2.drb", ""}, {"example2a.drb", "both"}, {"workcell.drb", "case3"}}) {
    auto s = scenario(file, preset);
    Verdict v = check_delay_robustness(s.sup, s.system);
    ASSERT_FALSE(v.robust);
    EXPECT_EQ(v.counterexample.has_value() + v.nondeterminism.has_value() + v.isomorphism_failure.has_value(), 1)
        << file;
  }
}

TEST(Monotonicity, CaseTwoSubsets) {
  auto s = scenario("workcell.drb", "case2");
  MonotonicityReport r = check_subset_monotonicity(s.sup, s.controllers.behaviors, s.channels);
  EXPECT_TRUE(r.full_robust);
  EXPECT_EQ(r.subsets_checked, 3u);
  EXPECT_TRUE(r.ok());
}

TEST(Monotonicity, EmptySubsetIsRobust) {
  auto s = scenario("workcell.drb", "none");
  EXPECT_TRUE(check_delay_robustness(s.sup, s.system).robust);
}
