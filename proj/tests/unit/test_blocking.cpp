#include <gtest/gtest.h>

#include "common.hpp"
#include "oracles.hpp"
#include "properties.hpp"

using namespace delayrobust;
using testsupport::make;
using testsupport::scenario;
using testsupport::w;

namespace {

BlockReport analyze(const testsupport::Scenario& s, std::size_t i = 0) {
  return analyze_blocking(s.sup, s.bundle.plant_model().plant(), s.system, s.channels.at(i));
}

}  // namespace

TEST(Nchnl, Structure) {
  Generator n = make_nchnl(EventId(12), EventId(212));
  EXPECT_EQ(n.size(), (Size{3, 4}));
  EXPECT_EQ(shortest_marked_word(n), w("12.12"));
  EXPECT_TRUE(n.accepts_marked(w("12.212.12.12")));
  EXPECT_TRUE(n.accepts_marked(w("12.12.12")));
  EXPECT_FALSE(n.accepts_marked(w("12.212")));
  EXPECT_FALSE(n.accepts_closed(w("12.12.212")));
  EXPECT_FALSE(n.alphabet().controllable(EventId(212)));
}

TEST(BlockedTest, CaseFourBlocksAndIsBounded) {
  auto s = scenario("workcell.drb", "case4");
  BlockReport r = analyze(s);
  EXPECT_EQ(r.event, EventId(12));
  EXPECT_TRUE(r.applicable);
  EXPECT_TRUE(r.blocked);
  ASSERT_TRUE(r.witness);
  EXPECT_EQ(*r.witness, w("11.12.11.12"));
  EXPECT_EQ(*r.prefix, w("11.12.11"));
  EXPECT_EQ(r.classification, Classification::Bounded);
  EXPECT_EQ(r.bound, std::optional<std::size_t>(1));
  EXPECT_TRUE(r.fault_admissible);
}

TEST(BlockedTest, CaseFiveNeverBlocks) {
  auto s = scenario("workcell.drb", "case5");
  BlockReport r = analyze(s);
  EXPECT_EQ(r.event, EventId(16));
  EXPECT_FALSE(r.blocked);
  EXPECT_FALSE(r.witness);
  EXPECT_EQ(r.classification, Classification::Unbounded);
  EXPECT_TRUE(r.test_size.states == 0);
}

TEST(BlockedTest, ExampleThreeWitness) {
  auto s = scenario("example3.drb", "");
  BlockReport r = blocked_test(s.system, s.channels[0]);
  EXPECT_TRUE(r.blocked);
  EXPECT_EQ(r.witness, std::optional<Word>(w("20.21.20")));
}

TEST(BlockedTest, ControllableTargetIsNotApplicable) {
  auto s = scenario("workcell.drb", "case1");
  BlockReport r = blocked_test(s.system, s.channels[0]);
  EXPECT_FALSE(r.applicable);
  EXPECT_EQ(r.classification, Classification::NotApplicable);
}

TEST(BlockedTest, AgreesWithDirectSearchOnFixtures) {
  std::vector<std::pair<std::string, std::string>> cases{
      {"example1.drb", ""},       {"example2.drb", ""},        {"example2a.drb", "both"},
      {"example3.drb", ""},       {"workcell.drb", "case3"},   {"workcell.drb", "case4"},
      {"workcell.drb", "case5"}};
  std::size_t checked = 0;
  for (auto& [file, preset] : cases) {
    auto s = scenario(file, preset);
    for (const ChannelSpec& c : s.channels) {
      if (s.system.sup_prime.alphabet().controllable(c.event)) continue;
      ++checked;
      auto d = testsupport::blocked_test_check(s.system, c);
      EXPECT_FALSE(d) << file << " " << preset << ": " << d.value_or("");
    }
  }
  EXPECT_EQ(checked, 5u);
}

TEST(BlockedTest, MarkedLanguageMatchesComposition) {
  auto s = scenario("example3.drb", "");
  const ChannelSpec& c = s.channels[0];
  Generator t = blocked_test_generator(s.system.sup_primes, s.channels, c);
  std::vector<oracle::Table> parts;
  for (const Generator& g : s.system.sup_primes) parts.push_back(oracle::table_of(mark_all(g)));
  parts.push_back(oracle::table_of(make_nchnl(c.event, c.signal)));
  EXPECT_EQ(oracle::language(t, 8).marked, oracle::sync_language(parts, 8).marked);
}

TEST(DelayBound, NoReoccurrenceGivesNothing) {
  Generator g = make(3, {{0, 1, 1}, {1, 2, 2}, {2, 4, 2}}, {2});
  EXPECT_EQ(delay_bound_estimate(g, EventId(2)), std::nullopt);
  EXPECT_EQ(delay_bound_estimate(make(2, {{0, 11, 1}, {1, 12, 0}}, {0}), EventId(12)), std::optional<std::size_t>(1));
}

TEST(FaultAdmissibility, CaseFourFaultsStayInSupervisor) {
  auto s = scenario("workcell.drb", "case4");
  FaultReport f = fault_admissibility(s.sup, s.bundle.plant_model().plant(), s.system, s.channels[0]);
  EXPECT_TRUE(f.admissible);
  EXPECT_GT(f.faults_examined, 0u);
  for (const FaultCertificate& c : f.samples) EXPECT_TRUE(c.in_sup);
}
