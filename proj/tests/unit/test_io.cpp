#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>

#include "common.hpp"

using namespace delayrobust;
using testsupport::load;
using testsupport::w;

namespace {

std::size_t error_line(const std::string& text) {
  try {
    io::parse_bundle_text(text);
  } catch (const io::ParseError& e) {
    return e.line();
  }
  return 0;
}

io::PipelineReport run(const std::string& file, const std::string& selector) {
  io::PipelineOptions o;
  o.channels = selector;
  return io::run_pipeline(load(file), o);
}

}  // namespace

TEST(Bundle, ParsesWorkcell) {
  io::ProjectBundle b = load("workcell.drb");
  EXPECT_EQ(b.name, "WORKCELL");
  EXPECT_EQ(b.agents.size(), 3u);
  EXPECT_EQ(b.specs.size(), 5u);
  EXPECT_EQ(b.locals.size(), 3u);
  EXPECT_EQ(b.presets.size(), 6u);
  EXPECT_TRUE(b.presets.back().all_imports);
  EXPECT_EQ(b.descriptions.at(EventId(19)), "LATHE loads part from LBUF and starts working");
  EXPECT_EQ(b.participant_index("ROBOTLOC"), std::optional<std::size_t>(1));
  EXPECT_EQ(b.owner_of(EventId(16)), std::optional<std::size_t>(1));
  EXPECT_EQ(b.plant_model().plant().size(), (Size{16, 56}));
}

TEST(Bundle, ErrorsCarryLineNumbers) {
  EXPECT_EQ(error_line("bundle X\nfrobnicate 3\n"), 2u);
  EXPECT_EQ(error_line("agent A\n  states 2\n  trans 0 11 1\n  trans 0 11 0\nend\n"), 4u);
  EXPECT_EQ(error_line("agent A\n  states 2\n  trans 0 11 1\n  controllable 13\nend\n"), 4u);
  EXPECT_EQ(error_line("agent A\n  states 2\n  marked 5\nend\n"), 3u);
  EXPECT_EQ(error_line("bundle X\nagent A\n  states 1\n"), 2u);
  EXPECT_EQ(error_line("agent A\n  states 2\n  trans 0 11 1\nend\nchannel 11 B\n"), 5u);
  EXPECT_EQ(error_line("agent A\n  states 1\n  trans 0 11 0\nend\nchannel 13 A\n"), 5u);
}

TEST(Bundle, ErrorMessagesNameTheProblem) {
  try {
    io::parse_bundle_text("agent A\n  states 2\n  trans 0 11 1\n  trans 0 11 0\nend\n", "x.drb");
    FAIL();
  } catch (const io::ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("x.drb:4"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("nondeterminism"), std::string::npos);
  }
  EXPECT_THROW(io::parse_bundle(testsupport::fixture("missing.drb")), Error);
}

TEST(Bundle, SerializationRoundTrips) {
  for (const auto& entry : std::filesystem::directory_iterator(DELAYROBUST_FIXTURES_DIR)) {
    if (entry.path().extension() != ".drb") continue;
    io::ProjectBundle b = io::parse_bundle(entry.path());
    std::string text = io::serialize_bundle(b);
    EXPECT_EQ(io::parse_bundle_text(text), b) << entry.path();
    EXPECT_EQ(io::serialize_bundle(io::parse_bundle_text(text)), text) << entry.path();
  }
}

TEST(Channels, Selectors) {
  io::ProjectBundle b = load("workcell.drb");
  Generator sup = io::reference_supervisor(b);
  auto locals = io::obtain_controllers(b, sup, false).locals;
  EXPECT_TRUE(io::resolve_channels(b, "none", locals).empty());
  EXPECT_TRUE(io::resolve_channels(b, "", locals).empty());
  auto c1 = io::resolve_channels(b, "case1", locals);
  ASSERT_EQ(c1.size(), 1u);
  EXPECT_EQ(c1[0], (ChannelSpec{1, EventId(13), 0, EventId(113)}));
  EXPECT_EQ(io::resolve_channels(b, "13:FEEDER", locals), c1);
  EXPECT_EQ(io::resolve_channels(b, "13", locals), c1);  // one importer only
  EXPECT_EQ(io::resolve_channels(b, "case6", locals).size(), 8u);
  EXPECT_EQ(io::resolve_channels(b, "all-imports", locals), io::all_imports(b, locals));
  EXPECT_THROW(io::resolve_channels(b, "15", locals), ChannelError);
  EXPECT_THROW(io::resolve_channels(b, "nosuch", locals), ChannelError);
  EXPECT_THROW(io::resolve_channels(b, "13:NOBODY", locals), ChannelError);
}

TEST(Report, JsonIsDeterministicWithoutTiming) {
  io::PipelineReport a = run("workcell.drb", "case1"), b = run("workcell.drb", "case1");
  std::string ja = io::report_to_json(a, false);
  EXPECT_EQ(ja, io::report_to_json(b, false));
  EXPECT_EQ(ja.find("timing_ms"), std::string::npos);
  EXPECT_NE(io::report_to_json(a, true).find("\"timing_ms\""), std::string::npos);
  EXPECT_TRUE(a.passed());
  EXPECT_EQ(a.verdict.channeled_size, (Size{112, 276}));
}

TEST(Report, CaseThreeFailsAndExplains) {
  io::PipelineReport r = run("workcell.drb", "case3");
  EXPECT_FALSE(r.passed());
  ASSERT_TRUE(r.spec_violation);
  EXPECT_EQ(r.spec_violation->specs, std::vector<std::string>{"SPEC2"});
  std::string text = io::explain(io::report_to_json(r));
  EXPECT_NE(text.find("delay-critical"), std::string::npos);
  EXPECT_NE(text.find("11.12.11.12.13.14.19.15"), std::string::npos);
  EXPECT_NE(text.find("ROBOT loads part from INBUF into SBBUF"), std::string::npos);
  EXPECT_NE(text.find("SPEC2"), std::string::npos);
}

TEST(Report, ExplainOfEmptyInputIsEmpty) {
  EXPECT_EQ(io::explain(""), "");
  EXPECT_EQ(io::explain("  \n"), "");
  EXPECT_EQ(io::explain("{}"), "");
}

TEST(Report, BudgetFromEnvironment) {
  ::unsetenv("DELAYROBUST_BUDGET");
  EXPECT_EQ(io::budget_from_environment(), kDefaultSubsetBudget);
  ::setenv("DELAYROBUST_BUDGET", "1234", 1);
  EXPECT_EQ(io::budget_from_environment(), 1234u);
  ::setenv("DELAYROBUST_BUDGET", "lots", 1);
  EXPECT_THROW(io::budget_from_environment(), Error);
  ::unsetenv("DELAYROBUST_BUDGET");
}

TEST(Report, SupervisorBundlesHaveNoPlant) {
  io::PipelineReport r = run("example3.drb", "");
  EXPECT_FALSE(r.plant_size);
  EXPECT_TRUE(r.verdict.robust);
  EXPECT_EQ(r.verdict.reduced, (Size{3, 5}));
  ASSERT_EQ(r.blocking.size(), 1u);
  EXPECT_TRUE(r.blocking[0].blocked);
}
