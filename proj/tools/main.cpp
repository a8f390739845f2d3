#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "delayrobust/delayrobust.hpp"
#include "delayrobust/io/bundle.hpp"
#include "delayrobust/io/pipeline.hpp"

namespace dr = delayrobust;
namespace io = delayrobust::io;

namespace {

struct Common {
  std::string bundle;
  std::string channels;
  std::size_t depth = 0;
  std::size_t budget = 0;
  bool locals = false;
  std::string report;
};

void add_common(CLI::App* cmd, Common& c, bool with_channels) {
  cmd->add_option("bundle", c.bundle, "Project bundle file")->required()->check(CLI::ExistingFile);
  if (with_channels)
    cmd->add_option("--channels", c.channels,
                    "Preset name, all-imports, none, or event[:recipient[:signal]],... list");
  cmd->add_option("--depth", c.depth, "Fault search depth (0: twice the channeled state count)");
  cmd->add_option("--budget", c.budget, "Subset construction state budget (default from DELAYROBUST_BUDGET)");
  cmd->add_flag("--locals", c.locals, "Use the bundle's local controllers instead of localizing");
  cmd->add_option("--report", c.report, "Write the machine-readable report to this file");
}

io::PipelineOptions pipeline_options(const Common& c, const io::ProjectBundle& b) {
  io::PipelineOptions o;
  o.channels = c.channels;
  o.depth = c.depth ? c.depth : b.options.depth.value_or(0);
  o.budget = c.budget ? c.budget : b.options.budget.value_or(io::budget_from_environment());
  o.use_locals = c.locals;
  return o;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw dr::Error("cannot write '" + path + "'");
  out << text;
}

int cmd_synth(const Common& c) {
  io::ProjectBundle b = io::parse_bundle(c.bundle);
  dr::Generator sup = io::reference_supervisor(b);
  if (b.has_plant()) {
    dr::PlantModel m = b.plant_model();
    std::cout << "plant " << dr::to_string(m.plant().size()) << "\n";
    std::cout << "spec " << dr::to_string(m.spec().size()) << "\n";
  }
  std::cout << "supervisor " << dr::to_string(sup.size()) << (sup.empty() ? " (empty)" : "") << "\n";
  if (!c.report.empty()) {
    std::ostringstream os;
    os << "{\n  \"supervisor\": {\"states\": " << sup.num_states() << ", \"transitions\": " << sup.num_transitions()
       << "}\n}\n";
    write_file(c.report, os.str());
  }
  return sup.empty() ? 1 : 0;
}

int cmd_localize(const Common& c) {
  io::ProjectBundle b = io::parse_bundle(c.bundle);
  if (!b.has_plant()) throw dr::Error("localize needs a bundle with agents");
  dr::Generator sup = io::reference_supervisor(b);
  io::Controllers ctrl = io::obtain_controllers(b, sup, c.locals);
  bool equivalent = dr::control_equivalent(ctrl.locals, b.plant_model().plant(), sup);
  io::ProjectBundle out;
  out.controllability = b.controllability;
  for (std::size_t i = 0; i < ctrl.locals.size(); ++i) {
    std::cout << "# " << ctrl.names[i] << " " << dr::to_string(ctrl.locals[i].controller.size()) << " imports {";
    bool first = true;
    for (dr::EventId e : ctrl.locals[i].imported_events) {
      std::cout << (first ? "" : ",") << e.label();
      first = false;
    }
    std::cout << "}\n";
    out.locals.push_back({ctrl.names[i], b.agents[i].name, ctrl.locals[i].controller});
  }
  std::cout << "# control equivalent: " << (equivalent ? "yes" : "no") << "\n";
  std::string text = io::serialize_bundle(out);
  if (!c.report.empty()) write_file(c.report, text);
  else std::cout << text;
  return equivalent ? 0 : 1;
}

int cmd_pipeline(const Common& c, bool blocking_only, bool robust_only) {
  io::ProjectBundle b = io::parse_bundle(c.bundle);
  io::PipelineOptions o = pipeline_options(c, b);
  o.blocking = !robust_only;
  io::PipelineReport r = io::run_pipeline(b, o);
  if (blocking_only) {
    for (const dr::BlockReport& br : r.blocking) {
      std::cout << "event " << br.event.label() << ": ";
      if (!br.applicable) std::cout << br.note;
      else if (br.blocked)
        std::cout << "blocked, witness " << dr::to_string(*br.witness) << ", TTEST " << dr::to_string(br.test_size)
                  << (br.bound ? ", " + std::to_string(*br.bound) + "-bound" : std::string());
      else std::cout << "not blocked (TTEST empty), unbounded";
      std::cout << ", faults " << (br.fault_admissible ? "admissible" : "INADMISSIBLE") << "\n";
    }
    if (r.blocking.empty()) std::cout << "no uncontrollable channeled events\n";
  } else {
    std::cout << io::summarize(r);
  }
  if (!c.report.empty()) write_file(c.report, io::report_to_json(r));
  if (blocking_only) {
    for (const dr::BlockReport& br : r.blocking)
      if (!br.fault_admissible) return 1;
    return 0;
  }
  if (robust_only) return r.verdict.robust ? 0 : 1;
  return r.passed() ? 0 : 1;
}

int cmd_bound(const Common& c, std::uint32_t event) {
  io::ProjectBundle b = io::parse_bundle(c.bundle);
  dr::Generator sup = io::reference_supervisor(b);
  auto bound = dr::delay_bound_estimate(sup, dr::EventId(event));
  if (bound) std::cout << "event " << event << ": " << *bound << "-bound\n";
  else std::cout << "event " << event << ": does not re-occur\n";
  return 0;
}

int cmd_explain(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw dr::Error("cannot open report '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  std::cout << io::explain(ss.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Delay-robustness verification for distributed supervisory control"};
  app.require_subcommand(1);
  Common common;
  std::uint32_t event = 0;
  std::string report_path;

  auto* synth = app.add_subcommand("synth", "Synthesize the monolithic supervisor");
  add_common(synth, common, false);
  auto* localize = app.add_subcommand("localize", "Localize the supervisor into per-agent controllers");
  add_common(localize, common, false);
  auto* robust = app.add_subcommand("check-robust", "Decide delay-robustness for a channel set");
  add_common(robust, common, true);
  auto* blocked = app.add_subcommand("check-blocked", "Blocked-event analysis for uncontrollable channeled events");
  add_common(blocked, common, true);
  auto* bound = app.add_subcommand("bound", "Delay bound estimate for an event");
  add_common(bound, common, false);
  bound->add_option("--event", event, "Event label")->required();
  auto* pipeline = app.add_subcommand("pipeline", "Run the full verification pipeline");
  add_common(pipeline, common, true);
  auto* explain = app.add_subcommand("explain", "Annotate the witnesses of a report");
  explain->add_option("report", report_path, "Report file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }
  try {
    if (*synth) return cmd_synth(common);
    if (*localize) return cmd_localize(common);
    if (*robust) return cmd_pipeline(common, false, true);
    if (*blocked) return cmd_pipeline(common, true, false);
    if (*bound) return cmd_bound(common, event);
    if (*pipeline) return cmd_pipeline(common, false, false);
    if (*explain) return cmd_explain(report_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
