#include "delayrobust/io/pipeline.hpp"

#include <chrono>
#include <cstdlib>
#include <sstream>

#include <json.hpp>

#include "delayrobust/automata.hpp"
#include "delayrobust/synthesis.hpp"

namespace delayrobust::io {

using nlohmann::json;

std::size_t budget_from_environment() {
  const char* env = std::getenv("DELAYROBUST_BUDGET");
  if (!env || !*env) return kDefaultSubsetBudget;
  try {
    std::size_t pos = 0;
    unsigned long long v = std::stoull(env, &pos);
    if (pos != std::string(env).size() || v == 0) throw std::invalid_argument("budget");
    return static_cast<std::size_t>(v);
  } catch (const std::exception&) {
    throw Error(std::string("DELAYROBUST_BUDGET is not a positive integer: '") + env + "'");
  }
}

bool PipelineReport::passed() const {
  if (!verdict.robust || !control_equivalent) return false;
  for (const BlockReport& b : blocking)
    if (!b.fault_admissible) return false;
  return true;
}

Generator reference_supervisor(const ProjectBundle& bundle) {
  if (bundle.has_plant()) {
    PlantModel model = bundle.plant_model();
    model.validate();
    return supcon(model.plant(), model.spec());
  }
  if (bundle.supervisors.empty()) throw Error("bundle declares neither agents nor supervisors");
  std::vector<Generator> parts;
  for (const SupervisorDecl& s : bundle.supervisors) parts.push_back(s.generator);
  return sync(parts);
}

Controllers obtain_controllers(const ProjectBundle& bundle, const Generator& sup, bool use_locals) {
  Controllers c;
  if (!bundle.has_plant()) {
    for (std::size_t i = 0; i < bundle.supervisors.size(); ++i) {
      const SupervisorDecl& s = bundle.supervisors[i];
      LocalController lc{s.generator, i, {}};
      for (EventId e : s.generator.alphabet().events())
        if (!s.private_events.count(e)) lc.imported_events.insert(e);
      c.locals.push_back(std::move(lc));
      c.behaviors.push_back(s.generator);
      c.names.push_back(s.name);
      c.origins.push_back("declared");
    }
    return c;
  }
  PlantModel model = bundle.plant_model();
  if (use_locals) {
    for (std::size_t i = 0; i < bundle.agents.size(); ++i) {
      const LocalDecl* found = nullptr;
      for (const LocalDecl& l : bundle.locals)
        if (l.owner == bundle.agents[i].name) found = &l;
      if (!found) throw Error("no local controller supplied for agent '" + bundle.agents[i].name + "'");
      c.locals.push_back(make_local_controller(found->controller, i, bundle.agents[i].generator));
      c.names.push_back(found->name);
      c.origins.push_back("supplied");
    }
  } else {
    c.locals = localize(model, sup);
    for (std::size_t i = 0; i < bundle.agents.size(); ++i) {
      c.names.push_back(bundle.participant_name(i) == bundle.agents[i].name ? bundle.agents[i].name + "LOC"
                                                                          : bundle.participant_name(i));
      c.origins.push_back("localized");
    }
  }
  for (std::size_t i = 0; i < bundle.agents.size(); ++i)
    c.behaviors.push_back(sync(bundle.agents[i].generator, c.locals[i].controller));
  return c;
}

namespace {

class Stopwatch {
 public:
  double lap() {
    auto now = std::chrono::steady_clock::now();
    double ms = std::chrono::duration<double, std::milli>(now - last_).count();
    last_ = now;
    return ms;
  }

 private:
  std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

template <typename F>
auto stage(const char* name, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const PipelineError&) {
    throw;
  } catch (const std::exception& e) {
    throw PipelineError(name, e.what());
  }
}

}  // namespace

PipelineReport run_pipeline(const ProjectBundle& bundle, const PipelineOptions& options) {
  PipelineReport rep;
  rep.bundle = bundle.name;
  rep.selector = options.channels;
  rep.descriptions = bundle.descriptions;
  AbstractionOptions abs{options.budget};
  Stopwatch clock;

  Generator plant;
  if (bundle.has_plant()) {
    plant = stage("synthesis", [&] { return bundle.plant_model().plant(); });
    rep.plant_size = plant.size();
  }
  Generator sup = stage("synthesis", [&] { return reference_supervisor(bundle); });
  if (sup.empty()) throw PipelineError("synthesis", "the supervisor is empty");
  rep.supervisor_size = sup.size();
  rep.timing_ms.emplace_back("synthesis", clock.lap());

  Controllers ctrl = stage("controllers", [&] { return obtain_controllers(bundle, sup, options.use_locals); });
  for (std::size_t i = 0; i < ctrl.locals.size(); ++i) {
    const LocalController& lc = ctrl.locals[i];
    rep.controllers.push_back({ctrl.names[i], bundle.has_plant() ? bundle.agents[i].name : ctrl.names[i],
                               lc.controller.size(), ctrl.behaviors[i].size(),
                               {lc.imported_events.begin(), lc.imported_events.end()}, ctrl.origins[i]});
  }
  if (bundle.has_plant())
    rep.control_equivalent = stage("controllers", [&] { return control_equivalent(ctrl.locals, plant, sup); });
  rep.timing_ms.emplace_back("controllers", clock.lap());

  rep.channels = stage("channels", [&] { return resolve_channels(bundle, options.channels, ctrl.locals); });
  for (const ChannelSpec& c : rep.channels) rep.recipients.push_back(ctrl.names.at(c.recipient));
  ChanneledSystem system = stage("channels", [&] { return build_channeled(ctrl.behaviors, rep.channels); });
  rep.timing_ms.emplace_back("channels", clock.lap());

  rep.verdict = stage("robustness", [&] { return check_delay_robustness(sup, system, abs); });
  if (bundle.has_plant() && rep.verdict.counterexample) {
    using Kind = Counterexample::Kind;
    const Counterexample& cx = *rep.verdict.counterexample;
    if (cx.kind == Kind::ExtraClosed || cx.kind == Kind::ExtraMarked) {
      if (auto v = uncontrollable_spec_violation(bundle.plant_model(), cx.projected)) {
        NamedViolation nv{v->word, {}};
        for (std::size_t j : v->violated_specs) nv.specs.push_back(bundle.specs[j].name);
        rep.spec_violation = std::move(nv);
      }
    }
  }
  rep.timing_ms.emplace_back("robustness", clock.lap());

  if (options.blocking) {
    const Generator& reference_plant = bundle.has_plant() ? plant : sup;
    for (const ChannelSpec& c : rep.channels) {
      bool controllable = ctrl.behaviors[c.recipient].alphabet().controllable(c.event);
      if (controllable) continue;
      rep.blocking.push_back(
          stage("blocking", [&] { return analyze_blocking(sup, reference_plant, system, c, options.depth); }));
    }
    rep.timing_ms.emplace_back("blocking", clock.lap());
  }
  return rep;
}

namespace {

json size_json(const Size& s) { return json{{"states", s.states}, {"transitions", s.transitions}}; }

json events_json(const std::vector<EventId>& v) {
  json a = json::array();
  for (EventId e : v) a.push_back(e.label());
  return a;
}

json word_json(const std::optional<Word>& w) { return w ? json(to_string(*w)) : json(nullptr); }

}  // namespace

std::string report_to_json(const PipelineReport& r, bool include_timing) {
  json j;
  j["bundle"] = r.bundle;
  j["channel_selector"] = r.selector;
  j["plant"] = r.plant_size ? size_json(*r.plant_size) : json(nullptr);
  j["supervisor"] = size_json(r.supervisor_size);
  j["control_equivalent"] = r.control_equivalent;
  json ctrls = json::array();
  for (const ControllerSummary& c : r.controllers)
    ctrls.push_back({{"name", c.name},
                     {"owner", c.owner},
                     {"origin", c.origin},
                     {"size", size_json(c.size)},
                     {"local_behavior", size_json(c.local_size)},
                     {"imported", events_json(c.imported)}});
  j["controllers"] = ctrls;
  json chans = json::array();
  for (std::size_t i = 0; i < r.channels.size(); ++i) {
    const ChannelSpec& c = r.channels[i];
    chans.push_back({{"event", c.event.label()},
                     {"signal", c.signal.label()},
                     {"source", c.source_agent},
                     {"recipient", c.recipient},
                     {"recipient_name", r.recipients.at(i)}});
  }
  j["channels"] = chans;

  const Verdict& v = r.verdict;
  json vj;
  vj["robust"] = v.robust;
  vj["channeled_events"] = events_json({v.channeled_events.begin(), v.channeled_events.end()});
  vj["channeled_size"] = size_json(v.channeled_size);
  vj["reduced_size"] = size_json(v.reduced);
  vj["notes"] = v.notes;
  if (v.counterexample)
    vj["counterexample"] = {{"kind", to_string(v.counterexample->kind)},
                            {"channeled", to_string(v.counterexample->channeled)},
                            {"projected", to_string(v.counterexample->projected)}};
  else
    vj["counterexample"] = nullptr;
  if (v.nondeterminism) {
    json targets = json::array();
    for (StateId t : v.nondeterminism->targets) targets.push_back(t);
    vj["nondeterminism"] = {{"state", v.nondeterminism->state},
                            {"event", v.nondeterminism->event ? json(v.nondeterminism->event->label()) : json(nullptr)},
                            {"targets", targets}};
  } else {
    vj["nondeterminism"] = nullptr;
  }
  if (v.isomorphism_failure)
    vj["isomorphism_failure"] = {{"quotient_state", v.isomorphism_failure->quotient_state},
                                 {"reference_state", v.isomorphism_failure->reference_state}};
  else
    vj["isomorphism_failure"] = nullptr;
  j["verdict"] = vj;

  if (r.spec_violation)
    j["spec_violation"] = {{"word", to_string(r.spec_violation->word)}, {"specs", r.spec_violation->specs}};
  else
    j["spec_violation"] = nullptr;

  json blocks = json::array();
  for (const BlockReport& b : r.blocking) {
    blocks.push_back({{"event", b.event.label()},
                      {"applicable", b.applicable},
                      {"blocked", b.blocked},
                      {"witness", word_json(b.witness)},
                      {"prefix", word_json(b.prefix)},
                      {"classification", to_string(b.classification)},
                      {"bound", b.bound ? json(*b.bound) : json(nullptr)},
                      {"fault_admissible", b.fault_admissible},
                      {"test_size", size_json(b.test_size)},
                      {"note", b.note}});
  }
  j["blocking"] = blocks;
  json ev = json::object();
  for (auto& [e, d] : r.descriptions) ev[std::to_string(e.label())] = d;
  j["events"] = ev;
  j["passed"] = r.passed();
  if (include_timing) {
    json t = json::object();
    for (auto& [k, ms] : r.timing_ms) t[k] = ms;
    j["timing_ms"] = t;
  }
  return j.dump(2) + "\n";
}

std::string summarize(const PipelineReport& r) {
  std::ostringstream os;
  os << "bundle " << (r.bundle.empty() ? "(unnamed)" : r.bundle);
  if (!r.selector.empty()) os << ", channels " << r.selector;
  os << "\n";
  if (r.plant_size) os << "plant " << to_string(*r.plant_size) << "\n";
  os << "supervisor " << to_string(r.supervisor_size) << "\n";
  for (const ControllerSummary& c : r.controllers) {
    os << "controller " << c.name << " (" << c.origin << ") " << to_string(c.size) << ", imports {";
    for (std::size_t i = 0; i < c.imported.size(); ++i) os << (i ? "," : "") << c.imported[i].label();
    os << "}\n";
  }
  if (!r.control_equivalent) os << "controllers are NOT control equivalent to the supervisor\n";
  for (std::size_t i = 0; i < r.channels.size(); ++i)
    os << "channel " << r.channels[i].event.label() << " -> " << r.recipients[i] << " as "
       << r.channels[i].signal.label() << "\n";
  const Verdict& v = r.verdict;
  os << "channeled behavior " << to_string(v.channeled_size) << ", quotient " << to_string(v.reduced) << "\n";
  os << "verdict: " << (v.robust ? "delay-robust" : "delay-critical") << "\n";
  if (!v.robust) os << "  " << v.notes << "\n";
  if (v.counterexample) {
    if (!v.counterexample->channeled.empty()) os << "  s    = " << to_string(v.counterexample->channeled) << "\n";
    os << "  P(s) = " << to_string(v.counterexample->projected) << "\n";
  }
  if (r.spec_violation) {
    os << "  uncontrollable continuation " << to_string(r.spec_violation->word) << " violates";
    for (const auto& s : r.spec_violation->specs) os << ' ' << s;
    os << "\n";
  }
  for (const BlockReport& b : r.blocking) {
    os << "event " << b.event.label() << ": ";
    if (!b.applicable) {
      os << b.note << "\n";
      continue;
    }
    if (b.blocked) {
      os << "blocked, witness " << to_string(*b.witness);
      if (b.bound) os << ", " << *b.bound << "-bound";
    } else {
      os << "not blocked (unbounded)";
    }
    os << ", faults " << (b.fault_admissible ? "admissible" : "INADMISSIBLE") << "\n";
  }
  os << (r.passed() ? "PASS" : "FAIL") << "\n";
  return os.str();
}

namespace {

void annotate(std::ostringstream& os, const std::string& word, const json& events) {
  if (word.empty() || events.empty()) return;
  for (EventId e : parse_word(word)) {
    std::string key = std::to_string(e.label());
    os << "      " << key;
    if (events.contains(key)) os << "  " << events[key].get<std::string>();
    os << "\n";
  }
}

}  // namespace

std::string explain(std::string_view report_json) {
  if (report_json.find_first_not_of(" \t\r\n") == std::string_view::npos) return "";
  json j = json::parse(report_json.begin(), report_json.end(), nullptr, true, true);
  if (j.is_discarded() || !j.is_object() || j.empty()) return "";
  std::ostringstream os;
  json events = j.value("events", json::object());
  os << "bundle " << j.value("bundle", std::string()) << "\n";
  if (j.contains("verdict") && j["verdict"].is_object()) {
    const json& v = j["verdict"];
    os << "verdict: " << (v.value("robust", false) ? "delay-robust" : "delay-critical") << "\n";
    if (v.contains("counterexample") && v["counterexample"].is_object()) {
      const json& c = v["counterexample"];
      os << "  counterexample (" << c.value("kind", std::string()) << ")\n";
      std::string s = c.value("channeled", std::string());
      if (!s.empty()) os << "    s    = " << s << "\n";
      std::string p = c.value("projected", std::string());
      os << "    P(s) = " << p << "\n";
      annotate(os, p, events);
    }
  }
  if (j.contains("spec_violation") && j["spec_violation"].is_object()) {
    const json& sv = j["spec_violation"];
    std::string w = sv.value("word", std::string());
    os << "  uncontrollable continuation " << w << " violates";
    for (const auto& s : sv["specs"]) os << ' ' << s.get<std::string>();
    os << "\n";
    annotate(os, w, events);
  }
  if (j.contains("blocking"))
    for (const json& b : j["blocking"]) {
      os << "event " << b.value("event", 0u) << ": ";
      if (!b.value("applicable", true)) {
        os << b.value("note", std::string()) << "\n";
        continue;
      }
      if (!b.value("blocked", false)) {
        os << "not blocked (unbounded)\n";
        continue;
      }
      std::string w = b["witness"].is_string() ? b["witness"].get<std::string>() : std::string();
      os << "blocked by its channel, witness " << w;
      if (b["bound"].is_number()) os << " (" << b["bound"].get<std::size_t>() << "-bound)";
      os << "\n";
      annotate(os, w, events);
    }
  return os.str();
}

}  // namespace delayrobust::io
