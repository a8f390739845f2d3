#include "delayrobust/io/bundle.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

namespace delayrobust::io {

namespace {

struct Token {
  std::string text;
  bool quoted = false;
};

std::vector<Token> tokenize(std::string_view line, const std::string& source, std::size_t lineno) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    char c = line[i];
    if (c == '#') break;
    if (c == ' ' || c == '\t' || c == '\r') {
      ++i;
      continue;
    }
    if (c == '"') {
      std::string text;
      ++i;
      bool closed = false;
      while (i < line.size()) {
        if (line[i] == '\\' && i + 1 < line.size()) {
          text += line[i + 1];
          i += 2;
        } else if (line[i] == '"') {
          closed = true;
          ++i;
          break;
        } else {
          text += line[i++];
        }
      }
      if (!closed) throw ParseError(source, lineno, "unterminated string");
      out.push_back({std::move(text), true});
      continue;
    }
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r' && line[j] != '#') ++j;
    out.push_back({std::string(line.substr(i, j - i)), false});
    i = j;
  }
  return out;
}

struct Located {
  std::size_t line;
  std::uint32_t a = 0, b = 0, c = 0;
};

struct Draft {
  enum class Kind { Agent, Spec, Local, Supervisor } kind;
  std::string name;
  std::string owner;
  std::vector<Located> private_events;
  std::size_t line = 0;
  std::optional<std::size_t> states;
  Located initial{0};
  std::vector<Located> markers;
  std::vector<Located> trans;
  std::vector<Located> events;
  std::optional<std::vector<Located>> controllable;
};

class Parser {
 public:
  Parser(std::string_view text, std::string source) : text_(text), source_(std::move(source)) {}

  ProjectBundle run() {
    std::size_t lineno = 0;
    std::size_t pos = 0;
    while (pos <= text_.size()) {
      std::size_t nl = text_.find('\n', pos);
      if (nl == std::string_view::npos) nl = text_.size();
      ++lineno;
      line_ = lineno;
      auto toks = tokenize(text_.substr(pos, nl - pos), source_, lineno);
      if (!toks.empty()) statement(toks);
      pos = nl + 1;
    }
    if (current_) fail(current_->line, "block '" + current_->name + "' is missing 'end'");
    finish();
    return std::move(bundle_);
  }

 private:
  [[noreturn]] void fail(std::size_t line, const std::string& msg) const { throw ParseError(source_, line, msg); }
  [[noreturn]] void fail(const std::string& msg) const { fail(line_, msg); }

  std::uint32_t number(const Token& t, const char* what) const {
    std::uint32_t v = 0;
    auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
    if (t.quoted || ec != std::errc{} || ptr != t.text.data() + t.text.size())
      fail(std::string("expected ") + what + ", got '" + t.text + "'");
    return v;
  }

  std::uint32_t event(const Token& t) const {
    std::uint32_t v = number(t, "an event label");
    if (v == 0) fail("event labels must be positive");
    return v;
  }

  void expect_args(const std::vector<Token>& toks, std::size_t n, const char* usage) const {
    if (toks.size() != n) fail(std::string("malformed line, expected: ") + usage);
  }

  void statement(const std::vector<Token>& toks) {
    const std::string& kw = toks[0].text;
    if (current_) {
      block_statement(toks);
      return;
    }
    if (kw == "bundle") {
      expect_args(toks, 2, "bundle <name>");
      bundle_.name = toks[1].text;
    } else if (kw == "option") {
      expect_args(toks, 3, "option depth|budget <n>");
      std::size_t v = number(toks[2], "a count");
      if (toks[1].text == "depth") bundle_.options.depth = v;
      else if (toks[1].text == "budget") bundle_.options.budget = v;
      else fail("unknown option '" + toks[1].text + "'");
    } else if (kw == "event") {
      if (toks.size() < 2 || toks.size() > 4) fail("malformed line, expected: event <label> [controllable|uncontrollable] [\"text\"]");
      EventId e(event(toks[1]));
      for (std::size_t i = 2; i < toks.size(); ++i) {
        if (toks[i].quoted) bundle_.descriptions[e] = toks[i].text;
        else if (toks[i].text == "controllable") bundle_.controllability[e] = true;
        else if (toks[i].text == "uncontrollable") bundle_.controllability[e] = false;
        else fail("unexpected '" + toks[i].text + "' in event line");
      }
    } else if (kw == "agent" || kw == "spec") {
      expect_args(toks, 2, "agent|spec <name>");
      open(kw == "agent" ? Draft::Kind::Agent : Draft::Kind::Spec, toks[1].text);
    } else if (kw == "local") {
      if (toks.size() != 4 || toks[2].text != "owner") fail("malformed line, expected: local <name> owner <agent>");
      open(Draft::Kind::Local, toks[1].text);
      current_->owner = toks[3].text;
    } else if (kw == "supervisor") {
      if (toks.size() < 3 || toks[2].text != "private")
        fail("malformed line, expected: supervisor <name> private <event>...");
      open(Draft::Kind::Supervisor, toks[1].text);
      for (std::size_t i = 3; i < toks.size(); ++i) current_->private_events.push_back({line_, event(toks[i])});
    } else if (kw == "channel") {
      if (toks.size() != 3 && toks.size() != 4) fail("malformed line, expected: channel <event> <recipient> [<signal>]");
      ChannelDecl c{EventId(event(toks[1])), toks[2].text, toks.size() == 4 ? EventId(event(toks[3])) : EventId()};
      bundle_.channels.push_back(c);
      channel_lines_.push_back(line_);
    } else if (kw == "preset") {
      if (toks.size() < 3) fail("malformed line, expected: preset <name> <event>:<recipient>[:<signal>]...");
      Preset p{toks[1].text, false, {}};
      for (std::size_t i = 2; i < toks.size(); ++i) {
        if (toks[i].text == "all-imports") {
          p.all_imports = true;
          continue;
        }
        p.channels.push_back(channel_item(toks[i].text));
      }
      if (bundle_.preset(p.name)) fail("duplicate preset '" + p.name + "'");
      bundle_.presets.push_back(std::move(p));
      preset_lines_.push_back(line_);
    } else {
      fail("unknown keyword '" + kw + "'");
    }
  }

  ChannelDecl channel_item(const std::string& item) const {
    std::vector<std::string> parts;
    std::stringstream ss(item);
    std::string part;
    while (std::getline(ss, part, ':')) parts.push_back(part);
    if (parts.size() < 2 || parts.size() > 3) fail("malformed channel item '" + item + "'");
    ChannelDecl c;
    c.event = EventId(event({parts[0], false}));
    c.recipient = parts[1];
    if (parts.size() == 3) c.signal = EventId(event({parts[2], false}));
    return c;
  }

  void open(Draft::Kind kind, const std::string& name) {
    if (!names_.insert(name).second) fail("duplicate name '" + name + "'");
    drafts_.push_back(Draft{kind, name, {}, {}, line_, {}, {line_, 0}, {}, {}, {}, {}});
    current_ = &drafts_.back();
  }

  void block_statement(const std::vector<Token>& toks) {
    Draft& d = *current_;
    const std::string& kw = toks[0].text;
    if (kw == "end") {
      expect_args(toks, 1, "end");
      current_ = nullptr;
    } else if (kw == "states") {
      expect_args(toks, 2, "states <n>");
      if (d.states) fail("'states' given twice");
      d.states = number(toks[1], "a state count");
    } else if (kw == "initial") {
      expect_args(toks, 2, "initial <state>");
      d.initial = {line_, number(toks[1], "a state index")};
    } else if (kw == "marked") {
      for (std::size_t i = 1; i < toks.size(); ++i) d.markers.push_back({line_, number(toks[i], "a state index")});
    } else if (kw == "trans") {
      expect_args(toks, 4, "trans <from> <event> <to>");
      d.trans.push_back({line_, number(toks[1], "a state index"), event(toks[2]), number(toks[3], "a state index")});
    } else if (kw == "events") {
      for (std::size_t i = 1; i < toks.size(); ++i) d.events.push_back({line_, event(toks[i])});
    } else if (kw == "controllable") {
      if (d.controllable) fail("'controllable' given twice");
      d.controllable.emplace();
      for (std::size_t i = 1; i < toks.size(); ++i) d.controllable->push_back({line_, event(toks[i])});
    } else {
      fail("unknown keyword '" + kw + "' inside block '" + d.name + "'");
    }
  }

  Generator build(const Draft& d) const {
    if (!d.states) fail(d.line, "block '" + d.name + "' has no 'states' line");
    const std::size_t n = *d.states;
    std::set<EventId> used;
    for (auto& t : d.trans) used.insert(EventId(t.b));
    for (auto& e : d.events) used.insert(EventId(e.a));
    std::set<EventId> ctrl;
    if (d.controllable) {
      for (auto& c : *d.controllable) {
        if (!used.count(EventId(c.a))) fail(c.line, "unknown event reference " + std::to_string(c.a));
        ctrl.insert(EventId(c.a));
      }
    }
    Alphabet alphabet;
    for (EventId e : used) {
      bool status = parity_controllable(e);
      if (auto it = bundle_.controllability.find(e); it != bundle_.controllability.end()) status = it->second;
      if (d.controllable) status = ctrl.count(e) != 0;
      alphabet.add(e, status);
    }
    GeneratorBuilder b(alphabet, n);
    if (n > 0) {
      if (d.initial.a >= n) fail(d.initial.line, "initial state " + std::to_string(d.initial.a) + " out of range");
      b.set_initial(d.initial.a);
    }
    for (auto& m : d.markers) {
      if (m.a >= n) fail(m.line, "marker state " + std::to_string(m.a) + " out of range");
      b.set_marked(m.a);
    }
    std::set<std::pair<std::uint32_t, std::uint32_t>> seen;
    for (auto& t : d.trans) {
      if (t.a >= n || t.c >= n) fail(t.line, "transition state out of range");
      if (!seen.insert({t.a, t.b}).second)
        fail(t.line, "duplicate transition from state " + std::to_string(t.a) + " on event " + std::to_string(t.b) +
                         " (nondeterminism)");
      b.add_transition(t.a, EventId(t.b), t.c);
    }
    return std::move(b).build();
  }

  void finish() {
    for (const Draft& d : drafts_) {
      Generator g = build(d);
      switch (d.kind) {
        case Draft::Kind::Agent: bundle_.agents.push_back({d.name, std::move(g)}); break;
        case Draft::Kind::Spec: bundle_.specs.push_back({d.name, std::move(g)}); break;
        case Draft::Kind::Local: bundle_.locals.push_back({d.name, d.owner, std::move(g)}); break;
        case Draft::Kind::Supervisor: {
          SupervisorDecl s{d.name, {}, std::move(g)};
          for (auto& e : d.private_events) {
            if (!s.generator.alphabet().contains(EventId(e.a)))
              fail(e.line, "unknown event reference " + std::to_string(e.a));
            s.private_events.insert(EventId(e.a));
          }
          bundle_.supervisors.push_back(std::move(s));
          break;
        }
      }
    }
    for (const Draft& d : drafts_) {
      if (d.kind == Draft::Kind::Local) {
        bool found = std::any_of(bundle_.agents.begin(), bundle_.agents.end(),
                                 [&](const NamedGenerator& a) { return a.name == d.owner; });
        if (!found) fail(d.line, "local controller '" + d.name + "' names unknown agent '" + d.owner + "'");
      }
    }
    if (!bundle_.agents.empty() && !bundle_.supervisors.empty())
      fail(drafts_.front().line, "a bundle declares either agents or supervisors, not both");
    for (std::size_t i = 0; i < bundle_.channels.size(); ++i) check_channel(bundle_.channels[i], channel_lines_[i]);
    for (std::size_t i = 0; i < bundle_.presets.size(); ++i)
      for (const ChannelDecl& c : bundle_.presets[i].channels) check_channel(c, preset_lines_[i]);
  }

  void check_channel(const ChannelDecl& c, std::size_t line) const {
    auto idx = bundle_.participant_index(c.recipient);
    if (!idx) fail(line, "channel names unknown recipient '" + c.recipient + "'");
    if (!bundle_.owner_of(c.event)) fail(line, "unknown event reference " + to_string(c.event));
  }

  std::string_view text_;
  std::string source_;
  std::size_t line_ = 0;
  ProjectBundle bundle_;
  std::vector<Draft> drafts_;
  Draft* current_ = nullptr;
  std::set<std::string> names_;
  std::vector<std::size_t> channel_lines_, preset_lines_;
};

void write_generator(std::ostringstream& os, const Generator& g, const ProjectBundle& b) {
  os << "  states " << g.num_states() << "\n";
  if (!g.empty()) os << "  initial " << g.initial() << "\n";
  auto markers = g.markers();
  if (!markers.empty()) {
    os << "  marked";
    for (StateId m : markers) os << ' ' << m;
    os << "\n";
  }
  std::set<EventId> used;
  for (StateId q = 0; q < g.num_states(); ++q)
    for (const Transition& t : g.out(q)) used.insert(t.event);
  std::vector<EventId> extra;
  bool override_needed = false;
  for (EventId e : g.alphabet().events()) {
    if (!used.count(e)) extra.push_back(e);
    bool dflt = parity_controllable(e);
    if (auto it = b.controllability.find(e); it != b.controllability.end()) dflt = it->second;
    if (g.alphabet().controllable(e) != dflt) override_needed = true;
  }
  if (!extra.empty()) {
    os << "  events";
    for (EventId e : extra) os << ' ' << e.label();
    os << "\n";
  }
  if (override_needed) {
    os << "  controllable";
    for (EventId e : g.alphabet().controllable_events()) os << ' ' << e.label();
    os << "\n";
  }
  for (StateId q = 0; q < g.num_states(); ++q)
    for (const Transition& t : g.out(q)) os << "  trans " << q << ' ' << t.event.label() << ' ' << t.target << "\n";
  os << "end\n";
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

std::string channel_item(const ChannelDecl& c) {
  std::string s = std::to_string(c.event.label()) + ":" + c.recipient;
  if (c.signal.valid()) s += ":" + std::to_string(c.signal.label());
  return s;
}

}  // namespace

PlantModel ProjectBundle::plant_model() const {
  PlantModel m;
  for (const auto& a : agents) m.agents.push_back(a.generator);
  for (const auto& s : specs) m.specs.push_back(s.generator);
  return m;
}

const Preset* ProjectBundle::preset(std::string_view n) const {
  for (const Preset& p : presets)
    if (p.name == n) return &p;
  return nullptr;
}

std::optional<std::size_t> ProjectBundle::participant_index(std::string_view n) const {
  for (std::size_t i = 0; i < agents.size(); ++i)
    if (agents[i].name == n || agents[i].name + "LOC" == n) return i;
  for (const LocalDecl& l : locals)
    if (l.name == n) return participant_index(l.owner);
  for (std::size_t i = 0; i < supervisors.size(); ++i)
    if (supervisors[i].name == n) return i;
  return std::nullopt;
}

std::string ProjectBundle::participant_name(std::size_t index) const {
  if (has_plant()) {
    for (const LocalDecl& l : locals)
      if (l.owner == agents.at(index).name) return l.name;
    return agents.at(index).name;
  }
  return supervisors.at(index).name;
}

std::size_t ProjectBundle::participant_count() const { return has_plant() ? agents.size() : supervisors.size(); }

std::optional<std::size_t> ProjectBundle::owner_of(EventId e) const {
  for (std::size_t i = 0; i < agents.size(); ++i)
    if (agents[i].generator.alphabet().contains(e)) return i;
  for (std::size_t i = 0; i < supervisors.size(); ++i)
    if (supervisors[i].private_events.count(e)) return i;
  return std::nullopt;
}

ProjectBundle parse_bundle_text(std::string_view text, const std::string& source) {
  return Parser(text, source).run();
}

ProjectBundle parse_bundle(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open bundle '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_bundle_text(ss.str(), path.string());
}

std::string serialize_bundle(const ProjectBundle& b) {
  std::ostringstream os;
  if (!b.name.empty()) os << "bundle " << b.name << "\n";
  if (b.options.depth) os << "option depth " << *b.options.depth << "\n";
  if (b.options.budget) os << "option budget " << *b.options.budget << "\n";
  std::set<EventId> labels;
  for (auto& [e, _] : b.controllability) labels.insert(e);
  for (auto& [e, _] : b.descriptions) labels.insert(e);
  for (EventId e : labels) {
    os << "event " << e.label();
    if (auto it = b.controllability.find(e); it != b.controllability.end())
      os << (it->second ? " controllable" : " uncontrollable");
    if (auto it = b.descriptions.find(e); it != b.descriptions.end()) os << ' ' << quote(it->second);
    os << "\n";
  }
  for (const auto& a : b.agents) {
    os << "\nagent " << a.name << "\n";
    write_generator(os, a.generator, b);
  }
  for (const auto& s : b.specs) {
    os << "\nspec " << s.name << "\n";
    write_generator(os, s.generator, b);
  }
  for (const auto& l : b.locals) {
    os << "\nlocal " << l.name << " owner " << l.owner << "\n";
    write_generator(os, l.controller, b);
  }
  for (const auto& s : b.supervisors) {
    os << "\nsupervisor " << s.name << " private";
    for (EventId e : s.private_events) os << ' ' << e.label();
    os << "\n";
    write_generator(os, s.generator, b);
  }
  if (!b.channels.empty()) os << "\n";
  for (const auto& c : b.channels) {
    os << "channel " << c.event.label() << ' ' << c.recipient;
    if (c.signal.valid()) os << ' ' << c.signal.label();
    os << "\n";
  }
  if (!b.presets.empty()) os << "\n";
  for (const auto& p : b.presets) {
    os << "preset " << p.name;
    if (p.all_imports) os << " all-imports";
    for (const auto& c : p.channels) os << ' ' << channel_item(c);
    os << "\n";
  }
  return os.str();
}

std::vector<ChannelSpec> all_imports(const ProjectBundle& bundle, const std::vector<LocalController>& controllers) {
  std::vector<ChannelSpec> out;
  for (const LocalController& c : controllers) {
    for (EventId e : c.imported_events) {
      auto src = bundle.owner_of(e);
      if (!src) throw ChannelError("imported event " + to_string(e) + " has no owner");
      out.push_back({*src, e, c.owner_agent, conventional_signal(e, c.owner_agent)});
    }
  }
  std::sort(out.begin(), out.end(), [](const ChannelSpec& a, const ChannelSpec& b) {
    return a.recipient != b.recipient ? a.recipient < b.recipient : a.event < b.event;
  });
  return out;
}

namespace {

ChannelSpec resolve_one(const ProjectBundle& bundle, const ChannelDecl& d,
                        const std::vector<LocalController>& controllers) {
  auto src = bundle.owner_of(d.event);
  if (!src) throw ChannelError("event " + to_string(d.event) + " belongs to no agent");
  std::size_t recipient;
  if (d.recipient.empty()) {
    std::vector<std::size_t> importers;
    for (const LocalController& c : controllers)
      if (c.imported_events.count(d.event)) importers.push_back(c.owner_agent);
    if (importers.size() != 1)
      throw ChannelError("event " + to_string(d.event) + " needs an explicit recipient");
    recipient = importers.front();
  } else {
    auto idx = bundle.participant_index(d.recipient);
    if (!idx) throw ChannelError("unknown recipient '" + d.recipient + "'");
    recipient = *idx;
  }
  EventId signal = d.signal.valid() ? d.signal : conventional_signal(d.event, recipient);
  return {*src, d.event, recipient, signal};
}

}  // namespace

std::vector<ChannelSpec> resolve_channels(const ProjectBundle& bundle, std::string_view selector,
                                          const std::vector<LocalController>& controllers) {
  std::vector<ChannelSpec> out;
  auto resolve_all = [&](const std::vector<ChannelDecl>& decls) {
    for (const ChannelDecl& d : decls) out.push_back(resolve_one(bundle, d, controllers));
  };
  if (selector.empty()) {
    resolve_all(bundle.channels);
  } else if (selector == "none") {
  } else if (selector == "all-imports") {
    out = all_imports(bundle, controllers);
  } else if (const Preset* p = bundle.preset(selector)) {
    if (p->all_imports) out = all_imports(bundle, controllers);
    resolve_all(p->channels);
  } else {
    std::vector<ChannelDecl> decls;
    std::string item;
    std::stringstream ss{std::string(selector)};
    while (std::getline(ss, item, ',')) {
      if (item.empty()) continue;
      std::vector<std::string> parts;
      std::stringstream is(item);
      std::string part;
      while (std::getline(is, part, ':')) parts.push_back(part);
      if (parts.empty() || parts.size() > 3) throw ChannelError("malformed channel item '" + item + "'");
      ChannelDecl d;
      try {
        d.event = EventId(static_cast<std::uint32_t>(std::stoul(parts[0])));
        if (parts.size() > 1) d.recipient = parts[1];
        if (parts.size() > 2) d.signal = EventId(static_cast<std::uint32_t>(std::stoul(parts[2])));
      } catch (const std::exception&) {
        throw ChannelError("malformed channel item '" + item + "'");
      }
      if (!d.event.valid()) throw ChannelError("malformed channel item '" + item + "'");
      decls.push_back(d);
    }
    if (decls.empty()) throw ChannelError("unknown preset or empty channel list '" + std::string(selector) + "'");
    resolve_all(decls);
  }
  return out;
}

}  // namespace delayrobust::io
