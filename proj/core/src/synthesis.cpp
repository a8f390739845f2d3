#include "delayrobust/synthesis.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>

#include "delayrobust/automata.hpp"
#include "delayrobust/errors.hpp"
#include "product.hpp"

namespace delayrobust {

void PlantModel::validate() const {
  if (agents.empty()) throw std::invalid_argument("plant model has no agents");
  for (std::size_t i = 0; i < agents.size(); ++i)
    for (std::size_t j = i + 1; j < agents.size(); ++j)
      for (EventId e : agents[i].alphabet().events())
        if (agents[j].alphabet().contains(e))
          throw std::invalid_argument("agents " + std::to_string(i) + " and " + std::to_string(j) +
                                      " share event " + to_string(e));
}

Generator PlantModel::plant() const { return sync(agents); }

Generator PlantModel::spec() const {
  if (specs.empty()) {
    // No specification: everything the plant generates is legal.
    Alphabet a;
    for (const Generator& g : agents) a = a.merged(g.alphabet());
    GeneratorBuilder b(a, 1);
    b.set_marked(0);
    for (EventId e : a.events()) b.add_transition(0, e, 0);
    return std::move(b).build();
  }
  return sync(specs);
}

namespace {

std::vector<bool> reach_within(const Generator& g, const std::vector<bool>& allowed) {
  std::vector<bool> seen(g.num_states(), false);
  if (g.empty() || !allowed[g.initial()]) return seen;
  std::vector<StateId> stack{g.initial()};
  seen[g.initial()] = true;
  while (!stack.empty()) {
    StateId q = stack.back();
    stack.pop_back();
    for (const Transition& t : g.out(q)) {
      if (allowed[t.target] && !seen[t.target]) {
        seen[t.target] = true;
        stack.push_back(t.target);
      }
    }
  }
  return seen;
}

std::vector<bool> coreach_within(const Generator& g, const std::vector<bool>& allowed) {
  const std::size_t n = g.num_states();
  std::vector<std::vector<StateId>> pred(n);
  for (StateId q = 0; q < n; ++q)
    for (const Transition& t : g.out(q)) pred[t.target].push_back(q);
  std::vector<bool> seen(n, false);
  std::vector<StateId> stack;
  for (StateId q = 0; q < n; ++q) {
    if (allowed[q] && g.is_marked(q)) {
      seen[q] = true;
      stack.push_back(q);
    }
  }
  while (!stack.empty()) {
    StateId q = stack.back();
    stack.pop_back();
    for (StateId p : pred[q]) {
      if (allowed[p] && !seen[p]) {
        seen[p] = true;
        stack.push_back(p);
      }
    }
  }
  return seen;
}

}  // namespace

Generator supcon(const Generator& plant, const Generator& spec) {
  for (EventId e : spec.alphabet().events())
    if (!plant.alphabet().contains(e))
      throw std::invalid_argument("specification event " + to_string(e) + " is not a plant event");
  const Generator* parts[] = {&plant, &spec};
  detail::Product prod = detail::sync_product(parts);
  const Generator& g = prod.generator;
  if (g.empty()) return Generator(g.alphabet());

  std::vector<bool> good(g.num_states(), true);
  for (;;) {
    bool changed = false;
    for (StateId q = 0; q < g.num_states(); ++q) {
      if (!good[q]) continue;
      StateId p = prod.component(q, 0);
      for (const Transition& t : plant.out(p)) {
        if (plant.alphabet().controllable(t.event)) continue;
        auto r = g.next(q, t.event);
        if (!r || !good[*r]) {
          good[q] = false;
          changed = true;
          break;
        }
      }
    }
    auto reach = reach_within(g, good);
    auto coreach = coreach_within(g, good);
    for (StateId q = 0; q < g.num_states(); ++q) {
      bool keep = good[q] && reach[q] && coreach[q];
      if (keep != good[q]) {
        good[q] = keep;
        changed = true;
      }
    }
    if (!changed) break;
  }
  return restrict_states(g, good);
}

ControllabilityResult is_controllable(const Generator& k, const Generator& plant) {
  ControllabilityResult res;
  if (k.empty() || plant.empty()) return res;
  const Generator* parts[] = {&k, &plant};
  detail::Product prod = detail::sync_product(parts);
  const Generator& g = prod.generator;
  // BFS over the product; product states are already numbered in BFS order.
  constexpr StateId none = static_cast<StateId>(-1);
  std::vector<StateId> parent(g.num_states(), none);
  std::vector<EventId> via(g.num_states());
  std::vector<bool> seen(g.num_states(), false);
  std::deque<StateId> queue{g.initial()};
  seen[g.initial()] = true;
  while (!queue.empty()) {
    StateId q = queue.front();
    queue.pop_front();
    StateId x = prod.component(q, 0), p = prod.component(q, 1);
    for (const Transition& t : plant.out(p)) {
      if (plant.alphabet().controllable(t.event) || !k.alphabet().contains(t.event)) continue;
      if (!k.defined(x, t.event)) {
        Word w{t.event};
        for (StateId y = q; parent[y] != none; y = parent[y]) w.push_back(via[y]);
        std::reverse(w.begin(), w.end());
        res.controllable = false;
        res.violation = std::move(w);
        return res;
      }
    }
    for (const Transition& t : g.out(q)) {
      if (!seen[t.target]) {
        seen[t.target] = true;
        parent[t.target] = q;
        via[t.target] = t.event;
        queue.push_back(t.target);
      }
    }
  }
  return res;
}

bool nonblocking(const Generator& g) {
  auto reach = reachable_states(g);
  auto coreach = coreachable_states(g);
  for (StateId q = 0; q < g.num_states(); ++q)
    if (reach[q] && !coreach[q]) return false;
  return true;
}

bool control_equivalent(std::span<const LocalController> locals, const Generator& plant,
                        const Generator& sup) {
  std::vector<const Generator*> parts{&plant};
  for (const LocalController& c : locals) parts.push_back(&c.controller);
  Generator joint = detail::sync_product(parts).generator;
  return isomorphic(minimize(joint), minimize(sup)).isomorphic;
}

LocalController make_local_controller(Generator controller, std::size_t owner,
                                      const Generator& owner_agent) {
  LocalController lc;
  lc.owner_agent = owner;
  for (EventId e : controller.alphabet().events())
    if (!owner_agent.alphabet().contains(e)) lc.imported_events.insert(e);
  lc.controller = add_selfloops(controller, lc.imported_events);
  return lc;
}

namespace {

// Greedy cover of the supervisor's states by control-consistent cells, closed
// under successors (a control congruence).
class Localizer {
 public:
  Localizer(const detail::Product& base, const Generator& plant, const Generator& agent)
      : g_(base.generator), n_(g_.num_states()) {
    std::vector<EventId> own_ctrl = agent.alphabet().controllable_events();
    enabled_.resize(n_);
    disabled_.resize(n_);
    marked_.resize(n_);
    plant_marked_.resize(n_);
    for (StateId x = 0; x < n_; ++x) {
      StateId p = base.component(x, 1);
      for (EventId e : own_ctrl) {
        bool in_sup = g_.defined(x, e);
        if (in_sup) enabled_[x].push_back(e);
        else if (plant.defined(p, e)) disabled_[x].push_back(e);
      }
      marked_[x] = g_.is_marked(x);
      plant_marked_[x] = plant.is_marked(p);
    }
  }

  std::vector<StateId> cover() {
    std::vector<StateId> cell(n_);
    for (StateId x = 0; x < n_; ++x) cell[x] = x;
    for (StateId i = 0; i < n_; ++i)
      for (StateId j = i + 1; j < n_; ++j)
        if (cell[i] != cell[j]) try_merge(cell, i, j);
    return cell;
  }

 private:
  static bool meets(const std::vector<EventId>& a, const std::vector<EventId>& b) {
    auto i = a.begin(), j = b.begin();
    while (i != a.end() && j != b.end()) {
      if (*i == *j) return true;
      if (*i < *j) ++i;
      else ++j;
    }
    return false;
  }

  bool consistent(StateId x, StateId y) const {
    if (meets(enabled_[x], disabled_[y]) || meets(enabled_[y], disabled_[x])) return false;
    if (plant_marked_[x] == plant_marked_[y] && marked_[x] != marked_[y]) return false;
    return true;
  }

  void try_merge(std::vector<StateId>& cell, StateId i, StateId j) {
    std::vector<StateId> c = cell;
    std::map<StateId, std::vector<StateId>> members;
    for (StateId x = 0; x < n_; ++x) members[c[x]].push_back(x);
    std::vector<std::pair<StateId, StateId>> work{{i, j}};
    while (!work.empty()) {
      auto [a, b] = work.back();
      work.pop_back();
      StateId ca = c[a], cb = c[b];
      if (ca == cb) continue;
      auto& ma = members[ca];
      auto& mb = members[cb];
      for (StateId x : ma)
        for (StateId y : mb)
          if (!consistent(x, y)) return;
      for (StateId y : mb) c[y] = ca;
      ma.insert(ma.end(), mb.begin(), mb.end());
      members.erase(cb);
      std::map<EventId, StateId> first;
      for (StateId x : members[ca]) {
        for (const Transition& t : g_.out(x)) {
          auto [it, fresh] = first.try_emplace(t.event, t.target);
          if (!fresh && c[it->second] != c[t.target]) work.emplace_back(it->second, t.target);
        }
      }
    }
    cell = std::move(c);
  }

  const Generator& g_;
  std::size_t n_;
  std::vector<std::vector<EventId>> enabled_, disabled_;
  std::vector<bool> marked_, plant_marked_;
};

LocalController quotient_controller(const Generator& g, const std::vector<StateId>& cell,
                                    const Generator& agent, std::size_t owner) {
  std::map<StateId, StateId> renum;
  for (StateId x = 0; x < g.num_states(); ++x) renum.try_emplace(cell[x], static_cast<StateId>(renum.size()));
  auto cl = [&](StateId x) { return renum.at(cell[x]); };

  std::set<EventId> keep(agent.alphabet().events().begin(), agent.alphabet().events().end());
  for (StateId x = 0; x < g.num_states(); ++x)
    for (const Transition& t : g.out(x))
      if (cl(x) != cl(t.target)) keep.insert(t.event);

  Alphabet alphabet = g.alphabet().restricted_to(keep).merged(agent.alphabet());
  GeneratorBuilder b(alphabet, renum.size());
  for (StateId x = 0; x < g.num_states(); ++x) {
    if (g.is_marked(x)) b.set_marked(cl(x));
    for (const Transition& t : g.out(x))
      if (keep.count(t.event)) b.add_transition(cl(x), t.event, cl(t.target));
  }
  b.set_initial(cl(g.initial()));
  return make_local_controller(std::move(b).build(), owner, agent);
}

}  // namespace

std::vector<LocalController> localize(const PlantModel& model, const Generator& sup) {
  model.validate();
  Generator plant = model.plant();
  std::vector<LocalController> out;
  if (sup.empty()) {
    for (std::size_t i = 0; i < model.agents.size(); ++i)
      out.push_back({Generator(model.agents[i].alphabet()), i, {}});
  } else {
    const Generator* parts[] = {&sup, &plant};
    detail::Product base = detail::sync_product(parts);
    for (std::size_t i = 0; i < model.agents.size(); ++i) {
      Localizer loc(base, plant, model.agents[i]);
      out.push_back(quotient_controller(base.generator, loc.cover(), model.agents[i], i));
    }
  }
  if (!control_equivalent(out, plant, sup))
    throw LocalizationFailure("localized controllers are not control equivalent to the supervisor");
  return out;
}

std::optional<SpecViolation> uncontrollable_spec_violation(const PlantModel& model, const Word& prefix,
                                                           std::size_t max_extension) {
  const auto& agents = model.agents;
  const auto& specs = model.specs;
  struct Node {
    std::vector<StateId> agent_states, spec_states;
    Word word;
  };
  Node start;
  for (const Generator& a : agents) {
    if (a.empty()) return std::nullopt;
    start.agent_states.push_back(a.initial());
  }
  for (const Generator& s : specs) {
    if (s.empty()) return std::nullopt;
    start.spec_states.push_back(s.initial());
  }

  // Advances node by e; returns the specs rejecting e, or nullopt if the plant does.
  auto step = [&](Node& node, EventId e) -> std::optional<std::vector<std::size_t>> {
    bool in_plant = false;
    for (std::size_t i = 0; i < agents.size(); ++i) {
      if (!agents[i].alphabet().contains(e)) continue;
      auto t = agents[i].next(node.agent_states[i], e);
      if (!t) return std::nullopt;
      node.agent_states[i] = *t;
      in_plant = true;
    }
    if (!in_plant) return std::nullopt;
    std::vector<std::size_t> rejecting;
    for (std::size_t j = 0; j < specs.size(); ++j) {
      if (!specs[j].alphabet().contains(e)) continue;
      auto t = specs[j].next(node.spec_states[j], e);
      if (!t) rejecting.push_back(j);
      else node.spec_states[j] = *t;
    }
    node.word.push_back(e);
    return rejecting;
  };

  for (EventId e : prefix) {
    auto rej = step(start, e);
    if (!rej) return std::nullopt;
    if (!rej->empty()) return SpecViolation{start.word, *rej};
  }

  std::vector<EventId> uncontrollable;
  for (const Generator& a : agents)
    for (EventId e : a.alphabet().uncontrollable_events()) uncontrollable.push_back(e);
  std::sort(uncontrollable.begin(), uncontrollable.end());

  std::deque<Node> queue{start};
  std::set<std::pair<std::vector<StateId>, std::vector<StateId>>> seen{
      {start.agent_states, start.spec_states}};
  while (!queue.empty()) {
    Node node = std::move(queue.front());
    queue.pop_front();
    if (node.word.size() >= prefix.size() + max_extension) continue;
    for (EventId e : uncontrollable) {
      Node nxt = node;
      auto rej = step(nxt, e);
      if (!rej) continue;
      if (!rej->empty()) return SpecViolation{nxt.word, *rej};
      if (seen.insert({nxt.agent_states, nxt.spec_states}).second) queue.push_back(std::move(nxt));
    }
  }
  return std::nullopt;
}

}  // namespace delayrobust
