#include "delayrobust/blocking.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <tuple>

#include "delayrobust/automata.hpp"
#include "product.hpp"

namespace delayrobust {

std::string to_string(Classification c) {
  switch (c) {
    case Classification::Unbounded: return "unbounded";
    case Classification::Bounded: return "bounded";
    case Classification::NotApplicable: return "not-applicable";
  }
  return "unknown";
}

Generator make_nchnl(EventId r, EventId r_sig, bool controllable) {
  Alphabet a;
  a.add(r, controllable);
  a.add(r_sig, controllable);
  GeneratorBuilder b(a, 3);
  b.add_transition(0, r, 1);
  b.add_transition(1, r_sig, 0);
  b.add_transition(1, r, 2);
  b.add_transition(2, r, 2);
  b.set_marked(2);
  b.set_initial(0);
  return std::move(b).build();
}

Generator make_nchnl(EventId r, EventId r_sig) { return make_nchnl(r, r_sig, parity_controllable(r)); }

namespace {

bool event_controllable(std::span<const Generator> sups, EventId e) {
  for (const Generator& g : sups)
    if (g.alphabet().contains(e)) return g.alphabet().controllable(e);
  return parity_controllable(e);
}

// Controllers composed with every channel except the target's.
Generator compose_without(std::span<const Generator> sups, std::span<const ChannelSpec> channels,
                          const ChannelSpec& target, bool mark_channels) {
  std::vector<Generator> parts(sups.begin(), sups.end());
  for (const ChannelSpec& c : channels) {
    if (c == target) continue;
    Generator ch = make_channel(c, event_controllable(sups, c.event));
    parts.push_back(mark_channels ? mark_all(ch) : std::move(ch));
  }
  return sync(parts);
}

}  // namespace

Generator blocked_test_generator(std::span<const Generator> sups_relabeled,
                                 std::span<const ChannelSpec> channels, const ChannelSpec& target) {
  Generator nsup = compose_without(sups_relabeled, channels, target, true);
  Generator nchnl = make_nchnl(target.event, target.signal, event_controllable(sups_relabeled, target.event));
  return trim(sync(mark_all(nsup), nchnl));
}

BlockReport blocked_test(std::span<const Generator> sups_relabeled, std::span<const ChannelSpec> channels,
                         const ChannelSpec& target) {
  BlockReport rep;
  rep.event = target.event;
  if (event_controllable(sups_relabeled, target.event)) {
    rep.applicable = false;
    rep.classification = Classification::NotApplicable;
    rep.note = "not-applicable: controllable events are delayed by their own local controller";
    return rep;
  }
  Generator ttest = blocked_test_generator(sups_relabeled, channels, target);
  rep.test_size = ttest.size();
  rep.blocked = !ttest.empty();
  if (rep.blocked) {
    rep.witness = shortest_marked_word(ttest);
    rep.prefix = Word(rep.witness->begin(), rep.witness->end() - 1);
    rep.classification = Classification::Bounded;
  } else {
    rep.classification = Classification::Unbounded;
  }
  return rep;
}

BlockReport blocked_test(const ChanneledSystem& system, const ChannelSpec& target) {
  return blocked_test(system.sup_primes, system.channel_specs, target);
}

FaultReport fault_admissibility(const Generator& sup, const Generator& plant, const ChanneledSystem& system,
                                const ChannelSpec& target, std::size_t depth, std::size_t max_samples) {
  FaultReport rep;
  const Generator& sp = system.sup_prime;
  if (sp.empty() || sup.empty() || plant.empty()) return rep;
  if (event_controllable(system.sup_primes, target.event)) return rep;
  if (depth == 0) depth = 2 * sp.num_states();
  Generator nsup = compose_without(system.sup_primes, system.channel_specs, target, false);
  if (nsup.empty()) return rep;

  constexpr StateId bottom = static_cast<StateId>(-1);
  using Key = std::tuple<StateId, StateId, StateId, StateId>;
  struct Node {
    Key key;
    std::size_t parent;
    EventId via;
    std::size_t depth;
  };
  std::vector<Node> nodes;
  std::map<Key, std::size_t> seen;
  auto push = [&](Key k, std::size_t parent, EventId via, std::size_t d) {
    if (seen.try_emplace(k, nodes.size()).second) nodes.push_back({k, parent, via, d});
  };
  auto word_of = [&](std::size_t i) {
    Word w;
    while (nodes[i].parent != i) {
      w.push_back(nodes[i].via);
      i = nodes[i].parent;
    }
    std::reverse(w.begin(), w.end());
    return w;
  };
  push({sp.initial(), nsup.initial(), sup.initial(), plant.initial()}, 0, EventId(), 0);
  const EventId r = target.event;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    auto [x, n, y, p] = nodes[i].key;
    auto nr = nsup.next(n, r);
    bool plant_allows = p != bottom && plant.defined(p, r);
    if (nr && plant_allows && !sp.defined(x, r)) {
      ++rep.faults_examined;
      bool ok = y != bottom && sup.defined(y, r);
      if (rep.samples.size() < max_samples || !ok) {
        Word t = word_of(i);
        t.push_back(r);
        if (!ok) {
          rep.admissible = false;
          rep.violation = t;
        }
        if (rep.samples.size() < max_samples) rep.samples.push_back({t, ok});
        if (!ok) return rep;
      }
    }
    if (nodes[i].depth >= depth) continue;
    for (const Transition& t : sp.out(x)) {
      auto nn = nsup.next(n, t.event);
      if (!nn) continue;  // cannot happen: SUP' refines NSUP
      StateId ny = y, np = p;
      if (!system.nulled.count(t.event)) {
        ny = y == bottom ? bottom : sup.next(y, t.event).value_or(bottom);
        np = p == bottom || !plant.alphabet().contains(t.event) ? p : plant.next(p, t.event).value_or(bottom);
      }
      push({t.target, *nn, ny, np}, i, t.event, nodes[i].depth + 1);
    }
  }
  return rep;
}

std::optional<std::size_t> delay_bound_estimate(const Generator& sup, EventId r) {
  const std::size_t n = sup.num_states();
  constexpr std::size_t inf = static_cast<std::size_t>(-1);
  std::vector<std::size_t> dist(n, inf);
  std::deque<StateId> queue;
  for (StateId q = 0; q < n; ++q) {
    if (auto t = sup.next(q, r); t && dist[*t] == inf) {
      dist[*t] = 0;
      queue.push_back(*t);
    }
  }
  while (!queue.empty()) {
    StateId q = queue.front();
    queue.pop_front();
    if (sup.defined(q, r)) return dist[q];
    for (const Transition& t : sup.out(q)) {
      if (t.event == r || dist[t.target] != inf) continue;
      dist[t.target] = dist[q] + 1;
      queue.push_back(t.target);
    }
  }
  return std::nullopt;
}

BlockReport analyze_blocking(const Generator& sup, const Generator& plant, const ChanneledSystem& system,
                             const ChannelSpec& target, std::size_t depth) {
  BlockReport rep = blocked_test(system, target);
  if (!rep.applicable) return rep;
  FaultReport fault = fault_admissibility(sup, plant, system, target, depth);
  rep.fault_admissible = fault.admissible;
  if (rep.blocked) {
    rep.bound = delay_bound_estimate(sup, target.event);
    if (!rep.bound) rep.note = "event does not re-occur in the supervisor";
  }
  if (!fault.admissible && fault.violation)
    rep.note += (rep.note.empty() ? "" : "; ") + std::string("inadmissible fault ") + to_string(*fault.violation);
  return rep;
}

}  // namespace delayrobust
