#include "delayrobust/robustness.hpp"

#include <algorithm>
#include <deque>
#include <random>
#include <variant>

#include "delayrobust/errors.hpp"
#include "product.hpp"

namespace delayrobust {

EventId conventional_signal(EventId event, std::size_t recipient) {
  return EventId(event.label() + static_cast<std::uint32_t>(100 * (recipient + 1)));
}

Generator make_channel(const ChannelSpec& spec, bool controllable) {
  Alphabet a;
  a.add(spec.event, controllable);
  a.add(spec.signal, controllable);
  GeneratorBuilder b(a, 2);
  b.set_marked(0);
  b.add_transition(0, spec.event, 1);
  b.add_transition(1, spec.signal, 0);
  b.set_initial(0);
  return std::move(b).build();
}

Generator make_channel(const ChannelSpec& spec) {
  return make_channel(spec, parity_controllable(spec.event));
}

std::string to_string(Counterexample::Kind k) {
  switch (k) {
    case Counterexample::Kind::ExtraClosed: return "extra-closed";
    case Counterexample::Kind::ExtraMarked: return "extra-marked";
    case Counterexample::Kind::MissingClosed: return "missing-closed";
    case Counterexample::Kind::MissingMarked: return "missing-marked";
  }
  return "unknown";
}

ChanneledSystem build_channeled(std::span<const Generator> sups, std::span<const ChannelSpec> channels) {
  ChanneledSystem sys;
  std::vector<std::map<EventId, EventId>> maps(sups.size());
  std::set<EventId> all_events;
  for (const Generator& g : sups)
    for (EventId e : g.alphabet().events()) all_events.insert(e);

  std::set<std::pair<EventId, std::size_t>> seen;
  for (const ChannelSpec& c : channels) {
    if (c.recipient >= sups.size())
      throw ChannelError("channel for event " + to_string(c.event) + " names an unknown recipient");
    if (!sups[c.recipient].alphabet().contains(c.event))
      throw ChannelError("recipient " + std::to_string(c.recipient) + " does not use event " + to_string(c.event));
    if (c.source_agent == c.recipient)
      throw ChannelError("event " + to_string(c.event) + " cannot be channeled to its own agent");
    if (all_events.count(c.signal) || sys.nulled.count(c.signal))
      throw ChannelError("signal " + to_string(c.signal) + " is not a fresh label");
    if (!seen.insert({c.event, c.recipient}).second)
      throw ChannelError("duplicate channel for event " + to_string(c.event));
    maps[c.recipient][c.event] = c.signal;
    sys.nulled.insert(c.signal);
  }
  for (std::size_t j = 0; j < sups.size(); ++j) {
    Generator g = maps[j].empty() ? sups[j] : relabel(sups[j], maps[j]);
    sys.sup_primes.push_back(std::move(g));
  }
  for (const ChannelSpec& c : channels) {
    sys.channel_specs.push_back(c);
    sys.channels.push_back(make_channel(c, sups[c.recipient].alphabet().controllable(c.event)));
  }
  std::vector<const Generator*> parts;
  for (const Generator& g : sys.sup_primes) parts.push_back(&g);
  for (const Generator& g : sys.channels) parts.push_back(&g);
  Generator composed = detail::sync_product(parts).generator;
  // Record r -> r' pairs on the composed alphabet.
  Alphabet alphabet = composed.alphabet();
  for (const ChannelSpec& c : channels)
    if (!alphabet.signal_of(c.event)) alphabet.add_signal_pair(c.event, c.signal);
  GeneratorBuilder b(alphabet, composed.num_states());
  for (StateId q = 0; q < composed.num_states(); ++q) {
    b.set_marked(q, composed.is_marked(q));
    for (const Transition& t : composed.out(q)) b.add_transition(q, t.event, t.target);
  }
  b.set_initial(composed.initial());
  sys.sup_prime = std::move(b).build();
  return sys;
}

namespace {

Word project_word(const Word& s, const std::set<EventId>& nulled) {
  Word out;
  for (EventId e : s)
    if (!nulled.count(e)) out.push_back(e);
  return out;
}

Word path_to(const std::vector<std::pair<std::size_t, EventId>>& parent, std::size_t node) {
  Word w;
  while (parent[node].first != node) {
    w.push_back(parent[node].second);
    node = parent[node].first;
  }
  std::reverse(w.begin(), w.end());
  return w;
}

// Shortest s in L(SUP') whose projection leaves L(SUP) or is wrongly marked.
std::optional<Counterexample> extra_behavior(const Generator& sup, const ChanneledSystem& system) {
  const Generator& sp = system.sup_prime;
  if (sp.empty()) return std::nullopt;
  if (sup.empty()) return Counterexample{Counterexample::Kind::ExtraClosed, {}, {}};
  std::map<std::pair<StateId, StateId>, std::size_t> index;
  std::vector<std::pair<StateId, StateId>> nodes;
  std::vector<std::pair<std::size_t, EventId>> parent;
  auto visit = [&](StateId x, StateId y, std::size_t from, EventId e) {
    auto [it, fresh] = index.try_emplace({x, y}, nodes.size());
    if (fresh) {
      nodes.emplace_back(x, y);
      parent.emplace_back(from == static_cast<std::size_t>(-1) ? nodes.size() - 1 : from, e);
    }
  };
  visit(sp.initial(), sup.initial(), static_cast<std::size_t>(-1), EventId());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    auto [x, y] = nodes[i];
    if (sp.is_marked(x) && !sup.is_marked(y)) {
      Word s = path_to(parent, i);
      return Counterexample{Counterexample::Kind::ExtraMarked, s, project_word(s, system.nulled)};
    }
    for (const Transition& t : sp.out(x)) {
      if (system.nulled.count(t.event)) {
        visit(t.target, y, i, t.event);
        continue;
      }
      auto ny = sup.next(y, t.event);
      if (!ny) {
        Word s = path_to(parent, i);
        s.push_back(t.event);
        return Counterexample{Counterexample::Kind::ExtraClosed, s, project_word(s, system.nulled)};
      }
      visit(t.target, *ny, i, t.event);
    }
  }
  return std::nullopt;
}

// Shortest string of SUP that the projected channeled behavior lacks.
std::optional<Counterexample> missing_behavior(const Generator& sup, const ChanneledSystem& system,
                                               const AbstractionOptions& options) {
  if (sup.empty()) return std::nullopt;
  Generator pg = project(system.sup_prime, ProjectionSpec{system.nulled}, options);
  if (pg.empty()) return Counterexample{Counterexample::Kind::MissingClosed, {}, {}};
  std::map<std::pair<StateId, StateId>, std::size_t> index;
  std::vector<std::pair<StateId, StateId>> nodes;
  std::vector<std::pair<std::size_t, EventId>> parent;
  auto visit = [&](StateId x, StateId y, std::size_t from, EventId e) {
    auto [it, fresh] = index.try_emplace({x, y}, nodes.size());
    if (fresh) {
      nodes.emplace_back(x, y);
      parent.emplace_back(from == static_cast<std::size_t>(-1) ? nodes.size() - 1 : from, e);
    }
  };
  visit(pg.initial(), sup.initial(), static_cast<std::size_t>(-1), EventId());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    auto [x, y] = nodes[i];
    if (sup.is_marked(y) && !pg.is_marked(x))
      return Counterexample{Counterexample::Kind::MissingMarked, {}, path_to(parent, i)};
    for (const Transition& t : sup.out(y)) {
      auto nx = pg.next(x, t.event);
      if (!nx) {
        Word w = path_to(parent, i);
        w.push_back(t.event);
        return Counterexample{Counterexample::Kind::MissingClosed, {}, w};
      }
      visit(*nx, t.target, i, t.event);
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<Counterexample> language_counterexample(const Generator& sup, const ChanneledSystem& system,
                                                      const AbstractionOptions& options) {
  if (auto c = extra_behavior(sup, system)) return c;
  return missing_behavior(sup, system, options);
}

Verdict check_delay_robustness(const Generator& sup, const ChanneledSystem& system,
                               const AbstractionOptions& options) {
  Verdict v;
  for (const ChannelSpec& c : system.channel_specs) v.channeled_events.insert(c.event);
  v.channeled_size = system.sup_prime.size();
  ProjectionSpec proj{system.nulled};
  NondetGenerator q = supqc(system.sup_prime, proj);
  v.reduced = q.size();

  auto det = determinize_if_possible(q);
  std::optional<IsomorphismFailure> iso_failure;
  if (auto* g = std::get_if<Generator>(&det)) {
    IsoResult iso = isomorphic(*g, minimize(sup));
    if (iso) {
      v.robust = true;
      v.notes = "quotient is deterministic and isomorphic to the supervisor";
      return v;
    }
    iso_failure = IsomorphismFailure{};
    if (iso.witness) iso_failure = IsomorphismFailure{iso.witness->first, iso.witness->second};
  }

  // Not robust: report a single piece of evidence, strongest first.
  if (auto c = language_counterexample(sup, system, options)) {
    v.counterexample = std::move(c);
    v.notes = "projected channeled behavior differs from the supervisor (" + to_string(v.counterexample->kind) + ")";
  } else if (auto* w = std::get_if<NondeterminismWitness>(&det)) {
    v.nondeterminism = *w;
    v.notes = "languages agree but the observer property fails: quotient " + w->describe();
  } else {
    v.isomorphism_failure = iso_failure;
    v.notes = "deterministic quotient is not isomorphic to the supervisor";
  }
  return v;
}

MonotonicityReport check_subset_monotonicity(const Generator& sup, std::span<const Generator> sups,
                                             std::span<const ChannelSpec> full_set, std::size_t sample,
                                             unsigned seed, const AbstractionOptions& options) {
  MonotonicityReport rep;
  auto robust_for = [&](std::span<const ChannelSpec> chans) {
    return check_delay_robustness(sup, build_channeled(sups, chans), options).robust;
  };
  rep.full_robust = robust_for(full_set);
  if (!rep.full_robust) return rep;

  const std::size_t n = full_set.size();
  std::vector<std::uint64_t> masks;
  if (n <= 4) {
    for (std::uint64_t m = 0; m + 1 < (std::uint64_t{1} << n); ++m) masks.push_back(m);
  } else {
    std::mt19937_64 rng(seed);
    masks.push_back(0);
    for (std::size_t i = 0; i < sample; ++i) {
      std::uint64_t m = 0;
      for (std::size_t b = 0; b < n && b < 64; ++b)
        if (rng() & 1) m |= std::uint64_t{1} << b;
      masks.push_back(m);
    }
  }
  for (std::uint64_t m : masks) {
    std::vector<ChannelSpec> subset;
    for (std::size_t b = 0; b < n; ++b)
      if (m & (std::uint64_t{1} << b)) subset.push_back(full_set[b]);
    ++rep.subsets_checked;
    if (!robust_for(subset)) rep.violations.push_back(std::move(subset));
  }
  return rep;
}

}  // namespace delayrobust
