#include "delayrobust/automata.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <unordered_map>

#include "delayrobust/errors.hpp"
#include "product.hpp"

namespace delayrobust {

namespace detail {

namespace {

struct TupleHash {
  std::size_t operator()(const std::vector<StateId>& v) const noexcept {
    std::size_t h = v.size();
    for (StateId x : v) h ^= x + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
  }
};

}  // namespace

Product sync_product(std::span<const Generator* const> components) {
  if (components.empty()) throw std::invalid_argument("sync needs at least one component");
  Alphabet alphabet;
  for (const Generator* g : components) alphabet = alphabet.merged(g->alphabet());

  Product result;
  result.arity = components.size();
  for (const Generator* g : components) {
    if (g->empty()) {
      result.generator = Generator(alphabet);
      return result;
    }
  }

  const auto events = alphabet.events();
  std::vector<std::vector<std::size_t>> participants(events.size());
  for (std::size_t e = 0; e < events.size(); ++e)
    for (std::size_t i = 0; i < components.size(); ++i)
      if (components[i]->alphabet().contains(events[e])) participants[e].push_back(i);

  GeneratorBuilder builder(alphabet);
  std::unordered_map<std::vector<StateId>, StateId, TupleHash> index;
  std::vector<StateId> start(components.size());
  for (std::size_t i = 0; i < components.size(); ++i) start[i] = components[i]->initial();

  auto intern = [&](const std::vector<StateId>& t) {
    auto [it, fresh] = index.try_emplace(t, static_cast<StateId>(builder.num_states()));
    if (fresh) {
      bool marked = true;
      for (std::size_t i = 0; i < t.size(); ++i) marked = marked && components[i]->is_marked(t[i]);
      builder.add_state(marked);
      result.tuples.insert(result.tuples.end(), t.begin(), t.end());
    }
    return it->second;
  };

  intern(start);
  std::vector<StateId> cur(components.size()), nxt(components.size());
  for (StateId q = 0; q < builder.num_states(); ++q) {
    std::copy_n(result.tuples.begin() + static_cast<std::ptrdiff_t>(q * result.arity), result.arity,
                cur.begin());
    for (std::size_t e = 0; e < events.size(); ++e) {
      if (participants[e].empty()) continue;
      nxt = cur;
      bool ok = true;
      for (std::size_t i : participants[e]) {
        auto t = components[i]->next(cur[i], events[e]);
        if (!t) {
          ok = false;
          break;
        }
        nxt[i] = *t;
      }
      if (!ok) continue;
      StateId target = intern(nxt);
      builder.add_transition(q, events[e], target);
    }
  }
  builder.set_initial(0);
  result.generator = std::move(builder).build();
  return result;
}

}  // namespace detail

Generator sync(std::span<const Generator> components) {
  std::vector<const Generator*> ptrs;
  for (const Generator& g : components) ptrs.push_back(&g);
  return detail::sync_product(ptrs).generator;
}

Generator sync(const Generator& a, const Generator& b) {
  const Generator* ptrs[] = {&a, &b};
  return detail::sync_product(ptrs).generator;
}

std::vector<bool> reachable_states(const Generator& g) {
  std::vector<bool> seen(g.num_states(), false);
  if (g.empty()) return seen;
  std::vector<StateId> stack{g.initial()};
  seen[g.initial()] = true;
  while (!stack.empty()) {
    StateId q = stack.back();
    stack.pop_back();
    for (const Transition& t : g.out(q)) {
      if (!seen[t.target]) {
        seen[t.target] = true;
        stack.push_back(t.target);
      }
    }
  }
  return seen;
}

std::vector<bool> coreachable_states(const Generator& g) {
  const std::size_t n = g.num_states();
  std::vector<std::vector<StateId>> pred(n);
  for (StateId q = 0; q < n; ++q)
    for (const Transition& t : g.out(q)) pred[t.target].push_back(q);
  std::vector<bool> seen(n, false);
  std::vector<StateId> stack;
  for (StateId q = 0; q < n; ++q) {
    if (g.is_marked(q)) {
      seen[q] = true;
      stack.push_back(q);
    }
  }
  while (!stack.empty()) {
    StateId q = stack.back();
    stack.pop_back();
    for (StateId p : pred[q]) {
      if (!seen[p]) {
        seen[p] = true;
        stack.push_back(p);
      }
    }
  }
  return seen;
}

Generator restrict_states(const Generator& g, const std::vector<bool>& keep) {
  if (g.empty() || !keep[g.initial()]) return Generator(g.alphabet());
  std::vector<StateId> renum(g.num_states(), 0);
  GeneratorBuilder builder(g.alphabet());
  for (StateId q = 0; q < g.num_states(); ++q)
    if (keep[q]) renum[q] = builder.add_state(g.is_marked(q));
  for (StateId q = 0; q < g.num_states(); ++q) {
    if (!keep[q]) continue;
    for (const Transition& t : g.out(q))
      if (keep[t.target]) builder.add_transition(renum[q], t.event, renum[t.target]);
  }
  builder.set_initial(renum[g.initial()]);
  return std::move(builder).build();
}

Generator reachable_part(const Generator& g) { return restrict_states(g, reachable_states(g)); }

Generator trim(const Generator& g) {
  Generator r = reachable_part(g);
  return restrict_states(r, coreachable_states(r));
}

bool is_trim(const Generator& g) {
  auto r = reachable_states(g);
  auto c = coreachable_states(g);
  return std::all_of(r.begin(), r.end(), [](bool b) { return b; }) &&
         std::all_of(c.begin(), c.end(), [](bool b) { return b; });
}

Generator mark_all(const Generator& g) {
  if (g.empty()) return g;
  GeneratorBuilder builder(g.alphabet(), g.num_states());
  builder.mark_all();
  for (StateId q = 0; q < g.num_states(); ++q)
    for (const Transition& t : g.out(q)) builder.add_transition(q, t.event, t.target);
  builder.set_initial(g.initial());
  return std::move(builder).build();
}

Generator relabel(const Generator& g, const std::map<EventId, EventId>& map) {
  std::set<EventId> targets;
  for (auto& [from, to] : map) {
    if (from == to) continue;
    if (!targets.insert(to).second)
      throw LabelCollision("relabel map is not injective at " + to_string(to));
  }
  Alphabet alphabet;
  for (EventId e : g.alphabet().events()) {
    auto it = map.find(e);
    EventId image = it == map.end() ? e : it->second;
    if (it == map.end() || it->second == e) {
      if (targets.count(e))
        throw LabelCollision("relabel target " + to_string(e) + " already in the alphabet");
    }
    alphabet.add(image, g.alphabet().controllable(e));
  }
  for (auto& [s, t] : g.alphabet().signal_pairs()) {
    if (!map.count(s) && !map.count(t)) alphabet.add_signal_pair(s, t);
  }
  GeneratorBuilder builder(alphabet, g.num_states());
  for (StateId q = 0; q < g.num_states(); ++q) {
    builder.set_marked(q, g.is_marked(q));
    for (const Transition& t : g.out(q)) {
      auto it = map.find(t.event);
      builder.add_transition(q, it == map.end() ? t.event : it->second, t.target);
    }
  }
  builder.set_initial(g.initial());
  return std::move(builder).build();
}

Generator add_selfloops(const Generator& g, const std::set<EventId>& events) {
  Alphabet alphabet = g.alphabet();
  for (EventId e : events) alphabet.add(e);
  GeneratorBuilder builder(alphabet, g.num_states());
  for (StateId q = 0; q < g.num_states(); ++q) {
    builder.set_marked(q, g.is_marked(q));
    for (const Transition& t : g.out(q)) builder.add_transition(q, t.event, t.target);
    for (EventId e : events)
      if (!g.defined(q, e)) builder.add_transition(q, e, q);
  }
  builder.set_initial(g.initial());
  return std::move(builder).build();
}

namespace {

// Moore-style refinement. Returns block ids numbered by first appearance in
// state order.
std::vector<StateId> coarsest_partition(const Generator& g) {
  const std::size_t n = g.num_states();
  std::vector<StateId> block(n);
  for (StateId q = 0; q < n; ++q) block[q] = g.is_marked(q) ? 1 : 0;
  std::size_t count = 0;
  for (;;) {
    std::map<std::vector<std::uint64_t>, StateId> sigs;
    std::vector<StateId> next(n);
    std::vector<std::uint64_t> sig;
    for (StateId q = 0; q < n; ++q) {
      sig.clear();
      sig.push_back(block[q]);
      for (const Transition& t : g.out(q))
        sig.push_back((static_cast<std::uint64_t>(t.event.label()) << 32) | block[t.target]);
      auto [it, fresh] = sigs.try_emplace(sig, static_cast<StateId>(sigs.size()));
      next[q] = it->second;
    }
    block.swap(next);
    if (sigs.size() == count) break;
    count = sigs.size();
  }
  return block;
}

}  // namespace

Generator minimize(const Generator& g) {
  Generator r = reachable_part(g);
  if (r.empty()) return r;
  std::vector<StateId> block = coarsest_partition(r);
  std::size_t nblocks = *std::max_element(block.begin(), block.end()) + 1;
  std::vector<StateId> rep(nblocks, static_cast<StateId>(-1));
  for (StateId q = 0; q < r.num_states(); ++q)
    if (rep[block[q]] == static_cast<StateId>(-1)) rep[block[q]] = q;

  // Renumber blocks in BFS order for a canonical layout.
  std::vector<StateId> order(nblocks, static_cast<StateId>(-1));
  std::deque<StateId> queue{block[r.initial()]};
  order[block[r.initial()]] = 0;
  StateId used = 1;
  while (!queue.empty()) {
    StateId b = queue.front();
    queue.pop_front();
    for (const Transition& t : r.out(rep[b])) {
      StateId c = block[t.target];
      if (order[c] == static_cast<StateId>(-1)) {
        order[c] = used++;
        queue.push_back(c);
      }
    }
  }
  GeneratorBuilder builder(r.alphabet(), nblocks);
  for (StateId b = 0; b < nblocks; ++b) {
    builder.set_marked(order[b], r.is_marked(rep[b]));
    for (const Transition& t : r.out(rep[b])) builder.add_transition(order[b], t.event, order[block[t.target]]);
  }
  builder.set_initial(0);
  return std::move(builder).build();
}

IsoResult isomorphic(const Generator& a, const Generator& b) {
  IsoResult res;
  if (a.empty() || b.empty()) {
    res.isomorphic = a.empty() && b.empty();
    return res;
  }
  constexpr StateId none = static_cast<StateId>(-1);
  std::vector<StateId> fwd(a.num_states(), none), back(b.num_states(), none);
  std::deque<std::pair<StateId, StateId>> queue;
  auto fail = [&](StateId x, StateId y) {
    res.isomorphic = false;
    res.witness = std::make_pair(x, y);
    return res;
  };
  fwd[a.initial()] = b.initial();
  back[b.initial()] = a.initial();
  queue.emplace_back(a.initial(), b.initial());
  std::size_t mapped = 1;
  while (!queue.empty()) {
    auto [x, y] = queue.front();
    queue.pop_front();
    if (a.is_marked(x) != b.is_marked(y)) return fail(x, y);
    auto ra = a.out(x), rb = b.out(y);
    if (ra.size() != rb.size()) return fail(x, y);
    for (std::size_t i = 0; i < ra.size(); ++i) {
      if (ra[i].event != rb[i].event) return fail(x, y);
      StateId tx = ra[i].target, ty = rb[i].target;
      if (fwd[tx] == none && back[ty] == none) {
        fwd[tx] = ty;
        back[ty] = tx;
        ++mapped;
        queue.emplace_back(tx, ty);
      } else if (fwd[tx] != ty || back[ty] != tx) {
        return fail(tx, ty);
      }
    }
  }
  // Both reachable parts are covered by the traversal; sizes must agree.
  auto reach_b = reachable_states(b);
  std::size_t nb = static_cast<std::size_t>(std::count(reach_b.begin(), reach_b.end(), true));
  if (nb != mapped) return fail(a.initial(), b.initial());
  res.isomorphic = true;
  res.mapping = std::move(fwd);
  return res;
}

Language enumerate_language(const Generator& g, std::size_t max_len) {
  Language lang;
  if (g.empty()) return lang;
  Word w;
  auto walk = [&](auto&& self, StateId q) -> void {
    lang.closed.insert(w);
    if (g.is_marked(q)) lang.marked.insert(w);
    if (w.size() == max_len) return;
    for (const Transition& t : g.out(q)) {
      w.push_back(t.event);
      self(self, t.target);
      w.pop_back();
    }
  };
  walk(walk, g.initial());
  return lang;
}

std::optional<Word> shortest_word_to(const Generator& g, const std::vector<bool>& target) {
  if (g.empty()) return std::nullopt;
  constexpr StateId none = static_cast<StateId>(-1);
  std::vector<StateId> parent(g.num_states(), none);
  std::vector<EventId> via(g.num_states());
  std::vector<bool> seen(g.num_states(), false);
  std::deque<StateId> queue{g.initial()};
  seen[g.initial()] = true;
  while (!queue.empty()) {
    StateId q = queue.front();
    queue.pop_front();
    if (target[q]) {
      Word w;
      for (StateId x = q; parent[x] != none; x = parent[x]) w.push_back(via[x]);
      std::reverse(w.begin(), w.end());
      return w;
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
  return std::nullopt;
}

std::optional<Word> shortest_marked_word(const Generator& g) {
  std::vector<bool> target(g.num_states());
  for (StateId q = 0; q < g.num_states(); ++q) target[q] = g.is_marked(q);
  return shortest_word_to(g, target);
}

}  // namespace delayrobust
