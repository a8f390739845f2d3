#include "delayrobust/abstraction.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>

#include "delayrobust/automata.hpp"
#include "delayrobust/errors.hpp"

namespace delayrobust {

namespace {

struct VecHash {
  std::size_t operator()(const std::vector<StateId>& v) const noexcept {
    std::size_t h = v.size();
    for (StateId x : v) h ^= x + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
  }
};

void sort_unique(std::vector<StateId>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

// Silent reachability over nulled events.
class SilentClosure {
 public:
  SilentClosure(const Generator& g, const std::set<EventId>& nulled) : g_(g), nulled_(nulled) {}

  bool silent(EventId e) const { return nulled_.count(e) != 0; }

  // Closure of a set of states; result sorted.
  std::vector<StateId> of(std::vector<StateId> seeds) const {
    std::vector<bool> seen(g_.num_states(), false);
    std::vector<StateId> out, stack;
    for (StateId s : seeds) {
      if (!seen[s]) {
        seen[s] = true;
        stack.push_back(s);
      }
    }
    while (!stack.empty()) {
      StateId q = stack.back();
      stack.pop_back();
      out.push_back(q);
      for (const Transition& t : g_.out(q)) {
        if (silent(t.event) && !seen[t.target]) {
          seen[t.target] = true;
          stack.push_back(t.target);
        }
      }
    }
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  const Generator& g_;
  const std::set<EventId>& nulled_;
};

std::vector<EventId> observable_events(const Generator& g, const ProjectionSpec& spec) {
  std::vector<EventId> obs;
  for (EventId e : g.alphabet().events())
    if (!spec.nulled.count(e)) obs.push_back(e);
  return obs;
}

}  // namespace

Generator project(const Generator& g, const ProjectionSpec& spec, const AbstractionOptions& options) {
  Alphabet alphabet = g.alphabet().without(spec.nulled);
  if (g.empty()) return Generator(alphabet);
  SilentClosure closure(g, spec.nulled);
  const std::vector<EventId> obs = observable_events(g, spec);

  std::unordered_map<std::vector<StateId>, StateId, VecHash> index;
  std::vector<std::vector<StateId>> subsets;
  GeneratorBuilder builder(alphabet);
  auto intern = [&](std::vector<StateId> s) {
    auto [it, fresh] = index.try_emplace(s, static_cast<StateId>(subsets.size()));
    if (fresh) {
      if (subsets.size() >= options.subset_budget) throw BudgetExceeded(options.subset_budget);
      bool marked = std::any_of(s.begin(), s.end(), [&](StateId q) { return g.is_marked(q); });
      builder.add_state(marked);
      subsets.push_back(std::move(s));
    }
    return it->second;
  };

  intern(closure.of({g.initial()}));
  std::vector<StateId> step;
  for (StateId i = 0; i < subsets.size(); ++i) {
    for (EventId e : obs) {
      step.clear();
      for (StateId q : subsets[i])
        if (auto t = g.next(q, e)) step.push_back(*t);
      if (step.empty()) continue;
      StateId target = intern(closure.of(step));
      builder.add_transition(i, e, target);
    }
  }
  builder.set_initial(0);
  return minimize(std::move(builder).build());
}

namespace {

struct QuasiCongruence {
  std::vector<bool> reach;
  std::vector<std::vector<StateId>> closure;                // ε*(y)
  std::vector<std::vector<std::vector<StateId>>> image;     // η'(y, σ); last index is μ
  std::vector<StateId> block;                               // kNoBlock for unreachable
  std::size_t num_blocks = 0;
  std::vector<EventId> obs;
};

QuasiCongruence compute_quasi_congruence(const Generator& g, const ProjectionSpec& spec) {
  QuasiCongruence qc;
  const std::size_t n = g.num_states();
  qc.reach = reachable_states(g);
  qc.obs = observable_events(g, spec);
  const std::size_t k = qc.obs.size() + 1;
  SilentClosure closure(g, spec.nulled);

  qc.closure.resize(n);
  for (StateId y = 0; y < n; ++y)
    if (qc.reach[y]) qc.closure[y] = closure.of({y});

  qc.image.assign(n, std::vector<std::vector<StateId>>(k));
  for (StateId y = 0; y < n; ++y) {
    if (!qc.reach[y]) continue;
    for (std::size_t s = 0; s < k; ++s) {
      std::vector<StateId>& out = qc.image[y][s];
      for (StateId z : qc.closure[y]) {
        if (s + 1 == k) {
          if (g.is_marked(z)) out.insert(out.end(), qc.closure[z].begin(), qc.closure[z].end());
        } else if (auto t = g.next(z, qc.obs[s])) {
          out.insert(out.end(), qc.closure[*t].begin(), qc.closure[*t].end());
        }
      }
      sort_unique(out);
    }
  }

  // Refine from the single-block partition until the block count is stable.
  std::vector<StateId> block(n, 0);
  std::size_t count = 1;
  std::vector<StateId> sig, tmp;
  std::vector<std::size_t> stamp(n, static_cast<std::size_t>(-1));
  std::size_t clock = 0;
  for (;;) {
    std::unordered_map<std::vector<StateId>, StateId, VecHash> ids;
    std::vector<StateId> next(n, kNoBlock);
    for (StateId y = 0; y < n; ++y) {
      if (!qc.reach[y]) continue;
      sig.assign(1, block[y]);
      for (std::size_t s = 0; s < k; ++s) {
        tmp.clear();
        ++clock;
        for (StateId t : qc.image[y][s]) {
          if (stamp[block[t]] != clock) {
            stamp[block[t]] = clock;
            tmp.push_back(block[t]);
          }
        }
        std::sort(tmp.begin(), tmp.end());
        sig.push_back(static_cast<StateId>(tmp.size()));
        sig.insert(sig.end(), tmp.begin(), tmp.end());
      }
      auto [it, fresh] = ids.try_emplace(sig, static_cast<StateId>(ids.size()));
      next[y] = it->second;
    }
    block.swap(next);
    if (ids.size() == count) break;
    count = ids.size();
  }

  // Renumber blocks by their smallest member.
  std::vector<StateId> renum(n, kNoBlock);
  qc.block.assign(n, kNoBlock);
  for (StateId y = 0; y < n; ++y) {
    if (!qc.reach[y]) continue;
    if (renum[block[y]] == kNoBlock) renum[block[y]] = static_cast<StateId>(qc.num_blocks++);
    qc.block[y] = renum[block[y]];
  }
  return qc;
}

}  // namespace

std::vector<StateId> supqc_partition(const Generator& g, const ProjectionSpec& spec) {
  return compute_quasi_congruence(g, spec).block;
}

NondetGenerator supqc(const Generator& g, const ProjectionSpec& spec) {
  Alphabet alphabet = g.alphabet().without(spec.nulled);
  if (g.empty()) return NondetGenerator(alphabet, 0);
  QuasiCongruence qc = compute_quasi_congruence(g, spec);
  NondetGenerator out(alphabet, qc.num_blocks);
  for (StateId y = 0; y < g.num_states(); ++y) {
    if (!qc.reach[y]) continue;
    StateId b = qc.block[y];
    if (g.is_marked(y)) out.set_marked(b);
    for (StateId z : qc.closure[y])
      if (qc.block[z] != b) out.add_silent(b, qc.block[z]);
    for (std::size_t s = 0; s < qc.obs.size(); ++s)
      for (StateId t : qc.image[y][s]) out.add_transition(b, qc.obs[s], qc.block[t]);
  }
  out.set_initial(qc.block[g.initial()]);
  return out;
}

bool is_structurally_deterministic(const NondetGenerator& q) {
  for (StateId x = 0; x < q.num_states(); ++x) {
    if (!q.silent(x).empty()) return false;
    auto row = q.out(x);
    for (std::size_t i = 1; i < row.size(); ++i)
      if (row[i].event == row[i - 1].event) return false;
  }
  return true;
}

std::string NondeterminismWitness::describe() const {
  std::string s = "state " + std::to_string(state) + (event ? " has event " + to_string(*event) + " to states"
                                                            : " has silent transitions to states");
  for (StateId t : targets) s += " " + std::to_string(t);
  return s;
}

std::variant<Generator, NondeterminismWitness> determinize_if_possible(const NondetGenerator& q) {
  for (StateId x = 0; x < q.num_states(); ++x) {
    auto silent = q.silent(x);
    if (!silent.empty()) return NondeterminismWitness{x, std::nullopt, {silent.begin(), silent.end()}};
    auto row = q.out(x);
    for (std::size_t i = 1; i < row.size(); ++i) {
      if (row[i].event != row[i - 1].event) continue;
      NondeterminismWitness w{x, row[i].event, {}};
      for (const Transition& t : row)
        if (t.event == row[i].event) w.targets.push_back(t.target);
      return w;
    }
  }
  GeneratorBuilder b(q.alphabet(), q.num_states());
  for (StateId x = 0; x < q.num_states(); ++x) {
    b.set_marked(x, q.is_marked(x));
    for (const Transition& t : q.out(x)) b.add_transition(x, t.event, t.target);
  }
  if (q.num_states() > 0) b.set_initial(q.initial());
  return std::move(b).build();
}

bool has_observer_property(const Generator& g, const ProjectionSpec& spec) {
  return is_structurally_deterministic(supqc(g, spec));
}

}  // namespace delayrobust
