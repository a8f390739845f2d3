#pragma once
// Brute-force reference implementations. They read generators only through
// their raw tables and share no code with the library algorithms.
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "delayrobust/generator.hpp"

namespace oracle {

using Label = std::uint32_t;
using Str = std::vector<Label>;

// Plain transition table copied out of a Generator.
struct Table {
  int n = 0;
  int init = 0;
  std::set<int> marks;
  std::set<Label> alpha;
  std::map<std::pair<int, Label>, int> delta;

  std::optional<int> step(int q, Label e) const;
  std::optional<int> walk(const Str& s) const;
  bool closed(const Str& s) const { return walk(s).has_value(); }
  bool marked(const Str& s) const;
};

Table table_of(const delayrobust::Generator& g);
delayrobust::Generator generator_of(const Table& t);
Str str_of(const delayrobust::Word& w);

struct Lang {
  std::set<Str> closed;
  std::set<Str> marked;
  friend bool operator==(const Lang&, const Lang&) = default;
};

// Membership predicate over strings; extended letter by letter from the empty
// string over `alpha`, which enumerates any prefix-closed language.
template <typename Closed, typename Marked>
Lang enumerate(const std::set<Label>& alpha, std::size_t depth, Closed closed, Marked marked) {
  Lang out;
  std::vector<Str> frontier;
  if (closed(Str{})) frontier.push_back({});
  while (!frontier.empty()) {
    Str s = std::move(frontier.back());
    frontier.pop_back();
    if (marked(s)) out.marked.insert(s);
    out.closed.insert(s);
    if (s.size() == depth) continue;
    for (Label e : alpha) {
      Str t = s;
      t.push_back(e);
      if (closed(t)) frontier.push_back(std::move(t));
    }
  }
  return out;
}

Lang language(const Table& t, std::size_t depth);
Lang language(const delayrobust::Generator& g, std::size_t depth);

Str restrict(const Str& s, const std::set<Label>& keep);
Str erase(const Str& s, const std::set<Label>& nulled);

// Words over the union alphabet whose restrictions are accepted by every component.
Lang sync_language(const std::vector<Table>& parts, std::size_t depth);

// Projected language by NFA simulation with silent closure, word by word.
Lang project_language(const Table& t, const std::set<Label>& nulled, std::size_t depth);

// Supremal controllable nonblocking behavior by union over all valid state
// subsets of the plant x spec product. Requires a product of at most 20 states.
struct SupconResult {
  Lang language;
  bool empty = true;
  std::size_t product_states = 0;
  bool union_is_valid = true;  // the union of valid subsets is itself valid
};
SupconResult supcon(const Table& plant, const Table& spec, std::size_t depth,
                    const std::set<Label>& uncontrollable);

// Coarsest quasi-congruence by enumerating every partition of the reachable
// states (at most 8). Blocks numbered by smallest member; -1 for unreachable.
struct PartitionResult {
  std::vector<int> block;
  std::size_t valid_partitions = 0;
  bool unique_coarsest = true;  // every valid partition refines the result
};
PartitionResult coarsest_quasi_congruence(const Table& t, const std::set<Label>& nulled);

// Quotient transitions from a partition: block(x) -sigma-> block(y) for every
// y reachable from x by eps* sigma eps*, and silent edges between distinct blocks.
struct Quotient {
  int n = 0;
  int init = 0;
  std::set<int> marks;
  std::set<std::tuple<int, Label, int>> edges;
  std::set<std::pair<int, int>> silent;
};
Quotient quotient(const Table& t, const std::set<Label>& nulled, const std::vector<int>& block);
Quotient quotient_of(const delayrobust::NondetGenerator& q);

// Lm-observer by definition: for every reachable state x and every projected
// continuation available from the marked set of P^{-1}P(s), x itself can
// realize it. Decided over pairs (x, subset of states sharing a projection).
bool observer(const Table& t, const std::set<Label>& nulled);

// Shortest s with s in L(sup'), s.r in L(nsup parts), s.r not in L(sup'),
// searched to `depth`. Returns s.r.
std::optional<Str> blocking_string(const Table& sup_prime, const std::vector<Table>& nsup_parts,
                                   Label r, std::size_t depth);

// Per r-edge BFS to the nearest state enabling r.
std::optional<std::size_t> delay_bound(const Table& t, Label r);

}  // namespace oracle
