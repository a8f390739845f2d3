#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <utility>
#include <vector>

#include "delayrobust/generator.hpp"

namespace delayrobust {

// Reachable synchronous product; shared events synchronize, a state is marked
// iff every component is. Any empty operand yields an empty result.
Generator sync(std::span<const Generator> components);
Generator sync(const Generator& a, const Generator& b);

std::vector<bool> reachable_states(const Generator& g);
std::vector<bool> coreachable_states(const Generator& g);

// Sub-generator on the states flagged in keep (renumbered in index order).
// Empty if the initial state is not kept.
Generator restrict_states(const Generator& g, const std::vector<bool>& keep);

Generator reachable_part(const Generator& g);
Generator trim(const Generator& g);
bool is_trim(const Generator& g);
Generator mark_all(const Generator& g);

// Substitutes labels; moved events keep their controllability status.
Generator relabel(const Generator& g, const std::map<EventId, EventId>& map);

// Adds (x, e, x) wherever e is undefined. Missing events take parity status.
Generator add_selfloops(const Generator& g, const std::set<EventId>& events);

// Minimal deterministic generator with the same closed and marked languages.
// States are numbered in breadth-first order from the initial state.
Generator minimize(const Generator& g);

struct IsoResult {
  bool isomorphic = false;
  // First state pair (a, b) where the parallel traversal disagreed.
  std::optional<std::pair<StateId, StateId>> witness;
  // State map a -> b on success.
  std::vector<StateId> mapping;

  explicit operator bool() const { return isomorphic; }
};

// Structural isomorphism of the reachable parts.
IsoResult isomorphic(const Generator& a, const Generator& b);

struct Language {
  std::set<Word> closed;
  std::set<Word> marked;

  friend bool operator==(const Language&, const Language&) = default;
};

Language enumerate_language(const Generator& g, std::size_t max_len);

// Shortest word (ties broken by ascending labels) reaching a state in target.
std::optional<Word> shortest_word_to(const Generator& g, const std::vector<bool>& target);
std::optional<Word> shortest_marked_word(const Generator& g);

}  // namespace delayrobust
