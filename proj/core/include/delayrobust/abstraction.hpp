#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "delayrobust/generator.hpp"

namespace delayrobust {

// Events erased by a natural projection.
struct ProjectionSpec {
  std::set<EventId> nulled;
};

inline constexpr std::size_t kDefaultSubsetBudget = 1'000'000;

struct AbstractionOptions {
  std::size_t subset_budget = kDefaultSubsetBudget;
};

// Minimal deterministic generator for P(L(g)), P(Lm(g)).
// Throws BudgetExceeded if the subset construction grows past the budget.
Generator project(const Generator& g, const ProjectionSpec& spec,
                  const AbstractionOptions& options = {});

// Quotient of (the reachable part of) g by the supremal quasi-congruence for
// the projection. Blocks are numbered by their smallest original state.
NondetGenerator supqc(const Generator& g, const ProjectionSpec& spec);

// Block index of every reachable state of g under the supremal quasi-congruence;
// unreachable states map to npos.
inline constexpr StateId kNoBlock = static_cast<StateId>(-1);
std::vector<StateId> supqc_partition(const Generator& g, const ProjectionSpec& spec);

bool is_structurally_deterministic(const NondetGenerator& q);

// A state with a silent transition (event empty) or with two targets for one event.
struct NondeterminismWitness {
  StateId state = 0;
  std::optional<EventId> event;
  std::vector<StateId> targets;

  std::string describe() const;
};

std::variant<Generator, NondeterminismWitness> determinize_if_possible(const NondetGenerator& q);

// P is an Lm(g)-observer, decided by determinism of the quasi-congruence quotient.
// The two coincide for nonblocking g only; for blocking g the result is the
// determinism test, not the observer property.
bool has_observer_property(const Generator& g, const ProjectionSpec& spec);

}  // namespace delayrobust
