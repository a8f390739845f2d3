#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <span>
#include <vector>

#include "delayrobust/generator.hpp"

namespace delayrobust {

// Plant components (pairwise disjoint alphabets) and specifications.
struct PlantModel {
  std::vector<Generator> agents;
  std::vector<Generator> specs;

  // Throws std::invalid_argument if agent alphabets overlap.
  void validate() const;
  Generator plant() const;
  Generator spec() const;
};

struct LocalController {
  Generator controller;
  std::size_t owner_agent = 0;
  std::set<EventId> imported_events;
};

// Trim generator of the supremal controllable sublanguage of
// Lm(plant) ∩ Lm(spec). The spec alphabet must be contained in the plant's.
// An empty generator means no nonblocking controllable behavior exists.
Generator supcon(const Generator& plant, const Generator& spec);

struct ControllabilityResult {
  bool controllable = true;
  std::optional<Word> violation;  // shortest s·u with u uncontrollable

  explicit operator bool() const { return controllable; }
};

ControllabilityResult is_controllable(const Generator& k, const Generator& plant);

bool nonblocking(const Generator& g);

// sync(plant, controllers...) has the same closed and marked behavior as sup.
bool control_equivalent(std::span<const LocalController> locals, const Generator& plant,
                        const Generator& sup);

// Wraps an externally supplied controller: computes its imported events
// relative to the owner's alphabet and selfloops them where undefined.
LocalController make_local_controller(Generator controller, std::size_t owner,
                                      const Generator& owner_agent);

// One controller per agent by greedy merging of control-consistent states.
// Throws LocalizationFailure if control equivalence does not hold.
std::vector<LocalController> localize(const PlantModel& model, const Generator& sup);

// Shortest uncontrollable continuation u such that word·u is generated by the
// plant but not by plant ∥ specs, with the indices of the specs rejecting it.
struct SpecViolation {
  Word word;  // the full offending string
  std::vector<std::size_t> violated_specs;
};

std::optional<SpecViolation> uncontrollable_spec_violation(const PlantModel& model,
                                                           const Word& prefix,
                                                           std::size_t max_extension = 8);

}  // namespace delayrobust
