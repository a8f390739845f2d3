#pragma once
#include <cstddef>
#include <cstdint>
#include <random>
#include <set>
#include <vector>

#include "delayrobust/generator.hpp"
#include "delayrobust/robustness.hpp"
#include "delayrobust/synthesis.hpp"

namespace testsupport {

using Rng = std::mt19937;

struct GenParams {
  std::size_t min_states = 1;
  std::size_t max_states = 6;
  double edge = 0.45;  // chance a (state, event) pair is defined
  double mark = 0.35;
};

// Random deterministic generator over `events` (parity controllability),
// initial state 0. Not necessarily reachable or trim.
delayrobust::Generator random_generator(Rng& rng, const std::vector<std::uint32_t>& events,
                                        const GenParams& params = {});

// Random non-empty subset of `events` with at most `max` elements.
std::vector<std::uint32_t> random_subset(Rng& rng, const std::vector<std::uint32_t>& events,
                                         std::size_t min, std::size_t max);

// Two controllers: SUP1 over its private events plus imports from SUP2,
// SUP2 over its private events. Every imported event is channeled to SUP1.
struct RandomSystem {
  std::vector<delayrobust::Generator> sups;
  std::vector<delayrobust::ChannelSpec> channels;
  delayrobust::Generator sup;
};

// Draws until sync(SUP1, SUP2) is non-empty and trim; `imports` events are
// channeled (2 or 3 in the property suites).
RandomSystem random_system(Rng& rng, std::size_t imports);

// Plant agents with disjoint alphabets, a specification, the supervisor and
// its localization; draws until the supervisor is non-empty.
struct RandomPlant {
  delayrobust::PlantModel model;
  delayrobust::Generator plant;
  delayrobust::Generator sup;
};
RandomPlant random_plant(Rng& rng);

}  // namespace testsupport
