#pragma once

#include <span>
#include <vector>

#include "delayrobust/generator.hpp"

namespace delayrobust::detail {

// Reachable synchronous product together with the component state tuple of
// every product state (row-major, `arity` entries per state).
struct Product {
  Generator generator;
  std::size_t arity = 0;
  std::vector<StateId> tuples;

  StateId component(StateId q, std::size_t i) const { return tuples[q * arity + i]; }
};

Product sync_product(std::span<const Generator* const> components);

}  // namespace delayrobust::detail
