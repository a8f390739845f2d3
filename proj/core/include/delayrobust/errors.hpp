#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace delayrobust {

// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Two operands disagree on whether a shared event is controllable.
class ControllabilityConflict : public Error {
 public:
  using Error::Error;
};

// A second target was supplied for an already defined (state, event).
class NondeterminismError : public Error {
 public:
  using Error::Error;
};

// Relabeling target or signal label clashes with an existing event.
class LabelCollision : public Error {
 public:
  using Error::Error;
};

// Subset construction exceeded its configured state budget.
class BudgetExceeded : public Error {
 public:
  BudgetExceeded(std::size_t budget)
      : Error("subset construction exceeded the state budget of " + std::to_string(budget)),
        budget_(budget) {}
  std::size_t budget() const noexcept { return budget_; }

 private:
  std::size_t budget_;
};

// The greedy localization produced controllers that are not control equivalent.
class LocalizationFailure : public Error {
 public:
  using Error::Error;
};

// Malformed channel declaration for the current set of controllers.
class ChannelError : public Error {
 public:
  using Error::Error;
};

}  // namespace delayrobust
