#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "delayrobust/event.hpp"

namespace delayrobust {

using StateId = std::uint32_t;

struct Transition {
  EventId event;
  StateId target = 0;

  friend bool operator==(const Transition&, const Transition&) = default;
};

// (state count, transition count), the size figure reported for every DES.
struct Size {
  std::size_t states = 0;
  std::size_t transitions = 0;

  friend bool operator==(const Size&, const Size&) = default;
};

std::string to_string(const Size& s);

// Deterministic finite generator. Transitions are stored per state in a
// compressed row layout sorted by event. A generator with zero states is the
// empty generator; it has no initial state and recognizes nothing.
class Generator {
 public:
  Generator() = default;
  explicit Generator(Alphabet alphabet) : alphabet_(std::move(alphabet)) {}

  std::size_t num_states() const { return marked_.size(); }
  std::size_t num_transitions() const { return transitions_.size(); }
  Size size() const { return {num_states(), num_transitions()}; }
  bool empty() const { return marked_.empty(); }

  StateId initial() const { return initial_; }
  bool is_marked(StateId q) const { return marked_[q]; }
  std::vector<StateId> markers() const;
  std::size_t num_markers() const;

  const Alphabet& alphabet() const { return alphabet_; }

  std::span<const Transition> out(StateId q) const {
    return {transitions_.data() + offsets_[q], transitions_.data() + offsets_[q + 1]};
  }
  std::optional<StateId> next(StateId q, EventId e) const;
  bool defined(StateId q, EventId e) const { return next(q, e).has_value(); }

  // State reached from the initial state by w, if any.
  std::optional<StateId> run(const Word& w) const;
  bool accepts_closed(const Word& w) const { return run(w).has_value(); }
  bool accepts_marked(const Word& w) const;

  friend bool operator==(const Generator&, const Generator&) = default;

 private:
  friend class GeneratorBuilder;

  Alphabet alphabet_;
  std::vector<std::uint32_t> offsets_{0};
  std::vector<Transition> transitions_;
  std::vector<bool> marked_;
  StateId initial_ = 0;
};

// Mutable staging area for a Generator. Rejects a second target for the same
// (state, event); an identical duplicate is ignored.
class GeneratorBuilder {
 public:
  explicit GeneratorBuilder(Alphabet alphabet = {}, std::size_t num_states = 0);

  StateId add_state(bool marked = false);
  void resize(std::size_t num_states);
  std::size_t num_states() const { return marked_.size(); }

  void set_initial(StateId q);
  void set_marked(StateId q, bool marked = true);
  void mark_all();
  // Adds e to the alphabet with its parity status if it is missing.
  void add_transition(StateId from, EventId e, StateId to);

  Alphabet& alphabet() { return alphabet_; }

  Generator build() &&;

 private:
  struct Triple {
    StateId from;
    EventId event;
    StateId to;
  };

  Alphabet alphabet_;
  std::vector<Triple> triples_;
  std::vector<bool> marked_;
  StateId initial_ = 0;
};

// Generator whose transition relation may be nondeterministic and may carry
// silent transitions.
class NondetGenerator {
 public:
  NondetGenerator() = default;
  NondetGenerator(Alphabet alphabet, std::size_t num_states);

  static NondetGenerator lift(const Generator& g);

  std::size_t num_states() const { return marked_.size(); }
  std::size_t num_transitions() const;
  Size size() const { return {num_states(), num_transitions()}; }
  bool empty() const { return marked_.empty(); }

  StateId initial() const { return initial_; }
  void set_initial(StateId q) { initial_ = q; }
  bool is_marked(StateId q) const { return marked_[q]; }
  void set_marked(StateId q, bool marked = true) { marked_[q] = marked; }
  const Alphabet& alphabet() const { return alphabet_; }

  // Duplicates are ignored; lists stay sorted.
  void add_transition(StateId from, EventId e, StateId to);
  void add_silent(StateId from, StateId to);

  // Observable transitions sorted by (event, target).
  std::span<const Transition> out(StateId q) const { return observable_[q]; }
  std::span<const StateId> silent(StateId q) const { return silent_[q]; }

  friend bool operator==(const NondetGenerator&, const NondetGenerator&) = default;

 private:
  Alphabet alphabet_;
  std::vector<std::vector<Transition>> observable_;
  std::vector<std::vector<StateId>> silent_;
  std::vector<bool> marked_;
  StateId initial_ = 0;
};

}  // namespace delayrobust
