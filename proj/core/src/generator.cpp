#include "delayrobust/generator.hpp"

#include <algorithm>
#include <stdexcept>

#include "delayrobust/errors.hpp"

namespace delayrobust {

std::string to_string(const Size& s) {
  return "(" + std::to_string(s.states) + ", " + std::to_string(s.transitions) + ")";
}

std::vector<StateId> Generator::markers() const {
  std::vector<StateId> out;
  for (StateId q = 0; q < num_states(); ++q)
    if (marked_[q]) out.push_back(q);
  return out;
}

std::size_t Generator::num_markers() const {
  return static_cast<std::size_t>(std::count(marked_.begin(), marked_.end(), true));
}

std::optional<StateId> Generator::next(StateId q, EventId e) const {
  auto row = out(q);
  auto it = std::lower_bound(row.begin(), row.end(), e,
                             [](const Transition& t, EventId ev) { return t.event < ev; });
  if (it == row.end() || it->event != e) return std::nullopt;
  return it->target;
}

std::optional<StateId> Generator::run(const Word& w) const {
  if (empty()) return std::nullopt;
  StateId q = initial_;
  for (EventId e : w) {
    auto n = next(q, e);
    if (!n) return std::nullopt;
    q = *n;
  }
  return q;
}

bool Generator::accepts_marked(const Word& w) const {
  auto q = run(w);
  return q && marked_[*q];
}

GeneratorBuilder::GeneratorBuilder(Alphabet alphabet, std::size_t num_states)
    : alphabet_(std::move(alphabet)), marked_(num_states, false) {}

StateId GeneratorBuilder::add_state(bool marked) {
  marked_.push_back(marked);
  return static_cast<StateId>(marked_.size() - 1);
}

void GeneratorBuilder::resize(std::size_t num_states) { marked_.resize(num_states, false); }

void GeneratorBuilder::set_initial(StateId q) { initial_ = q; }

void GeneratorBuilder::set_marked(StateId q, bool marked) {
  if (q >= marked_.size()) throw std::out_of_range("marker state out of range");
  marked_[q] = marked;
}

void GeneratorBuilder::mark_all() { std::fill(marked_.begin(), marked_.end(), true); }

void GeneratorBuilder::add_transition(StateId from, EventId e, StateId to) {
  if (!e.valid()) throw std::invalid_argument("event label must be positive");
  alphabet_.add(e);
  triples_.push_back({from, e, to});
}

Generator GeneratorBuilder::build() && {
  const std::size_t n = marked_.size();
  Generator g(std::move(alphabet_));
  if (n == 0) return g;
  if (initial_ >= n) throw std::out_of_range("initial state out of range");
  for (auto& t : triples_)
    if (t.from >= n || t.to >= n) throw std::out_of_range("transition state out of range");

  std::sort(triples_.begin(), triples_.end(), [](const Triple& a, const Triple& b) {
    return a.from != b.from ? a.from < b.from : a.event < b.event;
  });
  g.offsets_.assign(n + 1, 0);
  g.transitions_.reserve(triples_.size());
  for (std::size_t i = 0; i < triples_.size(); ++i) {
    const Triple& t = triples_[i];
    if (i > 0 && triples_[i - 1].from == t.from && triples_[i - 1].event == t.event) {
      if (triples_[i - 1].to != t.to)
        throw NondeterminismError("state " + std::to_string(t.from) + " has two targets for event " +
                                  to_string(t.event));
      continue;
    }
    g.transitions_.push_back({t.event, t.to});
    ++g.offsets_[t.from + 1];
  }
  for (std::size_t q = 0; q < n; ++q) g.offsets_[q + 1] += g.offsets_[q];
  g.marked_ = std::move(marked_);
  g.initial_ = initial_;
  return g;
}

NondetGenerator::NondetGenerator(Alphabet alphabet, std::size_t num_states)
    : alphabet_(std::move(alphabet)),
      observable_(num_states),
      silent_(num_states),
      marked_(num_states, false) {}

NondetGenerator NondetGenerator::lift(const Generator& g) {
  NondetGenerator out(g.alphabet(), g.num_states());
  for (StateId q = 0; q < g.num_states(); ++q) {
    out.marked_[q] = g.is_marked(q);
    auto row = g.out(q);
    out.observable_[q].assign(row.begin(), row.end());
  }
  out.initial_ = g.initial();
  return out;
}

std::size_t NondetGenerator::num_transitions() const {
  std::size_t n = 0;
  for (std::size_t q = 0; q < num_states(); ++q) n += observable_[q].size() + silent_[q].size();
  return n;
}

void NondetGenerator::add_transition(StateId from, EventId e, StateId to) {
  alphabet_.add(e);
  auto& row = observable_.at(from);
  Transition t{e, to};
  auto it = std::lower_bound(row.begin(), row.end(), t, [](const Transition& a, const Transition& b) {
    return a.event != b.event ? a.event < b.event : a.target < b.target;
  });
  if (it != row.end() && *it == t) return;
  row.insert(it, t);
}

void NondetGenerator::add_silent(StateId from, StateId to) {
  auto& row = silent_.at(from);
  auto it = std::lower_bound(row.begin(), row.end(), to);
  if (it != row.end() && *it == to) return;
  row.insert(it, to);
}

}  // namespace delayrobust
