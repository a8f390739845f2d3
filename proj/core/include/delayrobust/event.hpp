#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace delayrobust {

// Integer event label. Labels are positive; 0 is reserved as "no event".
class EventId {
 public:
  constexpr EventId() = default;
  constexpr explicit EventId(std::uint32_t label) : label_(label) {}

  constexpr std::uint32_t label() const { return label_; }
  constexpr bool valid() const { return label_ != 0; }

  friend constexpr auto operator<=>(EventId, EventId) = default;

 private:
  std::uint32_t label_ = 0;
};

// Default controllability convention: odd labels controllable.
constexpr bool parity_controllable(EventId e) { return e.label() % 2 == 1; }

using Word = std::vector<EventId>;

// Dot separated labels, "" for the empty string.
std::string to_string(EventId e);
std::string to_string(const Word& w);
Word parse_word(const std::string& text);

// Ordered event set with controllability status and signal pairing r -> r'.
class Alphabet {
 public:
  Alphabet() = default;
  // Events with parity controllability.
  Alphabet(std::initializer_list<std::uint32_t> labels);

  // Inserts e with its parity status; no-op if already present.
  void add(EventId e);
  // Inserts e with an explicit status; throws ControllabilityConflict on mismatch.
  void add(EventId e, bool controllable);
  void set_controllable(EventId e, bool controllable);

  bool contains(EventId e) const;
  // Status of e; events absent from the alphabet fall back to parity.
  bool controllable(EventId e) const;

  std::span<const EventId> events() const { return events_; }
  std::size_t size() const { return events_.size(); }
  bool empty() const { return events_.empty(); }
  std::vector<EventId> controllable_events() const;
  std::vector<EventId> uncontrollable_events() const;

  // Registers r -> r' (r' takes the status of r).
  void add_signal_pair(EventId source, EventId signal);
  std::optional<EventId> signal_of(EventId source) const;
  const std::map<EventId, EventId>& signal_pairs() const { return signals_; }

  // Union; throws ControllabilityConflict on disagreeing shared events.
  Alphabet merged(const Alphabet& other) const;
  Alphabet restricted_to(const std::set<EventId>& keep) const;
  Alphabet without(const std::set<EventId>& drop) const;

  friend bool operator==(const Alphabet&, const Alphabet&) = default;

 private:
  std::size_t index_of(EventId e) const;

  std::vector<EventId> events_;  // sorted
  std::vector<bool> controllable_;
  std::map<EventId, EventId> signals_;
};

}  // namespace delayrobust

template <>
struct std::hash<delayrobust::EventId> {
  std::size_t operator()(delayrobust::EventId e) const noexcept { return e.label(); }
};
