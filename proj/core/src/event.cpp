#include "delayrobust/event.hpp"

#include <algorithm>
#include <charconv>
#include <stdexcept>

#include "delayrobust/errors.hpp"

namespace delayrobust {

std::string to_string(EventId e) { return std::to_string(e.label()); }

std::string to_string(const Word& w) {
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) out += '.';
    out += std::to_string(w[i].label());
  }
  return out;
}

Word parse_word(const std::string& text) {
  Word w;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t dot = text.find('.', pos);
    if (dot == std::string::npos) dot = text.size();
    std::uint32_t label = 0;
    auto [ptr, ec] = std::from_chars(text.data() + pos, text.data() + dot, label);
    if (ec != std::errc{} || ptr != text.data() + dot || label == 0)
      throw std::invalid_argument("bad event string '" + text + "'");
    w.emplace_back(label);
    pos = dot + 1;
  }
  return w;
}

Alphabet::Alphabet(std::initializer_list<std::uint32_t> labels) {
  for (auto l : labels) add(EventId(l));
}

std::size_t Alphabet::index_of(EventId e) const {
  auto it = std::lower_bound(events_.begin(), events_.end(), e);
  if (it == events_.end() || *it != e) return events_.size();
  return static_cast<std::size_t>(it - events_.begin());
}

void Alphabet::add(EventId e) {
  if (!contains(e)) add(e, parity_controllable(e));
}

void Alphabet::add(EventId e, bool controllable) {
  if (!e.valid()) throw std::invalid_argument("event label must be positive");
  auto it = std::lower_bound(events_.begin(), events_.end(), e);
  auto idx = static_cast<std::size_t>(it - events_.begin());
  if (it != events_.end() && *it == e) {
    if (controllable_[idx] != controllable)
      throw ControllabilityConflict("event " + to_string(e) + " has conflicting controllability");
    return;
  }
  events_.insert(it, e);
  controllable_.insert(controllable_.begin() + static_cast<std::ptrdiff_t>(idx), controllable);
}

void Alphabet::set_controllable(EventId e, bool controllable) {
  std::size_t idx = index_of(e);
  if (idx == events_.size()) {
    add(e, controllable);
    return;
  }
  controllable_[idx] = controllable;
}

bool Alphabet::contains(EventId e) const { return index_of(e) != events_.size(); }

bool Alphabet::controllable(EventId e) const {
  std::size_t idx = index_of(e);
  return idx == events_.size() ? parity_controllable(e) : static_cast<bool>(controllable_[idx]);
}

std::vector<EventId> Alphabet::controllable_events() const {
  std::vector<EventId> out;
  for (std::size_t i = 0; i < events_.size(); ++i)
    if (controllable_[i]) out.push_back(events_[i]);
  return out;
}

std::vector<EventId> Alphabet::uncontrollable_events() const {
  std::vector<EventId> out;
  for (std::size_t i = 0; i < events_.size(); ++i)
    if (!controllable_[i]) out.push_back(events_[i]);
  return out;
}

void Alphabet::add_signal_pair(EventId source, EventId signal) {
  if (source == signal) throw LabelCollision("signal must differ from its source");
  for (auto& [s, t] : signals_) {
    if (t == signal && s != source)
      throw LabelCollision("signal " + to_string(signal) + " already pairs " + to_string(s));
    if (s == signal || t == source)
      throw LabelCollision("event " + to_string(source) + "/" + to_string(signal) +
                           " is both a source and a signal");
  }
  if (auto it = signals_.find(source); it != signals_.end() && it->second != signal)
    throw LabelCollision("event " + to_string(source) + " already has a signal");
  signals_[source] = signal;
  if (contains(source)) add(signal, controllable(source));
}

std::optional<EventId> Alphabet::signal_of(EventId source) const {
  auto it = signals_.find(source);
  if (it == signals_.end()) return std::nullopt;
  return it->second;
}

Alphabet Alphabet::merged(const Alphabet& other) const {
  Alphabet out = *this;
  for (std::size_t i = 0; i < other.events_.size(); ++i)
    out.add(other.events_[i], other.controllable_[i]);
  for (auto& [s, t] : other.signals_) out.add_signal_pair(s, t);
  return out;
}

Alphabet Alphabet::restricted_to(const std::set<EventId>& keep) const {
  Alphabet out;
  for (std::size_t i = 0; i < events_.size(); ++i)
    if (keep.count(events_[i])) out.add(events_[i], controllable_[i]);
  for (auto& [s, t] : signals_)
    if (keep.count(s) && keep.count(t)) out.signals_[s] = t;
  return out;
}

Alphabet Alphabet::without(const std::set<EventId>& drop) const {
  std::set<EventId> keep;
  for (auto e : events_)
    if (!drop.count(e)) keep.insert(e);
  return restricted_to(keep);
}

}  // namespace delayrobust
