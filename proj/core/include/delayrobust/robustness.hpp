#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "delayrobust/abstraction.hpp"
#include "delayrobust/automata.hpp"
#include "delayrobust/generator.hpp"

namespace delayrobust {

// One delayed link: event r of source_agent is observed by controller
// `recipient` as the signal r'.
struct ChannelSpec {
  std::size_t source_agent = 0;
  EventId event;
  std::size_t recipient = 0;
  EventId signal;

  friend bool operator==(const ChannelSpec&, const ChannelSpec&) = default;
  friend auto operator<=>(const ChannelSpec&, const ChannelSpec&) = default;
};

// Signal label convention r' = r + 100 * (recipient + 1).
EventId conventional_signal(EventId event, std::size_t recipient);

// ({0,1}, {r, r'}, {(0,r,1), (1,r',0)}, 0, {0}); r' inherits the status of r.
Generator make_channel(const ChannelSpec& spec, bool controllable);
Generator make_channel(const ChannelSpec& spec);

struct ChanneledSystem {
  std::vector<Generator> sup_primes;
  std::vector<ChannelSpec> channel_specs;
  std::vector<Generator> channels;
  Generator sup_prime;
  std::set<EventId> nulled;
};

// Relabels each recipient's imported channeled events to their signals and
// composes everything. Throws ChannelError on malformed channels.
ChanneledSystem build_channeled(std::span<const Generator> sups,
                                std::span<const ChannelSpec> channels);

struct Counterexample {
  enum class Kind {
    ExtraClosed,    // s in L(SUP'), P(s) not in L(SUP)
    ExtraMarked,    // s in Lm(SUP'), P(s) in L(SUP) but not Lm(SUP)
    MissingClosed,  // P(s) in L(SUP) has no channeled realization
    MissingMarked,  // P(s) in Lm(SUP) is not the projection of a marked string
  };
  Kind kind = Kind::ExtraClosed;
  Word channeled;  // s over the channeled alphabet; empty for Missing kinds
  Word projected;  // P(s)
};

std::string to_string(Counterexample::Kind k);

struct IsomorphismFailure {
  StateId quotient_state = 0;
  StateId reference_state = 0;
};

struct Verdict {
  bool robust = false;
  std::set<EventId> channeled_events;
  Size channeled_size;
  Size reduced;
  // Exactly one of the following is set when robust is false.
  std::optional<Counterexample> counterexample;
  std::optional<NondeterminismWitness> nondeterminism;
  std::optional<IsomorphismFailure> isomorphism_failure;
  std::string notes;
};

Verdict check_delay_robustness(const Generator& sup, const ChanneledSystem& system,
                               const AbstractionOptions& options = {});

// Shortest string separating the projected channeled behavior from sup.
std::optional<Counterexample> language_counterexample(const Generator& sup,
                                                      const ChanneledSystem& system,
                                                      const AbstractionOptions& options = {});

struct MonotonicityReport {
  bool full_robust = false;
  std::size_t subsets_checked = 0;
  // Subsets found non-robust while the full set is robust (never expected).
  std::vector<std::vector<ChannelSpec>> violations;

  bool ok() const { return violations.empty(); }
};

// Checks every subset when |full_set| <= 4, else `sample` random subsets.
MonotonicityReport check_subset_monotonicity(const Generator& sup, std::span<const Generator> sups,
                                             std::span<const ChannelSpec> full_set,
                                             std::size_t sample = 32, unsigned seed = 1,
                                             const AbstractionOptions& options = {});

}  // namespace delayrobust
