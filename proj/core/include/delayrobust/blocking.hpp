#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "delayrobust/generator.hpp"
#include "delayrobust/robustness.hpp"

namespace delayrobust {

enum class Classification { Unbounded, Bounded, NotApplicable };

std::string to_string(Classification c);

struct BlockReport {
  EventId event;
  bool applicable = true;
  bool blocked = false;
  std::optional<Word> witness;  // s·r
  std::optional<Word> prefix;   // s
  Classification classification = Classification::Unbounded;
  std::optional<std::size_t> bound;  // n of the bounded classification
  bool fault_admissible = true;
  Size test_size;  // size of TTEST
  std::string note;
};

// ({0,1,2}, {r,r'}, {(0,r,1),(1,r',0),(1,r,2),(2,r,2)}, 0, {2}).
Generator make_nchnl(EventId r, EventId r_sig, bool controllable);
Generator make_nchnl(EventId r, EventId r_sig);

// TTEST = trim(sync(mark_all(NSUP), NCHNL(target), L(other channels))).
Generator blocked_test_generator(std::span<const Generator> sups_relabeled,
                                 std::span<const ChannelSpec> channels, const ChannelSpec& target);

// Decides whether target.event can be blocked by its channel. Fills event,
// applicable, blocked, witness, prefix, test_size and classification
// (Bounded when blocked, without a bound; see analyze_blocking).
BlockReport blocked_test(std::span<const Generator> sups_relabeled,
                         std::span<const ChannelSpec> channels, const ChannelSpec& target);
BlockReport blocked_test(const ChanneledSystem& system, const ChannelSpec& target);

struct FaultCertificate {
  Word t;  // s·r generated with the channel occupied
  bool in_sup = true;
};

struct FaultReport {
  bool admissible = true;
  std::size_t faults_examined = 0;
  std::vector<FaultCertificate> samples;
  std::optional<Word> violation;
};

// Bounded search (depth 0 means 2 × |SUP'| states) over every fault t = s·r
// with s in L(SUP'), t in L(NSUP) and P(s)·r in L(plant), checking P(t) in L(SUP).
FaultReport fault_admissibility(const Generator& sup, const Generator& plant,
                                const ChanneledSystem& system, const ChannelSpec& target,
                                std::size_t depth = 0, std::size_t max_samples = 4);

// Fewest events between an r-transition and the next one in sup; empty if r
// never re-occurs.
std::optional<std::size_t> delay_bound_estimate(const Generator& sup, EventId r);

// blocked_test + fault_admissibility + delay_bound_estimate.
BlockReport analyze_blocking(const Generator& sup, const Generator& plant,
                             const ChanneledSystem& system, const ChannelSpec& target,
                             std::size_t depth = 0);

}  // namespace delayrobust
