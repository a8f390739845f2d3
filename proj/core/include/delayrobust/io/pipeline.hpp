#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "delayrobust/abstraction.hpp"
#include "delayrobust/blocking.hpp"
#include "delayrobust/io/bundle.hpp"
#include "delayrobust/robustness.hpp"

namespace delayrobust::io {

class PipelineError : public Error {
 public:
  PipelineError(std::string stage, const std::string& message)
      : Error(stage + ": " + message), stage_(std::move(stage)) {}
  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

// Reads DELAYROBUST_BUDGET, falling back to the library default.
std::size_t budget_from_environment();

struct PipelineOptions {
  std::string channels;  // channel selector, see resolve_channels
  std::size_t depth = 0;  // fault search depth; 0 selects 2 × |SUP'|
  std::size_t budget = kDefaultSubsetBudget;
  bool use_locals = false;  // take the bundle's controllers instead of localizing
  bool blocking = true;
};

struct ControllerSummary {
  std::string name;
  std::string owner;
  Size size;
  Size local_size;  // agent ∥ controller
  std::vector<EventId> imported;
  std::string origin;  // "localized", "supplied" or "declared"
};

struct NamedViolation {
  Word word;
  std::vector<std::string> specs;
};

struct PipelineReport {
  std::string bundle;
  std::string selector;
  std::optional<Size> plant_size;
  Size supervisor_size;
  std::vector<ControllerSummary> controllers;
  bool control_equivalent = true;
  std::vector<ChannelSpec> channels;
  std::vector<std::string> recipients;  // name per channel
  Verdict verdict;
  std::optional<NamedViolation> spec_violation;
  std::vector<BlockReport> blocking;
  std::map<EventId, std::string> descriptions;
  std::vector<std::pair<std::string, double>> timing_ms;

  // Exit status: robust, control equivalent and every fault admissible.
  bool passed() const;
};

// Controllers used for channeling: localized, supplied, or the declared supervisors.
struct Controllers {
  std::vector<LocalController> locals;
  std::vector<Generator> behaviors;  // per participant: agent ∥ controller
  std::vector<std::string> names;
  std::vector<std::string> origins;
};

// Supervisor of the bundle: supcon(plant, spec), or sync of declared supervisors.
Generator reference_supervisor(const ProjectBundle& bundle);
Controllers obtain_controllers(const ProjectBundle& bundle, const Generator& sup, bool use_locals);

PipelineReport run_pipeline(const ProjectBundle& bundle, const PipelineOptions& options);

// Machine-readable report with sorted keys; timing sits in its own block.
std::string report_to_json(const PipelineReport& report, bool include_timing = true);
std::string summarize(const PipelineReport& report);
// Renders the witnesses of a JSON report, annotating events with descriptions.
std::string explain(std::string_view report_json);

}  // namespace delayrobust::io
