#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "delayrobust/errors.hpp"
#include "delayrobust/generator.hpp"
#include "delayrobust/robustness.hpp"
#include "delayrobust/synthesis.hpp"

namespace delayrobust::io {

class ParseError : public Error {
 public:
  ParseError(std::string source, std::size_t line, const std::string& message)
      : Error(source + ":" + std::to_string(line) + ": " + message), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

struct NamedGenerator {
  std::string name;
  Generator generator;

  friend bool operator==(const NamedGenerator&, const NamedGenerator&) = default;
};

// Externally supplied local controller for the agent named `owner`.
struct LocalDecl {
  std::string name;
  std::string owner;
  Generator controller;

  friend bool operator==(const LocalDecl&, const LocalDecl&) = default;
};

// Local supervisor given directly, with the events its agent owns.
struct SupervisorDecl {
  std::string name;
  std::set<EventId> private_events;
  Generator generator;

  friend bool operator==(const SupervisorDecl&, const SupervisorDecl&) = default;
};

// Channel by name; an invalid signal means "use the label convention".
struct ChannelDecl {
  EventId event;
  std::string recipient;
  EventId signal;

  friend bool operator==(const ChannelDecl&, const ChannelDecl&) = default;
};

struct Preset {
  std::string name;
  bool all_imports = false;
  std::vector<ChannelDecl> channels;

  friend bool operator==(const Preset&, const Preset&) = default;
};

struct BundleOptions {
  std::optional<std::size_t> depth;
  std::optional<std::size_t> budget;

  friend bool operator==(const BundleOptions&, const BundleOptions&) = default;
};

struct ProjectBundle {
  std::string name;
  std::vector<NamedGenerator> agents;
  std::vector<NamedGenerator> specs;
  std::vector<LocalDecl> locals;
  std::vector<SupervisorDecl> supervisors;
  std::vector<ChannelDecl> channels;
  std::vector<Preset> presets;
  std::map<EventId, bool> controllability;
  std::map<EventId, std::string> descriptions;
  BundleOptions options;

  friend bool operator==(const ProjectBundle&, const ProjectBundle&) = default;

  // Agents, or declared supervisors when the bundle has no plant.
  bool has_plant() const { return !agents.empty(); }
  PlantModel plant_model() const;
  const Preset* preset(std::string_view name) const;
  // Index of the agent (or supervisor) a name refers to. Local controller
  // names, and an agent name suffixed with LOC, resolve to the owning agent.
  std::optional<std::size_t> participant_index(std::string_view name) const;
  std::string participant_name(std::size_t index) const;
  std::size_t participant_count() const;
  // Participant owning the event, if any.
  std::optional<std::size_t> owner_of(EventId e) const;
};

ProjectBundle parse_bundle(const std::filesystem::path& path);
ProjectBundle parse_bundle_text(std::string_view text, const std::string& source = "<input>");
std::string serialize_bundle(const ProjectBundle& bundle);

// Imports of each controller, as (event, recipient) channels with conventional signals.
std::vector<ChannelSpec> all_imports(const ProjectBundle& bundle, const std::vector<LocalController>& controllers);

// Selector: empty (the bundle's channel lines), a preset name, "all-imports",
// "none", or a comma separated list of event[:recipient[:signal]] items.
std::vector<ChannelSpec> resolve_channels(const ProjectBundle& bundle, std::string_view selector,
                                          const std::vector<LocalController>& controllers);

}  // namespace delayrobust::io
