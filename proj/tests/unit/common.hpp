#pragma once
#include <filesystem>
#include <initializer_list>
#include <string>
#include <tuple>
#include <vector>

#include "delayrobust/delayrobust.hpp"
#include "delayrobust/io/bundle.hpp"
#include "delayrobust/io/pipeline.hpp"

namespace testsupport {

inline std::filesystem::path fixture(const std::string& name) {
  return std::filesystem::path(DELAYROBUST_FIXTURES_DIR) / name;
}

inline delayrobust::io::ProjectBundle load(const std::string& name) {
  return delayrobust::io::parse_bundle(fixture(name));
}

inline delayrobust::Word w(const std::string& text) { return delayrobust::parse_word(text); }

// Generator from (from, event, to) triples over the events they mention.
inline delayrobust::Generator make(std::size_t states,
                                   std::initializer_list<std::tuple<unsigned, unsigned, unsigned>> trans,
                                   std::initializer_list<unsigned> marked, unsigned initial = 0) {
  delayrobust::GeneratorBuilder b({}, states);
  b.set_initial(initial);
  for (unsigned q : marked) b.set_marked(q);
  for (auto [from, e, to] : trans) b.add_transition(from, delayrobust::EventId(e), to);
  return std::move(b).build();
}

// Generators, channels and reference supervisor of one preset of a fixture.
struct Scenario {
  delayrobust::io::ProjectBundle bundle;
  delayrobust::Generator sup;
  delayrobust::io::Controllers controllers;
  std::vector<delayrobust::ChannelSpec> channels;
  delayrobust::ChanneledSystem system;
};

inline Scenario scenario(const std::string& file, const std::string& preset, bool use_locals = false) {
  Scenario s{load(file)};
  s.sup = delayrobust::io::reference_supervisor(s.bundle);
  s.controllers = delayrobust::io::obtain_controllers(s.bundle, s.sup, use_locals);
  s.channels = delayrobust::io::resolve_channels(s.bundle, preset, s.controllers.locals);
  s.system = delayrobust::build_channeled(s.controllers.behaviors, s.channels);
  return s;
}

}  // namespace testsupport
