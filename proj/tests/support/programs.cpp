// Copyright The fav authors
// SPDX-License-Identifier: Apache-2.0

#include "support/programs.hpp"

#include <fstream>
#include <sstream>

#include "fav/composer.hpp"

namespace fav::testsupport {

const Automaton& find_automaton(const ProductLine& line, const std::string& feature, const std::string& name) {
  for (const auto& a : line.specs.at(feature))
    if (a.name == name) return a;
  throw FavError("no automaton " + feature + "/" + name);
}

Program product_program(const ProductLine& line, const Product& p, const std::string& feature,
                        const std::string& automaton) {
  Program composed = compose(line.modules, line.fm, p);
  return weave_automata(composed, {{feature, &find_automaton(line, feature, automaton)}});
}

SimulatorProgram simulator_program(const ProductLine& line, const Simulator& sim, const std::string& feature,
                                   const std::string& automaton, const CheckOptions& base) {
  Simulator woven =
      weave_simulator(sim, std::vector<OwnedAutomaton>{{feature, &find_automaton(line, feature, automaton)}});
  SimulatorProgram out{std::move(woven.program), base};
  const auto& vars = out.program.feature_variables;
  for (std::size_t i = 0; i < vars.size(); ++i)
    if (vars[i] == woven.variable_of.at(feature)) out.opts.required_features = std::uint32_t{1} << i;
  return out;
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FavError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string source_path(const std::string& relative) { return std::string(FAV_SOURCE_DIR) + "/" + relative; }

}  // namespace fav::testsupport
