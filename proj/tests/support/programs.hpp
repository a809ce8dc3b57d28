// Copyright The fav authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>

#include "fav/checker.hpp"
#include "fav/harness.hpp"
#include "fav/varenc.hpp"

namespace fav::testsupport {

const Automaton& find_automaton(const ProductLine& line, const std::string& feature, const std::string& name);

/// The program a brute-force task checks: product p woven with one automaton.
Program product_program(const ProductLine& line, const Product& p, const std::string& feature,
                        const std::string& automaton);

/// The program and options a simulator task checks.
struct SimulatorProgram {
  Program program;
  CheckOptions opts;
};
SimulatorProgram simulator_program(const ProductLine& line, const Simulator& sim, const std::string& feature,
                                   const std::string& automaton, const CheckOptions& base = {});

std::string read_text(const std::string& path);
std::string source_path(const std::string& relative);

}  // namespace fav::testsupport
