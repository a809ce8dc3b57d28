// Copyright The fav authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <vector>

#include "fav/harness.hpp"

namespace fav {

/// The ten client interactions of the bundled e-mail product line, with
/// the feature whose automaton fails.
std::vector<InteractionExpectation> expected_interactions();

/// Manifest of the bundled e-mail product line.
std::filesystem::path bundled_email_manifest();

}  // namespace fav
