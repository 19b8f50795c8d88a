/*
 * Copyright 2026 The Singulock Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef SINGULOCK_CORPUS_HPP_
#define SINGULOCK_CORPUS_HPP_

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "singulock/calculus.hpp"

namespace singulock {

class UnknownFixture : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// A persistence bar; death is nullopt for an infinite bar.
using ExpectedBar = std::pair<std::size_t, std::optional<std::size_t>>;

/// Partial expectations. Absent fields are not checked.
struct ExpectedReport {
  std::optional<std::size_t> vertices;
  std::optional<std::size_t> edges;
  std::optional<std::size_t> attractors;
  std::optional<std::size_t> stuck_attractors;
  std::optional<std::size_t> divergent_attractors;
  std::optional<std::size_t> betti;          // default cell policy
  std::optional<std::size_t> betti_unfilled;  // no two-cells
  std::optional<std::size_t> betti_fair;
  std::optional<bool> livelock;
  std::optional<int> exit_code;
  std::optional<std::vector<ExpectedBar>> persistence;
  std::map<std::string, std::string> provenance;  // field -> how the value was obtained
};

struct Fixture {
  std::string name;
  std::filesystem::path path;
  std::string source;
  Program program;
  ExpectedReport expected;
};

/// Reads `manifest.json` in `dir`. Throws UnknownFixture for names not in
/// the manifest and std::runtime_error for unreadable or invalid files.
Fixture load_fixture(std::string_view name, const std::filesystem::path& dir);

std::vector<std::string> fixture_names(const std::filesystem::path& dir);

}  // namespace singulock

#endif  // SINGULOCK_CORPUS_HPP_
