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

#ifndef SINGULOCK_REPORT_HPP_
#define SINGULOCK_REPORT_HPP_

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "singulock/calculus.hpp"
#include "singulock/homology.hpp"
#include "singulock/semantics.hpp"
#include "singulock/singularity.hpp"
#include "singulock/topology.hpp"

namespace singulock {

inline constexpr int kReportVersion = 1;
inline constexpr int kGraphVersion = 1;

struct AnalysisOptions {
  FairnessSpec fairness;
  CellPolicy cells = CellPolicy::kBoth;
  ExploreBounds bounds;
  std::optional<std::size_t> k_max;  // defaults to the deepest explored vertex
  std::size_t future_depth = 2;
  std::string input_name;
  std::optional<std::string> seed;  // recorded only
};

struct FutureEntry {
  VertexId origin = 0;
  std::size_t depth = 0;
  std::optional<FutureClasses> classes;
  std::string refusal;  // set when the bounded enumeration refused
};

struct Analysis {
  ExecutionGraph graph;
  ExecComplex complex;
  std::size_t h0 = 0;
  HomologyResult h1;
  std::vector<CycleWalk> h1_walks;
  DeadlockReport deadlocks;
  std::vector<std::size_t> attractor_cycle_ranks;  // aligned with deadlocks.attractors
  LivelockReport livelocks;
  std::size_t k_max = 0;
  std::vector<PersistencePair> persistence;
  std::vector<FutureEntry> futures;
  SeverityMetrics severity;
};

Analysis analyze(const Program& program, const AnalysisOptions& options);

/// 0 none, 10 stuck deadlock, 11 livelock, 12 both, 13 fault traps only,
/// 3 when exploration hit a bound.
int exit_code(const Analysis& analysis);

inline constexpr int kExitClean = 0;
inline constexpr int kExitDeadlock = 10;
inline constexpr int kExitLivelock = 11;
inline constexpr int kExitBoth = 12;
inline constexpr int kExitFaultOnly = 13;
inline constexpr int kExitInputError = 2;
inline constexpr int kExitBound = 3;

std::string describe_state(const GlobalState& state);

std::string report_json(const Analysis& analysis, const AnalysisOptions& options);
std::string report_text(const Analysis& analysis, const AnalysisOptions& options);

std::string graph_json(const ExecutionGraph& graph);
std::string graph_dot(const ExecutionGraph& graph);
std::string complex_json(const ExecComplex& complex);

}  // namespace singulock

#endif  // SINGULOCK_REPORT_HPP_
