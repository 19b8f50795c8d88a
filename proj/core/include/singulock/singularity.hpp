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

#ifndef SINGULOCK_SINGULARITY_HPP_
#define SINGULOCK_SINGULARITY_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "singulock/homology.hpp"
#include "singulock/semantics.hpp"
#include "singulock/topology.hpp"

namespace singulock {

/// Raised when an analysis would have to look past the explored part of the
/// graph or past a configured enumeration cap.
class BoundRefusal : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Sink SCC of the condensation.
struct TrapRegion {
  enum class Kind { kStuck, kDivergent };

  std::vector<VertexId> vertices;  // sorted
  std::size_t internal_edges = 0;
  Kind kind = Kind::kStuck;

  bool contains(VertexId v) const;
  friend bool operator==(const TrapRegion&, const TrapRegion&) = default;
};

const char* to_string(TrapRegion::Kind kind);

/// Ordered by smallest member.
std::vector<TrapRegion> trap_regions(const ExecutionGraph& graph);

struct Attractor {
  TrapRegion trap;
  std::vector<VertexId> basin;  // sorted
  bool contains_fault = false;
};

struct DeadlockReport {
  std::vector<Attractor> attractors;   // no Terminal and no Fault vertex
  std::vector<Attractor> fault_traps;  // traps made of Fault states

  std::size_t stuck_count() const;
  std::size_t divergent_count() const;
};

DeadlockReport deadlock_attractors(const ExecutionGraph& graph);

/// Vertices from which every maximal path is absorbed into `trap`.
std::vector<VertexId> basin_of(const ExecutionGraph& graph, const TrapRegion& trap);

std::vector<VertexId> persistent_reach(const ExecutionGraph& graph, VertexId v);
std::vector<VertexId> persistent_reach(const ExecutionGraph& graph, const Condensation& cond,
                                       VertexId v);

/// The trap R(v) when it is non-empty and holds no Terminal vertex.
std::optional<TrapRegion> deadlock_check(const ExecutionGraph& graph, VertexId v);

/// Betti number of H1 of the complex restricted to the trap's vertices.
std::size_t trap_cycle_rank(const ExecComplex& complex, const TrapRegion& trap);

// ----------------------------------------------------------------------------
// Livelocks

struct LivelockReport {
  FairnessSpec spec;
  CellPolicy policy = CellPolicy::kBoth;
  FairnessAnalysis fairness;
  ExecComplex fair_complex;
  HomologyResult fair_h1;
  /// Rank of the image in H1 of the fair complex of the cycles formed by
  /// edges inside fair cores.
  std::size_t cyclic_rank = 0;
  /// Some fair core exists, i.e. a fair infinite run.
  bool livelock_present = false;
  std::vector<CycleWalk> witnesses;  // directed, independent in homology
  std::vector<CycleWalk> fair_runs;  // per fair core, a closed walk over all its edges
  bool benign_cycle_caveat = true;
};

LivelockReport detect_livelocks(const ExecutionGraph& graph, CellPolicy policy = CellPolicy::kBoth,
                                const FairnessSpec& spec = {});

// ----------------------------------------------------------------------------
// Bounded futures

struct FutureClasses {
  VertexId origin = 0;
  std::size_t depth = 0;
  std::size_t walk_count = 0;     // all walks of length <= depth
  std::size_t maximal_walks = 0;  // length == depth or ending at a dead end
  std::size_t class_count = 0;    // flip classes containing a maximal walk
  std::vector<std::vector<EdgeId>> representatives;
  bool collapse = false;  // one class and every maximal walk ends in one trap
  std::optional<TrapRegion> collapse_trap;
  bool collapse_in_attractor = false;
};

inline constexpr std::size_t kDefaultWalkCap = 100000;

/// Throws BoundRefusal when a walk would leave the explored graph or the
/// number of walks exceeds `walk_cap`.
FutureClasses future_classes_bounded(const ExecutionGraph& graph, const ExecComplex& complex,
                                     VertexId origin, std::size_t depth,
                                     std::size_t walk_cap = kDefaultWalkCap);

/// Walks reachable from `walk` by a single flip across one filled cell.
std::vector<std::vector<EdgeId>> single_flips(const ExecComplex& complex,
                                              const std::vector<EdgeId>& walk,
                                              std::size_t max_length);

// ----------------------------------------------------------------------------
// Severity

struct AttractorSeverity {
  std::vector<VertexId> attractor;
  TrapRegion::Kind kind = TrapRegion::Kind::kStuck;
  std::size_t basin_size = 0;
  double basin_fraction = 0.0;
};

struct SeverityMetrics {
  std::vector<AttractorSeverity> attractors;
  std::size_t betti_fair = 0;
  std::vector<std::int64_t> torsion_fair;
  std::size_t cyclic_rank = 0;
};

SeverityMetrics severity(const DeadlockReport& deadlocks, const LivelockReport& livelocks,
                         const ExecutionGraph& graph);

// ----------------------------------------------------------------------------
// Bisimulation

enum class BisimObservation {
  kLabels,            // edge descriptions and state class only
  kLabelsAndMemory,   // also channel contents and lock owners
};

struct BisimQuotient {
  ExecutionGraph graph;
  std::vector<VertexId> block_of;  // input vertex -> quotient vertex
};

/// Strong bisimulation quotient over edge descriptions. Quotient vertices
/// are numbered in BFS order from the root's block.
BisimQuotient bisim_quotient(const ExecutionGraph& graph,
                             BisimObservation obs = BisimObservation::kLabelsAndMemory);
ExecutionGraph bisim_minimize(const ExecutionGraph& graph,
                              BisimObservation obs = BisimObservation::kLabelsAndMemory);

}  // namespace singulock

#endif  // SINGULOCK_SINGULARITY_HPP_
