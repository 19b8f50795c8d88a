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

#ifndef SINGULOCK_TOPOLOGY_HPP_
#define SINGULOCK_TOPOLOGY_HPP_

#include <array>
#include <cstddef>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "singulock/semantics.hpp"

namespace singulock {

using CellId = std::size_t;

/// Oriented 2-cell.
///
/// Square: `vertices` = (s, a, b, t), `edges` = (e_sa, e_at, e_sb, e_bt),
/// boundary e_sa + e_at - e_sb - e_bt.
/// Triangle: `vertices` = (v0, v1, v2, -), `edges` = (e01, e12, e02, -),
/// boundary e01 + e12 - e02.
struct TwoCell {
  enum class Kind { kSquare, kTriangle };

  CellId id = 0;
  Kind kind = Kind::kSquare;
  std::array<VertexId, 4> vertices{};
  std::array<EdgeId, 4> edges{};

  std::size_t arity() const { return kind == Kind::kSquare ? 4 : 3; }
  /// Signed edge list in boundary order.
  std::vector<std::pair<EdgeId, int>> boundary() const;
};

struct ComplexEdge {
  EdgeId id = 0;
  VertexId src = 0;
  VertexId dst = 0;
};

/// Directed 2-complex. Vertex ids, edge ids and cell ids are those of the
/// graph the complex was built from, so subcomplexes and filtration stages
/// share indices. All three sequences are sorted by id.
struct ExecComplex {
  std::vector<VertexId> vertices;
  std::vector<ComplexEdge> edges;
  std::vector<TwoCell> cells;

  bool has_vertex(VertexId v) const;
  bool has_edge(EdgeId e) const;
  const ComplexEdge* find_edge(EdgeId e) const;

  /// Returns an empty string when every structural invariant holds,
  /// otherwise a description of the first violation.
  std::string check() const;
};

enum class CellPolicy { kSquares, kTriangles, kBoth };

const char* to_string(CellPolicy p);
CellPolicy parse_cell_policy(std::string_view s);

ExecComplex build_complex(const ExecutionGraph& graph, CellPolicy policy = CellPolicy::kBoth);

// ----------------------------------------------------------------------------
// Fairness

struct FairnessSpec {
  enum class Mode { kWeak, kStrong };
  Mode mode = Mode::kWeak;
  /// Whether Fault states terminate vacuously fair finite paths.
  bool fault_anchors = true;
};

const char* to_string(FairnessSpec::Mode m);
FairnessSpec::Mode parse_fairness_mode(std::string_view s);

struct FairnessAnalysis {
  std::set<SccId> fair_sccs;
  /// Maximal vertex sets that can be the recurrent set of a fair infinite
  /// run, sorted, ordered by smallest member. Each has an internal edge.
  std::vector<std::vector<VertexId>> fair_cores;
  std::set<EdgeId> fair_edges;
  std::set<VertexId> fair_vertices;
};

/// SCCs (ids from `condensation(graph)`) that admit a fair infinite run.
std::set<SccId> fair_sccs(const ExecutionGraph& graph, const FairnessSpec& spec = {});

FairnessAnalysis fair_edges(const ExecutionGraph& graph, const FairnessSpec& spec = {});

ExecComplex fair_subcomplex(const ExecComplex& complex, const FairnessAnalysis& analysis);

/// Stage i keeps the vertices of BFS depth <= i and the edges and cells lying
/// entirely inside them; stages 0..k_max inclusive.
std::vector<ExecComplex> depth_filtration(const ExecutionGraph& graph, CellPolicy policy,
                                          std::size_t k_max);

/// Restriction of `complex` to a vertex subset (edges and cells fully inside).
ExecComplex restrict_complex(const ExecComplex& complex, const std::set<VertexId>& keep);

}  // namespace singulock

#endif  // SINGULOCK_TOPOLOGY_HPP_
