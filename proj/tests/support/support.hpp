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

// Shared helpers for unit and acceptance tests: synthetic graphs, random
// complexes and matrices, corpus access.

#ifndef SINGULOCK_TESTS_SUPPORT_HPP_
#define SINGULOCK_TESTS_SUPPORT_HPP_

#include <cstddef>
#include <filesystem>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "singulock/calculus.hpp"
#include "singulock/semantics.hpp"
#include "singulock/smith.hpp"
#include "singulock/topology.hpp"

namespace singulock::testing {

std::filesystem::path corpus_dir();

/// Corpus fixture names in manifest order.
std::vector<std::string> corpus_names();

Program parse_or_die(std::string_view source);
ExecutionGraph explore_source(std::string_view source, const ExploreBounds& bounds = {});

/// Hand-built execution graphs. Every vertex carries processes 1..pids;
/// a process counts as enabled wherever it labels an outgoing edge, plus any
/// pids added with enable(). Depths are BFS distances from vertex 0.
class GraphBuilder {
 public:
  explicit GraphBuilder(std::size_t vertices, std::size_t pids = 1);

  GraphBuilder& edge(VertexId src, VertexId dst, std::vector<Pid> participants = {1},
                     std::string label = {});
  GraphBuilder& enable(VertexId v, Pid pid);
  GraphBuilder& terminal(VertexId v);
  GraphBuilder& fault(VertexId v, std::string reason = "bad-release");

  ExecutionGraph build() const;

 private:
  struct PendingEdge {
    VertexId src;
    VertexId dst;
    std::vector<Pid> participants;
    std::string label;
  };
  std::size_t n_;
  std::size_t pids_;
  std::vector<PendingEdge> edges_;
  std::vector<std::vector<Pid>> extra_enabled_;
  std::vector<StateClass> classes_;
};

/// Random graph with every vertex reachable from 0. Back edges only reach a
/// few vertices behind, which keeps strongly connected parts small; extra
/// enabled pids make some cycles unfair.
ExecutionGraph random_annotated_graph(std::mt19937_64& rng, std::size_t max_vertices,
                                      std::size_t pids = 3);

IntMatrix random_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols, int lo, int hi);

/// Six-vertex triangulated projective plane (H1 = Z/2), vertex and edge ids
/// shifted by the given offsets.
ExecComplex projective_plane(std::size_t vertex_offset = 0, std::size_t edge_offset = 0,
                             std::size_t cell_offset = 0);

/// Random complex on edges i -> j (i < j) with every triangle whose three
/// edges exist filled with the given probability; optionally a disjoint
/// projective plane is added so torsion appears.
ExecComplex random_complex(std::mt19937_64& rng, std::size_t vertices, double edge_p,
                           double fill_p, bool with_projective_plane);

/// Nested stages 0..stages-1 from random births that respect faces.
std::vector<ExecComplex> random_filtration(std::mt19937_64& rng, const ExecComplex& complex,
                                           std::size_t stages);

}  // namespace singulock::testing

#endif  // SINGULOCK_TESTS_SUPPORT_HPP_
