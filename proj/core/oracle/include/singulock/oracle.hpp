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

// Brute-force reference implementations. Deliberately naive; they share
// only the domain types with the library and are used from tests.

#ifndef SINGULOCK_ORACLE_HPP_
#define SINGULOCK_ORACLE_HPP_

#include <cstddef>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "singulock/semantics.hpp"
#include "singulock/smith.hpp"
#include "singulock/topology.hpp"

namespace singulock::oracle {

class OracleRefusal : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Cost {
  double elapsed_ms = 0.0;
  std::size_t nodes = 0;
};

struct OracleVerdict {
  bool agrees = true;
  std::string payload;  // counterexample when !agrees, otherwise a witness or empty
  Cost cost;
};

/// Builds a verdict; a disagreement always carries a non-empty payload.
OracleVerdict make_verdict(bool agrees, std::string payload, Cost cost);

// ----------------------------------------------------------------------------

struct LassoOptions {
  std::size_t max_vertices = 60;
  std::size_t max_cycles = 200000;
  std::size_t max_unions = 200000;  // strong fairness union search
};

struct LassoResult {
  std::set<EdgeId> fair_edges;
  /// Edge sets of fair recurrent sets found (one per strongly connected group).
  std::vector<std::vector<EdgeId>> fair_cycles;
  std::size_t simple_cycles = 0;
  Cost cost;
};

LassoResult lasso_fair_oracle(const ExecutionGraph& graph, const FairnessSpec& spec,
                              const LassoOptions& options = {});

struct DenseSnfResult {
  std::vector<BigInt> factors;
  std::size_t rank = 0;
};

/// Dense elimination with row and column swaps. Matrices up to 64 x 64.
DenseSnfResult dense_snf_oracle(const IntMatrix& m);

/// Vertices from which every maximal path enters `trap`.
std::set<VertexId> inevitability_oracle(const ExecutionGraph& graph,
                                        const std::vector<VertexId>& trap,
                                        std::size_t max_vertices = 60,
                                        std::size_t max_nodes = 20000000);

struct FlipOracleResult {
  std::size_t class_count = 0;
  std::size_t walk_count = 0;
  Cost cost;
};

FlipOracleResult flip_class_oracle(const ExecutionGraph& graph, const ExecComplex& complex,
                                   VertexId origin, std::size_t depth,
                                   std::size_t max_walks = 100000);

/// Intersection of reach sets, computed directly.
std::set<VertexId> persistent_reach_oracle(const ExecutionGraph& graph, VertexId v,
                                           std::size_t max_vertices = 60);

}  // namespace singulock::oracle

#endif  // SINGULOCK_ORACLE_HPP_
