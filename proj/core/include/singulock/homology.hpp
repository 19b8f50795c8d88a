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

#ifndef SINGULOCK_HOMOLOGY_HPP_
#define SINGULOCK_HOMOLOGY_HPP_

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "singulock/smith.hpp"
#include "singulock/topology.hpp"

namespace singulock {

/// Integer 1-chain, keyed by edge id. Zero coefficients are not stored.
using Chain = std::map<EdgeId, std::int64_t>;

struct Generator {
  Chain chain;
  std::int64_t order = 0;  // 0 for a free generator, otherwise the torsion order
};

struct HomologyResult {
  std::size_t betti = 0;
  std::vector<std::int64_t> torsion;  // invariant factors > 1, each dividing the next
  std::vector<Generator> generators;  // free generators first, then torsion
};

/// d1 is |V| x |E| and d2 is |E| x |F|, with rows and columns in the order of
/// `complex.vertices`, `complex.edges` and `complex.cells`.
struct BoundaryMatrices {
  IntMatrix d1;
  IntMatrix d2;
};

BoundaryMatrices boundary_matrices(const ExecComplex& complex);

std::size_t homology_h0(const ExecComplex& complex);
HomologyResult homology_h1(const ExecComplex& complex);

/// Vertex boundary of a chain; empty for a cycle.
std::map<VertexId, std::int64_t> chain_boundary(const ExecComplex& complex, const Chain& chain);

/// H1 of a fixed complex with queries against its boundary group.
class CycleHomology {
 public:
  explicit CycleHomology(const ExecComplex& complex);
  ~CycleHomology();
  CycleHomology(CycleHomology&&) noexcept;
  CycleHomology& operator=(CycleHomology&&) noexcept;

  const HomologyResult& result() const;

  /// Throws std::invalid_argument if `cycle` is not a cycle of the complex.
  bool is_boundary(const Chain& cycle) const;

  /// Rank over Q of the image of `cycles` in H1.
  std::size_t rank_in_homology(const std::vector<Chain>& cycles) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

struct PersistencePair {
  std::size_t birth = 0;
  std::optional<std::size_t> death;      // nullopt for an infinite bar
  std::vector<EdgeId> representative;    // GF(2) cycle at birth, sorted
};

/// Throws std::invalid_argument when stage i is not a subcomplex of stage i+1
/// with identical simplices.
std::vector<PersistencePair> persistent_h1(const std::vector<ExecComplex>& filtration);

/// `birth,death,edges` with death `inf` for infinite bars and edges joined by ';'.
std::string persistence_csv(const std::vector<PersistencePair>& pairs);

struct CycleWalk {
  bool directed = false;
  std::vector<EdgeId> walk;  // closed directed walk when `directed`
  Chain chain;               // the generator, sign-normalized when `directed`
};

/// Closed directed walk whose chain is exactly `chain`, if one exists.
std::optional<std::vector<EdgeId>> directed_walk(const ExecComplex& complex, const Chain& chain);

std::vector<CycleWalk> generator_cycles(const ExecComplex& complex, const HomologyResult& result);

}  // namespace singulock

#endif  // SINGULOCK_HOMOLOGY_HPP_
