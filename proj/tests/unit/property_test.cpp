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

// Randomized cross-checks against the brute-force references.

#include <gtest/gtest.h>

#include <random>

#include "singulock/homology.hpp"
#include "singulock/oracle.hpp"
#include "singulock/singularity.hpp"
#include "support.hpp"

namespace singulock {
namespace {

std::size_t gf2_rank_expected(const HomologyResult& h) {
  std::size_t even = 0;
  for (auto t : h.torsion) even += t % 2 == 0;
  return h.betti + even;
}

TEST(Property, FairEdgesMatchLassoWeak) {
  std::mt19937_64 rng(101);
  for (int i = 0; i < 150; ++i) {
    ExecutionGraph g = testing::random_annotated_graph(rng, 30);
    FairnessSpec spec{FairnessSpec::Mode::kWeak, i % 2 == 0};
    EXPECT_EQ(fair_edges(g, spec).fair_edges, oracle::lasso_fair_oracle(g, spec).fair_edges)
        << "graph " << i;
  }
}

TEST(Property, FairEdgesMatchLassoStrong) {
  std::mt19937_64 rng(202);
  for (int i = 0; i < 150; ++i) {
    ExecutionGraph g = testing::random_annotated_graph(rng, 25);
    FairnessSpec spec{FairnessSpec::Mode::kStrong, true};
    EXPECT_EQ(fair_edges(g, spec).fair_edges, oracle::lasso_fair_oracle(g, spec).fair_edges)
        << "graph " << i;
  }
}

TEST(Property, LivelockFlagMatchesLasso) {
  std::mt19937_64 rng(303);
  for (int i = 0; i < 100; ++i) {
    ExecutionGraph g = testing::random_annotated_graph(rng, 25);
    LivelockReport r = detect_livelocks(g);
    oracle::LassoResult l = oracle::lasso_fair_oracle(g, {});
    EXPECT_EQ(r.livelock_present, !l.fair_cycles.empty()) << "graph " << i;
    EXPECT_LE(r.cyclic_rank, r.fair_h1.betti);
    EXPECT_EQ(r.witnesses.size(), r.cyclic_rank);
    for (const auto& w : r.witnesses) EXPECT_TRUE(w.directed);
    for (const auto& run : r.fair_runs)
      for (EdgeId e : run.walk) EXPECT_TRUE(r.fairness.fair_edges.count(e));
  }
}

TEST(Property, BasinsMatchInevitability) {
  std::mt19937_64 rng(404);
  for (int i = 0; i < 100; ++i) {
    ExecutionGraph g = testing::random_annotated_graph(rng, 20);
    for (const auto& t : trap_regions(g)) {
      auto basin = basin_of(g, t);
      EXPECT_EQ(std::set<VertexId>(basin.begin(), basin.end()),
                oracle::inevitability_oracle(g, t.vertices))
          << "graph " << i;
    }
  }
}

// Basin membership implies deadlock_check. The converse needs every run to
// leave the cycles it meets: a vertex passes the check but lies outside the
// basin exactly when it can reach a cycle outside the trap.
TEST(Property, DeadlockCheckAndBasin) {
  std::mt19937_64 rng(505);
  std::size_t strict = 0;
  for (int i = 0; i < 100; ++i) {
    ExecutionGraph g = testing::random_annotated_graph(rng, 20);
    Condensation c = condensation(g);
    DeadlockReport r = deadlock_attractors(g);
    for (VertexId v = 0; v < g.num_vertices(); ++v) {
      const Attractor* home = nullptr;
      for (const auto& a : r.attractors)
        if (std::binary_search(a.basin.begin(), a.basin.end(), v)) home = &a;
      auto check = deadlock_check(g, v);
      if (home) {
        ASSERT_TRUE(check.has_value()) << "graph " << i << " v " << v;
        EXPECT_EQ(*check, home->trap);
        continue;
      }
      if (!check) continue;
      ++strict;
      bool cycle_outside = false;
      for (VertexId w : reach_set(g, v))
        cycle_outside |= c.has_edge(c.scc_of[w]) && !check->contains(w);
      EXPECT_TRUE(cycle_outside) << "graph " << i << " v " << v;
    }
  }
  EXPECT_GT(strict, 0u);  // the random graphs do exercise the gap
}

TEST(Property, BoundaryOfBoundaryVanishes) {
  std::mt19937_64 rng(606);
  for (int i = 0; i < 100; ++i) {
    ExecComplex k = testing::random_complex(rng, 10, 0.4, 0.6, i % 4 == 0);
    ASSERT_EQ(k.check(), "");
    BoundaryMatrices b = boundary_matrices(k);
    EXPECT_TRUE(b.d1.multiply(b.d2).is_zero());
  }
}

TEST(Property, PersistenceCountMatchesFinalHomology) {
  std::mt19937_64 rng(707);
  for (int i = 0; i < 100; ++i) {
    ExecComplex k = testing::random_complex(rng, 9, 0.45, 0.5, i % 5 == 0);
    auto stages = testing::random_filtration(rng, k, 6);
    std::size_t infinite = 0;
    for (const auto& p : persistent_h1(stages)) infinite += !p.death.has_value();
    EXPECT_EQ(infinite, gf2_rank_expected(homology_h1(stages.back()))) << "complex " << i;
  }
}

TEST(Property, FutureClassesMatchFlipOracle) {
  std::mt19937_64 rng(808);
  int compared = 0;
  for (int i = 0; i < 80; ++i) {
    ExecutionGraph g = testing::random_annotated_graph(rng, 15);
    ExecComplex k = build_complex(g);
    for (std::size_t depth = 0; depth <= 4; ++depth) {
      FutureClasses f;
      try {
        f = future_classes_bounded(g, k, g.root(), depth, 2000);
      } catch (const BoundRefusal&) {
        continue;
      }
      oracle::FlipOracleResult o = oracle::flip_class_oracle(g, k, g.root(), depth, 2000);
      EXPECT_EQ(f.class_count, o.class_count) << "graph " << i << " depth " << depth;
      ++compared;
    }
  }
  EXPECT_GT(compared, 200);
}

}  // namespace
}  // namespace singulock
