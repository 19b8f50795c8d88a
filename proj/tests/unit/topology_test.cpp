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

#include <gtest/gtest.h>

#include <random>

#include "singulock/corpus.hpp"
#include "singulock/topology.hpp"
#include "support.hpp"

namespace singulock {
namespace {

using testing::corpus_dir;
using testing::GraphBuilder;

ExecutionGraph corpus_graph(const char* name) {
  return explore(load_fixture(name, corpus_dir()).program);
}

std::size_t count_kind(const ExecComplex& k, TwoCell::Kind kind) {
  std::size_t n = 0;
  for (const auto& c : k.cells) n += c.kind == kind;
  return n;
}

TEST(BuildComplex, DiamondHasOneSquare) {
  ExecutionGraph g = corpus_graph("FX-DIAMOND");
  ExecComplex k = build_complex(g, CellPolicy::kSquares);
  ASSERT_EQ(k.cells.size(), 1u);
  const TwoCell& c = k.cells[0];
  EXPECT_EQ(c.kind, TwoCell::Kind::kSquare);
  EXPECT_EQ(c.vertices[0], g.root());
  EXPECT_EQ(k.check(), "");
  EXPECT_EQ(k.vertices.size(), 4u);
  EXPECT_EQ(k.edges.size(), 4u);
}

TEST(BuildComplex, PingHasNoCells) {
  ExecComplex k = build_complex(corpus_graph("FX-PING"), CellPolicy::kBoth);
  EXPECT_TRUE(k.cells.empty());
}

TEST(BuildComplex, SyntheticTriangle) {
  ExecutionGraph g = GraphBuilder(3).edge(0, 1).edge(1, 2).edge(0, 2).build();
  ExecComplex k = build_complex(g, CellPolicy::kTriangles);
  ASSERT_EQ(k.cells.size(), 1u);
  EXPECT_EQ(k.cells[0].kind, TwoCell::Kind::kTriangle);
  EXPECT_EQ(build_complex(g, CellPolicy::kSquares).cells.size(), 0u);
  EXPECT_EQ(k.check(), "");
}

TEST(BuildComplex, SquaresNeedDisjointParticipants) {
  // Same diamond shape, but both sides are moves of process 1.
  ExecutionGraph dependent = GraphBuilder(4, 1)
                                 .edge(0, 1, {1}, "a")
                                 .edge(0, 2, {1}, "b")
                                 .edge(1, 3, {1}, "b")
                                 .edge(2, 3, {1}, "a")
                                 .build();
  EXPECT_EQ(count_kind(build_complex(dependent, CellPolicy::kSquares), TwoCell::Kind::kSquare), 0u);
  ExecutionGraph independent = GraphBuilder(4, 2)
                                   .edge(0, 1, {1}, "a")
                                   .edge(0, 2, {2}, "b")
                                   .edge(1, 3, {2}, "b")
                                   .edge(2, 3, {1}, "a")
                                   .build();
  EXPECT_EQ(count_kind(build_complex(independent, CellPolicy::kSquares), TwoCell::Kind::kSquare), 1u);
}

TEST(BuildComplex, CorpusComplexesAreWellFormed) {
  for (const auto& name : testing::corpus_names()) {
    ExecutionGraph g = corpus_graph(name.c_str());
    for (CellPolicy p : {CellPolicy::kSquares, CellPolicy::kTriangles, CellPolicy::kBoth})
      EXPECT_EQ(build_complex(g, p).check(), "") << name << " " << to_string(p);
  }
}

TEST(BuildComplex, SquareBoundaryOrientation) {
  TwoCell c;
  c.kind = TwoCell::Kind::kSquare;
  c.edges = {10, 11, 12, 13};
  EXPECT_EQ(c.boundary(), (std::vector<std::pair<EdgeId, int>>{{10, 1}, {11, 1}, {12, -1}, {13, -1}}));
  TwoCell t;
  t.kind = TwoCell::Kind::kTriangle;
  t.edges = {4, 5, 6, 0};
  EXPECT_EQ(t.boundary(), (std::vector<std::pair<EdgeId, int>>{{4, 1}, {5, 1}, {6, -1}}));
}

TEST(CellPolicyNames, RoundTrip) {
  for (CellPolicy p : {CellPolicy::kSquares, CellPolicy::kTriangles, CellPolicy::kBoth})
    EXPECT_EQ(parse_cell_policy(to_string(p)), p);
  EXPECT_THROW(parse_cell_policy("hexagons"), std::invalid_argument);
}

TEST(FairSccs, PingLoopIsWeaklyFair) {
  ExecutionGraph g = corpus_graph("FX-PING");
  Condensation c = condensation(g);
  EXPECT_EQ(fair_sccs(g, {FairnessSpec::Mode::kWeak}), (std::set<SccId>{c.scc_of[1]}));
}

TEST(FairSccs, NeglectedProcessMakesCycleUnfair) {
  // Process 3 is enabled at both vertices but never moves.
  ExecutionGraph g =
      GraphBuilder(2, 3).edge(0, 1, {1}).edge(1, 0, {2}).enable(0, 3).enable(1, 3).build();
  EXPECT_TRUE(fair_sccs(g, {FairnessSpec::Mode::kWeak}).empty());
  EXPECT_TRUE(fair_sccs(g, {FairnessSpec::Mode::kStrong}).empty());
}

TEST(FairSccs, StrongFairnessRejectsIntermittentNeglect) {
  // Process 2 is enabled only at vertex 0 and never fires: weakly fair (not
  // continuously enabled), strongly unfair.
  ExecutionGraph g = GraphBuilder(2, 2).edge(0, 1, {1}).edge(1, 0, {1}).enable(0, 2).build();
  EXPECT_EQ(fair_sccs(g, {FairnessSpec::Mode::kWeak}).size(), 1u);
  EXPECT_TRUE(fair_sccs(g, {FairnessSpec::Mode::kStrong}).empty());
}

TEST(FairSccs, StrongFairnessFindsFairSubcycle) {
  // 0 <-> 1 uses processes 1 and 2; 1 <-> 2 uses process 1 while process 3
  // is enabled at 2. The whole SCC neglects process 3, the 0-1 cycle does not.
  ExecutionGraph g = GraphBuilder(3, 3)
                         .edge(0, 1, {1})
                         .edge(1, 0, {2})
                         .edge(1, 2, {1})
                         .edge(2, 1, {1})
                         .enable(2, 3)
                         .build();
  EXPECT_EQ(fair_sccs(g, {FairnessSpec::Mode::kStrong}).size(), 1u);
  FairnessAnalysis a = fair_edges(g, {FairnessSpec::Mode::kStrong});
  EXPECT_EQ(a.fair_cores, (std::vector<std::vector<VertexId>>{{0, 1}}));
  // A detour through 2 can still end in the fair 0-1 cycle.
  EXPECT_EQ(a.fair_edges, (std::set<EdgeId>{0, 1, 2, 3}));
  // Weak fairness accepts the whole component.
  EXPECT_EQ(fair_edges(g, {FairnessSpec::Mode::kWeak}).fair_cores,
            (std::vector<std::vector<VertexId>>{{0, 1, 2}}));
}

TEST(FairSccs, NoCoresWithoutCycles) {
  EXPECT_TRUE(fair_edges(explore(load_fixture("FX-PHIL2", corpus_dir()).program)).fair_cores.empty());
}

TEST(FairSccs, RetryLoopIsFair) {
  ExecutionGraph g = corpus_graph("FX-RETRY");
  Condensation c = condensation(g);
  EXPECT_TRUE(fair_sccs(g, {FairnessSpec::Mode::kWeak}).count(c.scc_of[g.root()]));
}

TEST(FairEdges, DiamondAllFair) {
  FairnessAnalysis a = fair_edges(corpus_graph("FX-DIAMOND"));
  EXPECT_EQ(a.fair_edges, (std::set<EdgeId>{0, 1, 2, 3}));
  EXPECT_EQ(a.fair_vertices.size(), 4u);
}

TEST(FairEdges, UnfairTrapIsExcluded) {
  // 0 -> 1 <-> 2 where process 2 is enabled but never fires inside {1,2}.
  ExecutionGraph g = GraphBuilder(3, 2)
                         .edge(0, 1, {1})
                         .edge(1, 2, {1})
                         .edge(2, 1, {1})
                         .enable(1, 2)
                         .enable(2, 2)
                         .build();
  FairnessAnalysis a = fair_edges(g);
  EXPECT_TRUE(a.fair_edges.empty());
  EXPECT_TRUE(a.fair_vertices.empty());
}

TEST(FairEdges, PingSelfLoopFair) {
  FairnessAnalysis a = fair_edges(corpus_graph("FX-PING"));
  EXPECT_EQ(a.fair_edges, (std::set<EdgeId>{0, 1}));
}

TEST(FairEdges, FaultAnchorToggle) {
  // 0 -> fault, plus an unfair loop at 0 (process 2 neglected).
  ExecutionGraph g = GraphBuilder(2, 2).edge(0, 0, {1}).edge(0, 1, {1}).enable(0, 2).fault(1).build();
  FairnessAnalysis anchored = fair_edges(g, {FairnessSpec::Mode::kWeak, true});
  EXPECT_EQ(anchored.fair_edges, (std::set<EdgeId>{0, 1}));
  FairnessAnalysis not_anchored = fair_edges(g, {FairnessSpec::Mode::kWeak, false});
  EXPECT_TRUE(not_anchored.fair_edges.empty());
}

TEST(FairEdges, StrongIsSubsetOfWeak) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 100; ++i) {
    ExecutionGraph g = testing::random_annotated_graph(rng, 25);
    auto weak = fair_edges(g, {FairnessSpec::Mode::kWeak}).fair_edges;
    for (EdgeId e : fair_edges(g, {FairnessSpec::Mode::kStrong}).fair_edges)
      EXPECT_TRUE(weak.count(e)) << "graph " << i << " edge " << e;
  }
}

TEST(FairSubcomplex, IdentityWhenAllFair) {
  ExecutionGraph g = corpus_graph("FX-DIAMOND");
  ExecComplex k = build_complex(g);
  ExecComplex f = fair_subcomplex(k, fair_edges(g));
  EXPECT_EQ(f.vertices, k.vertices);
  EXPECT_EQ(f.edges.size(), k.edges.size());
  EXPECT_EQ(f.cells.size(), 1u);
}

TEST(FairSubcomplex, NoFairEdgesLeavesFairVertices) {
  ExecutionGraph g = corpus_graph("FX-DIAMOND");
  ExecComplex k = build_complex(g);
  FairnessAnalysis only_vertices;
  only_vertices.fair_vertices = {0, 1, 2, 3};
  ExecComplex f = fair_subcomplex(k, only_vertices);
  EXPECT_EQ(f.vertices, k.vertices);
  EXPECT_TRUE(f.edges.empty());
  EXPECT_TRUE(f.cells.empty());
  EXPECT_EQ(f.check(), "");
  // The fair complex is spanned by fair vertices only.
  EXPECT_TRUE(fair_subcomplex(k, FairnessAnalysis{}).vertices.empty());
}

TEST(Filtration, PingStagesAfterDepthOneAreEqual) {
  ExecutionGraph g = corpus_graph("FX-PING");
  auto stages = depth_filtration(g, CellPolicy::kBoth, 3);
  ASSERT_EQ(stages.size(), 4u);
  EXPECT_EQ(stages[0].vertices.size(), 1u);
  EXPECT_TRUE(stages[0].edges.empty());
  for (std::size_t i = 1; i < 4; ++i) {
    EXPECT_EQ(stages[i].vertices.size(), 2u);
    EXPECT_EQ(stages[i].edges.size(), 2u);
  }
}

TEST(Filtration, DiamondLayers) {
  auto stages = depth_filtration(corpus_graph("FX-DIAMOND"), CellPolicy::kSquares, 2);
  ASSERT_EQ(stages.size(), 3u);
  EXPECT_EQ(stages[0].vertices.size(), 1u);
  EXPECT_EQ(stages[1].vertices.size(), 3u);
  EXPECT_EQ(stages[1].edges.size(), 2u);
  EXPECT_EQ(stages[2].vertices.size(), 4u);
  EXPECT_EQ(stages[2].edges.size(), 4u);
  EXPECT_EQ(stages[2].cells.size(), 1u);
}

TEST(Filtration, StagesAreNested) {
  for (const auto& name : testing::corpus_names()) {
    ExecutionGraph g = corpus_graph(name.c_str());
    std::size_t kmax = 0;
    for (const auto& v : g.vertices()) kmax = std::max(kmax, v.depth);
    auto stages = depth_filtration(g, CellPolicy::kBoth, kmax + 1);
    for (std::size_t i = 0; i + 1 < stages.size(); ++i) {
      for (VertexId v : stages[i].vertices) EXPECT_TRUE(stages[i + 1].has_vertex(v));
      for (const auto& e : stages[i].edges) EXPECT_TRUE(stages[i + 1].has_edge(e.id));
      EXPECT_LE(stages[i].cells.size(), stages[i + 1].cells.size());
    }
    EXPECT_EQ(stages.back().edges.size(), g.num_edges()) << name;
  }
}

TEST(Restrict, KeepsOnlyInteriorSimplices) {
  ExecComplex k = build_complex(corpus_graph("FX-DIAMOND"), CellPolicy::kSquares);
  ExecComplex r = restrict_complex(k, {0, 1, 2});
  EXPECT_EQ(r.vertices.size(), 3u);
  EXPECT_EQ(r.edges.size(), 2u);
  EXPECT_TRUE(r.cells.empty());
  EXPECT_EQ(r.check(), "");
}

}  // namespace
}  // namespace singulock
