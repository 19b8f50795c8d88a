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

#ifndef SINGULOCK_SEMANTICS_HPP_
#define SINGULOCK_SEMANTICS_HPP_

#include <cstddef>
#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "singulock/calculus.hpp"

namespace singulock {

using Pid = std::uint32_t;
using VertexId = std::size_t;
using EdgeId = std::size_t;
using SccId = std::size_t;

inline constexpr Pid kFree = 0;

struct Process {
  Pid pid = 0;
  TermPtr term;
};

/// A global state (processes, store, memory). Process terms never have a
/// `Call` or `Par` at their head: calls are unfolded and parallel
/// compositions are split into separate processes when a term is installed.
struct GlobalState {
  std::vector<Process> processes;  // ascending pid order
  std::map<std::string, Value> store;
  std::map<std::string, std::deque<Value>> channels;  // buffered channels only
  std::map<std::string, Pid> locks;                   // kFree when unowned
  std::optional<std::string> fault;

  const Process* find(Pid pid) const;
};

struct TransitionLabel {
  std::vector<Pid> participants;  // sorted, non-empty
  std::string description;

  bool involves(Pid pid) const;
  friend bool operator==(const TransitionLabel&, const TransitionLabel&) = default;
};

struct StateClass {
  enum class Kind { kTerminal, kFault, kRunning };
  Kind kind = Kind::kRunning;
  std::string reason;  // set for faults

  bool terminal() const { return kind == Kind::kTerminal; }
  bool fault() const { return kind == Kind::kFault; }
  friend bool operator==(const StateClass&, const StateClass&) = default;
};

const char* to_string(StateClass::Kind kind);

struct Successor {
  TransitionLabel label;
  GlobalState state;
};

struct Vertex {
  GlobalState state;
  StateClass cls;
  std::size_t depth = 0;
  std::vector<bool> enabled;  // aligned with state.processes
  bool expanded = true;       // false when a bound stopped expansion here

  bool is_enabled(Pid pid) const;
  std::vector<Pid> enabled_pids() const;
};

struct GraphEdge {
  VertexId src = 0;
  TransitionLabel label;
  VertexId dst = 0;
};

/// Reachable execution graph. Vertices are in BFS discovery order, edges are
/// grouped by source in the same order. Self-loops and parallel edges occur.
class ExecutionGraph {
 public:
  ExecutionGraph() = default;
  ExecutionGraph(std::vector<Vertex> vertices, std::vector<GraphEdge> edges,
                 VertexId root = 0, bool truncated = false);

  const std::vector<Vertex>& vertices() const { return vertices_; }
  const std::vector<GraphEdge>& edges() const { return edges_; }
  const Vertex& vertex(VertexId v) const { return vertices_[v]; }
  const GraphEdge& edge(EdgeId e) const { return edges_[e]; }
  std::size_t num_vertices() const { return vertices_.size(); }
  std::size_t num_edges() const { return edges_.size(); }
  VertexId root() const { return root_; }
  bool truncated() const { return truncated_; }

  const std::vector<EdgeId>& out_edges(VertexId v) const { return out_[v]; }
  const std::vector<EdgeId>& in_edges(VertexId v) const { return in_[v]; }

 private:
  std::vector<Vertex> vertices_;
  std::vector<GraphEdge> edges_;
  VertexId root_ = 0;
  bool truncated_ = false;
  std::vector<std::vector<EdgeId>> out_;
  std::vector<std::vector<EdgeId>> in_;
};

/// Initial state: `main` split into its top-level parallel components, pids
/// assigned left to right from 1, empty store and channels, all locks free.
GlobalState initial_state(const Program& program);

/// All successors of `state`, in a fixed order: processes by pid; for a
/// rendezvous send, one edge per receiver in pid order; choice left first.
///
/// When a continuation is a parallel composition, the process keeps its pid
/// for the leftmost component and the others receive fresh pids
/// max_pid + 1, max_pid + 2, ... in left-to-right order.
std::vector<Successor> step(const Program& program, const GlobalState& state);

/// Deterministic, injective byte encoding of a state (see docs/formats.md).
std::string canonical_key(const GlobalState& state);

StateClass classify_state(const Program& program, const GlobalState& state);

struct ExploreBounds {
  std::size_t max_states = 100000;
  std::size_t max_depth = 1000;
};

ExecutionGraph explore(const Program& program, const ExploreBounds& bounds = {});

std::vector<VertexId> reach_set(const ExecutionGraph& graph, VertexId v);
bool preorder_leq(const ExecutionGraph& graph, VertexId a, VertexId b);

struct Condensation {
  std::vector<SccId> scc_of;                  // per vertex
  std::vector<std::vector<VertexId>> members;  // sorted; ids ordered by min member
  std::vector<std::size_t> internal_edges;     // edges with both ends in the SCC
  std::vector<std::vector<SccId>> dag;         // deduplicated, sorted successors

  std::size_t size() const { return members.size(); }
  bool has_edge(SccId c) const { return internal_edges[c] > 0; }
  bool is_sink(SccId c) const { return dag[c].empty(); }
};

Condensation condensation(const ExecutionGraph& graph);

}  // namespace singulock

#endif  // SINGULOCK_SEMANTICS_HPP_
