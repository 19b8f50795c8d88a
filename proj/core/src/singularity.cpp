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

#include "singulock/singularity.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <utility>

namespace singulock {

bool TrapRegion::contains(VertexId v) const {
  return std::binary_search(vertices.begin(), vertices.end(), v);
}

const char* to_string(TrapRegion::Kind kind) {
  return kind == TrapRegion::Kind::kStuck ? "stuck" : "divergent";
}

namespace {

TrapRegion make_trap(const Condensation& cond, SccId c) {
  TrapRegion t;
  t.vertices = cond.members[c];
  t.internal_edges = cond.internal_edges[c];
  t.kind = t.internal_edges == 0 ? TrapRegion::Kind::kStuck : TrapRegion::Kind::kDivergent;
  return t;
}

bool any_vertex(const ExecutionGraph& g, const std::vector<VertexId>& vs,
                bool (*pred)(const Vertex&)) {
  return std::any_of(vs.begin(), vs.end(), [&](VertexId v) { return pred(g.vertex(v)); });
}

bool is_terminal(const Vertex& v) { return v.cls.terminal(); }
bool is_fault(const Vertex& v) { return v.cls.fault(); }
bool is_unexpanded(const Vertex& v) { return !v.expanded; }

}  // namespace

std::vector<TrapRegion> trap_regions(const ExecutionGraph& graph) {
  const Condensation cond = condensation(graph);
  std::vector<TrapRegion> out;
  for (SccId c = 0; c < cond.size(); ++c)
    if (cond.is_sink(c)) out.push_back(make_trap(cond, c));
  return out;
}

std::size_t DeadlockReport::stuck_count() const {
  return std::count_if(attractors.begin(), attractors.end(),
                       [](const Attractor& a) { return a.trap.kind == TrapRegion::Kind::kStuck; });
}

std::size_t DeadlockReport::divergent_count() const {
  return attractors.size() - stuck_count();
}

DeadlockReport deadlock_attractors(const ExecutionGraph& graph) {
  DeadlockReport report;
  for (auto& trap : trap_regions(graph)) {
    if (any_vertex(graph, trap.vertices, is_terminal)) continue;
    // A sink made of unexplored states is an artifact of the bounds.
    if (any_vertex(graph, trap.vertices, is_unexpanded)) continue;
    Attractor a;
    a.basin = basin_of(graph, trap);
    a.contains_fault = any_vertex(graph, trap.vertices, is_fault);
    a.trap = std::move(trap);
    (a.contains_fault ? report.fault_traps : report.attractors).push_back(std::move(a));
  }
  return report;
}

std::vector<VertexId> basin_of(const ExecutionGraph& graph, const TrapRegion& trap) {
  const std::size_t n = graph.num_vertices();
  std::vector<bool> in(n, false);
  std::vector<std::size_t> outside(n, 0);  // out-edges not yet known to land in the basin
  for (VertexId v = 0; v < n; ++v) outside[v] = graph.out_edges(v).size();
  std::deque<VertexId> queue;
  for (VertexId v : trap.vertices) {
    in[v] = true;
    queue.push_back(v);
  }
  while (!queue.empty()) {
    const VertexId v = queue.front();
    queue.pop_front();
    for (EdgeId e : graph.in_edges(v)) {
      const VertexId u = graph.edge(e).src;
      if (in[u]) continue;
      if (--outside[u] == 0) {
        in[u] = true;
        queue.push_back(u);
      }
    }
  }
  std::vector<VertexId> out;
  for (VertexId v = 0; v < n; ++v)
    if (in[v]) out.push_back(v);
  return out;
}

std::vector<VertexId> persistent_reach(const ExecutionGraph& graph, const Condensation& cond,
                                       VertexId v) {
  (void)graph;
  std::vector<bool> seen(cond.size(), false);
  std::vector<SccId> stack{cond.scc_of.at(v)};
  seen[stack.back()] = true;
  std::optional<SccId> sink;
  while (!stack.empty()) {
    const SccId c = stack.back();
    stack.pop_back();
    if (cond.is_sink(c)) {
      if (sink) return {};
      sink = c;
    }
    for (SccId d : cond.dag[c])
      if (!seen[d]) {
        seen[d] = true;
        stack.push_back(d);
      }
  }
  return cond.members[*sink];
}

std::vector<VertexId> persistent_reach(const ExecutionGraph& graph, VertexId v) {
  return persistent_reach(graph, condensation(graph), v);
}

std::optional<TrapRegion> deadlock_check(const ExecutionGraph& graph, VertexId v) {
  const Condensation cond = condensation(graph);
  const auto r = persistent_reach(graph, cond, v);
  if (r.empty() || any_vertex(graph, r, is_terminal)) return std::nullopt;
  return make_trap(cond, cond.scc_of[r.front()]);
}

std::size_t trap_cycle_rank(const ExecComplex& complex, const TrapRegion& trap) {
  const std::set<VertexId> keep(trap.vertices.begin(), trap.vertices.end());
  return homology_h1(restrict_complex(complex, keep)).betti;
}

// ----------------------------------------------------------------------------
// Livelocks

namespace {

// Shortest directed path from `from` to `to` over `edges`, ties by edge id.
std::vector<EdgeId> shortest_path(const ExecutionGraph& graph, const std::set<EdgeId>& edges,
                                  VertexId from, VertexId to) {
  if (from == to) return {};
  std::map<VertexId, EdgeId> via;
  std::deque<VertexId> queue{from};
  std::set<VertexId> seen{from};
  while (!queue.empty()) {
    const VertexId v = queue.front();
    queue.pop_front();
    for (EdgeId e : graph.out_edges(v)) {
      if (!edges.count(e)) continue;
      const VertexId w = graph.edge(e).dst;
      if (seen.count(w)) continue;
      seen.insert(w);
      via[w] = e;
      if (w == to) {
        std::vector<EdgeId> path;
        for (VertexId x = to; x != from; x = graph.edge(via[x]).src) path.push_back(via[x]);
        std::reverse(path.begin(), path.end());
        return path;
      }
      queue.push_back(w);
    }
  }
  return {};
}

}  // namespace

LivelockReport detect_livelocks(const ExecutionGraph& graph, CellPolicy policy,
                                const FairnessSpec& spec) {
  LivelockReport report;
  report.spec = spec;
  report.policy = policy;
  report.fairness = fair_edges(graph, spec);
  report.fair_complex = fair_subcomplex(build_complex(graph, policy), report.fairness);
  const CycleHomology homology(report.fair_complex);
  report.fair_h1 = homology.result();

  // Edges inside fair cores are the ones a fair infinite run can repeat.
  std::set<EdgeId> internal;
  for (const auto& core : report.fairness.fair_cores) {
    for (VertexId v : core)
      for (EdgeId e : graph.out_edges(v))
        if (std::binary_search(core.begin(), core.end(), graph.edge(e).dst)) internal.insert(e);
    // One closed walk through every internal edge of the core.
    CycleWalk run;
    run.directed = true;
    VertexId at = core.front();
    for (VertexId v : core)
      for (EdgeId e : graph.out_edges(v)) {
        if (!std::binary_search(core.begin(), core.end(), graph.edge(e).dst)) continue;
        for (EdgeId p : shortest_path(graph, internal, at, v)) run.walk.push_back(p);
        run.walk.push_back(e);
        at = graph.edge(e).dst;
      }
    for (EdgeId p : shortest_path(graph, internal, at, core.front())) run.walk.push_back(p);
    for (EdgeId e : run.walk) ++run.chain[e];
    report.fair_runs.push_back(std::move(run));
  }
  report.livelock_present = !report.fair_runs.empty();

  ExecComplex cyclic;
  {
    std::set<VertexId> vs;
    for (EdgeId e : internal) {
      cyclic.edges.push_back({e, graph.edge(e).src, graph.edge(e).dst});
      vs.insert(graph.edge(e).src);
      vs.insert(graph.edge(e).dst);
    }
    cyclic.vertices.assign(vs.begin(), vs.end());
  }
  std::vector<Chain> cycle_space;
  for (const auto& g : homology_h1(cyclic).generators) cycle_space.push_back(g.chain);
  report.cyclic_rank = cycle_space.empty() ? 0 : homology.rank_in_homology(cycle_space);

  // Witnesses: the cycle through e closed by a shortest return path, kept
  // while it adds a new homology class.
  std::vector<Chain> chosen;
  std::set<Chain> tried;
  for (EdgeId e : internal) {
    if (chosen.size() >= report.cyclic_rank) break;
    const GraphEdge& ge = graph.edge(e);
    std::vector<EdgeId> walk{e};
    for (EdgeId p : shortest_path(graph, internal, ge.dst, ge.src)) walk.push_back(p);
    Chain chain;
    for (EdgeId w : walk) ++chain[w];
    if (!tried.insert(chain).second) continue;
    chosen.push_back(chain);
    if (homology.rank_in_homology(chosen) < chosen.size()) {
      chosen.pop_back();
      continue;
    }
    CycleWalk cw;
    cw.directed = true;
    cw.walk = std::move(walk);
    cw.chain = std::move(chain);
    report.witnesses.push_back(std::move(cw));
  }
  return report;
}

// ----------------------------------------------------------------------------
// Bounded futures

namespace {

struct FlipIndex {
  std::map<std::pair<EdgeId, EdgeId>, std::vector<std::vector<EdgeId>>> pair_moves;
  std::map<EdgeId, std::vector<std::vector<EdgeId>>> single_moves;

  explicit FlipIndex(const ExecComplex& complex) {
    for (const auto& c : complex.cells) {
      const auto& e = c.edges;
      if (c.kind == TwoCell::Kind::kSquare) {
        pair_moves[{e[0], e[1]}].push_back({e[2], e[3]});
        pair_moves[{e[2], e[3]}].push_back({e[0], e[1]});
      } else {
        pair_moves[{e[0], e[1]}].push_back({e[2]});
        single_moves[e[2]].push_back({e[0], e[1]});
      }
    }
  }

  std::vector<std::vector<EdgeId>> flips(const std::vector<EdgeId>& walk,
                                         std::size_t max_length) const {
    std::vector<std::vector<EdgeId>> out;
    auto splice = [&](std::size_t at, std::size_t len, const std::vector<EdgeId>& with) {
      if (walk.size() - len + with.size() > max_length) return;
      std::vector<EdgeId> w(walk.begin(), walk.begin() + static_cast<long>(at));
      w.insert(w.end(), with.begin(), with.end());
      w.insert(w.end(), walk.begin() + static_cast<long>(at + len), walk.end());
      out.push_back(std::move(w));
    };
    for (std::size_t i = 0; i < walk.size(); ++i) {
      if (i + 1 < walk.size()) {
        auto it = pair_moves.find({walk[i], walk[i + 1]});
        if (it != pair_moves.end())
          for (const auto& with : it->second) splice(i, 2, with);
      }
      auto it = single_moves.find(walk[i]);
      if (it != single_moves.end())
        for (const auto& with : it->second) splice(i, 1, with);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }
};

}  // namespace

std::vector<std::vector<EdgeId>> single_flips(const ExecComplex& complex,
                                              const std::vector<EdgeId>& walk,
                                              std::size_t max_length) {
  return FlipIndex(complex).flips(walk, max_length);
}

FutureClasses future_classes_bounded(const ExecutionGraph& graph, const ExecComplex& complex,
                                     VertexId origin, std::size_t depth, std::size_t walk_cap) {
  if (origin >= graph.num_vertices()) throw std::out_of_range("origin vertex out of range");
  FutureClasses fc;
  fc.origin = origin;
  fc.depth = depth;

  // Enumerate walks depth-first in edge order.
  std::vector<std::vector<EdgeId>> walks;
  std::vector<VertexId> ends;
  std::vector<bool> maximal;
  std::vector<EdgeId> current;
  auto visit = [&](auto& self, VertexId v) -> void {
    if (walks.size() >= walk_cap)
      throw BoundRefusal("more than " + std::to_string(walk_cap) + " walks of length <= " +
                         std::to_string(depth) + " from vertex " + std::to_string(origin));
    const auto& out = graph.out_edges(v);
    if (current.size() < depth && !graph.vertex(v).expanded)
      throw BoundRefusal("walk from vertex " + std::to_string(origin) +
                         " reaches unexplored vertex " + std::to_string(v));
    walks.push_back(current);
    ends.push_back(v);
    maximal.push_back(current.size() == depth || out.empty());
    if (current.size() == depth) return;
    for (EdgeId e : out) {
      current.push_back(e);
      self(self, graph.edge(e).dst);
      current.pop_back();
    }
  };
  visit(visit, origin);
  fc.walk_count = walks.size();

  std::map<std::vector<EdgeId>, std::size_t> index;
  for (std::size_t i = 0; i < walks.size(); ++i) index[walks[i]] = i;

  const FlipIndex flips(complex);
  constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> component(walks.size(), kNone);
  std::size_t components = 0;
  std::vector<std::size_t> first_maximal;  // per component
  for (std::size_t s = 0; s < walks.size(); ++s) {
    if (component[s] != kNone) continue;
    component[s] = components;
    first_maximal.push_back(kNone);
    std::deque<std::size_t> queue{s};
    while (!queue.empty()) {
      const std::size_t i = queue.front();
      queue.pop_front();
      if (maximal[i] && (first_maximal.back() == kNone || i < first_maximal.back()))
        first_maximal.back() = i;
      for (const auto& w : flips.flips(walks[i], depth)) {
        auto it = index.find(w);
        if (it == index.end() || component[it->second] != kNone) continue;
        component[it->second] = components;
        queue.push_back(it->second);
      }
    }
    ++components;
  }

  for (std::size_t c = 0; c < components; ++c) {
    if (first_maximal[c] == kNone) continue;
    ++fc.class_count;
    fc.representatives.push_back(walks[first_maximal[c]]);
  }
  fc.maximal_walks = static_cast<std::size_t>(std::count(maximal.begin(), maximal.end(), true));

  if (fc.class_count == 1) {
    const Condensation cond = condensation(graph);
    std::optional<SccId> sink;
    bool same = true;
    for (std::size_t i = 0; i < walks.size() && same; ++i) {
      if (!maximal[i]) continue;
      const SccId c = cond.scc_of[ends[i]];
      if (!cond.is_sink(c) || (sink && *sink != c)) same = false;
      sink = c;
    }
    if (same && sink) {
      fc.collapse = true;
      fc.collapse_trap = make_trap(cond, *sink);
      const auto& vs = fc.collapse_trap->vertices;
      fc.collapse_in_attractor = !any_vertex(graph, vs, is_terminal) &&
                                 !any_vertex(graph, vs, is_fault) &&
                                 !any_vertex(graph, vs, is_unexpanded);
    }
  }
  return fc;
}

// ----------------------------------------------------------------------------
// Severity

SeverityMetrics severity(const DeadlockReport& deadlocks, const LivelockReport& livelocks,
                         const ExecutionGraph& graph) {
  SeverityMetrics m;
  const double n = static_cast<double>(graph.num_vertices());
  for (const auto& a : deadlocks.attractors) {
    AttractorSeverity s;
    s.attractor = a.trap.vertices;
    s.kind = a.trap.kind;
    s.basin_size = a.basin.size();
    s.basin_fraction = static_cast<double>(a.basin.size()) / n;
    m.attractors.push_back(std::move(s));
  }
  m.betti_fair = livelocks.fair_h1.betti;
  m.torsion_fair = livelocks.fair_h1.torsion;
  m.cyclic_rank = livelocks.cyclic_rank;
  return m;
}

// ----------------------------------------------------------------------------
// Bisimulation

namespace {

std::string observation(const Vertex& v, BisimObservation obs) {
  std::ostringstream os;
  os << to_string(v.cls.kind) << '|' << v.cls.reason << '|' << v.expanded;
  if (obs == BisimObservation::kLabelsAndMemory) {
    for (const auto& [name, q] : v.state.channels) {
      os << '|' << name << '=';
      for (Value x : q) os << x << ',';
    }
    for (const auto& [name, owner] : v.state.locks) os << '|' << name << '@' << owner;
  }
  return os.str();
}

}  // namespace

BisimQuotient bisim_quotient(const ExecutionGraph& graph, BisimObservation obs) {
  const std::size_t n = graph.num_vertices();
  std::vector<std::size_t> block(n);
  std::size_t blocks = 0;
  {
    std::map<std::string, std::size_t> ids;
    for (VertexId v = 0; v < n; ++v) {
      auto [it, inserted] = ids.try_emplace(observation(graph.vertex(v), obs), ids.size());
      block[v] = it->second;
    }
    blocks = ids.size();
  }
  for (;;) {
    using Signature = std::pair<std::size_t, std::vector<std::pair<std::string, std::size_t>>>;
    std::map<Signature, std::size_t> ids;
    std::vector<std::size_t> next(n);
    for (VertexId v = 0; v < n; ++v) {
      Signature sig{block[v], {}};
      for (EdgeId e : graph.out_edges(v))
        sig.second.push_back({graph.edge(e).label.description, block[graph.edge(e).dst]});
      std::sort(sig.second.begin(), sig.second.end());
      sig.second.erase(std::unique(sig.second.begin(), sig.second.end()), sig.second.end());
      auto [it, inserted] = ids.try_emplace(std::move(sig), ids.size());
      next[v] = it->second;
    }
    block.swap(next);
    if (ids.size() == blocks) break;
    blocks = ids.size();
  }

  BisimQuotient q;
  if (n == 0) return q;
  constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
  std::vector<VertexId> rep(blocks, kNone);
  for (VertexId v = 0; v < n; ++v)
    if (rep[block[v]] == kNone) rep[block[v]] = v;

  // Renumber blocks breadth-first from the root's block.
  std::vector<std::size_t> order(blocks, kNone), depth(blocks, 0);
  std::vector<std::size_t> by_order;
  std::deque<std::size_t> queue{block[graph.root()]};
  order[block[graph.root()]] = 0;
  by_order.push_back(block[graph.root()]);
  while (!queue.empty()) {
    const std::size_t b = queue.front();
    queue.pop_front();
    for (EdgeId e : graph.out_edges(rep[b])) {
      const std::size_t d = block[graph.edge(e).dst];
      if (order[d] != kNone) continue;
      order[d] = by_order.size();
      depth[d] = depth[b] + 1;
      by_order.push_back(d);
      queue.push_back(d);
    }
  }
  for (std::size_t b = 0; b < blocks; ++b)
    if (order[b] == kNone) {
      order[b] = by_order.size();
      by_order.push_back(b);
    }

  std::vector<Vertex> vertices;
  std::vector<GraphEdge> edges;
  for (std::size_t i = 0; i < by_order.size(); ++i) {
    const std::size_t b = by_order[i];
    Vertex v = graph.vertex(rep[b]);
    v.depth = depth[b];
    vertices.push_back(std::move(v));
    std::set<std::pair<std::string, std::size_t>> seen;
    for (EdgeId e : graph.out_edges(rep[b])) {
      const GraphEdge& ge = graph.edge(e);
      const std::size_t d = order[block[ge.dst]];
      if (!seen.insert({ge.label.description, d}).second) continue;
      edges.push_back({i, ge.label, d});
    }
  }
  q.graph = ExecutionGraph(std::move(vertices), std::move(edges), 0, graph.truncated());
  q.block_of.resize(n);
  for (VertexId v = 0; v < n; ++v) q.block_of[v] = order[block[v]];
  return q;
}

ExecutionGraph bisim_minimize(const ExecutionGraph& graph, BisimObservation obs) {
  return bisim_quotient(graph, obs).graph;
}

}  // namespace singulock
