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

#include "singulock/topology.hpp"

#include <algorithm>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace singulock {

std::vector<std::pair<EdgeId, int>> TwoCell::boundary() const {
  if (kind == Kind::kSquare) return {{edges[0], +1}, {edges[1], +1}, {edges[2], -1}, {edges[3], -1}};
  return {{edges[0], +1}, {edges[1], +1}, {edges[2], -1}};
}

bool ExecComplex::has_vertex(VertexId v) const {
  return std::binary_search(vertices.begin(), vertices.end(), v);
}

const ComplexEdge* ExecComplex::find_edge(EdgeId e) const {
  auto it = std::lower_bound(edges.begin(), edges.end(), e,
                             [](const ComplexEdge& x, EdgeId id) { return x.id < id; });
  return it != edges.end() && it->id == e ? &*it : nullptr;
}

bool ExecComplex::has_edge(EdgeId e) const { return find_edge(e) != nullptr; }

std::string ExecComplex::check() const {
  std::ostringstream err;
  if (!std::is_sorted(vertices.begin(), vertices.end()) ||
      std::adjacent_find(vertices.begin(), vertices.end()) != vertices.end())
    return "vertex ids not strictly increasing";
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (i > 0 && edges[i - 1].id >= edges[i].id) return "edge ids not strictly increasing";
    if (!has_vertex(edges[i].src) || !has_vertex(edges[i].dst)) {
      err << "edge " << edges[i].id << " has an endpoint outside the complex";
      return err.str();
    }
  }
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const TwoCell& c = cells[i];
    if (i > 0 && cells[i - 1].id >= c.id) return "cell ids not strictly increasing";
    std::array<const ComplexEdge*, 4> e{};
    for (std::size_t k = 0; k < c.arity(); ++k) {
      e[k] = find_edge(c.edges[k]);
      if (!e[k]) {
        err << "cell " << c.id << " references missing edge " << c.edges[k];
        return err.str();
      }
    }
    const auto& v = c.vertices;
    bool ok;
    if (c.kind == TwoCell::Kind::kSquare) {
      ok = v[1] != v[2] && e[0]->src == v[0] && e[0]->dst == v[1] && e[1]->src == v[1] &&
           e[1]->dst == v[3] && e[2]->src == v[0] && e[2]->dst == v[2] && e[3]->src == v[2] &&
           e[3]->dst == v[3];
    } else {
      ok = e[0]->src == v[0] && e[0]->dst == v[1] && e[1]->src == v[1] && e[1]->dst == v[2] &&
           e[2]->src == v[0] && e[2]->dst == v[2];
    }
    if (!ok) {
      err << "cell " << c.id << " endpoints do not match its edges";
      return err.str();
    }
  }
  return {};
}

const char* to_string(CellPolicy p) {
  switch (p) {
    case CellPolicy::kSquares: return "squares";
    case CellPolicy::kTriangles: return "triangles";
    case CellPolicy::kBoth: return "both";
  }
  return "both";
}

CellPolicy parse_cell_policy(std::string_view s) {
  if (s == "squares") return CellPolicy::kSquares;
  if (s == "triangles") return CellPolicy::kTriangles;
  if (s == "both") return CellPolicy::kBoth;
  throw std::invalid_argument("unknown cell policy '" + std::string(s) + "'");
}

const char* to_string(FairnessSpec::Mode m) {
  return m == FairnessSpec::Mode::kWeak ? "weak" : "strong";
}

FairnessSpec::Mode parse_fairness_mode(std::string_view s) {
  if (s == "weak") return FairnessSpec::Mode::kWeak;
  if (s == "strong") return FairnessSpec::Mode::kStrong;
  throw std::invalid_argument("unknown fairness mode '" + std::string(s) + "'");
}

// ----------------------------------------------------------------------------
// Complex construction

namespace {

bool disjoint(const std::vector<Pid>& a, const std::vector<Pid>& b) {
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i == *j) return false;
    if (*i < *j)
      ++i;
    else
      ++j;
  }
  return true;
}

}  // namespace

ExecComplex build_complex(const ExecutionGraph& graph, CellPolicy policy) {
  ExecComplex k;
  k.vertices.resize(graph.num_vertices());
  for (VertexId v = 0; v < graph.num_vertices(); ++v) k.vertices[v] = v;
  k.edges.reserve(graph.num_edges());
  for (EdgeId e = 0; e < graph.num_edges(); ++e)
    k.edges.push_back({e, graph.edge(e).src, graph.edge(e).dst});

  if (policy != CellPolicy::kTriangles) {
    // One square per diamond: the interleaving through the smaller middle
    // vertex is the "a" side.
    for (VertexId s = 0; s < graph.num_vertices(); ++s) {
      const auto& outs = graph.out_edges(s);
      for (EdgeId e_sa : outs) {
        for (EdgeId e_sb : outs) {
          const auto& sa = graph.edge(e_sa);
          const auto& sb = graph.edge(e_sb);
          if (!(sa.dst < sb.dst)) continue;
          if (!disjoint(sa.label.participants, sb.label.participants)) continue;
          for (EdgeId e_at : graph.out_edges(sa.dst)) {
            const auto& at = graph.edge(e_at);
            if (!(at.label == sb.label)) continue;
            for (EdgeId e_bt : graph.out_edges(sb.dst)) {
              const auto& bt = graph.edge(e_bt);
              if (bt.dst != at.dst || !(bt.label == sa.label)) continue;
              TwoCell c;
              c.id = k.cells.size();
              c.kind = TwoCell::Kind::kSquare;
              c.vertices = {s, sa.dst, sb.dst, at.dst};
              c.edges = {e_sa, e_at, e_sb, e_bt};
              k.cells.push_back(c);
            }
          }
        }
      }
    }
  }
  if (policy != CellPolicy::kSquares) {
    for (EdgeId e01 = 0; e01 < graph.num_edges(); ++e01) {
      const auto& a = graph.edge(e01);
      if (a.src == a.dst) continue;
      for (EdgeId e12 : graph.out_edges(a.dst)) {
        const auto& b = graph.edge(e12);
        if (b.dst == a.src || b.dst == a.dst) continue;
        for (EdgeId e02 : graph.out_edges(a.src)) {
          if (graph.edge(e02).dst != b.dst) continue;
          TwoCell c;
          c.id = k.cells.size();
          c.kind = TwoCell::Kind::kTriangle;
          c.vertices = {a.src, a.dst, b.dst, 0};
          c.edges = {e01, e12, e02, 0};
          k.cells.push_back(c);
        }
      }
    }
  }
  return k;
}

ExecComplex restrict_complex(const ExecComplex& complex, const std::set<VertexId>& keep) {
  ExecComplex out;
  for (VertexId v : complex.vertices)
    if (keep.count(v)) out.vertices.push_back(v);
  for (const auto& e : complex.edges)
    if (keep.count(e.src) && keep.count(e.dst)) out.edges.push_back(e);
  for (const auto& c : complex.cells) {
    bool inside = true;
    for (std::size_t i = 0; i < c.arity() && inside; ++i) inside = out.has_edge(c.edges[i]);
    if (inside) out.cells.push_back(c);
  }
  return out;
}

std::vector<ExecComplex> depth_filtration(const ExecutionGraph& graph, CellPolicy policy,
                                          std::size_t k_max) {
  const ExecComplex full = build_complex(graph, policy);
  std::vector<ExecComplex> stages;
  stages.reserve(k_max + 1);
  for (std::size_t i = 0; i <= k_max; ++i) {
    std::set<VertexId> keep;
    for (VertexId v = 0; v < graph.num_vertices(); ++v)
      if (graph.vertex(v).depth <= i) keep.insert(v);
    stages.push_back(restrict_complex(full, keep));
  }
  return stages;
}

// ----------------------------------------------------------------------------
// Fairness

namespace {

// Strongly connected pieces (with at least one internal edge) of the subgraph
// induced by `in`. Iterative Tarjan.
std::vector<std::vector<VertexId>> cyclic_components(const ExecutionGraph& g,
                                                     const std::vector<bool>& in) {
  const std::size_t n = g.num_vertices();
  constexpr std::size_t kUnset = static_cast<std::size_t>(-1);
  std::vector<std::size_t> index(n, kUnset), low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<VertexId> stack;
  std::vector<std::vector<VertexId>> out;
  std::size_t counter = 0;
  struct Frame {
    VertexId v;
    std::size_t next;
  };

  for (VertexId root = 0; root < n; ++root) {
    if (!in[root] || index[root] != kUnset) continue;
    std::vector<Frame> frames{{root, 0}};
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!frames.empty()) {
      Frame& f = frames.back();
      const auto& outs = g.out_edges(f.v);
      if (f.next < outs.size()) {
        const VertexId w = g.edge(outs[f.next++]).dst;
        if (!in[w]) continue;
        if (index[w] == kUnset) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          frames.push_back({w, 0});
        } else if (on_stack[w]) {
          low[f.v] = std::min(low[f.v], index[w]);
        }
        continue;
      }
      const VertexId v = f.v;
      frames.pop_back();
      if (!frames.empty()) low[frames.back().v] = std::min(low[frames.back().v], low[v]);
      if (low[v] != index[v]) continue;
      std::vector<VertexId> comp;
      for (;;) {
        VertexId w = stack.back();
        stack.pop_back();
        on_stack[w] = false;
        comp.push_back(w);
        if (w == v) break;
      }
      std::sort(comp.begin(), comp.end());
      bool cyclic = comp.size() > 1;
      if (!cyclic)
        for (EdgeId e : g.out_edges(v)) cyclic = cyclic || g.edge(e).dst == v;
      if (cyclic) out.push_back(std::move(comp));
    }
  }
  return out;
}

// Processes owning at least one edge with both endpoints in `members`.
std::set<Pid> active_inside(const ExecutionGraph& g, const std::vector<VertexId>& members,
                            const std::vector<bool>& in) {
  std::set<Pid> active;
  for (VertexId v : members)
    for (EdgeId e : g.out_edges(v))
      if (in[g.edge(e).dst])
        active.insert(g.edge(e).label.participants.begin(), g.edge(e).label.participants.end());
  return active;
}

bool weakly_fair(const ExecutionGraph& g, const std::vector<VertexId>& members) {
  std::vector<bool> in(g.num_vertices(), false);
  for (VertexId v : members) in[v] = true;
  std::vector<Pid> always = g.vertex(members.front()).enabled_pids();
  for (VertexId v : members) {
    std::vector<Pid> here = g.vertex(v).enabled_pids();
    std::sort(here.begin(), here.end());
    std::vector<Pid> both;
    std::set_intersection(always.begin(), always.end(), here.begin(), here.end(),
                          std::back_inserter(both));
    always = std::move(both);
  }
  const auto active = active_inside(g, members, in);
  return std::all_of(always.begin(), always.end(), [&](Pid p) { return active.count(p) > 0; });
}

// Emerson-Lei style refinement: drop vertices that enable a process which
// never fires inside the current piece, re-split, repeat. Collects every
// piece that survives unchanged.
void strong_cores(const ExecutionGraph& g, const std::vector<VertexId>& members,
                  std::vector<std::vector<VertexId>>& out) {
  std::vector<bool> in(g.num_vertices(), false);
  for (VertexId v : members) in[v] = true;
  for (auto& piece : cyclic_components(g, in)) {
    std::vector<bool> piece_in(g.num_vertices(), false);
    for (VertexId v : piece) piece_in[v] = true;
    const auto active = active_inside(g, piece, piece_in);
    std::vector<VertexId> kept;
    for (VertexId v : piece) {
      auto en = g.vertex(v).enabled_pids();
      if (std::all_of(en.begin(), en.end(), [&](Pid p) { return active.count(p) > 0; }))
        kept.push_back(v);
    }
    if (kept.size() == piece.size())
      out.push_back(std::move(piece));
    else if (!kept.empty())
      strong_cores(g, kept, out);
  }
}

std::vector<std::vector<VertexId>> cores_of(const ExecutionGraph& graph, const Condensation& c,
                                            SccId s, const FairnessSpec& spec) {
  std::vector<std::vector<VertexId>> out;
  if (!c.has_edge(s)) return out;
  if (spec.mode == FairnessSpec::Mode::kWeak) {
    if (weakly_fair(graph, c.members[s])) out.push_back(c.members[s]);
  } else {
    strong_cores(graph, c.members[s], out);
  }
  return out;
}

}  // namespace

std::set<SccId> fair_sccs(const ExecutionGraph& graph, const FairnessSpec& spec) {
  const Condensation c = condensation(graph);
  std::set<SccId> fair;
  for (SccId s = 0; s < c.size(); ++s)
    if (!cores_of(graph, c, s, spec).empty()) fair.insert(s);
  return fair;
}

FairnessAnalysis fair_edges(const ExecutionGraph& graph, const FairnessSpec& spec) {
  const Condensation c = condensation(graph);
  FairnessAnalysis fa;
  for (SccId s = 0; s < c.size(); ++s) {
    auto cores = cores_of(graph, c, s, spec);
    if (cores.empty()) continue;
    fa.fair_sccs.insert(s);
    for (auto& core : cores) fa.fair_cores.push_back(std::move(core));
  }
  std::sort(fa.fair_cores.begin(), fa.fair_cores.end());

  const std::size_t n = graph.num_vertices();
  std::vector<bool> anchor(n, false), dead_end(n, false);
  for (VertexId v = 0; v < n; ++v) {
    if (graph.out_edges(v).empty() && (spec.fault_anchors || !graph.vertex(v).cls.fault())) {
      anchor[v] = true;
      dead_end[v] = true;
    }
    if (fa.fair_sccs.count(c.scc_of[v])) anchor[v] = true;
  }
  // Backward closure: vertices from which some anchor is reachable.
  std::vector<bool> good = anchor;
  std::vector<VertexId> queue;
  for (VertexId v = 0; v < n; ++v)
    if (good[v]) queue.push_back(v);
  for (std::size_t head = 0; head < queue.size(); ++head) {
    for (EdgeId e : graph.in_edges(queue[head])) {
      VertexId u = graph.edge(e).src;
      if (!good[u]) {
        good[u] = true;
        queue.push_back(u);
      }
    }
  }
  for (EdgeId e = 0; e < graph.num_edges(); ++e) {
    if (!good[graph.edge(e).dst]) continue;
    fa.fair_edges.insert(e);
    fa.fair_vertices.insert(graph.edge(e).src);
    fa.fair_vertices.insert(graph.edge(e).dst);
  }
  for (VertexId v = 0; v < n; ++v)
    if (dead_end[v]) fa.fair_vertices.insert(v);
  return fa;
}

ExecComplex fair_subcomplex(const ExecComplex& complex, const FairnessAnalysis& analysis) {
  ExecComplex out;
  for (VertexId v : complex.vertices)
    if (analysis.fair_vertices.count(v)) out.vertices.push_back(v);
  for (const auto& e : complex.edges)
    if (analysis.fair_edges.count(e.id)) out.edges.push_back(e);
  for (const auto& c : complex.cells) {
    bool keep = true;
    for (std::size_t i = 0; i < c.arity() && keep; ++i) keep = out.has_edge(c.edges[i]);
    if (keep) out.cells.push_back(c);
  }
  return out;
}

}  // namespace singulock
