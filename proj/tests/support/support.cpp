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

#include "support.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <stdexcept>

#include "singulock/corpus.hpp"

namespace singulock::testing {

std::filesystem::path corpus_dir() { return SINGULOCK_TEST_CORPUS_DIR; }

std::vector<std::string> corpus_names() { return fixture_names(corpus_dir()); }

Program parse_or_die(std::string_view source) {
  ParseResult r = parse_program(source);
  if (!r.ok()) {
    std::string msg = "parse failed:";
    for (const auto& d : r.diagnostics) msg += "\n" + format_diagnostic(d);
    throw std::runtime_error(msg);
  }
  return std::move(*r.program);
}

ExecutionGraph explore_source(std::string_view source, const ExploreBounds& bounds) {
  return explore(parse_or_die(source), bounds);
}

GraphBuilder::GraphBuilder(std::size_t vertices, std::size_t pids)
    : n_(vertices), pids_(pids), extra_enabled_(vertices), classes_(vertices) {}

GraphBuilder& GraphBuilder::edge(VertexId src, VertexId dst, std::vector<Pid> participants,
                                 std::string label) {
  std::sort(participants.begin(), participants.end());
  if (label.empty()) {
    label = "t";
    for (Pid p : participants) label += std::to_string(p);
  }
  edges_.push_back({src, dst, std::move(participants), std::move(label)});
  return *this;
}

GraphBuilder& GraphBuilder::enable(VertexId v, Pid pid) {
  extra_enabled_.at(v).push_back(pid);
  return *this;
}

GraphBuilder& GraphBuilder::terminal(VertexId v) {
  classes_.at(v) = {StateClass::Kind::kTerminal, ""};
  return *this;
}

GraphBuilder& GraphBuilder::fault(VertexId v, std::string reason) {
  classes_.at(v) = {StateClass::Kind::kFault, std::move(reason)};
  return *this;
}

ExecutionGraph GraphBuilder::build() const {
  std::vector<std::set<Pid>> enabled(n_);
  for (const auto& e : edges_) enabled[e.src].insert(e.participants.begin(), e.participants.end());
  for (VertexId v = 0; v < n_; ++v) enabled[v].insert(extra_enabled_[v].begin(), extra_enabled_[v].end());

  std::vector<std::vector<VertexId>> adj(n_);
  for (const auto& e : edges_) adj[e.src].push_back(e.dst);
  std::vector<std::size_t> depth(n_, 0);
  std::vector<bool> seen(n_, false);
  if (n_ > 0) {
    std::deque<VertexId> q{0};
    seen[0] = true;
    while (!q.empty()) {
      VertexId v = q.front();
      q.pop_front();
      for (VertexId w : adj[v])
        if (!seen[w]) {
          seen[w] = true;
          depth[w] = depth[v] + 1;
          q.push_back(w);
        }
    }
  }

  std::vector<Vertex> vertices(n_);
  for (VertexId v = 0; v < n_; ++v) {
    Vertex& x = vertices[v];
    for (Pid p = 1; p <= pids_; ++p) {
      x.state.processes.push_back({p, make_skip()});
      x.enabled.push_back(enabled[v].count(p) > 0);
    }
    x.state.store["v"] = static_cast<Value>(v);  // keeps synthetic states distinct
    x.cls = classes_[v];
    if (x.cls.fault()) x.state.fault = x.cls.reason;
    x.depth = depth[v];
  }
  // Edges grouped by source, as explore() produces them.
  std::vector<GraphEdge> edges;
  for (VertexId v = 0; v < n_; ++v)
    for (const auto& e : edges_)
      if (e.src == v) edges.push_back({e.src, {e.participants, e.label}, e.dst});
  return ExecutionGraph(std::move(vertices), std::move(edges), 0, false);
}

ExecutionGraph random_annotated_graph(std::mt19937_64& rng, std::size_t max_vertices,
                                      std::size_t pids) {
  std::uniform_int_distribution<std::size_t> size(1, max_vertices);
  const std::size_t n = size(rng);
  GraphBuilder b(n, pids);
  std::uniform_int_distribution<Pid> pid(1, static_cast<Pid>(pids));
  std::bernoulli_distribution pair(0.25), extra(0.2);
  auto parts = [&] {
    std::vector<Pid> p{pid(rng)};
    if (pair(rng)) {
      Pid q = pid(rng);
      if (q != p[0]) p.push_back(q);
    }
    return p;
  };
  std::vector<std::size_t> outdeg(n, 0);
  for (VertexId v = 1; v < n; ++v) {
    std::uniform_int_distribution<VertexId> parent(0, v - 1);
    const VertexId u = parent(rng);
    b.edge(u, v, parts());
    ++outdeg[u];
  }
  std::uniform_int_distribution<std::size_t> extra_count(0, n);
  const std::size_t m = extra_count(rng);
  std::uniform_int_distribution<VertexId> any(0, n - 1);
  std::uniform_int_distribution<std::size_t> back(0, 4);
  for (std::size_t i = 0; i < m; ++i) {
    VertexId u = any(rng), w;
    if (std::bernoulli_distribution(0.5)(rng)) {
      const std::size_t k = back(rng);
      w = u >= k ? u - k : 0;
    } else {
      w = any(rng);
      if (w < u && u - w > 4) std::swap(u, w);
    }
    b.edge(u, w, parts());
    ++outdeg[u];
  }
  for (VertexId v = 0; v < n; ++v) {
    for (Pid p = 1; p <= pids; ++p)
      if (extra(rng)) b.enable(v, p);
    if (outdeg[v] == 0) b.terminal(v);
  }
  return b.build();
}

IntMatrix random_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols, int lo, int hi) {
  std::uniform_int_distribution<int> d(lo, hi);
  IntMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m.set(i, j, d(rng));
  return m;
}

ExecComplex projective_plane(std::size_t vo, std::size_t eo, std::size_t co) {
  // Minimal 6-vertex triangulation.
  static const int kTriangles[10][3] = {{0, 1, 2}, {0, 2, 3}, {0, 3, 4}, {0, 4, 5}, {0, 1, 5},
                                        {1, 2, 4}, {2, 3, 5}, {1, 3, 4}, {1, 3, 5}, {2, 4, 5}};
  ExecComplex k;
  for (std::size_t v = 0; v < 6; ++v) k.vertices.push_back(vo + v);
  std::map<std::pair<int, int>, EdgeId> ids;
  for (int i = 0; i < 6; ++i)
    for (int j = i + 1; j < 6; ++j) {
      ids[{i, j}] = eo + k.edges.size();
      k.edges.push_back({eo + k.edges.size(), vo + static_cast<std::size_t>(i),
                         vo + static_cast<std::size_t>(j)});
    }
  for (const auto& t : kTriangles) {
    TwoCell c;
    c.id = co + k.cells.size();
    c.kind = TwoCell::Kind::kTriangle;
    c.vertices = {vo + static_cast<std::size_t>(t[0]), vo + static_cast<std::size_t>(t[1]),
                  vo + static_cast<std::size_t>(t[2]), 0};
    c.edges = {ids.at({t[0], t[1]}), ids.at({t[1], t[2]}), ids.at({t[0], t[2]}), 0};
    k.cells.push_back(c);
  }
  return k;
}

ExecComplex random_complex(std::mt19937_64& rng, std::size_t n, double edge_p, double fill_p,
                           bool with_projective_plane) {
  ExecComplex k;
  std::bernoulli_distribution has_edge(edge_p), fill(fill_p);
  for (std::size_t v = 0; v < n; ++v) k.vertices.push_back(v);
  std::map<std::pair<std::size_t, std::size_t>, EdgeId> ids;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (has_edge(rng)) {
        ids[{i, j}] = k.edges.size();
        k.edges.push_back({k.edges.size(), i, j});
      }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t l = j + 1; l < n; ++l) {
        auto a = ids.find({i, j}), b = ids.find({j, l}), c = ids.find({i, l});
        if (a == ids.end() || b == ids.end() || c == ids.end() || !fill(rng)) continue;
        TwoCell t;
        t.id = k.cells.size();
        t.kind = TwoCell::Kind::kTriangle;
        t.vertices = {i, j, l, 0};
        t.edges = {a->second, b->second, c->second, 0};
        k.cells.push_back(t);
      }
  if (with_projective_plane) {
    const ExecComplex p = projective_plane(n, k.edges.size(), k.cells.size());
    k.vertices.insert(k.vertices.end(), p.vertices.begin(), p.vertices.end());
    k.edges.insert(k.edges.end(), p.edges.begin(), p.edges.end());
    k.cells.insert(k.cells.end(), p.cells.begin(), p.cells.end());
  }
  return k;
}

std::vector<ExecComplex> random_filtration(std::mt19937_64& rng, const ExecComplex& complex,
                                           std::size_t stages) {
  std::uniform_int_distribution<std::size_t> birth(0, stages - 1);
  std::uniform_int_distribution<std::size_t> delay(0, 1);
  std::map<VertexId, std::size_t> vb;
  std::map<EdgeId, std::size_t> eb;
  for (VertexId v : complex.vertices) vb[v] = birth(rng);
  for (const auto& e : complex.edges)
    eb[e.id] = std::min(stages - 1, std::max(vb[e.src], vb[e.dst]) + delay(rng));
  std::vector<std::size_t> cb;
  for (const auto& c : complex.cells) {
    std::size_t b = 0;
    for (std::size_t i = 0; i < c.arity(); ++i) b = std::max(b, eb[c.edges[i]]);
    cb.push_back(std::min(stages - 1, b + delay(rng)));
  }
  std::vector<ExecComplex> out(stages);
  for (std::size_t s = 0; s < stages; ++s) {
    for (VertexId v : complex.vertices)
      if (vb[v] <= s) out[s].vertices.push_back(v);
    for (const auto& e : complex.edges)
      if (eb[e.id] <= s) out[s].edges.push_back(e);
    for (std::size_t i = 0; i < complex.cells.size(); ++i)
      if (cb[i] <= s) out[s].cells.push_back(complex.cells[i]);
  }
  return out;
}

}  // namespace singulock::testing
