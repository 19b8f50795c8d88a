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

#include "singulock/oracle.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <numeric>
#include <optional>
#include <utility>

namespace singulock::oracle {

namespace {

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

void check_size(const ExecutionGraph& g, std::size_t cap, const char* who) {
  if (g.num_vertices() > cap)
    throw OracleRefusal(std::string(who) + ": graph has " + std::to_string(g.num_vertices()) +
                        " vertices, cap is " + std::to_string(cap));
}

std::set<VertexId> reachable(const ExecutionGraph& g, VertexId from) {
  std::set<VertexId> seen{from};
  std::vector<VertexId> todo{from};
  while (!todo.empty()) {
    VertexId v = todo.back();
    todo.pop_back();
    for (EdgeId e : g.out_edges(v))
      if (seen.insert(g.edge(e).dst).second) todo.push_back(g.edge(e).dst);
  }
  return seen;
}

bool enabled_at(const Vertex& v, Pid p) {
  for (std::size_t i = 0; i < v.state.processes.size(); ++i)
    if (v.state.processes[i].pid == p && v.enabled[i]) return true;
  return false;
}

std::set<Pid> all_pids(const Vertex& v) {
  std::set<Pid> out;
  for (const auto& p : v.state.processes) out.insert(p.pid);
  return out;
}

using EdgeSet = std::vector<bool>;  // indexed by edge id

struct Region {
  std::set<VertexId> vertices;
  std::set<EdgeId> edges;
};

Region region_of(const ExecutionGraph& g, const EdgeSet& es) {
  Region r;
  for (EdgeId e = 0; e < es.size(); ++e)
    if (es[e]) {
      r.edges.insert(e);
      r.vertices.insert(g.edge(e).src);
      r.vertices.insert(g.edge(e).dst);
    }
  return r;
}

bool fires(const ExecutionGraph& g, const Region& r, Pid p) {
  for (EdgeId e : r.edges) {
    const auto& ps = g.edge(e).label.participants;
    if (std::find(ps.begin(), ps.end(), p) != ps.end()) return true;
  }
  return false;
}

bool weak_ok(const ExecutionGraph& g, const Region& r) {
  std::set<Pid> candidates;
  for (VertexId v : r.vertices) {
    auto ps = all_pids(g.vertex(v));
    candidates.insert(ps.begin(), ps.end());
  }
  for (Pid p : candidates) {
    bool always = true;
    for (VertexId v : r.vertices) always = always && enabled_at(g.vertex(v), p);
    if (always && !fires(g, r, p)) return false;
  }
  return true;
}

bool strong_ok(const ExecutionGraph& g, const Region& r) {
  for (VertexId v : r.vertices)
    for (Pid p : all_pids(g.vertex(v)))
      if (enabled_at(g.vertex(v), p) && !fires(g, r, p)) return false;
  return true;
}

// Simple cycles as edge lists, each reported once from its smallest vertex.
std::vector<std::vector<EdgeId>> simple_cycles(const ExecutionGraph& g, std::size_t cap,
                                               std::size_t& nodes) {
  std::vector<std::vector<EdgeId>> cycles;
  std::vector<EdgeId> path;
  std::vector<bool> on_path(g.num_vertices(), false);
  for (VertexId s = 0; s < g.num_vertices(); ++s) {
    auto dfs = [&](auto& self, VertexId v) -> void {
      ++nodes;
      for (EdgeId e : g.out_edges(v)) {
        const VertexId w = g.edge(e).dst;
        if (w < s) continue;
        if (w == s) {
          path.push_back(e);
          cycles.push_back(path);
          path.pop_back();
          if (cycles.size() > cap)
            throw OracleRefusal("lasso oracle: more than " + std::to_string(cap) + " simple cycles");
          continue;
        }
        if (on_path[w]) continue;
        on_path[w] = true;
        path.push_back(e);
        self(self, w);
        path.pop_back();
        on_path[w] = false;
      }
    };
    on_path[s] = true;
    dfs(dfs, s);
    on_path[s] = false;
  }
  return cycles;
}

}  // namespace

OracleVerdict make_verdict(bool agrees, std::string payload, Cost cost) {
  if (!agrees && payload.empty()) payload = "disagreement (no detail recorded)";
  return {agrees, std::move(payload), cost};
}

LassoResult lasso_fair_oracle(const ExecutionGraph& g, const FairnessSpec& spec,
                              const LassoOptions& options) {
  Stopwatch clock;
  check_size(g, options.max_vertices, "lasso oracle");
  LassoResult out;
  const auto cycles = simple_cycles(g, options.max_cycles, out.cost.nodes);
  out.simple_cycles = cycles.size();

  // Group cycles that share a vertex (transitively).
  std::vector<std::size_t> group(cycles.size());
  std::iota(group.begin(), group.end(), 0);
  auto find = [&](std::size_t x) {
    while (group[x] != x) x = group[x];
    return x;
  };
  std::map<VertexId, std::size_t> first_cycle_at;
  for (std::size_t i = 0; i < cycles.size(); ++i)
    for (EdgeId e : cycles[i]) {
      auto [it, inserted] = first_cycle_at.try_emplace(g.edge(e).src, i);
      if (!inserted) {
        const std::size_t a = find(i), b = find(it->second);
        if (a != b) group[std::max(a, b)] = std::min(a, b);
      }
    }
  std::map<std::size_t, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < cycles.size(); ++i) groups[find(i)].push_back(i);

  auto to_set = [&](const std::vector<EdgeId>& c) {
    EdgeSet es(g.num_edges(), false);
    for (EdgeId e : c) es[e] = true;
    return es;
  };
  auto merge = [](EdgeSet a, const EdgeSet& b) {
    for (std::size_t i = 0; i < a.size(); ++i) a[i] = a[i] || b[i];
    return a;
  };

  std::set<VertexId> fair_targets;
  for (const auto& [root, members] : groups) {
    std::optional<EdgeSet> found;
    if (spec.mode == FairnessSpec::Mode::kWeak) {
      EdgeSet all(g.num_edges(), false);
      for (std::size_t i : members) all = merge(all, to_set(cycles[i]));
      if (weak_ok(g, region_of(g, all))) found = all;
    } else {
      // Every union of cycles that stays connected through shared vertices.
      std::set<EdgeSet> seen;
      std::vector<EdgeSet> todo;
      for (std::size_t i : members) {
        EdgeSet es = to_set(cycles[i]);
        if (seen.insert(es).second) todo.push_back(es);
      }
      while (!todo.empty() && !found) {
        EdgeSet cur = todo.back();
        todo.pop_back();
        ++out.cost.nodes;
        const Region r = region_of(g, cur);
        if (strong_ok(g, r)) {
          found = cur;
          break;
        }
        for (std::size_t i : members) {
          bool touches = false, adds = false;
          for (EdgeId e : cycles[i]) {
            touches = touches || r.vertices.count(g.edge(e).src);
            adds = adds || !cur[e];
          }
          if (!touches || !adds) continue;
          EdgeSet next = merge(cur, to_set(cycles[i]));
          if (seen.insert(next).second) {
            if (seen.size() > options.max_unions)
              throw OracleRefusal("lasso oracle: more than " + std::to_string(options.max_unions) +
                                  " cycle unions");
            todo.push_back(std::move(next));
          }
        }
      }
    }
    if (found) {
      const Region r = region_of(g, *found);
      fair_targets.insert(r.vertices.begin(), r.vertices.end());
      out.fair_cycles.emplace_back(r.edges.begin(), r.edges.end());
    }
  }

  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    bool fair = false;
    for (VertexId w : reachable(g, g.edge(e).dst)) {
      ++out.cost.nodes;
      const Vertex& vw = g.vertex(w);
      const bool dead = g.out_edges(w).empty() && (spec.fault_anchors || !vw.cls.fault());
      if (dead || fair_targets.count(w)) {
        fair = true;
        break;
      }
    }
    if (fair) out.fair_edges.insert(e);
  }
  out.cost.elapsed_ms = clock.ms();
  return out;
}

// ----------------------------------------------------------------------------

DenseSnfResult dense_snf_oracle(const IntMatrix& m) {
  if (m.rows() > 64 || m.cols() > 64) throw OracleRefusal("dense SNF oracle: matrix exceeds 64x64");
  const std::size_t R = m.rows(), C = m.cols();
  std::vector<std::vector<BigInt>> a(R, std::vector<BigInt>(C));
  for (const auto& [idx, v] : m.entries()) a[idx.first][idx.second] = v;

  DenseSnfResult out;
  for (std::size_t t = 0; t < std::min(R, C); ++t) {
    for (;;) {
      // Smallest non-zero entry of the trailing block goes to (t, t).
      std::size_t pr = R, pc = C;
      for (std::size_t i = t; i < R; ++i)
        for (std::size_t j = t; j < C; ++j)
          if (a[i][j] != 0 && (pr == R || abs(a[i][j]) < abs(a[pr][pc]))) {
            pr = i;
            pc = j;
          }
      if (pr == R) break;
      std::swap(a[t], a[pr]);
      for (std::size_t i = 0; i < R; ++i) std::swap(a[i][t], a[i][pc]);

      bool dirty = false;
      for (std::size_t i = t + 1; i < R; ++i) {
        const BigInt q = a[i][t] / a[t][t];
        for (std::size_t j = t; j < C; ++j) a[i][j] -= q * a[t][j];
        dirty = dirty || a[i][t] != 0;
      }
      for (std::size_t j = t + 1; j < C; ++j) {
        const BigInt q = a[t][j] / a[t][t];
        for (std::size_t i = t; i < R; ++i) a[i][j] -= q * a[i][t];
        dirty = dirty || a[t][j] != 0;
      }
      if (dirty) continue;
      // Divisibility: fold a bad row into row t and go again.
      std::size_t bad = R;
      for (std::size_t i = t + 1; i < R && bad == R; ++i)
        for (std::size_t j = t + 1; j < C; ++j)
          if (a[i][j] % a[t][t] != 0) {
            bad = i;
            break;
          }
      if (bad == R) break;
      for (std::size_t j = t; j < C; ++j) a[t][j] += a[bad][j];
    }
    if (a[t][t] == 0) break;
    out.factors.push_back(abs(a[t][t]));
  }
  out.rank = out.factors.size();
  return out;
}

// ----------------------------------------------------------------------------

std::set<VertexId> inevitability_oracle(const ExecutionGraph& g, const std::vector<VertexId>& trap,
                                        std::size_t max_vertices, std::size_t max_nodes) {
  check_size(g, max_vertices, "inevitability oracle");
  const std::set<VertexId> in_trap(trap.begin(), trap.end());
  std::size_t nodes = 0;
  std::vector<bool> on_path(g.num_vertices(), false);

  // True iff every maximal path continuing from v enters the trap.
  auto all_paths_enter = [&](auto& self, VertexId v) -> bool {
    if (++nodes > max_nodes) throw OracleRefusal("inevitability oracle: node cap exceeded");
    if (in_trap.count(v)) return true;
    if (g.out_edges(v).empty()) return false;
    on_path[v] = true;
    bool ok = true;
    for (EdgeId e : g.out_edges(v)) {
      const VertexId w = g.edge(e).dst;
      // Closing a cycle outside the trap gives an infinite path that avoids it.
      if (on_path[w] || !self(self, w)) {
        ok = false;
        break;
      }
    }
    on_path[v] = false;
    return ok;
  };

  std::set<VertexId> out;
  for (VertexId v = 0; v < g.num_vertices(); ++v)
    if (all_paths_enter(all_paths_enter, v)) out.insert(v);
  return out;
}

// ----------------------------------------------------------------------------

namespace {

// Whether b is obtained from a by swapping one side of a filled cell.
bool one_flip_apart(const std::vector<EdgeId>& a, const std::vector<EdgeId>& b,
                    const ExecComplex& complex) {
  std::size_t p = 0;
  while (p < a.size() && p < b.size() && a[p] == b[p]) ++p;
  std::size_t s = 0;
  while (s < a.size() - p && s < b.size() - p && a[a.size() - 1 - s] == b[b.size() - 1 - s]) ++s;
  const std::vector<EdgeId> x(a.begin() + static_cast<long>(p), a.end() - static_cast<long>(s));
  const std::vector<EdgeId> y(b.begin() + static_cast<long>(p), b.end() - static_cast<long>(s));
  for (const auto& c : complex.cells) {
    std::vector<EdgeId> side1, side2;
    if (c.kind == TwoCell::Kind::kSquare) {
      side1 = {c.edges[0], c.edges[1]};
      side2 = {c.edges[2], c.edges[3]};
    } else {
      side1 = {c.edges[0], c.edges[1]};
      side2 = {c.edges[2]};
    }
    if ((x == side1 && y == side2) || (x == side2 && y == side1)) return true;
  }
  return false;
}

}  // namespace

FlipOracleResult flip_class_oracle(const ExecutionGraph& g, const ExecComplex& complex,
                                   VertexId origin, std::size_t depth, std::size_t max_walks) {
  Stopwatch clock;
  FlipOracleResult out;
  std::vector<std::vector<EdgeId>> walks;
  std::vector<bool> maximal;
  std::vector<EdgeId> cur;
  auto dfs = [&](auto& self, VertexId v) -> void {
    if (walks.size() >= max_walks) throw OracleRefusal("flip oracle: walk cap exceeded");
    if (cur.size() < depth && !g.vertex(v).expanded)
      throw OracleRefusal("flip oracle: walk leaves the explored graph");
    walks.push_back(cur);
    maximal.push_back(cur.size() == depth || g.out_edges(v).empty());
    if (cur.size() == depth) return;
    for (EdgeId e : g.out_edges(v)) {
      cur.push_back(e);
      self(self, g.edge(e).dst);
      cur.pop_back();
    }
  };
  dfs(dfs, origin);
  out.walk_count = walks.size();

  std::vector<std::size_t> parent(walks.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t i = 0; i < walks.size(); ++i)
    for (std::size_t j = i + 1; j < walks.size(); ++j) {
      const std::size_t li = walks[i].size(), lj = walks[j].size();
      if (li > lj + 1 || lj > li + 1) continue;
      ++out.cost.nodes;
      if (one_flip_apart(walks[i], walks[j], complex)) parent[find(i)] = find(j);
    }
  std::set<std::size_t> classes;
  for (std::size_t i = 0; i < walks.size(); ++i)
    if (maximal[i]) classes.insert(find(i));
  out.class_count = classes.size();
  out.cost.elapsed_ms = clock.ms();
  return out;
}

std::set<VertexId> persistent_reach_oracle(const ExecutionGraph& g, VertexId v,
                                           std::size_t max_vertices) {
  check_size(g, max_vertices, "persistent reach oracle");
  const auto from_v = reachable(g, v);
  std::set<VertexId> acc = from_v;
  for (VertexId w : from_v) {
    const auto r = reachable(g, w);
    std::set<VertexId> both;
    std::set_intersection(acc.begin(), acc.end(), r.begin(), r.end(),
                          std::inserter(both, both.begin()));
    acc.swap(both);
  }
  return acc;
}

}  // namespace singulock::oracle
