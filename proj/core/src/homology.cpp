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

#include "singulock/homology.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <tuple>
#include <unordered_map>

namespace singulock {

namespace {

std::int64_t to_int64(const BigInt& v) {
  if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min())
    throw std::overflow_error("homology coefficient exceeds 64 bits");
  return v.convert_to<std::int64_t>();
}

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[std::max(a, b)] = std::min(a, b);
    return true;
  }
};

std::unordered_map<VertexId, std::size_t> vertex_positions(const ExecComplex& c) {
  std::unordered_map<VertexId, std::size_t> pos;
  for (std::size_t i = 0; i < c.vertices.size(); ++i) pos[c.vertices[i]] = i;
  return pos;
}

std::unordered_map<EdgeId, std::size_t> edge_positions(const ExecComplex& c) {
  std::unordered_map<EdgeId, std::size_t> pos;
  for (std::size_t i = 0; i < c.edges.size(); ++i) pos[c.edges[i].id] = i;
  return pos;
}

// Spanning forest seeded with directed BFS trees, so fundamental cycles of
// non-tree edges follow the direction of exploration where possible.
// Each non-tree edge e yields the cycle e + (tree path from dst(e) to src(e)).
struct CycleBasis {
  std::vector<std::size_t> non_tree;   // edge positions
  std::vector<long> coordinate;        // edge position -> basis index or -1
  std::vector<Chain> cycles;           // one per non-tree edge
};

CycleBasis fundamental_cycles(const ExecComplex& c) {
  const auto vpos = vertex_positions(c);
  const std::size_t n = c.vertices.size();
  const std::size_t m = c.edges.size();

  std::vector<std::vector<std::size_t>> out(n);
  std::vector<std::size_t> src(m), dst(m);
  for (std::size_t i = 0; i < m; ++i) {
    src[i] = vpos.at(c.edges[i].src);
    dst[i] = vpos.at(c.edges[i].dst);
    out[src[i]].push_back(i);
  }

  std::vector<bool> tree(m, false);
  UnionFind uf(n);
  std::vector<bool> seen(n, false);
  for (std::size_t s = 0; s < n; ++s) {
    if (seen[s]) continue;
    seen[s] = true;
    std::deque<std::size_t> queue{s};
    while (!queue.empty()) {
      const std::size_t v = queue.front();
      queue.pop_front();
      for (std::size_t e : out[v]) {
        if (seen[dst[e]]) continue;
        seen[dst[e]] = true;
        tree[e] = true;
        uf.unite(v, dst[e]);
        queue.push_back(dst[e]);
      }
    }
  }
  for (std::size_t e = 0; e < m; ++e)
    if (!tree[e] && uf.unite(src[e], dst[e])) tree[e] = true;

  // Root each tree at its smallest vertex.
  std::vector<std::vector<std::size_t>> adj(n);
  for (std::size_t e = 0; e < m; ++e)
    if (tree[e]) {
      adj[src[e]].push_back(e);
      adj[dst[e]].push_back(e);
    }
  constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> parent(n, kNone), parent_edge(n, kNone), depth(n, 0);
  std::vector<bool> placed(n, false);
  for (std::size_t r = 0; r < n; ++r) {
    if (placed[r]) continue;
    placed[r] = true;
    std::deque<std::size_t> queue{r};
    while (!queue.empty()) {
      const std::size_t v = queue.front();
      queue.pop_front();
      for (std::size_t e : adj[v]) {
        const std::size_t w = src[e] == v ? dst[e] : src[e];
        if (placed[w]) continue;
        placed[w] = true;
        parent[w] = v;
        parent_edge[w] = e;
        depth[w] = depth[v] + 1;
        queue.push_back(w);
      }
    }
  }

  CycleBasis basis;
  basis.coordinate.assign(m, -1);
  for (std::size_t e = 0; e < m; ++e) {
    if (tree[e]) continue;
    basis.coordinate[e] = static_cast<long>(basis.non_tree.size());
    basis.non_tree.push_back(e);
    Chain z;
    auto bump = [&](std::size_t pos, std::int64_t k) {
      const EdgeId id = c.edges[pos].id;
      if ((z[id] += k) == 0) z.erase(id);
    };
    bump(e, 1);
    // Walk x from dst(e) and y from src(e) up to their common ancestor.
    // Path x -> ancestor goes child to parent; ancestor -> y goes parent to child.
    std::size_t x = dst[e], y = src[e];
    while (x != y) {
      if (depth[x] >= depth[y]) {
        const std::size_t pe = parent_edge[x];
        bump(pe, src[pe] == x ? 1 : -1);
        x = parent[x];
      } else {
        const std::size_t pe = parent_edge[y];
        bump(pe, dst[pe] == y ? 1 : -1);
        y = parent[y];
      }
    }
    basis.cycles.push_back(std::move(z));
  }
  return basis;
}

// Coordinates of the cell boundaries in the fundamental basis: k x |F|.
IntMatrix boundary_coordinates(const ExecComplex& c, const CycleBasis& basis) {
  const auto epos = edge_positions(c);
  IntMatrix b(basis.non_tree.size(), c.cells.size());
  for (std::size_t j = 0; j < c.cells.size(); ++j)
    for (const auto& [eid, sign] : c.cells[j].boundary()) {
      const long k = basis.coordinate[epos.at(eid)];
      if (k >= 0) b.add(static_cast<std::size_t>(k), j, sign);
    }
  return b;
}

Chain combine(const CycleBasis& basis, const std::vector<BigInt>& coeffs) {
  std::map<EdgeId, BigInt> acc;
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    if (coeffs[i] == 0) continue;
    for (const auto& [e, k] : basis.cycles[i]) acc[e] += coeffs[i] * k;
  }
  Chain out;
  for (const auto& [e, v] : acc)
    if (v != 0) out[e] = to_int64(v);
  return out;
}

}  // namespace

BoundaryMatrices boundary_matrices(const ExecComplex& complex) {
  const auto vpos = vertex_positions(complex);
  const auto epos = edge_positions(complex);
  BoundaryMatrices m{IntMatrix(complex.vertices.size(), complex.edges.size()),
                     IntMatrix(complex.edges.size(), complex.cells.size())};
  for (std::size_t j = 0; j < complex.edges.size(); ++j) {
    const auto& e = complex.edges[j];
    m.d1.add(vpos.at(e.dst), j, 1);
    m.d1.add(vpos.at(e.src), j, -1);
  }
  for (std::size_t j = 0; j < complex.cells.size(); ++j)
    for (const auto& [eid, sign] : complex.cells[j].boundary()) m.d2.add(epos.at(eid), j, sign);
  return m;
}

std::size_t homology_h0(const ExecComplex& complex) {
  const auto vpos = vertex_positions(complex);
  UnionFind uf(complex.vertices.size());
  std::size_t components = complex.vertices.size();
  for (const auto& e : complex.edges)
    if (uf.unite(vpos.at(e.src), vpos.at(e.dst))) --components;
  return components;
}

std::map<VertexId, std::int64_t> chain_boundary(const ExecComplex& complex, const Chain& chain) {
  std::map<VertexId, std::int64_t> out;
  for (const auto& [eid, k] : chain) {
    const ComplexEdge* e = complex.find_edge(eid);
    if (e == nullptr) throw std::invalid_argument("chain uses an edge outside the complex");
    if ((out[e->dst] += k) == 0) out.erase(e->dst);
    if ((out[e->src] -= k) == 0) out.erase(e->src);
  }
  return out;
}

struct CycleHomology::Impl {
  const ExecComplex* complex = nullptr;
  CycleBasis basis;
  IntMatrix b;
  std::unique_ptr<SmithReduction> snf;
  HomologyResult result;

  std::vector<BigInt> coordinates(const Chain& cycle) const {
    if (!chain_boundary(*complex, cycle).empty())
      throw std::invalid_argument("chain is not a cycle");
    const auto epos = edge_positions(*complex);
    std::vector<BigInt> x(basis.non_tree.size());
    for (const auto& [eid, k] : cycle) {
      const long i = basis.coordinate[epos.at(eid)];
      if (i >= 0) x[static_cast<std::size_t>(i)] += k;
    }
    return x;
  }
};

CycleHomology::CycleHomology(const ExecComplex& complex) : impl_(std::make_unique<Impl>()) {
  impl_->complex = &complex;
  impl_->basis = fundamental_cycles(complex);
  impl_->b = boundary_coordinates(complex, impl_->basis);
  impl_->snf = std::make_unique<SmithReduction>(impl_->b, /*track_left=*/true);

  const auto& snf = *impl_->snf;
  const std::size_t k = impl_->basis.non_tree.size();
  HomologyResult& r = impl_->result;
  r.betti = k - snf.rank();
  for (std::size_t row = 0; row < k; ++row)
    if (!snf.is_pivot_row(row))
      r.generators.push_back({combine(impl_->basis, snf.basis_vector(row)), 0});
  for (const auto& pv : snf.pivots()) {
    if (pv.factor <= 1) continue;
    r.torsion.push_back(to_int64(pv.factor));
    r.generators.push_back({combine(impl_->basis, snf.basis_vector(pv.row)), to_int64(pv.factor)});
  }
  for (const auto& g : r.generators)
    if (g.chain.empty() || !chain_boundary(complex, g.chain).empty())
      throw std::logic_error("homology generator is not a non-zero cycle");
}

CycleHomology::~CycleHomology() = default;
CycleHomology::CycleHomology(CycleHomology&&) noexcept = default;
CycleHomology& CycleHomology::operator=(CycleHomology&&) noexcept = default;

const HomologyResult& CycleHomology::result() const { return impl_->result; }

bool CycleHomology::is_boundary(const Chain& cycle) const {
  return impl_->snf->in_column_space(impl_->coordinates(cycle));
}

std::size_t CycleHomology::rank_in_homology(const std::vector<Chain>& cycles) const {
  const IntMatrix& b = impl_->b;
  IntMatrix joined(b.rows(), b.cols() + cycles.size());
  for (const auto& [idx, v] : b.entries()) joined.set(idx.first, idx.second, v);
  for (std::size_t j = 0; j < cycles.size(); ++j) {
    const auto x = impl_->coordinates(cycles[j]);
    for (std::size_t i = 0; i < x.size(); ++i)
      if (x[i] != 0) joined.set(i, b.cols() + j, x[i]);
  }
  return SmithReduction(joined).rank() - impl_->snf->rank();
}

HomologyResult homology_h1(const ExecComplex& complex) { return CycleHomology(complex).result(); }

// ----------------------------------------------------------------------------
// Persistence over GF(2)

namespace {

struct Simplex {
  std::size_t birth;
  int dim;
  std::size_t id;
  std::vector<std::size_t> faces;  // simplex keys, filled after ordering
};

void check_nested(const ExecComplex& a, const ExecComplex& b, std::size_t stage) {
  auto fail = [&](const std::string& what) {
    throw std::invalid_argument("filtration is not nested at stage " + std::to_string(stage + 1) +
                                ": " + what);
  };
  for (VertexId v : a.vertices)
    if (!b.has_vertex(v)) fail("vertex " + std::to_string(v) + " disappears");
  for (const auto& e : a.edges) {
    const ComplexEdge* f = b.find_edge(e.id);
    if (f == nullptr) fail("edge " + std::to_string(e.id) + " disappears");
    if (f->src != e.src || f->dst != e.dst) fail("edge " + std::to_string(e.id) + " changes");
  }
  for (const auto& cell : a.cells) {
    auto it = std::lower_bound(b.cells.begin(), b.cells.end(), cell.id,
                               [](const TwoCell& x, CellId id) { return x.id < id; });
    if (it == b.cells.end() || it->id != cell.id) fail("cell " + std::to_string(cell.id) + " disappears");
    if (it->kind != cell.kind || it->edges != cell.edges)
      fail("cell " + std::to_string(cell.id) + " changes");
  }
}

// Symmetric difference of sorted index vectors.
void add_mod2(std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
  std::vector<std::size_t> out;
  out.reserve(a.size() + b.size());
  std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  a.swap(out);
}

}  // namespace

std::vector<PersistencePair> persistent_h1(const std::vector<ExecComplex>& filtration) {
  if (filtration.empty()) return {};
  for (std::size_t i = 0; i < filtration.size(); ++i) {
    const std::string problem = filtration[i].check();
    if (!problem.empty())
      throw std::invalid_argument("filtration stage " + std::to_string(i) + ": " + problem);
    if (i + 1 < filtration.size()) check_nested(filtration[i], filtration[i + 1], i);
  }

  // Births, from the first stage containing each simplex.
  std::map<VertexId, std::size_t> vbirth;
  std::map<EdgeId, std::size_t> ebirth;
  std::map<CellId, std::size_t> cbirth;
  for (std::size_t i = 0; i < filtration.size(); ++i) {
    for (VertexId v : filtration[i].vertices) vbirth.try_emplace(v, i);
    for (const auto& e : filtration[i].edges) ebirth.try_emplace(e.id, i);
    for (const auto& c : filtration[i].cells) cbirth.try_emplace(c.id, i);
  }
  const ExecComplex& last = filtration.back();

  std::vector<Simplex> order;
  for (const auto& [v, b] : vbirth) order.push_back({b, 0, v, {}});
  for (const auto& [e, b] : ebirth) order.push_back({b, 1, e, {}});
  for (const auto& [c, b] : cbirth) order.push_back({b, 2, c, {}});
  std::sort(order.begin(), order.end(), [](const Simplex& x, const Simplex& y) {
    return std::tie(x.birth, x.dim, x.id) < std::tie(y.birth, y.dim, y.id);
  });
  std::map<std::pair<int, std::size_t>, std::size_t> index;
  for (std::size_t i = 0; i < order.size(); ++i) index[{order[i].dim, order[i].id}] = i;

  std::map<CellId, const TwoCell*> cells;
  for (const auto& c : last.cells) cells[c.id] = &c;
  std::vector<std::vector<std::size_t>> columns(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    auto& col = columns[i];
    if (order[i].dim == 1) {
      const ComplexEdge* e = last.find_edge(order[i].id);
      if (e->src != e->dst) col = {index.at({0, e->src}), index.at({0, e->dst})};
    } else if (order[i].dim == 2) {
      for (const auto& [eid, sign] : cells.at(order[i].id)->boundary()) {
        (void)sign;
        add_mod2(col, {index.at({1, eid})});
      }
    }
    std::sort(col.begin(), col.end());
  }

  // Standard reduction; V columns are tracked for edges to recover cycles.
  constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> owner_of_low(order.size(), kNone);
  std::vector<std::vector<std::size_t>> v_cols(order.size());
  std::vector<PersistencePair> pairs;
  std::map<std::size_t, std::size_t> pair_of_edge;  // simplex index -> pair index
  for (std::size_t j = 0; j < order.size(); ++j) {
    v_cols[j] = {j};
    auto& col = columns[j];
    while (!col.empty() && owner_of_low[col.back()] != kNone) {
      const std::size_t k = owner_of_low[col.back()];
      add_mod2(col, columns[k]);
      if (order[j].dim == 1) add_mod2(v_cols[j], v_cols[k]);
    }
    if (!col.empty()) {
      owner_of_low[col.back()] = j;
      if (order[j].dim == 2) {
        const std::size_t creator = col.back();
        pairs[pair_of_edge.at(creator)].death = order[j].birth;
      }
    } else if (order[j].dim == 1) {
      PersistencePair p;
      p.birth = order[j].birth;
      for (std::size_t k : v_cols[j]) p.representative.push_back(order[k].id);
      std::sort(p.representative.begin(), p.representative.end());
      pair_of_edge[j] = pairs.size();
      pairs.push_back(std::move(p));
    }
    if (order[j].dim != 1) v_cols[j].clear();
  }
  return pairs;
}

std::string persistence_csv(const std::vector<PersistencePair>& pairs) {
  std::ostringstream os;
  os << "birth,death,edges\n";
  for (const auto& p : pairs) {
    os << p.birth << ',';
    if (p.death)
      os << *p.death;
    else
      os << "inf";
    os << ',';
    for (std::size_t i = 0; i < p.representative.size(); ++i)
      os << (i ? ";" : "") << p.representative[i];
    os << '\n';
  }
  return os.str();
}

// ----------------------------------------------------------------------------
// Generator walks

std::optional<std::vector<EdgeId>> directed_walk(const ExecComplex& complex, const Chain& chain) {
  if (chain.empty()) return std::nullopt;
  std::map<VertexId, std::vector<EdgeId>> adj;
  std::map<VertexId, std::int64_t> balance;
  std::size_t total = 0;
  for (const auto& [eid, k] : chain) {
    if (k <= 0) return std::nullopt;
    const ComplexEdge* e = complex.find_edge(eid);
    if (e == nullptr) return std::nullopt;
    for (std::int64_t i = 0; i < k; ++i) adj[e->src].push_back(eid);
    balance[e->src] -= k;
    balance[e->dst] += k;
    total += static_cast<std::size_t>(k);
  }
  for (const auto& [v, b] : balance)
    if (b != 0) return std::nullopt;

  // Hierholzer from the source of the smallest edge.
  std::map<VertexId, std::size_t> next;
  std::vector<std::pair<VertexId, std::optional<EdgeId>>> stack;
  stack.push_back({complex.find_edge(chain.begin()->first)->src, std::nullopt});
  std::vector<EdgeId> circuit;
  while (!stack.empty()) {
    const VertexId v = stack.back().first;
    auto& out = adj[v];
    std::size_t& i = next[v];
    if (i < out.size()) {
      const EdgeId e = out[i++];
      stack.push_back({complex.find_edge(e)->dst, e});
    } else {
      if (stack.back().second) circuit.push_back(*stack.back().second);
      stack.pop_back();
    }
  }
  if (circuit.size() != total) return std::nullopt;  // support not connected
  std::reverse(circuit.begin(), circuit.end());
  return circuit;
}

std::vector<CycleWalk> generator_cycles(const ExecComplex& complex, const HomologyResult& result) {
  std::vector<CycleWalk> out;
  for (const auto& g : result.generators) {
    CycleWalk w;
    w.chain = g.chain;
    auto walk = directed_walk(complex, g.chain);
    if (!walk) {
      Chain negated;
      for (const auto& [e, k] : g.chain) negated[e] = -k;
      walk = directed_walk(complex, negated);
      if (walk) w.chain = negated;
    }
    if (walk) {
      w.directed = true;
      w.walk = std::move(*walk);
    }
    out.push_back(std::move(w));
  }
  return out;
}

}  // namespace singulock
