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

#include "singulock/semantics.hpp"

#include <algorithm>
#include <cstring>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

namespace singulock {

const Process* GlobalState::find(Pid pid) const {
  for (const auto& p : processes)
    if (p.pid == pid) return &p;
  return nullptr;
}

bool TransitionLabel::involves(Pid pid) const {
  return std::binary_search(participants.begin(), participants.end(), pid);
}

const char* to_string(StateClass::Kind kind) {
  switch (kind) {
    case StateClass::Kind::kTerminal: return "terminal";
    case StateClass::Kind::kFault: return "fault";
    case StateClass::Kind::kRunning: return "running";
  }
  return "running";
}

bool Vertex::is_enabled(Pid pid) const {
  for (std::size_t i = 0; i < state.processes.size() && i < enabled.size(); ++i)
    if (state.processes[i].pid == pid) return enabled[i];
  return false;
}

std::vector<Pid> Vertex::enabled_pids() const {
  std::vector<Pid> out;
  for (std::size_t i = 0; i < state.processes.size() && i < enabled.size(); ++i)
    if (enabled[i]) out.push_back(state.processes[i].pid);
  return out;
}

ExecutionGraph::ExecutionGraph(std::vector<Vertex> vertices, std::vector<GraphEdge> edges,
                               VertexId root, bool truncated)
    : vertices_(std::move(vertices)),
      edges_(std::move(edges)),
      root_(root),
      truncated_(truncated),
      out_(vertices_.size()),
      in_(vertices_.size()) {
  for (EdgeId e = 0; e < edges_.size(); ++e) {
    if (edges_[e].src >= vertices_.size() || edges_[e].dst >= vertices_.size())
      throw std::out_of_range("edge endpoint outside the vertex set");
    out_[edges_[e].src].push_back(e);
    in_[edges_[e].dst].push_back(e);
  }
}

// ----------------------------------------------------------------------------
// Transition rules

namespace {

// Unfolds calls and splits parallel compositions. Guarded recursion bounds
// the number of unfoldings; the limit only trips on unvalidated programs.
void components(const Program& program, TermPtr t, std::vector<TermPtr>& out) {
  for (int unfold = 0;; ++unfold) {
    if (unfold > 10000) throw std::logic_error("unguarded recursion while unfolding");
    if (const auto* call = std::get_if<Call>(&t->node)) {
      auto it = program.definitions.find(call->name);
      if (it == program.definitions.end())
        throw std::logic_error("call to undefined process '" + call->name + "'");
      t = it->second.body;
      continue;
    }
    if (const auto* par = std::get_if<Par>(&t->node)) {
      components(program, par->left, out);
      components(program, par->right, out);
      return;
    }
    out.push_back(std::move(t));
    return;
  }
}

Pid max_pid(const GlobalState& s) {
  Pid m = 0;
  for (const auto& p : s.processes) m = std::max(m, p.pid);
  return m;
}

// Replaces the term of process `index` by `next`, spawning fresh pids for any
// additional parallel components.
void install(const Program& program, GlobalState& s, std::size_t index, const TermPtr& next) {
  std::vector<TermPtr> parts;
  components(program, next, parts);
  Pid fresh = max_pid(s);
  s.processes[index].term = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) s.processes.push_back({++fresh, parts[i]});
}

TransitionLabel label(std::vector<Pid> pids, std::string description) {
  std::sort(pids.begin(), pids.end());
  return {std::move(pids), std::move(description)};
}

std::size_t capacity(const Program& program, const std::string& channel) {
  auto it = program.channels.find(channel);
  return it == program.channels.end() ? 0 : it->second.capacity;
}

}  // namespace

GlobalState initial_state(const Program& program) {
  GlobalState s;
  if (program.main) {
    std::vector<TermPtr> parts;
    components(program, program.main, parts);
    Pid pid = 0;
    for (auto& t : parts) s.processes.push_back({++pid, std::move(t)});
  }
  for (const auto& [name, decl] : program.channels)
    if (decl.capacity > 0) s.channels[name];
  for (const auto& [name, _] : program.resources) s.locks[name] = kFree;
  return s;
}

std::vector<Successor> step(const Program& program, const GlobalState& state) {
  std::vector<Successor> out;
  if (state.fault) return out;

  for (std::size_t i = 0; i < state.processes.size(); ++i) {
    const Process& proc = state.processes[i];
    const Term& t = *proc.term;

    if (const auto* choice = std::get_if<Choice>(&t.node)) {
      for (const TermPtr& branch : {choice->left, choice->right}) {
        GlobalState next = state;
        install(program, next, i, branch);
        out.push_back({label({proc.pid}, "tau"), std::move(next)});
      }
      continue;
    }
    const auto* prefix = std::get_if<Prefix>(&t.node);
    if (!prefix) continue;  // skip

    const auto& action = prefix->action.kind;
    if (std::holds_alternative<Tau>(action)) {
      GlobalState next = state;
      install(program, next, i, prefix->body);
      out.push_back({label({proc.pid}, "tau"), std::move(next)});
    } else if (const auto* send = std::get_if<Send>(&action)) {
      const std::string v = std::to_string(send->value);
      if (capacity(program, send->channel) == 0) {
        for (std::size_t j = 0; j < state.processes.size(); ++j) {
          if (j == i) continue;
          const auto* rp = std::get_if<Prefix>(&state.processes[j].term->node);
          if (!rp) continue;
          const auto* recv = std::get_if<Receive>(&rp->action.kind);
          if (!recv || recv->channel != send->channel) continue;
          GlobalState next = state;
          next.store[recv->variable] = send->value;
          install(program, next, i, prefix->body);
          install(program, next, j, rp->body);
          out.push_back({label({proc.pid, state.processes[j].pid},
                               "sync(" + send->channel + "," + v + ")"),
                         std::move(next)});
        }
      } else {
        const auto& fifo = state.channels.at(send->channel);
        if (fifo.size() < capacity(program, send->channel)) {
          GlobalState next = state;
          next.channels[send->channel].push_back(send->value);
          install(program, next, i, prefix->body);
          out.push_back({label({proc.pid}, "put(" + send->channel + "," + v + ")"),
                         std::move(next)});
        }
      }
    } else if (const auto* recv = std::get_if<Receive>(&action)) {
      if (capacity(program, recv->channel) == 0) continue;  // handled by the sender
      const auto& fifo = state.channels.at(recv->channel);
      if (fifo.empty()) continue;
      GlobalState next = state;
      const Value v = fifo.front();
      next.channels[recv->channel].pop_front();
      next.store[recv->variable] = v;
      install(program, next, i, prefix->body);
      out.push_back({label({proc.pid}, "get(" + recv->channel + "," + std::to_string(v) +
                                           "->" + recv->variable + ")"),
                     std::move(next)});
    } else if (const auto* acq = std::get_if<Acquire>(&action)) {
      if (state.locks.at(acq->resource) != kFree) continue;
      GlobalState next = state;
      next.locks[acq->resource] = proc.pid;
      install(program, next, i, prefix->body);
      out.push_back({label({proc.pid}, "acq(" + acq->resource + ")"), std::move(next)});
    } else if (const auto* rel = std::get_if<Release>(&action)) {
      GlobalState next = state;
      if (state.locks.at(rel->resource) != proc.pid) {
        // The offender keeps its term; the fault tag makes the state absorbing.
        next.fault = "bad-release";
        out.push_back({label({proc.pid}, "bad-rel(" + rel->resource + ")"), std::move(next)});
        continue;
      }
      next.locks[rel->resource] = kFree;
      install(program, next, i, prefix->body);
      out.push_back({label({proc.pid}, "rel(" + rel->resource + ")"), std::move(next)});
    }
  }
  return out;
}

StateClass classify_state(const Program&, const GlobalState& state) {
  if (state.fault) return {StateClass::Kind::kFault, *state.fault};
  const bool done = std::all_of(state.processes.begin(), state.processes.end(), [](const auto& p) {
    return std::holds_alternative<Skip>(p.term->node);
  });
  return {done ? StateClass::Kind::kTerminal : StateClass::Kind::kRunning, {}};
}

// ----------------------------------------------------------------------------
// Canonical encoding

namespace {

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_i64(std::string& out, std::int64_t v) {
  auto u = static_cast<std::uint64_t>(v);
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((u >> (8 * i)) & 0xff));
}

void put_str(std::string& out, const std::string& s) {
  put_u32(out, static_cast<std::uint32_t>(s.size()));
  out += s;
}

void put_term(std::string& out, const Term& t) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Skip>) {
          out.push_back('S');
        } else if constexpr (std::is_same_v<T, Prefix>) {
          out.push_back('P');
          std::visit(
              [&](const auto& a) {
                using A = std::decay_t<decltype(a)>;
                if constexpr (std::is_same_v<A, Send>) {
                  out.push_back('s');
                  put_str(out, a.channel);
                  put_i64(out, a.value);
                } else if constexpr (std::is_same_v<A, Receive>) {
                  out.push_back('r');
                  put_str(out, a.channel);
                  put_str(out, a.variable);
                } else if constexpr (std::is_same_v<A, Acquire>) {
                  out.push_back('a');
                  put_str(out, a.resource);
                } else if constexpr (std::is_same_v<A, Release>) {
                  out.push_back('l');
                  put_str(out, a.resource);
                } else {
                  out.push_back('t');
                }
              },
              n.action.kind);
          put_term(out, *n.body);
        } else if constexpr (std::is_same_v<T, Choice>) {
          out.push_back('C');
          put_term(out, *n.left);
          put_term(out, *n.right);
        } else if constexpr (std::is_same_v<T, Par>) {
          out.push_back('R');
          put_term(out, *n.left);
          put_term(out, *n.right);
        } else {
          out.push_back('K');
          put_str(out, n.name);
        }
      },
      t.node);
}

}  // namespace

std::string canonical_key(const GlobalState& state) {
  std::string out = "SLK1";
  put_u32(out, static_cast<std::uint32_t>(state.processes.size()));
  for (const auto& p : state.processes) {
    put_u32(out, p.pid);
    put_term(out, *p.term);
  }
  put_u32(out, static_cast<std::uint32_t>(state.store.size()));
  for (const auto& [name, v] : state.store) {
    put_str(out, name);
    put_i64(out, v);
  }
  put_u32(out, static_cast<std::uint32_t>(state.channels.size()));
  for (const auto& [name, fifo] : state.channels) {
    put_str(out, name);
    put_u32(out, static_cast<std::uint32_t>(fifo.size()));
    for (Value v : fifo) put_i64(out, v);
  }
  put_u32(out, static_cast<std::uint32_t>(state.locks.size()));
  for (const auto& [name, owner] : state.locks) {
    put_str(out, name);
    put_u32(out, owner);
  }
  out.push_back(state.fault ? '\1' : '\0');
  if (state.fault) put_str(out, *state.fault);
  return out;
}

// ----------------------------------------------------------------------------
// Exploration

ExecutionGraph explore(const Program& program, const ExploreBounds& bounds) {
  std::vector<Vertex> vertices;
  std::vector<GraphEdge> edges;
  std::unordered_map<std::string, VertexId> index;
  bool truncated = false;

  auto add = [&](GlobalState s, std::size_t depth) {
    Vertex v;
    v.cls = classify_state(program, s);
    v.depth = depth;
    v.state = std::move(s);
    index.emplace(canonical_key(v.state), vertices.size());
    vertices.push_back(std::move(v));
    return vertices.size() - 1;
  };
  add(initial_state(program), 0);

  for (VertexId v = 0; v < vertices.size(); ++v) {
    auto succs = step(program, vertices[v].state);
    {
      Vertex& cur = vertices[v];
      cur.enabled.assign(cur.state.processes.size(), false);
      for (const auto& s : succs)
        for (std::size_t i = 0; i < cur.state.processes.size(); ++i)
          if (s.label.involves(cur.state.processes[i].pid)) cur.enabled[i] = true;
      if (cur.depth >= bounds.max_depth && !succs.empty()) {
        cur.expanded = false;
        truncated = true;
        continue;
      }
    }
    const std::size_t depth = vertices[v].depth;
    for (auto& s : succs) {
      auto key = canonical_key(s.state);
      auto it = index.find(key);
      VertexId dst;
      if (it != index.end()) {
        dst = it->second;
      } else if (vertices.size() >= bounds.max_states) {
        vertices[v].expanded = false;
        truncated = true;
        continue;
      } else {
        dst = add(std::move(s.state), depth + 1);
      }
      edges.push_back({v, std::move(s.label), dst});
    }
  }
  return ExecutionGraph(std::move(vertices), std::move(edges), 0, truncated);
}

// ----------------------------------------------------------------------------
// Reachability

std::vector<VertexId> reach_set(const ExecutionGraph& graph, VertexId v) {
  std::vector<bool> seen(graph.num_vertices(), false);
  std::vector<VertexId> queue{v};
  seen[v] = true;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    for (EdgeId e : graph.out_edges(queue[head])) {
      VertexId w = graph.edge(e).dst;
      if (!seen[w]) {
        seen[w] = true;
        queue.push_back(w);
      }
    }
  }
  std::sort(queue.begin(), queue.end());
  return queue;
}

bool preorder_leq(const ExecutionGraph& graph, VertexId a, VertexId b) {
  auto r = reach_set(graph, a);
  return std::binary_search(r.begin(), r.end(), b);
}

Condensation condensation(const ExecutionGraph& graph) {
  const std::size_t n = graph.num_vertices();
  constexpr std::size_t kUnset = static_cast<std::size_t>(-1);
  std::vector<std::size_t> index(n, kUnset), low(n, 0), raw(n, kUnset);
  std::vector<bool> on_stack(n, false);
  std::vector<VertexId> stack;
  std::size_t counter = 0, comps = 0;

  // Iterative Tarjan: frames hold (vertex, next out-edge position).
  std::vector<std::pair<VertexId, std::size_t>> frames;
  for (VertexId start = 0; start < n; ++start) {
    if (index[start] != kUnset) continue;
    frames.push_back({start, 0});
    index[start] = low[start] = counter++;
    stack.push_back(start);
    on_stack[start] = true;
    while (!frames.empty()) {
      auto& [v, pos] = frames.back();
      const auto& out = graph.out_edges(v);
      if (pos < out.size()) {
        VertexId w = graph.edge(out[pos++]).dst;
        if (index[w] == kUnset) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          frames.push_back({w, 0});
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      if (low[v] == index[v]) {
        for (;;) {
          VertexId w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          raw[w] = comps;
          if (w == v) break;
        }
        ++comps;
      }
      VertexId done = v;
      frames.pop_back();
      if (!frames.empty()) {
        VertexId parent = frames.back().first;
        low[parent] = std::min(low[parent], low[done]);
      }
    }
  }

  // Renumber so that SCC ids follow the smallest member vertex.
  std::vector<std::size_t> remap(comps, kUnset);
  std::size_t next = 0;
  for (VertexId v = 0; v < n; ++v)
    if (remap[raw[v]] == kUnset) remap[raw[v]] = next++;

  Condensation c;
  c.scc_of.resize(n);
  c.members.resize(comps);
  c.internal_edges.assign(comps, 0);
  c.dag.resize(comps);
  for (VertexId v = 0; v < n; ++v) {
    c.scc_of[v] = remap[raw[v]];
    c.members[c.scc_of[v]].push_back(v);
  }
  for (const auto& e : graph.edges()) {
    SccId a = c.scc_of[e.src], b = c.scc_of[e.dst];
    if (a == b)
      ++c.internal_edges[a];
    else
      c.dag[a].push_back(b);
  }
  for (auto& succ : c.dag) {
    std::sort(succ.begin(), succ.end());
    succ.erase(std::unique(succ.begin(), succ.end()), succ.end());
  }
  return c;
}

}  // namespace singulock
