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

#include "singulock/report.hpp"

#include <algorithm>
#include <sstream>

#include "json.hpp"
#include "singulock/version.hpp"

namespace singulock {

using Json = nlohmann::ordered_json;

Analysis analyze(const Program& program, const AnalysisOptions& options) {
  Analysis a;
  a.graph = explore(program, options.bounds);
  a.complex = build_complex(a.graph, options.cells);
  a.h0 = homology_h0(a.complex);
  a.h1 = homology_h1(a.complex);
  a.h1_walks = generator_cycles(a.complex, a.h1);

  a.deadlocks = deadlock_attractors(a.graph);
  for (const auto& att : a.deadlocks.attractors)
    a.attractor_cycle_ranks.push_back(trap_cycle_rank(a.complex, att.trap));
  a.livelocks = detect_livelocks(a.graph, options.cells, options.fairness);

  std::size_t deepest = 0;
  for (const auto& v : a.graph.vertices()) deepest = std::max(deepest, v.depth);
  a.k_max = options.k_max.value_or(deepest);
  a.persistence = persistent_h1(depth_filtration(a.graph, options.cells, a.k_max));

  std::vector<VertexId> origins{a.graph.root()};
  for (const auto& att : a.deadlocks.attractors)
    if (std::find(origins.begin(), origins.end(), att.trap.vertices.front()) == origins.end())
      origins.push_back(att.trap.vertices.front());
  for (VertexId o : origins) {
    FutureEntry f;
    f.origin = o;
    f.depth = options.future_depth;
    try {
      f.classes = future_classes_bounded(a.graph, a.complex, o, options.future_depth);
    } catch (const BoundRefusal& e) {
      f.refusal = e.what();
    }
    a.futures.push_back(std::move(f));
  }

  a.severity = severity(a.deadlocks, a.livelocks, a.graph);
  return a;
}

int exit_code(const Analysis& a) {
  if (a.graph.truncated()) return kExitBound;
  const bool deadlock = a.deadlocks.stuck_count() > 0;
  const bool livelock = a.livelocks.livelock_present;
  if (deadlock && livelock) return kExitBoth;
  if (deadlock) return kExitDeadlock;
  if (livelock) return kExitLivelock;
  if (!a.deadlocks.fault_traps.empty()) return kExitFaultOnly;
  return kExitClean;
}

std::string describe_state(const GlobalState& s) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < s.processes.size(); ++i)
    os << (i ? " | " : "") << s.processes[i].pid << ": " << pretty_print(*s.processes[i].term);
  os << ']';
  if (!s.store.empty()) {
    os << " store{";
    bool first = true;
    for (const auto& [k, v] : s.store) {
      os << (first ? "" : ", ") << k << '=' << v;
      first = false;
    }
    os << '}';
  }
  bool any_chan = false;
  for (const auto& [c, q] : s.channels)
    if (!q.empty()) any_chan = true;
  if (any_chan) {
    os << " chan{";
    bool first = true;
    for (const auto& [c, q] : s.channels) {
      if (q.empty()) continue;
      os << (first ? "" : ", ") << c << "=<";
      for (std::size_t i = 0; i < q.size(); ++i) os << (i ? "," : "") << q[i];
      os << '>';
      first = false;
    }
    os << '}';
  }
  bool any_lock = false;
  for (const auto& [r, owner] : s.locks)
    if (owner != kFree) any_lock = true;
  if (any_lock) {
    os << " held{";
    bool first = true;
    for (const auto& [r, owner] : s.locks) {
      if (owner == kFree) continue;
      os << (first ? "" : ", ") << r << ':' << owner;
      first = false;
    }
    os << '}';
  }
  if (s.fault) os << " fault=" << *s.fault;
  return os.str();
}

namespace {

Json chain_json(const Chain& chain) {
  Json out = Json::array();
  for (const auto& [e, k] : chain) out.push_back({e, k});
  return out;
}

Json walk_json(const ExecutionGraph& g, const std::vector<EdgeId>& walk) {
  Json labels = Json::array();
  for (EdgeId e : walk) labels.push_back(g.edge(e).label.description);
  return {{"edges", walk}, {"labels", labels}};
}

Json homology_json(const HomologyResult& h) {
  Json gens = Json::array();
  for (const auto& g : h.generators) gens.push_back({{"order", g.order}, {"chain", chain_json(g.chain)}});
  return {{"betti", h.betti}, {"torsion", h.torsion}, {"generators", gens}};
}

std::string fraction(std::size_t num, std::size_t den) {
  return std::to_string(num) + "/" + std::to_string(den);
}

Json build_report(const Analysis& a, const AnalysisOptions& opt) {
  const ExecutionGraph& g = a.graph;
  Json r;
  r["format"] = "singulock-report";
  r["version"] = kReportVersion;

  Json header;
  header["tool"] = "singulock";
  header["tool_version"] = kVersionString;
  header["input"] = opt.input_name;
  header["seed"] = opt.seed ? Json(*opt.seed) : Json(nullptr);
  header["config"] = {{"fairness", to_string(opt.fairness.mode)},
                      {"fault_anchors", opt.fairness.fault_anchors},
                      {"cells", to_string(opt.cells)},
                      {"max_states", opt.bounds.max_states},
                      {"max_depth", opt.bounds.max_depth},
                      {"kmax", a.k_max},
                      {"future_depth", opt.future_depth}};
  r["header"] = header;

  {
    std::size_t terminal = 0, fault = 0, unexpanded = 0, deepest = 0;
    for (const auto& v : g.vertices()) {
      terminal += v.cls.terminal();
      fault += v.cls.fault();
      unexpanded += !v.expanded;
      deepest = std::max(deepest, v.depth);
    }
    std::size_t squares = 0, triangles = 0;
    for (const auto& c : a.complex.cells) (c.kind == TwoCell::Kind::kSquare ? squares : triangles)++;
    r["graph-stats"] = {{"vertices", g.num_vertices()},
                        {"edges", g.num_edges()},
                        {"root", g.root()},
                        {"max_depth", deepest},
                        {"terminal_states", terminal},
                        {"fault_states", fault},
                        {"unexpanded_states", unexpanded},
                        {"sccs", condensation(g).size()},
                        {"squares", squares},
                        {"triangles", triangles},
                        {"truncated", g.truncated()}};
  }

  Json attractors = Json::array(), basins = Json::array();
  for (std::size_t i = 0; i < a.deadlocks.attractors.size(); ++i) {
    const auto& att = a.deadlocks.attractors[i];
    Json states = Json::array();
    for (VertexId v : att.trap.vertices) states.push_back(describe_state(g.vertex(v).state));
    Json entry = {{"id", i},
                  {"kind", to_string(att.trap.kind)},
                  {"vertices", att.trap.vertices},
                  {"internal_edges", att.trap.internal_edges},
                  {"states", states}};
    if (att.trap.kind == TrapRegion::Kind::kDivergent) {
      entry["cycle_rank"] = a.attractor_cycle_ranks[i];
      entry["see"] = "fair-homology";
    }
    attractors.push_back(entry);
    basins.push_back({{"attractor", i},
                      {"size", att.basin.size()},
                      {"fraction", fraction(att.basin.size(), g.num_vertices())},
                      {"vertices", att.basin}});
  }
  r["attractors"] = attractors;
  r["basins"] = basins;

  Json faults = Json::array();
  for (const auto& ft : a.deadlocks.fault_traps) {
    Json reasons = Json::array();
    for (VertexId v : ft.trap.vertices) reasons.push_back(g.vertex(v).cls.reason);
    faults.push_back({{"vertices", ft.trap.vertices},
                      {"reasons", reasons},
                      {"basin_size", ft.basin.size()}});
  }
  r["fault-traps"] = faults;

  {
    const auto& fa = a.livelocks.fairness;
    const Condensation cond = condensation(g);
    Json sccs = Json::array();
    for (SccId c : fa.fair_sccs) sccs.push_back(cond.members[c]);
    Json unfair = Json::array();
    for (EdgeId e = 0; e < g.num_edges(); ++e)
      if (!fa.fair_edges.count(e)) unfair.push_back(e);
    r["fair-analysis"] = {{"mode", to_string(a.livelocks.spec.mode)},
                          {"fault_anchors", a.livelocks.spec.fault_anchors},
                          {"fair_sccs", sccs},
                          {"fair_cores", fa.fair_cores},
                          {"fair_edges", fa.fair_edges.size()},
                          {"fair_vertices", fa.fair_vertices.size()},
                          {"unfair_edges", unfair}};
  }

  {
    Json h = homology_json(a.h1);
    h["h0"] = a.h0;
    Json walks = Json::array();
    for (const auto& w : a.h1_walks) {
      Json entry = {{"directed", w.directed}};
      if (w.directed) entry.update(walk_json(g, w.walk));
      walks.push_back(entry);
    }
    h["generator_walks"] = walks;
    r["homology"] = h;
  }

  {
    Json fh = homology_json(a.livelocks.fair_h1);
    fh["cyclic_rank"] = a.livelocks.cyclic_rank;
    fh["livelock_present"] = a.livelocks.livelock_present;
    Json wit = Json::array();
    for (const auto& w : a.livelocks.witnesses) wit.push_back(walk_json(g, w.walk));
    fh["witnesses"] = wit;
    Json runs = Json::array();
    for (const auto& w : a.livelocks.fair_runs) runs.push_back(walk_json(g, w.walk));
    fh["fair_runs"] = runs;
    r["fair-homology"] = fh;
  }

  {
    Json pairs = Json::array();
    for (const auto& p : a.persistence)
      pairs.push_back({{"birth", p.birth},
                       {"death", p.death ? Json(*p.death) : Json("inf")},
                       {"edges", p.representative}});
    r["persistence"] = {{"kmax", a.k_max}, {"pairs", pairs}};
  }

  {
    Json fut = Json::array();
    for (const auto& f : a.futures) {
      Json e = {{"origin", f.origin}, {"depth", f.depth}};
      if (f.classes) {
        const auto& c = *f.classes;
        e["walks"] = c.walk_count;
        e["maximal_walks"] = c.maximal_walks;
        e["classes"] = c.class_count;
        e["representatives"] = c.representatives;
        e["collapse"] = c.collapse;
        if (c.collapse) {
          e["collapse_trap"] = c.collapse_trap->vertices;
          e["collapse_in_attractor"] = c.collapse_in_attractor;
        }
      } else {
        e["refused"] = f.refusal;
      }
      fut.push_back(e);
    }
    r["future-classes"] = fut;
  }

  {
    Json att = Json::array();
    for (const auto& s : a.severity.attractors)
      att.push_back({{"attractor", s.attractor},
                     {"kind", to_string(s.kind)},
                     {"basin_size", s.basin_size},
                     {"basin_fraction", s.basin_fraction}});
    r["severity"] = {{"attractors", att},
                     {"betti_fair", a.severity.betti_fair},
                     {"torsion_fair", a.severity.torsion_fair},
                     {"cyclic_rank", a.severity.cyclic_rank}};
  }

  {
    Json notes = Json::array();
    if (g.truncated())
      notes.push_back("exploration stopped at a bound; results describe the explored part only");
    if (a.livelocks.benign_cycle_caveat && a.livelocks.livelock_present)
      notes.push_back("fair cycles may be benign progress loops; no progress predicate is applied");
    if (a.livelocks.fair_h1.betti > a.livelocks.cyclic_rank)
      notes.push_back("some fair homology classes are not carried by any directed fair cycle");
    if (a.livelocks.livelock_present && a.livelocks.cyclic_rank == 0)
      notes.push_back("every fair cycle bounds in the fair complex; see fair_runs");
    if (a.deadlocks.divergent_count() > 0)
      notes.push_back("divergent attractors are cycling regions; see fair-homology");
    r["caveats"] = {{"truncated", g.truncated()},
                    {"benign_cycle", a.livelocks.benign_cycle_caveat},
                    {"notes", notes}};
  }
  r["exit_code"] = exit_code(a);
  return r;
}

std::string join(const Json& arr) {
  std::string s;
  for (std::size_t i = 0; i < arr.size(); ++i) s += (i ? " " : "") + arr[i].dump();
  return s;
}

}  // namespace

std::string report_json(const Analysis& a, const AnalysisOptions& opt) {
  return build_report(a, opt).dump(2) + "\n";
}

std::string report_text(const Analysis& a, const AnalysisOptions& opt) {
  const Json r = build_report(a, opt);
  std::ostringstream os;
  const auto& h = r["header"];
  os << "singulock " << h["tool_version"].get<std::string>() << " report for "
     << h["input"].get<std::string>() << "\n";
  os << "config: fairness=" << h["config"]["fairness"].get<std::string>()
     << " cells=" << h["config"]["cells"].get<std::string>()
     << " kmax=" << h["config"]["kmax"].dump() << "\n";
  const auto& gs = r["graph-stats"];
  os << "graph: " << gs["vertices"].dump() << " states, " << gs["edges"].dump() << " transitions, "
     << gs["squares"].dump() << " squares, " << gs["triangles"].dump() << " triangles";
  if (gs["truncated"].get<bool>()) os << " (truncated)";
  os << "\n\n";

  os << "attractors: " << r["attractors"].size() << "\n";
  for (std::size_t i = 0; i < r["attractors"].size(); ++i) {
    const auto& at = r["attractors"][i];
    const auto& b = r["basins"][i];
    os << "  #" << i << " " << at["kind"].get<std::string>() << " {" << join(at["vertices"])
       << "} basin " << b["fraction"].get<std::string>() << "\n";
    for (const auto& s : at["states"]) os << "      " << s.get<std::string>() << "\n";
    if (at.contains("cycle_rank")) os << "      cycle rank " << at["cycle_rank"].dump() << "\n";
  }
  os << "fault traps: " << r["fault-traps"].size() << "\n";
  for (const auto& f : r["fault-traps"])
    os << "  {" << join(f["vertices"]) << "} " << join(f["reasons"]) << "\n";

  const auto& fa = r["fair-analysis"];
  os << "\nfairness: " << fa["mode"].get<std::string>() << ", " << fa["fair_edges"].dump()
     << " fair edges, " << fa["unfair_edges"].size() << " unfair\n";
  const auto& hm = r["homology"];
  os << "H0 = " << hm["h0"].dump() << ", H1: betti " << hm["betti"].dump() << ", torsion "
     << hm["torsion"].dump() << "\n";
  const auto& fh = r["fair-homology"];
  os << "fair H1: betti " << fh["betti"].dump() << ", torsion " << fh["torsion"].dump()
     << ", cyclic rank " << fh["cyclic_rank"].dump() << "\n";
  os << "livelock: " << (fh["livelock_present"].get<bool>() ? "yes" : "no") << "\n";
  for (const auto& w : fh["witnesses"]) os << "  witness " << join(w["labels"]) << "\n";
  for (const auto& w : fh["fair_runs"]) os << "  fair run " << join(w["labels"]) << "\n";

  os << "\npersistence (kmax " << r["persistence"]["kmax"].dump() << "):";
  for (const auto& p : r["persistence"]["pairs"])
    os << " (" << p["birth"].dump() << ","
       << (p["death"].is_string() ? p["death"].get<std::string>() : p["death"].dump()) << ")";
  os << "\n";
  for (const auto& f : r["future-classes"]) {
    os << "future classes from " << f["origin"].dump() << " depth " << f["depth"].dump() << ": ";
    if (f.contains("refused"))
      os << "refused (" << f["refused"].get<std::string>() << ")\n";
    else
      os << f["classes"].dump() << (f["collapse"].get<bool>() ? " (collapse)" : "") << "\n";
  }
  for (const auto& n : r["caveats"]["notes"]) os << "note: " << n.get<std::string>() << "\n";
  os << "exit code " << r["exit_code"].dump() << "\n";
  return os.str();
}

std::string graph_json(const ExecutionGraph& g) {
  Json out;
  out["format"] = "singulock-graph";
  out["version"] = kGraphVersion;
  out["root"] = g.root();
  out["truncated"] = g.truncated();
  Json vs = Json::array();
  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    const auto& x = g.vertex(v);
    Json e = {{"id", v},
              {"depth", x.depth},
              {"class", to_string(x.cls.kind)},
              {"expanded", x.expanded},
              {"enabled", x.enabled_pids()},
              {"state", describe_state(x.state)}};
    if (x.cls.fault()) e["reason"] = x.cls.reason;
    vs.push_back(e);
  }
  out["vertices"] = vs;
  Json es = Json::array();
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    const auto& x = g.edge(e);
    es.push_back({{"id", e},
                  {"src", x.src},
                  {"dst", x.dst},
                  {"label", x.label.description},
                  {"participants", x.label.participants}});
  }
  out["edges"] = es;
  return out.dump(2) + "\n";
}

namespace {

std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

}  // namespace

std::string graph_dot(const ExecutionGraph& g) {
  std::ostringstream os;
  os << "digraph singulock {\n  node [shape=circle];\n";
  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    const auto& x = g.vertex(v);
    os << "  s" << v << " [label=\"" << v << "\"";
    if (x.cls.terminal()) os << ", shape=doublecircle";
    if (x.cls.fault()) os << ", shape=box, color=red";
    if (!x.cls.terminal() && !x.cls.fault() && g.out_edges(v).empty() && x.expanded)
      os << ", style=filled, fillcolor=lightgray";
    if (!x.expanded) os << ", style=dashed";
    os << ", tooltip=\"" << dot_escape(describe_state(x.state)) << "\"];\n";
  }
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    const auto& x = g.edge(e);
    os << "  s" << x.src << " -> s" << x.dst << " [label=\"" << dot_escape(x.label.description)
       << "\"];\n";
  }
  os << "}\n";
  return os.str();
}

std::string complex_json(const ExecComplex& c) {
  Json out;
  out["format"] = "singulock-complex";
  out["version"] = kGraphVersion;
  out["vertices"] = c.vertices;
  Json es = Json::array();
  for (const auto& e : c.edges) es.push_back({{"id", e.id}, {"src", e.src}, {"dst", e.dst}});
  out["edges"] = es;
  Json cs = Json::array();
  for (const auto& cell : c.cells) {
    const std::size_t n = cell.arity();
    std::vector<VertexId> vs(cell.vertices.begin(), cell.vertices.begin() + static_cast<long>(n));
    std::vector<EdgeId> ids(cell.edges.begin(), cell.edges.begin() + static_cast<long>(n));
    cs.push_back({{"id", cell.id},
                  {"kind", cell.kind == TwoCell::Kind::kSquare ? "square" : "triangle"},
                  {"vertices", vs},
                  {"edges", ids}});
  }
  out["cells"] = cs;
  return out.dump(2) + "\n";
}

}  // namespace singulock
