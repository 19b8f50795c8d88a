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

#include "cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "CLI11.hpp"
#include "singulock/calculus.hpp"
#include "singulock/version.hpp"

namespace singulock::cli {

namespace {

struct InputError {
  std::string message;
};

std::string read_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError{"cannot read '" + path + "'"};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Program load_program(const std::string& path, std::ostream& err) {
  const std::string text = read_input(path);
  ParseResult parsed = parse_program(text);
  for (const auto& d : parsed.diagnostics) err << format_diagnostic(d, path) << "\n";
  if (!parsed.ok()) throw InputError{};
  return std::move(*parsed.program);
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError{"cannot write '" + path + "'"};
  out << content;
  if (!out) throw InputError{"error writing '" + path + "'"};
}

void emit(const std::optional<std::string>& path, const std::string& content, std::ostream& out) {
  if (path)
    write_file(*path, content);
  else
    out << content;
}

void add_bounds(CLI::App* cmd, AnalysisConfig& cfg) {
  cmd->add_option("--max-states", cfg.analysis.bounds.max_states, "Maximum number of states to explore")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--max-depth", cfg.analysis.bounds.max_depth, "Maximum exploration depth")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
}

void add_cells(CLI::App* cmd, std::string& cells) {
  cmd->add_option("--cells", cells, "Two-cell policy")
      ->check(CLI::IsMember({"squares", "triangles", "both"}))
      ->capture_default_str();
}

void add_kmax(CLI::App* cmd, std::optional<std::size_t>& kmax) {
  cmd->add_option("--kmax", kmax, "Last filtration depth (default: deepest state)");
}

std::optional<std::string> seed_from_env() {
  if (const char* s = std::getenv("SINGULOCK_SEED")) return std::string(s);
  return std::nullopt;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Deadlock and livelock analysis for small message-passing programs", "singulock"};
  app.set_version_flag("--version", std::string(kVersionString));
  app.require_subcommand(1, 1);

  AnalysisConfig cfg;
  std::string fairness = "weak", cells = "both", format = "json";
  bool no_fault_anchors = false;
  std::optional<std::size_t> kmax;

  auto* analyze_cmd = app.add_subcommand("analyze", "Full analysis report");
  analyze_cmd->add_option("input", cfg.input, "Program file")->required();
  analyze_cmd->add_option("--fairness", fairness, "Fairness notion")
      ->check(CLI::IsMember({"weak", "strong"}))
      ->capture_default_str();
  analyze_cmd->add_flag("--no-fault-anchors", no_fault_anchors,
                        "Do not treat fault states as ends of fair runs");
  add_cells(analyze_cmd, cells);
  add_bounds(analyze_cmd, cfg);
  add_kmax(analyze_cmd, kmax);
  analyze_cmd->add_option("--future-depth", cfg.analysis.future_depth, "Depth of future-class enumeration")
      ->capture_default_str();
  analyze_cmd->add_option("--format", format, "Report format")
      ->check(CLI::IsMember({"json", "text"}))
      ->capture_default_str();
  analyze_cmd->add_option("-o,--output", cfg.output, "Write the report here instead of stdout");
  analyze_cmd->add_option("--dot", cfg.dot, "Also write the execution graph as DOT");
  analyze_cmd->add_option("--csv", cfg.csv, "Also write the persistence diagram as CSV");

  auto* explore_cmd = app.add_subcommand("explore", "Execution graph only");
  explore_cmd->add_option("input", cfg.input, "Program file")->required();
  add_bounds(explore_cmd, cfg);
  explore_cmd->add_option("-o,--output", cfg.output, "Write the graph here instead of stdout");
  explore_cmd->add_option("--dot", cfg.dot, "Also write the graph as DOT");

  auto* filtration_cmd = app.add_subcommand("filtration", "Depth-filtered persistence diagram as CSV");
  filtration_cmd->add_option("input", cfg.input, "Program file")->required();
  add_cells(filtration_cmd, cells);
  add_bounds(filtration_cmd, cfg);
  add_kmax(filtration_cmd, kmax);
  filtration_cmd->add_option("--csv", cfg.csv, "Write the CSV here instead of stdout");

  auto* dot_cmd = app.add_subcommand("export-dot", "Execution graph as DOT");
  dot_cmd->add_option("input", cfg.input, "Program file")->required();
  add_bounds(dot_cmd, cfg);
  dot_cmd->add_option("--dot", cfg.dot, "Write the DOT here instead of stdout");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : kExitInputError;
  }

  cfg.analysis.fairness.mode = parse_fairness_mode(fairness);
  cfg.analysis.fairness.fault_anchors = !no_fault_anchors;
  cfg.analysis.cells = parse_cell_policy(cells);
  cfg.analysis.k_max = kmax;
  cfg.analysis.input_name = cfg.input;
  cfg.analysis.seed = seed_from_env();
  cfg.format = format == "text" ? OutputFormat::kText : OutputFormat::kJson;

  try {
    const Program program = load_program(cfg.input, err);

    if (*analyze_cmd) {
      const Analysis a = analyze(program, cfg.analysis);
      const std::string report = cfg.format == OutputFormat::kJson ? report_json(a, cfg.analysis)
                                                                  : report_text(a, cfg.analysis);
      emit(cfg.output, report, out);
      if (cfg.dot) write_file(*cfg.dot, graph_dot(a.graph));
      if (cfg.csv) write_file(*cfg.csv, persistence_csv(a.persistence));
      if (a.graph.truncated()) err << "singulock: state space truncated by exploration bounds\n";
      return exit_code(a);
    }

    const ExecutionGraph g = explore(program, cfg.analysis.bounds);
    if (g.truncated()) err << "singulock: state space truncated by exploration bounds\n";
    const int code = g.truncated() ? kExitBound : kExitClean;
    if (*explore_cmd) {
      emit(cfg.output, graph_json(g), out);
      if (cfg.dot) write_file(*cfg.dot, graph_dot(g));
    } else if (*filtration_cmd) {
      std::size_t deepest = 0;
      for (const auto& v : g.vertices()) deepest = std::max(deepest, v.depth);
      const auto pairs =
          persistent_h1(depth_filtration(g, cfg.analysis.cells, kmax.value_or(deepest)));
      emit(cfg.csv, persistence_csv(pairs), out);
    } else {
      emit(cfg.dot, graph_dot(g), out);
    }
    return code;
  } catch (const InputError& e) {
    if (!e.message.empty()) err << "singulock: " << e.message << "\n";
    return kExitInputError;
  } catch (const BoundRefusal& e) {
    err << "singulock: " << e.what() << "\n";
    return kExitBound;
  }
}

}  // namespace singulock::cli
