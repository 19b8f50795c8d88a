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

#include "singulock/corpus.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace singulock {

namespace {

using Json = nlohmann::json;

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json read_manifest(const std::filesystem::path& dir) {
  const auto path = dir / "manifest.json";
  try {
    Json m = Json::parse(read_file(path));
    if (m.value("format", "") != "singulock-corpus")
      throw std::runtime_error(path.string() + ": not a corpus manifest");
    return m;
  } catch (const Json::exception& e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }
}

template <typename T>
void take(const Json& expected, const char* key, std::optional<T>& field,
          std::map<std::string, std::string>& provenance) {
  if (!expected.contains(key)) return;
  const Json& entry = expected.at(key);
  field = entry.at("value").get<T>();
  provenance[key] = entry.at("provenance").get<std::string>();
}

}  // namespace

std::vector<std::string> fixture_names(const std::filesystem::path& dir) {
  const Json manifest = read_manifest(dir);
  std::vector<std::string> out;
  for (const auto& f : manifest.at("fixtures")) out.push_back(f.at("name").get<std::string>());
  return out;
}

Fixture load_fixture(std::string_view name, const std::filesystem::path& dir) {
  const Json manifest = read_manifest(dir);
  for (const auto& f : manifest.at("fixtures")) {
    if (f.at("name").get<std::string>() != name) continue;
    Fixture fx;
    fx.name = std::string(name);
    fx.path = dir / f.at("file").get<std::string>();
    fx.source = read_file(fx.path);
    ParseResult parsed = parse_program(fx.source);
    if (!parsed.ok()) {
      std::string msg = "fixture " + fx.name + " does not parse:";
      for (const auto& d : parsed.diagnostics) msg += "\n" + format_diagnostic(d, fx.path.string());
      throw std::runtime_error(msg);
    }
    fx.program = std::move(*parsed.program);

    const Json& ex = f.at("expected");
    auto& e = fx.expected;
    take(ex, "vertices", e.vertices, e.provenance);
    take(ex, "edges", e.edges, e.provenance);
    take(ex, "attractors", e.attractors, e.provenance);
    take(ex, "stuck_attractors", e.stuck_attractors, e.provenance);
    take(ex, "divergent_attractors", e.divergent_attractors, e.provenance);
    take(ex, "betti", e.betti, e.provenance);
    take(ex, "betti_unfilled", e.betti_unfilled, e.provenance);
    take(ex, "betti_fair", e.betti_fair, e.provenance);
    take(ex, "livelock", e.livelock, e.provenance);
    take(ex, "exit_code", e.exit_code, e.provenance);
    if (ex.contains("persistence")) {
      std::vector<ExpectedBar> bars;
      for (const auto& bar : ex.at("persistence").at("value")) {
        const Json& d = bar.at(1);
        bars.push_back({bar.at(0).get<std::size_t>(),
                        d.is_string() ? std::nullopt : std::optional<std::size_t>(d.get<std::size_t>())});
      }
      e.persistence = std::move(bars);
      e.provenance["persistence"] = ex.at("persistence").at("provenance").get<std::string>();
    }
    return fx;
  }
  throw UnknownFixture("unknown fixture '" + std::string(name) + "'");
}

}  // namespace singulock
