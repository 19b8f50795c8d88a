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

#include <benchmark/benchmark.h>

#include <random>

#include "singulock/corpus.hpp"
#include "singulock/homology.hpp"
#include "singulock/report.hpp"
#include "singulock/singularity.hpp"
#include "singulock/smith.hpp"

namespace {

using namespace singulock;

const char* const kFixtures[] = {"FX-DIAMOND", "FX-PING",   "FX-PHIL2",
                                 "FX-RETRY",   "FX-CHOICE", "FX-PHIL3"};

const Program& fixture(int i) {
  static std::vector<Program> programs = [] {
    std::vector<Program> out;
    for (const char* name : kFixtures) out.push_back(load_fixture(name, SINGULOCK_BENCH_CORPUS_DIR).program);
    return out;
  }();
  return programs.at(static_cast<std::size_t>(i));
}

void fixture_args(benchmark::internal::Benchmark* b) {
  for (int i = 0; i < 6; ++i) b->Arg(i);
}

// Chain of n philosophers around a table; grows quickly with n.
Program philosophers(int n) {
  std::string src = "res";
  for (int i = 1; i <= n; ++i) src += (i > 1 ? ", r" : " r") + std::to_string(i);
  src += ";\nmain = ";
  for (int i = 1; i <= n; ++i) {
    const std::string l = "r" + std::to_string(i), r = "r" + std::to_string(i % n + 1);
    if (i > 1) src += " || ";
    src += "(acquire(" + l + "); acquire(" + r + "); tau; release(" + r + "); release(" + l + "); skip)";
  }
  return *parse_program(src).program;
}

void BM_Explore(benchmark::State& state) {
  const Program& p = fixture(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(explore(p));
  state.SetLabel(kFixtures[state.range(0)]);
}
BENCHMARK(BM_Explore)->Apply(fixture_args);

void BM_ExplorePhilosophers(benchmark::State& state) {
  Program p = philosophers(static_cast<int>(state.range(0)));
  std::size_t n = 0;
  for (auto _ : state) {
    ExecutionGraph g = explore(p);
    n = g.num_vertices();
    benchmark::DoNotOptimize(g);
  }
  state.counters["states"] = static_cast<double>(n);
}
BENCHMARK(BM_ExplorePhilosophers)->DenseRange(2, 5)->Unit(benchmark::kMillisecond);

void BM_SmithRandom(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<int> entry(-5, 5);
  std::bernoulli_distribution nonzero(0.3);
  IntMatrix m(n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c)
      if (nonzero(rng)) m.set(r, c, entry(rng));
  for (auto _ : state) benchmark::DoNotOptimize(smith_normal_form(m));
}
BENCHMARK(BM_SmithRandom)->RangeMultiplier(2)->Range(8, 64);

void BM_HomologyH1(benchmark::State& state) {
  ExecComplex k = build_complex(explore(fixture(static_cast<int>(state.range(0)))));
  for (auto _ : state) benchmark::DoNotOptimize(homology_h1(k));
  state.SetLabel(kFixtures[state.range(0)]);
}
BENCHMARK(BM_HomologyH1)->Apply(fixture_args);

void BM_HomologyPhilosophers(benchmark::State& state) {
  ExecComplex k = build_complex(explore(philosophers(static_cast<int>(state.range(0)))));
  for (auto _ : state) benchmark::DoNotOptimize(homology_h1(k));
  state.counters["edges"] = static_cast<double>(k.edges.size());
}
BENCHMARK(BM_HomologyPhilosophers)->DenseRange(2, 4)->Unit(benchmark::kMillisecond);

void BM_Persistence(benchmark::State& state) {
  ExecutionGraph g = explore(fixture(static_cast<int>(state.range(0))));
  std::size_t kmax = 0;
  for (const auto& v : g.vertices()) kmax = std::max(kmax, v.depth);
  auto stages = depth_filtration(g, CellPolicy::kBoth, kmax);
  for (auto _ : state) benchmark::DoNotOptimize(persistent_h1(stages));
  state.SetLabel(kFixtures[state.range(0)]);
}
BENCHMARK(BM_Persistence)->Apply(fixture_args);

void BM_FairEdges(benchmark::State& state) {
  ExecutionGraph g = explore(philosophers(static_cast<int>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(fair_edges(g, {FairnessSpec::Mode::kStrong}));
}
BENCHMARK(BM_FairEdges)->DenseRange(2, 4);

void BM_Analyze(benchmark::State& state) {
  const Program& p = fixture(static_cast<int>(state.range(0)));
  AnalysisOptions opt;
  for (auto _ : state) benchmark::DoNotOptimize(report_json(analyze(p, opt), opt));
  state.SetLabel(kFixtures[state.range(0)]);
}
BENCHMARK(BM_Analyze)->Apply(fixture_args)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
