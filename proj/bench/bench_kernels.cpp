// Copyright 2026 The polarembed Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Serial reference kernels against their OpenMP versions, plus training
// throughput by worker count.

#include <benchmark/benchmark.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "polarembed/common.hpp"
#include "polarembed/embedding.hpp"
#include "polarembed/kernels.hpp"
#include "polarembed/synth.hpp"

namespace pk = polarembed::kernels;
namespace pe = polarembed::embed;

namespace {

struct Graph {
  pk::Csr user_to_keys;
  pk::Csr key_to_users;
  std::vector<pk::CampCode> labels;
  std::vector<std::uint8_t> endorsement;
};

Graph make_graph(std::size_t users, std::uint32_t keys, std::uint32_t per_user) {
  polarembed::SplitMix64 rng(17);
  Graph g;
  std::vector<std::vector<std::uint32_t>> k2u(keys);
  for (std::size_t u = 0; u < users; ++u) {
    std::vector<std::uint32_t> row;
    for (std::uint32_t i = 0; i < per_user; ++i) row.push_back(static_cast<std::uint32_t>(rng.below(keys)));
    std::sort(row.begin(), row.end());
    row.erase(std::unique(row.begin(), row.end()), row.end());
    for (auto k : row) k2u[k].push_back(static_cast<std::uint32_t>(u));
    g.user_to_keys.targets.insert(g.user_to_keys.targets.end(), row.begin(), row.end());
    g.user_to_keys.offsets.push_back(static_cast<std::uint32_t>(g.user_to_keys.targets.size()));
  }
  for (const auto& row : k2u) {
    g.key_to_users.targets.insert(g.key_to_users.targets.end(), row.begin(), row.end());
    g.key_to_users.offsets.push_back(static_cast<std::uint32_t>(g.key_to_users.targets.size()));
  }
  g.labels.resize(users);
  for (auto& l : g.labels) l = static_cast<pk::CampCode>(rng.bernoulli(0.2) ? 1 + rng.below(2) : 0);
  g.endorsement.resize(keys);
  pk::endorsement_serial(g.key_to_users, g.labels, g.endorsement);
  return g;
}

const Graph& graph() {
  static const Graph g = make_graph(200'000, 50'000, 30);
  return g;
}

void BM_EndorsementSerial(benchmark::State& state) {
  const auto& g = graph();
  std::vector<std::uint8_t> out(g.key_to_users.rows());
  for (auto _ : state) {
    pk::endorsement_serial(g.key_to_users, g.labels, out);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_EndorsementSerial)->Unit(benchmark::kMillisecond);

void BM_EndorsementOmp(benchmark::State& state) {
  const auto& g = graph();
  std::vector<std::uint8_t> out(g.key_to_users.rows());
  for (auto _ : state) {
    pk::endorsement_omp(g.key_to_users, g.labels, out);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_EndorsementOmp)->Unit(benchmark::kMillisecond);

void BM_QualifySerial(benchmark::State& state) {
  const auto& g = graph();
  std::vector<pk::CampCode> out(g.user_to_keys.rows());
  for (auto _ : state) {
    pk::qualify_serial(g.user_to_keys, g.labels, g.endorsement, 10, out);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_QualifySerial)->Unit(benchmark::kMillisecond);

void BM_QualifyOmp(benchmark::State& state) {
  const auto& g = graph();
  std::vector<pk::CampCode> out(g.user_to_keys.rows());
  for (auto _ : state) {
    pk::qualify_omp(g.user_to_keys, g.labels, g.endorsement, 10, out);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_QualifyOmp)->Unit(benchmark::kMillisecond);

struct Matrix {
  std::size_t dim = 100;
  std::vector<float> unit;
  std::vector<float> query;
};

const Matrix& matrix() {
  static const Matrix m = [] {
    Matrix m;
    polarembed::SplitMix64 rng(3);
    const std::size_t rows = 50'000;
    m.unit.resize(rows * m.dim);
    for (std::size_t r = 0; r < rows; ++r) {
      double n = 0;
      for (std::size_t d = 0; d < m.dim; ++d) {
        const float x = static_cast<float>(rng.uniform() - 0.5);
        m.unit[r * m.dim + d] = x;
        n += double(x) * x;
      }
      for (std::size_t d = 0; d < m.dim; ++d) m.unit[r * m.dim + d] /= static_cast<float>(std::sqrt(n));
    }
    m.query.resize(m.dim);
    for (auto& x : m.query) x = static_cast<float>(rng.uniform() - 0.5);
    return m;
  }();
  return m;
}

void BM_CosineSerial(benchmark::State& state) {
  const auto& m = matrix();
  std::vector<float> out(m.unit.size() / m.dim);
  for (auto _ : state) {
    pk::cosine_scores_serial(m.unit, m.dim, m.query, out);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_CosineSerial)->Unit(benchmark::kMillisecond);

void BM_CosineOmp(benchmark::State& state) {
  const auto& m = matrix();
  std::vector<float> out(m.unit.size() / m.dim);
  for (auto _ : state) {
    pk::cosine_scores_omp(m.unit, m.dim, m.query, out);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_CosineOmp)->Unit(benchmark::kMillisecond);

const pe::TokenLines& training_lines() {
  static const pe::TokenLines lines = [] {
    polarembed::synth::CorpusParams p;
    p.sentences = 4000;
    const auto corpus = polarembed::synth::gen_polarized_corpus(p);
    return corpus.camp_a;
  }();
  return lines;
}

void BM_TrainWorkers(benchmark::State& state) {
  const auto& lines = training_lines();
  const auto vocab = pe::build_vocab(lines, 5);
  pe::TrainConfig t;
  t.epochs = 1;
  t.workers = static_cast<std::uint32_t>(state.range(0));
  pe::SubwordConfig s;
  s.bucket_count = 200'000;
  for (auto _ : state) {
    auto r = pe::train(lines, vocab, t, s);
    benchmark::DoNotOptimize(r.model.input().data());
  }
}
BENCHMARK(BM_TrainWorkers)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond)->Iterations(1);

}  // namespace

BENCHMARK_MAIN();
