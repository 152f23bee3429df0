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

#pragma once

// Skip-gram with negative sampling over words augmented by hashed character
// n-gram vectors, plus nearest-neighbour queries and the binary model format.

#include <cmath>
#include <cstdint>
#include <functional>
#include <istream>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace polarembed::embed {

using TokenLines = std::vector<std::vector<std::string>>;

// One whitespace-tokenized line per input line; empty lines are kept.
TokenLines read_token_lines(std::istream& in);

struct Vocabulary {
  std::vector<std::string> words;      // sorted by descending count, then token
  std::vector<std::uint64_t> counts;
  std::uint32_t min_count = 5;
  std::uint64_t total_tokens = 0;      // sum of kept counts
  double sample = 1e-4;                // frequent-word subsampling threshold t

  std::size_t size() const { return words.size(); }
  std::optional<std::int32_t> find(std::string_view word) const;

  // Rebuilds the lookup table after words change.
  void reindex();

 private:
  std::unordered_map<std::string, std::int32_t> index_;
};

// Throws Error(EmptyCorpus) when no token reaches min_count.
Vocabulary build_vocab(const TokenLines& lines, std::uint32_t min_count, double sample = 1e-4);

struct SubwordConfig {
  std::uint32_t n_min = 3;
  std::uint32_t n_max = 6;
  std::uint32_t bucket_count = 2'000'000;

  void validate() const;
};

// N-grams of "<word>" with lengths n_min..n_max, counted in code points. The
// whole wrapped word is left out (the vocabulary vector covers it) unless the
// word is out of vocabulary and its wrapped length lies in [n_min, n_max].
std::vector<std::string> subword_strings(std::string_view word, const SubwordConfig& cfg, bool in_vocab);
std::vector<std::uint32_t> subword_ngrams(std::string_view word, const SubwordConfig& cfg, bool in_vocab);

struct TrainConfig {
  std::uint32_t dim = 100;
  double lr = 0.05;
  std::uint32_t epochs = 5;
  std::uint32_t window = 5;
  std::uint32_t negatives = 5;
  std::uint64_t seed = 42;
  std::uint32_t workers = 1;

  void validate() const;
};

struct ModelMetadata {
  std::string corpus_id;
  std::string camp_id;
  std::string provenance;  // free-form JSON describing inputs and config
};

class EmbeddingModel {
 public:
  EmbeddingModel() = default;
  // Initialized model: input rows uniform in [-1/dim, 1/dim], output rows zero.
  EmbeddingModel(Vocabulary vocab, const TrainConfig& train, const SubwordConfig& subword);

  const Vocabulary& vocab() const { return vocab_; }
  const TrainConfig& train_config() const { return train_; }
  const SubwordConfig& subword_config() const { return subword_; }
  ModelMetadata& metadata() { return meta_; }
  const ModelMetadata& metadata() const { return meta_; }
  std::uint32_t dim() const { return train_.dim; }

  // (V + bucket_count) x dim, row-major. Row i < V is word i; row V + b is bucket b.
  std::span<float> input() { return input_; }
  std::span<const float> input() const { return input_; }
  // V x dim
  std::span<float> output() { return output_; }
  std::span<const float> output() const { return output_; }

  // Input rows composing each vocabulary word: its own row, then its buckets.
  std::span<const std::uint32_t> word_rows(std::int32_t word) const;

  // Input rows for an arbitrary string (own row only when in vocabulary).
  std::vector<std::uint32_t> rows_for(std::string_view word) const;

  bool operator==(const EmbeddingModel& other) const;

 private:
  friend EmbeddingModel load(const std::string& path);
  void build_word_rows();

  Vocabulary vocab_;
  TrainConfig train_;
  SubwordConfig subword_;
  ModelMetadata meta_;
  std::vector<float> input_;
  std::vector<float> output_;
  std::vector<std::uint32_t> row_offsets_;
  std::vector<std::uint32_t> rows_;
};

// Log-likelihood of one (context, positive, negatives) group,
//   log s(h . u_pos) + sum_n log s(-h . u_n),
// and its gradients with respect to the hidden vector h and each output
// vector (outputs[0] is the positive). Gradients are written, not
// accumulated.
template <typename T>
T ns_log_likelihood(std::span<const T> hidden, std::span<const T* const> outputs, std::span<T> grad_hidden,
                    std::span<T> grad_outputs) {
  const std::size_t dim = hidden.size();
  T total = 0;
  for (std::size_t i = 0; i < dim; ++i) grad_hidden[i] = 0;
  for (std::size_t j = 0; j < outputs.size(); ++j) {
    const T* u = outputs[j];
    T score = 0;
    for (std::size_t i = 0; i < dim; ++i) score += hidden[i] * u[i];
    const T label = j == 0 ? T(1) : T(0);
    const T sign = j == 0 ? T(1) : T(-1);
    // log s(sign * score), computed without overflow
    const T x = sign * score;
    total += x >= 0 ? -std::log1p(std::exp(-x)) : x - std::log1p(std::exp(x));
    const T sigma = T(1) / (T(1) + std::exp(-score));
    const T g = label - sigma;
    T* gu = grad_outputs.data() + j * dim;
    for (std::size_t i = 0; i < dim; ++i) {
      grad_hidden[i] += g * u[i];
      gu[i] = g * hidden[i];
    }
  }
  return total;
}

struct EpochStats {
  std::uint32_t epoch = 0;   // 1-based
  std::uint64_t tokens = 0;  // tokens read so far
  double mean_loss = 0.0;    // mean negative log-likelihood per context pair
  double lr = 0.0;           // learning rate at the end of the epoch
};

struct TrainResult {
  EmbeddingModel model;
  std::vector<EpochStats> epochs;
};

// workers == 1 is the serial, bit-reproducible route; more workers run
// lock-free OpenMP threads over disjoint line shards.
TrainResult train(const TokenLines& lines, const Vocabulary& vocab, const TrainConfig& train_cfg,
                  const SubwordConfig& subword_cfg, const std::function<void(const EpochStats&)>& progress = {});

// Mean of the composing input rows. Throws Error(NoRepresentableNgrams) when
// the string has neither a vocabulary row nor any n-gram.
std::vector<float> vector(const EmbeddingModel& model, std::string_view word);

struct NNResult {
  std::string term;
  std::uint32_t rank = 0;
  float cosine = 0.0f;
};

// Unit-normalized word representations, built once per model.
class NeighborIndex {
 public:
  explicit NeighborIndex(const EmbeddingModel& model, bool parallel = true);

  // Descending cosine, ties by ascending token; the query itself is excluded.
  std::vector<NNResult> query(std::string_view term, std::size_t k) const;

 private:
  const EmbeddingModel* model_;
  bool parallel_;
  std::vector<float> unit_;
};

std::vector<NNResult> nearest_neighbors(const EmbeddingModel& model, std::string_view query, std::size_t k);

inline constexpr std::uint32_t kModelFormatVersion = 1;

void save(const EmbeddingModel& model, const std::string& path);
// Throws Error(IoFailure) on unreadable or truncated files and
// Error(VersionMismatch) on a foreign magic or version.
EmbeddingModel load(const std::string& path);
// "V dim" header, then "token x1 ... xdim" per word using vector(model, word).
void export_text(const EmbeddingModel& model, const std::string& path);

}  // namespace polarembed::embed
