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

#include "polarembed/embedding.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <map>
#include <numeric>
#include <sstream>

#include "polarembed/common.hpp"
#include "polarembed/kernels.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace polarembed::embed {

// --- vocabulary -------------------------------------------------------------

TokenLines read_token_lines(std::istream& in) {
  TokenLines lines;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ss(line);
    std::vector<std::string> toks;
    std::string t;
    while (ss >> t) toks.push_back(std::move(t));
    lines.push_back(std::move(toks));
  }
  return lines;
}

std::optional<std::int32_t> Vocabulary::find(std::string_view word) const {
  auto it = index_.find(std::string(word));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

void Vocabulary::reindex() {
  index_.clear();
  index_.reserve(words.size());
  for (std::size_t i = 0; i < words.size(); ++i) index_.emplace(words[i], static_cast<std::int32_t>(i));
}

Vocabulary build_vocab(const TokenLines& lines, std::uint32_t min_count, double sample) {
  if (min_count == 0) throw Error(ErrorCode::InvalidParams, "min_count must be >= 1");
  std::unordered_map<std::string, std::uint64_t> counts;
  for (const auto& line : lines)
    for (const auto& t : line) ++counts[t];

  std::vector<std::pair<std::string, std::uint64_t>> kept;
  for (auto& [w, c] : counts)
    if (c >= min_count) kept.emplace_back(w, c);
  if (kept.empty()) throw Error(ErrorCode::EmptyCorpus, "no token reaches min_count");
  std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });

  Vocabulary v;
  v.min_count = min_count;
  v.sample = sample;
  for (auto& [w, c] : kept) {
    v.words.push_back(w);
    v.counts.push_back(c);
    v.total_tokens += c;
  }
  v.reindex();
  return v;
}

// --- subwords ----------------------------------------------------------------

void SubwordConfig::validate() const {
  if (n_min < 1 || n_min > n_max) throw Error(ErrorCode::InvalidConfig, "need 1 <= n_min <= n_max");
  if (bucket_count == 0) throw Error(ErrorCode::InvalidConfig, "bucket_count must be positive");
}

std::vector<std::string> subword_strings(std::string_view word, const SubwordConfig& cfg, bool in_vocab) {
  std::u32string wrapped = U"<";
  wrapped += utf8_decode(word);
  wrapped += U">";
  const std::size_t len = wrapped.size();
  std::vector<std::string> out;
  for (std::size_t start = 0; start < len; ++start) {
    for (std::size_t n = cfg.n_min; n <= cfg.n_max && start + n <= len; ++n) {
      if (n == len) {
        if (in_vocab) continue;
      }
      out.push_back(utf8_encode(std::u32string_view(wrapped).substr(start, n)));
    }
  }
  return out;
}

std::vector<std::uint32_t> subword_ngrams(std::string_view word, const SubwordConfig& cfg, bool in_vocab) {
  std::vector<std::uint32_t> out;
  for (const auto& g : subword_strings(word, cfg, in_vocab)) out.push_back(fnv1a32(g) % cfg.bucket_count);
  return out;
}

void TrainConfig::validate() const {
  if (dim < 1) throw Error(ErrorCode::InvalidConfig, "dim must be >= 1");
  if (!(lr > 0.0)) throw Error(ErrorCode::InvalidConfig, "lr must be > 0");
  if (window < 1) throw Error(ErrorCode::InvalidConfig, "window must be >= 1");
  if (workers < 1) throw Error(ErrorCode::InvalidConfig, "workers must be >= 1");
}

// --- model ------------------------------------------------------------------

EmbeddingModel::EmbeddingModel(Vocabulary vocab, const TrainConfig& train, const SubwordConfig& subword)
    : vocab_(std::move(vocab)), train_(train), subword_(subword) {
  train_.validate();
  subword_.validate();
  if (vocab_.size() == 0) throw Error(ErrorCode::EmptyCorpus, "empty vocabulary");
  const std::size_t dim = train_.dim;
  const std::size_t rows = vocab_.size() + subword_.bucket_count;
  input_.resize(rows * dim);
  output_.assign(vocab_.size() * dim, 0.0f);
  SplitMix64 rng(train_.seed);
  const double bound = 1.0 / static_cast<double>(dim);
  for (auto& x : input_) x = static_cast<float>((rng.uniform() * 2.0 - 1.0) * bound);
  build_word_rows();
}

void EmbeddingModel::build_word_rows() {
  const auto v = static_cast<std::uint32_t>(vocab_.size());
  row_offsets_.assign(1, 0);
  rows_.clear();
  for (std::uint32_t w = 0; w < v; ++w) {
    rows_.push_back(w);
    for (auto b : subword_ngrams(vocab_.words[w], subword_, true)) rows_.push_back(v + b);
    row_offsets_.push_back(static_cast<std::uint32_t>(rows_.size()));
  }
}

std::span<const std::uint32_t> EmbeddingModel::word_rows(std::int32_t word) const {
  return {rows_.data() + row_offsets_[word], rows_.data() + row_offsets_[word + 1]};
}

std::vector<std::uint32_t> EmbeddingModel::rows_for(std::string_view word) const {
  if (auto id = vocab_.find(word)) {
    auto r = word_rows(*id);
    return {r.begin(), r.end()};
  }
  const auto v = static_cast<std::uint32_t>(vocab_.size());
  std::vector<std::uint32_t> rows;
  for (auto b : subword_ngrams(word, subword_, false)) rows.push_back(v + b);
  return rows;
}

bool EmbeddingModel::operator==(const EmbeddingModel& o) const {
  const auto& a = train_;
  const auto& b = o.train_;
  return vocab_.words == o.vocab_.words && vocab_.counts == o.vocab_.counts &&
         vocab_.min_count == o.vocab_.min_count && vocab_.total_tokens == o.vocab_.total_tokens &&
         vocab_.sample == o.vocab_.sample && a.dim == b.dim && a.lr == b.lr && a.epochs == b.epochs &&
         a.window == b.window && a.negatives == b.negatives && a.seed == b.seed && a.workers == b.workers &&
         subword_.n_min == o.subword_.n_min && subword_.n_max == o.subword_.n_max &&
         subword_.bucket_count == o.subword_.bucket_count && meta_.corpus_id == o.meta_.corpus_id &&
         meta_.camp_id == o.meta_.camp_id && meta_.provenance == o.meta_.provenance && input_ == o.input_ &&
         output_ == o.output_;
}

// --- training -----------------------------------------------------------------

namespace {

constexpr std::size_t kNegativeTableSize = 10'000'000;

std::vector<std::int32_t> negative_table(const Vocabulary& vocab) {
  std::size_t size = std::min<std::size_t>(kNegativeTableSize, std::max<std::size_t>(vocab.size() * 1000, 1000));
  double z = 0.0;
  for (auto c : vocab.counts) z += std::pow(static_cast<double>(c), 0.75);
  std::vector<std::int32_t> table;
  table.reserve(size + vocab.size());
  for (std::size_t w = 0; w < vocab.size(); ++w) {
    const double share = std::pow(static_cast<double>(vocab.counts[w]), 0.75) / z;
    const auto n = static_cast<std::size_t>(std::ceil(share * static_cast<double>(size)));
    table.insert(table.end(), n, static_cast<std::int32_t>(w));
  }
  return table;
}

std::vector<double> keep_probabilities(const Vocabulary& vocab) {
  std::vector<double> p(vocab.size(), 1.0);
  if (vocab.sample <= 0.0) return p;
  const double total = static_cast<double>(vocab.total_tokens);
  for (std::size_t w = 0; w < vocab.size(); ++w) {
    const double r = vocab.sample / (static_cast<double>(vocab.counts[w]) / total);
    p[w] = std::min(1.0, std::sqrt(r) + r);
  }
  return p;
}

struct Worker {
  EmbeddingModel& model;
  const std::vector<std::int32_t>& negatives_table;
  const std::vector<double>& keep;
  SplitMix64 rng;
  std::vector<float> hidden;
  std::vector<float> grad_hidden;
  std::vector<float> grad_sum;
  std::vector<float> grad_outputs;
  std::vector<const float*> outputs;
  std::vector<std::int32_t> targets;
  std::vector<std::int32_t> line;
  double loss = 0.0;
  std::uint64_t pairs = 0;

  Worker(EmbeddingModel& m, const std::vector<std::int32_t>& table, const std::vector<double>& keep_p,
         std::uint64_t seed)
      : model(m), negatives_table(table), keep(keep_p), rng(seed) {
    const std::size_t dim = m.dim();
    const std::size_t groups = m.train_config().negatives + 1;
    hidden.resize(dim);
    grad_hidden.resize(dim);
    grad_sum.resize(dim);
    grad_outputs.resize(groups * dim);
    outputs.resize(groups);
    targets.resize(groups);
  }

  void compute_hidden(std::span<const std::uint32_t> rows) {
    const std::size_t dim = hidden.size();
    const float* in = model.input().data();
    std::fill(hidden.begin(), hidden.end(), 0.0f);
    for (auto r : rows) {
      const float* src = in + static_cast<std::size_t>(r) * dim;
      for (std::size_t i = 0; i < dim; ++i) hidden[i] += src[i];
    }
    const float inv = 1.0f / static_cast<float>(rows.size());
    for (auto& x : hidden) x *= inv;
  }

  // One (center, context) pair against the current hidden vector. Output
  // rows are updated in place; the input-side step is added to grad_sum.
  void pair(std::int32_t target, float lr) {
    const std::size_t dim = hidden.size();
    float* out = model.output().data();
    targets[0] = target;
    for (std::size_t n = 1; n < targets.size(); ++n) {
      std::int32_t neg;
      do {
        neg = negatives_table[rng.below(negatives_table.size())];
      } while (neg == target);
      targets[n] = neg;
    }
    for (std::size_t j = 0; j < targets.size(); ++j) outputs[j] = out + static_cast<std::size_t>(targets[j]) * dim;
    const float ll = ns_log_likelihood<float>(hidden, outputs, grad_hidden, grad_outputs);
    loss -= ll;
    ++pairs;
    for (std::size_t j = 0; j < targets.size(); ++j) {
      float* u = out + static_cast<std::size_t>(targets[j]) * dim;
      const float* g = grad_outputs.data() + j * dim;
      for (std::size_t i = 0; i < dim; ++i) u[i] += lr * g[i];
    }
    for (std::size_t i = 0; i < dim; ++i) grad_sum[i] += lr * grad_hidden[i];
  }

  // Every contributing row receives the full hidden-vector step.
  void apply(std::span<const std::uint32_t> rows) {
    const std::size_t dim = hidden.size();
    float* in = model.input().data();
    for (auto r : rows) {
      float* dst = in + static_cast<std::size_t>(r) * dim;
      for (std::size_t i = 0; i < dim; ++i) dst[i] += grad_sum[i];
    }
  }

  // Returns the number of tokens read (before subsampling).
  std::uint64_t process(const std::vector<std::string>& tokens, const std::function<float()>& lr_now) {
    const Vocabulary& vocab = model.vocab();
    line.clear();
    std::uint64_t read = 0;
    for (const auto& t : tokens) {
      auto id = vocab.find(t);
      if (!id) continue;
      ++read;
      if (keep[*id] < 1.0 && rng.uniform() >= keep[*id]) continue;
      line.push_back(*id);
    }
    const float lr = lr_now();
    const auto n = static_cast<std::int64_t>(line.size());
    const auto window = model.train_config().window;
    for (std::int64_t i = 0; i < n; ++i) {
      const auto b = static_cast<std::int64_t>(1 + rng.below(window));
      const auto rows = model.word_rows(line[i]);
      compute_hidden(rows);
      std::fill(grad_sum.begin(), grad_sum.end(), 0.0f);
      bool any = false;
      for (std::int64_t c = i - b; c <= i + b; ++c) {
        if (c == i || c < 0 || c >= n) continue;
        pair(line[c], lr);
        any = true;
      }
      if (any) apply(rows);
    }
    return read;
  }
};

}  // namespace

TrainResult train(const TokenLines& lines, const Vocabulary& vocab, const TrainConfig& train_cfg,
                  const SubwordConfig& subword_cfg, const std::function<void(const EpochStats&)>& progress) {
  if (vocab.size() == 0 || vocab.total_tokens == 0) throw Error(ErrorCode::EmptyCorpus, "empty vocabulary");
  TrainResult result{EmbeddingModel(vocab, train_cfg, subword_cfg), {}};
  EmbeddingModel& model = result.model;
  if (train_cfg.epochs == 0) return result;

  const auto table = negative_table(model.vocab());
  const auto keep = keep_probabilities(model.vocab());
  const double planned = static_cast<double>(model.vocab().total_tokens) * train_cfg.epochs;
  std::atomic<std::uint64_t> processed{0};
  auto lr_now = [&]() {
    const double done = static_cast<double>(processed.load(std::memory_order_relaxed)) / planned;
    return static_cast<float>(train_cfg.lr * std::max(0.0, 1.0 - done));
  };

  const std::uint32_t workers = train_cfg.workers;
  SplitMix64 root(train_cfg.seed ^ 0x5eedf00dULL);
  std::vector<Worker> pool;
  pool.reserve(workers);
  for (std::uint32_t w = 0; w < workers; ++w) pool.emplace_back(model, table, keep, root.next());

  const std::size_t n_lines = lines.size();
  auto run_shard = [&](std::uint32_t w) {
    Worker& worker = pool[w];
    const std::size_t begin = n_lines * w / workers;
    const std::size_t end = n_lines * (w + 1) / workers;
    for (std::size_t l = begin; l < end; ++l) {
      const auto read = worker.process(lines[l], lr_now);
      processed.fetch_add(read, std::memory_order_relaxed);
    }
  };

  for (std::uint32_t epoch = 1; epoch <= train_cfg.epochs; ++epoch) {
    for (auto& w : pool) {
      w.loss = 0.0;
      w.pairs = 0;
    }
    if (workers == 1) {
      run_shard(0);
    } else {
#pragma omp parallel for num_threads(static_cast<int>(workers)) schedule(static, 1)
      for (std::int64_t w = 0; w < static_cast<std::int64_t>(workers); ++w) run_shard(static_cast<std::uint32_t>(w));
    }
    double loss = 0.0;
    std::uint64_t pairs = 0;
    for (const auto& w : pool) {
      loss += w.loss;
      pairs += w.pairs;
    }
    EpochStats stats;
    stats.epoch = epoch;
    stats.tokens = processed.load();
    stats.mean_loss = pairs > 0 ? loss / static_cast<double>(pairs) : 0.0;
    stats.lr = lr_now();
    result.epochs.push_back(stats);
    if (progress) progress(stats);
  }
  return result;
}

std::vector<float> vector(const EmbeddingModel& model, std::string_view word) {
  const auto rows = model.rows_for(word);
  if (rows.empty()) throw Error(ErrorCode::NoRepresentableNgrams, "no vector for '" + std::string(word) + "'");
  const std::size_t dim = model.dim();
  std::vector<double> acc(dim, 0.0);
  const float* in = model.input().data();
  for (auto r : rows) {
    const float* src = in + static_cast<std::size_t>(r) * dim;
    for (std::size_t i = 0; i < dim; ++i) acc[i] += src[i];
  }
  std::vector<float> out(dim);
  for (std::size_t i = 0; i < dim; ++i) out[i] = static_cast<float>(acc[i] / static_cast<double>(rows.size()));
  return out;
}

// --- neighbours ----------------------------------------------------------------

NeighborIndex::NeighborIndex(const EmbeddingModel& model, bool parallel) : model_(&model), parallel_(parallel) {
  const std::size_t dim = model.dim();
  const std::size_t v = model.vocab().size();
  unit_.resize(v * dim);
  for (std::size_t w = 0; w < v; ++w) {
    auto vec = vector(model, model.vocab().words[w]);
    double norm = 0.0;
    for (float x : vec) norm += static_cast<double>(x) * x;
    const float inv = norm > 0.0 ? static_cast<float>(1.0 / std::sqrt(norm)) : 0.0f;
    for (std::size_t i = 0; i < dim; ++i) unit_[w * dim + i] = vec[i] * inv;
  }
}

std::vector<NNResult> NeighborIndex::query(std::string_view term, std::size_t k) const {
  const auto q = vector(*model_, term);
  const auto& words = model_->vocab().words;
  std::vector<float> scores(words.size());
  if (parallel_) {
    kernels::cosine_scores_omp(unit_, model_->dim(), q, scores);
  } else {
    kernels::cosine_scores_serial(unit_, model_->dim(), q, scores);
  }
  const auto self = model_->vocab().find(term);
  std::vector<std::uint32_t> order;
  order.reserve(words.size());
  for (std::uint32_t w = 0; w < words.size(); ++w)
    if (!self || static_cast<std::int32_t>(w) != *self) order.push_back(w);
  const std::size_t take = std::min(k, order.size());
  auto better = [&](std::uint32_t a, std::uint32_t b) {
    return scores[a] != scores[b] ? scores[a] > scores[b] : words[a] < words[b];
  };
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(take), order.end(), better);
  std::vector<NNResult> out;
  out.reserve(take);
  for (std::size_t i = 0; i < take; ++i)
    out.push_back({words[order[i]], static_cast<std::uint32_t>(i + 1), scores[order[i]]});
  return out;
}

std::vector<NNResult> nearest_neighbors(const EmbeddingModel& model, std::string_view query, std::size_t k) {
  if (k < 1) throw Error(ErrorCode::InvalidParams, "k must be >= 1");
  return NeighborIndex(model).query(query, k);
}

// --- persistence ---------------------------------------------------------------

namespace {

constexpr char kMagic[8] = {'P', 'L', 'R', 'E', 'M', 'B', 'D', '\n'};

template <typename T>
void put(std::ostream& out, T v) {
  if constexpr (std::is_same_v<T, double>) {
    put(out, std::bit_cast<std::uint64_t>(v));
  } else {
    unsigned char buf[sizeof(T)];
    for (std::size_t i = 0; i < sizeof(T); ++i) buf[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
    out.write(reinterpret_cast<const char*>(buf), sizeof(T));
  }
}

void put_string(std::ostream& out, const std::string& s) {
  put<std::uint32_t>(out, static_cast<std::uint32_t>(s.size()));
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

void put_floats(std::ostream& out, const std::vector<float>& v) {
  put<std::uint64_t>(out, v.size());
  if constexpr (std::endian::native == std::endian::little) {
    out.write(reinterpret_cast<const char*>(v.data()), static_cast<std::streamsize>(v.size() * sizeof(float)));
  } else {
    for (float x : v) put(out, std::bit_cast<std::uint32_t>(x));
  }
}

class Reader {
 public:
  Reader(std::istream& in, std::uint64_t size) : in_(in), left_(size) {}

  void need(std::uint64_t n) {
    if (n > left_) throw Error(ErrorCode::IoFailure, "model file truncated");
  }

  template <typename T>
  T get() {
    if constexpr (std::is_same_v<T, double>) {
      return std::bit_cast<double>(get<std::uint64_t>());
    } else {
      unsigned char buf[sizeof(T)];
      raw(reinterpret_cast<char*>(buf), sizeof(T));
      T v = 0;
      for (std::size_t i = 0; i < sizeof(T); ++i) v |= static_cast<T>(static_cast<T>(buf[i]) << (8 * i));
      return v;
    }
  }

  std::string get_string() {
    const auto n = get<std::uint32_t>();
    need(n);
    std::string s(n, '\0');
    raw(s.data(), n);
    return s;
  }

  std::vector<float> get_floats(std::uint64_t expected) {
    const auto n = get<std::uint64_t>();
    if (n != expected) throw Error(ErrorCode::IoFailure, "matrix size does not match header");
    need(n * sizeof(float));
    std::vector<float> v(n);
    if constexpr (std::endian::native == std::endian::little) {
      raw(reinterpret_cast<char*>(v.data()), n * sizeof(float));
    } else {
      for (auto& x : v) x = std::bit_cast<float>(get<std::uint32_t>());
    }
    return v;
  }

  void raw(char* dst, std::uint64_t n) {
    need(n);
    in_.read(dst, static_cast<std::streamsize>(n));
    if (!in_) throw Error(ErrorCode::IoFailure, "model file truncated");
    left_ -= n;
  }

  std::uint64_t left() const { return left_; }

 private:
  std::istream& in_;
  std::uint64_t left_;
};

}  // namespace

void save(const EmbeddingModel& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoFailure, "cannot write " + path);
  out.write(kMagic, sizeof kMagic);
  put<std::uint32_t>(out, kModelFormatVersion);
  const auto& t = model.train_config();
  put<std::uint32_t>(out, t.dim);
  put<double>(out, t.lr);
  put<std::uint32_t>(out, t.epochs);
  put<std::uint32_t>(out, t.window);
  put<std::uint32_t>(out, t.negatives);
  put<std::uint64_t>(out, t.seed);
  put<std::uint32_t>(out, t.workers);
  const auto& s = model.subword_config();
  put<std::uint32_t>(out, s.n_min);
  put<std::uint32_t>(out, s.n_max);
  put<std::uint32_t>(out, s.bucket_count);
  const auto& v = model.vocab();
  put<std::uint32_t>(out, v.min_count);
  put<double>(out, v.sample);
  put<std::uint64_t>(out, v.total_tokens);
  put_string(out, model.metadata().corpus_id);
  put_string(out, model.metadata().camp_id);
  put_string(out, model.metadata().provenance);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(v.size()));
  for (std::size_t w = 0; w < v.size(); ++w) {
    put_string(out, v.words[w]);
    put<std::uint64_t>(out, v.counts[w]);
  }
  const auto in_span = model.input();
  const auto out_span = model.output();
  put_floats(out, std::vector<float>(in_span.begin(), in_span.end()));
  put_floats(out, std::vector<float>(out_span.begin(), out_span.end()));
  out.flush();
  if (!out) throw Error(ErrorCode::IoFailure, "write failed for " + path);
}

EmbeddingModel load(const std::string& path) {
  std::ifstream in(path, std::ios::binary | std::ios::ate);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot read " + path);
  const auto size = static_cast<std::uint64_t>(in.tellg());
  in.seekg(0);
  Reader r(in, size);
  char magic[sizeof kMagic];
  if (size < sizeof kMagic + 4) throw Error(ErrorCode::IoFailure, "model file truncated");
  r.raw(magic, sizeof magic);
  if (std::memcmp(magic, kMagic, sizeof kMagic) != 0) throw Error(ErrorCode::VersionMismatch, "not a model file");
  const auto version = r.get<std::uint32_t>();
  if (version != kModelFormatVersion)
    throw Error(ErrorCode::VersionMismatch, "unsupported model version " + std::to_string(version));

  EmbeddingModel m;
  m.train_.dim = r.get<std::uint32_t>();
  m.train_.lr = r.get<double>();
  m.train_.epochs = r.get<std::uint32_t>();
  m.train_.window = r.get<std::uint32_t>();
  m.train_.negatives = r.get<std::uint32_t>();
  m.train_.seed = r.get<std::uint64_t>();
  m.train_.workers = r.get<std::uint32_t>();
  m.subword_.n_min = r.get<std::uint32_t>();
  m.subword_.n_max = r.get<std::uint32_t>();
  m.subword_.bucket_count = r.get<std::uint32_t>();
  m.vocab_.min_count = r.get<std::uint32_t>();
  m.vocab_.sample = r.get<double>();
  m.vocab_.total_tokens = r.get<std::uint64_t>();
  try {
    m.train_.validate();
    m.subword_.validate();
  } catch (const Error& e) {
    throw Error(ErrorCode::IoFailure, std::string("corrupt model header: ") + e.what());
  }
  m.meta_.corpus_id = r.get_string();
  m.meta_.camp_id = r.get_string();
  m.meta_.provenance = r.get_string();
  const auto v = r.get<std::uint32_t>();
  r.need(static_cast<std::uint64_t>(v) * 12);
  m.vocab_.words.reserve(v);
  m.vocab_.counts.reserve(v);
  for (std::uint32_t w = 0; w < v; ++w) {
    m.vocab_.words.push_back(r.get_string());
    m.vocab_.counts.push_back(r.get<std::uint64_t>());
  }
  m.vocab_.reindex();
  const std::uint64_t dim = m.train_.dim;
  m.input_ = r.get_floats((static_cast<std::uint64_t>(v) + m.subword_.bucket_count) * dim);
  m.output_ = r.get_floats(static_cast<std::uint64_t>(v) * dim);
  if (r.left() != 0) throw Error(ErrorCode::IoFailure, "trailing bytes in model file");
  m.build_word_rows();
  return m;
}

void export_text(const EmbeddingModel& model, const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoFailure, "cannot write " + path);
  const auto& words = model.vocab().words;
  out << words.size() << ' ' << model.dim() << '\n';
  out << std::setprecision(9);
  for (const auto& w : words) {
    out << w;
    for (float x : vector(model, w)) out << ' ' << x;
    out << '\n';
  }
  if (!out) throw Error(ErrorCode::IoFailure, "write failed for " + path);
}

}  // namespace polarembed::embed
