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

// Synthetic polarized populations: retweet graphs with planted camps and
// camp corpora with planted entity/sentiment co-occurrence. Output uses the
// same record types and file formats as real ingestion.

#include <cstdint>
#include <string>
#include <vector>

#include "polarembed/corpus.hpp"
#include "polarembed/stance.hpp"

namespace polarembed::synth {

struct NetworkParams {
  std::uint32_t users_per_camp = 500;
  std::uint32_t seeds_per_camp = 20;
  std::uint32_t tweets_per_camp = 500;
  std::uint32_t retweets_per_user = 12;
  double cross_camp_retweet_prob = 0.05;
  std::uint64_t rng_seed = 1;
  // Same-camp retweets pick tweets by Zipf(popularity_exponent) over rank.
  double popularity_exponent = 1.0;
  // Redirected retweets land on the other camp's top `viral_tweets` tweets,
  // which are never picked by their own camp.
  std::uint32_t viral_tweets = 1;

  void validate() const;  // Error(InvalidParams)
};

struct SynthNetwork {
  std::vector<corpus::UserRecord> users;
  std::vector<corpus::TweetRecord> tweets;  // originals, then retweets
  stance::GoldLabels gold;                  // camp A = pro, camp B = anti
  std::vector<std::string> seed_users;      // profiles match the default seed rules
};

SynthNetwork gen_polarized_network(const NetworkParams& p);

struct CorpusParams {
  std::uint32_t vocab_size = 2000;       // distinct tokens per camp, entity and lexicon included
  std::uint32_t sentences = 16667;       // per camp
  std::uint32_t sentence_length = 12;
  std::string entity_token = "kilicdaroglu";  // must survive the default pipeline unchanged
  double positive_ratio_camp_a = 0.9;
  std::uint32_t window_cooccurrence = 3;
  std::uint64_t rng_seed = 1;
  std::uint32_t lexicon_per_polarity = 20;
  double entity_sentence_prob = 0.3;
  std::uint32_t sentiment_per_entity_sentence = 2;
  double background_sentiment_prob = 0.1;
  std::uint32_t authors_per_camp = 200;

  void validate() const;  // Error(InvalidParams)
};

struct PlantedWord {
  std::string word;
  bool positive = true;
};

struct SynthCorpus {
  std::vector<std::vector<std::string>> camp_a;  // token sentences
  std::vector<std::vector<std::string>> camp_b;
  std::vector<PlantedWord> lexicon;
  std::vector<std::string> fillers;
  std::string entity;
};

SynthCorpus gen_polarized_corpus(const CorpusParams& p);

// Tweets authored by camp users (camp A = pro), one per sentence.
struct CorpusRecords {
  std::vector<corpus::UserRecord> users;
  std::vector<corpus::TweetRecord> tweets;
  stance::GoldLabels gold;
};
CorpusRecords corpus_records(const SynthCorpus& c, const CorpusParams& p);

// Lowercase syllable word that the default pipeline leaves unchanged.
bool is_pipeline_fixed_point(const std::string& word);

std::string lexicon_tsv(const SynthCorpus& c);
std::string entities_toml(const SynthCorpus& c, const std::vector<std::string>& spaces);

// JSONL in the archive schema, one status per line.
std::string archive_jsonl(const std::vector<corpus::TweetRecord>& tweets,
                          const std::vector<corpus::UserRecord>& users);

NetworkParams load_network_params(const std::string& toml_path, NetworkParams base = {});
CorpusParams load_corpus_params(const std::string& toml_path, CorpusParams base = {});

}  // namespace polarembed::synth
