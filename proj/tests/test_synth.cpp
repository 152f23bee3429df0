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

#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "polarembed/common.hpp"
#include "polarembed/corpus.hpp"
#include "polarembed/polarity.hpp"
#include "polarembed/stance.hpp"
#include "polarembed/synth.hpp"
#include "polarembed/textprep.hpp"

namespace ps = polarembed::stance;
namespace pc = polarembed::corpus;
namespace sy = polarembed::synth;
using polarembed::Error;
using polarembed::ErrorCode;

namespace {

struct Recovery {
  std::size_t gold = 0;
  std::size_t correct = 0;
  std::size_t wrong = 0;
};

// Ingest-equivalent route: archive JSONL back through the parser, seed rules,
// retweet index, propagation.
Recovery recover(const sy::SynthNetwork& net, std::uint32_t threshold) {
  std::istringstream in(sy::archive_jsonl(net.tweets, net.users));
  pc::Corpus corpus;
  std::map<std::string, pc::UserRecord> users;
  pc::ingest_stream(in, {}, corpus, users);
  std::vector<pc::UserRecord> user_list;
  for (auto& [id, u] : users) user_list.push_back(u);
  const auto rules = ps::default_seed_rules();
  const auto seeds = ps::apply_seed_rules(user_list, rules);
  const auto index = pc::build_retweet_index(corpus.tweets);
  ps::PropagationConfig cfg;
  cfg.threshold = threshold;
  const auto result = ps::propagate_to_fixpoint(index, seeds.labeling, cfg);
  Recovery r;
  for (const auto& [user, label] : net.gold) {
    if (!label) continue;
    ++r.gold;
    const auto got = result.labeling.label_of(user);
    if (!got) continue;
    (*got == *label ? r.correct : r.wrong) += 1;
  }
  return r;
}

}  // namespace

TEST(SynthNetwork, DeterministicPerSeed) {
  sy::NetworkParams p;
  p.users_per_camp = 60;
  p.tweets_per_camp = 80;
  const auto a = sy::gen_polarized_network(p);
  const auto b = sy::gen_polarized_network(p);
  EXPECT_EQ(sy::archive_jsonl(a.tweets, a.users), sy::archive_jsonl(b.tweets, b.users));
  EXPECT_EQ(ps::gold_to_tsv(a.gold), ps::gold_to_tsv(b.gold));
  p.rng_seed = 2;
  const auto c = sy::gen_polarized_network(p);
  EXPECT_NE(sy::archive_jsonl(a.tweets, a.users), sy::archive_jsonl(c.tweets, c.users));
}

TEST(SynthNetwork, GoldPartitionsUsersAndSeedsMatchRules) {
  sy::NetworkParams p;
  p.users_per_camp = 50;
  p.seeds_per_camp = 7;
  p.tweets_per_camp = 60;
  const auto net = sy::gen_polarized_network(p);
  EXPECT_EQ(net.users.size(), 100u);
  EXPECT_EQ(net.gold.size(), 100u);
  std::size_t pro = 0, anti = 0;
  for (const auto& [u, l] : net.gold) {
    ASSERT_TRUE(l.has_value());
    (*l == ps::StanceLabel::Pro ? pro : anti) += 1;
  }
  EXPECT_EQ(pro, 50u);
  EXPECT_EQ(anti, 50u);
  ASSERT_EQ(net.seed_users.size(), 14u);
  const auto seeds = ps::apply_seed_rules(net.users, ps::default_seed_rules());
  EXPECT_EQ(seeds.labeling.labels.size(), 14u);
  EXPECT_TRUE(seeds.labeling.conflicts.empty());
  for (const auto& s : net.seed_users) EXPECT_EQ(seeds.labeling.label_of(s), net.gold.at(s));
}

TEST(SynthNetwork, RetweetCountsPerUser) {
  sy::NetworkParams p;
  p.users_per_camp = 40;
  p.tweets_per_camp = 50;
  const auto net = sy::gen_polarized_network(p);
  std::map<std::string, std::size_t> retweets;
  for (const auto& t : net.tweets)
    if (t.origin_id) ++retweets[t.author_id];
  ASSERT_EQ(retweets.size(), 80u);
  for (const auto& [u, n] : retweets) EXPECT_EQ(n, p.retweets_per_user) << u;
}

TEST(SynthNetwork, NoCrossRetweetsGivesFullRecovery) {
  sy::NetworkParams p;
  p.cross_camp_retweet_prob = 0.0;
  p.retweets_per_user = 12;
  const auto r = recover(sy::gen_polarized_network(p), 10);
  EXPECT_EQ(r.correct, r.gold);
  EXPECT_EQ(r.wrong, 0u);
}

TEST(SynthNetwork, InvalidParams) {
  auto expect_invalid = [](const sy::NetworkParams& p) {
    try {
      sy::gen_polarized_network(p);
      ADD_FAILURE();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::InvalidParams);
    }
  };
  sy::NetworkParams p;
  p.seeds_per_camp = p.users_per_camp + 1;
  expect_invalid(p);
  p = {};
  p.cross_camp_retweet_prob = 1.5;
  expect_invalid(p);
  p = {};
  p.retweets_per_user = p.tweets_per_camp;
  expect_invalid(p);
}

// --- corpus ----------------------------------------------------------------------

namespace {

sy::CorpusParams small_corpus(std::uint64_t seed = 1) {
  sy::CorpusParams p;
  p.vocab_size = 300;
  p.sentences = 2000;
  p.rng_seed = seed;
  return p;
}

}  // namespace

TEST(SynthCorpus, DeterministicPerSeed) {
  const auto a = sy::gen_polarized_corpus(small_corpus());
  const auto b = sy::gen_polarized_corpus(small_corpus());
  EXPECT_EQ(a.camp_a, b.camp_a);
  EXPECT_EQ(a.camp_b, b.camp_b);
  EXPECT_EQ(sy::lexicon_tsv(a), sy::lexicon_tsv(b));
  const auto c = sy::gen_polarized_corpus(small_corpus(2));
  EXPECT_NE(a.camp_a, c.camp_a);
}

TEST(SynthCorpus, WordsAreDistinctFixedPoints) {
  const auto c = sy::gen_polarized_corpus(small_corpus());
  std::vector<std::string> all{c.entity};
  for (const auto& w : c.lexicon) all.push_back(w.word);
  all.insert(all.end(), c.fillers.begin(), c.fillers.end());
  EXPECT_EQ(all.size(), 300u);
  EXPECT_EQ(std::set<std::string>(all.begin(), all.end()).size(), all.size());
  for (std::size_t i = 0; i < all.size(); ++i) {
    ASSERT_EQ(polarembed::textprep::preprocess_tweet(all[i]), std::vector<std::string>{all[i]}) << all[i];
    for (std::size_t j = i + 1; j < all.size(); ++j) ASSERT_GE(polarembed::polarity::levenshtein(all[i], all[j]), 3u);
  }
}

TEST(SynthCorpus, FullRatioHasNoEntityNegativeCooccurrence) {
  auto p = small_corpus();
  p.positive_ratio_camp_a = 1.0;
  const auto c = sy::gen_polarized_corpus(p);
  std::set<std::string> negative, positive;
  for (const auto& w : c.lexicon) (w.positive ? positive : negative).insert(w.word);
  std::size_t entity_sentences = 0, entity_positive = 0;
  for (const auto& s : c.camp_a) {
    if (std::find(s.begin(), s.end(), c.entity) == s.end()) continue;
    ++entity_sentences;
    for (const auto& t : s) {
      ASSERT_FALSE(negative.contains(t));
      entity_positive += positive.contains(t);
    }
  }
  EXPECT_GT(entity_sentences, 0u);
  EXPECT_GT(entity_positive, 0u);
}

TEST(SynthCorpus, PlantedRatioIsObservedAndHalfIsSymmetric) {
  for (double ratio : {0.9, 0.5}) {
    auto p = small_corpus(3);
    p.sentences = 6000;
    p.positive_ratio_camp_a = ratio;
    const auto c = sy::gen_polarized_corpus(p);
    std::set<std::string> positive;
    for (const auto& w : c.lexicon)
      if (w.positive) positive.insert(w.word);
    auto share = [&](const std::vector<std::vector<std::string>>& camp) {
      double pos = 0, total = 0;
      for (const auto& s : camp) {
        const auto at = std::find(s.begin(), s.end(), c.entity);
        if (at == s.end()) continue;
        const auto i = at - s.begin();
        for (std::ptrdiff_t q = std::max<std::ptrdiff_t>(0, i - 3); q <= std::min<std::ptrdiff_t>(s.size() - 1, i + 3); ++q) {
          bool lex = false;
          for (const auto& w : c.lexicon) lex |= w.word == s[q];
          if (!lex) continue;
          total += 1;
          pos += positive.contains(s[q]);
        }
      }
      return pos / total;
    };
    EXPECT_NEAR(share(c.camp_a), ratio, 0.03);
    EXPECT_NEAR(share(c.camp_b), 1.0 - ratio, 0.03);
  }
}

TEST(SynthCorpus, RecordsRoundTripThroughIngestAndPipeline) {
  const auto p = small_corpus();
  const auto c = sy::gen_polarized_corpus(p);
  const auto rec = sy::corpus_records(c, p);
  EXPECT_EQ(rec.tweets.size(), c.camp_a.size() + c.camp_b.size());
  EXPECT_EQ(rec.gold.size(), 2u * p.authors_per_camp);
  std::istringstream in(sy::archive_jsonl(rec.tweets, rec.users));
  pc::Corpus corpus;
  std::map<std::string, pc::UserRecord> users;
  pc::ingest_stream(in, {"tr"}, corpus, users);
  ASSERT_EQ(corpus.tweets.size(), rec.tweets.size());
  EXPECT_EQ(corpus.stats.malformed, 0u);
  for (std::size_t i = 0; i < 50; ++i) EXPECT_EQ(polarembed::textprep::preprocess_tweet(corpus.tweets[i].text), c.camp_a[i]);
}

TEST(SynthCorpus, LexiconAndEntitiesLoad) {
  const auto c = sy::gen_polarized_corpus(small_corpus());
  const auto lex = polarembed::polarity::parse_lexicon(sy::lexicon_tsv(c));
  EXPECT_EQ(lex.entries.size(), 40u);
  for (const auto& e : lex.entries) EXPECT_EQ(e.normalized, e.surface);
  const auto ents = polarembed::polarity::parse_entities(sy::entities_toml(c, {"a", "b"}));
  ASSERT_EQ(ents.size(), 1u);
  EXPECT_EQ(ents[0].canonical, c.entity);
  EXPECT_EQ(ents[0].spaces, (std::vector<std::string>{"a", "b"}));
}

TEST(SynthCorpus, InvalidParams) {
  auto p = small_corpus();
  p.positive_ratio_camp_a = 1.2;
  EXPECT_THROW(sy::gen_polarized_corpus(p), Error);
  p = small_corpus();
  p.entity_token = "Kılıçdaroğlu";
  try {
    sy::gen_polarized_corpus(p);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidParams);
  }
}

TEST(SynthParams, LoadFromToml) {
  const auto dir = std::filesystem::path(POLAREMBED_TEST_TMP);
  std::filesystem::create_directories(dir);
  const auto path = (dir / "synth.toml").string();
  std::ofstream(path) << "[network]\nusers_per_camp = 77\ncross_camp_retweet_prob = 0.1\n"
                         "[corpus]\nvocab_size = 500\nentity_token = \"kilicdaroglu\"\n";
  const auto n = sy::load_network_params(path);
  EXPECT_EQ(n.users_per_camp, 77u);
  EXPECT_DOUBLE_EQ(n.cross_camp_retweet_prob, 0.1);
  EXPECT_EQ(n.seeds_per_camp, 20u);
  const auto c = sy::load_corpus_params(path);
  EXPECT_EQ(c.vocab_size, 500u);
}
