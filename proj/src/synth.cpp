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

#include "polarembed/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <set>
#include <sstream>
#include <toml.hpp>

#include "polarembed/common.hpp"
#include "polarembed/polarity.hpp"
#include "polarembed/textprep.hpp"

namespace polarembed::synth {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorCode::InvalidParams, what);
}

std::string numbered(std::string_view prefix, std::uint64_t n, int width) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%0*llu", width, static_cast<unsigned long long>(n));
  return std::string(prefix) + buf;
}

std::string timestamp(std::uint64_t offset_seconds) {
  const std::time_t t = static_cast<std::time_t>(1527811200 + offset_seconds);  // 2018-06-01T00:00:00Z
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Cumulative Zipf weights over ranks [first, n).
class ZipfSampler {
 public:
  ZipfSampler(std::size_t first, std::size_t n, double exponent) : first_(first) {
    double acc = 0.0;
    for (std::size_t r = first; r < n; ++r) {
      acc += 1.0 / std::pow(static_cast<double>(r + 1), exponent);
      cum_.push_back(acc);
    }
  }

  std::size_t operator()(SplitMix64& rng) const {
    const double x = rng.uniform() * cum_.back();
    const auto it = std::upper_bound(cum_.begin(), cum_.end(), x);
    const auto idx = static_cast<std::size_t>(std::min<std::ptrdiff_t>(it - cum_.begin(), cum_.size() - 1));
    return first_ + idx;
  }

 private:
  std::size_t first_;
  std::vector<double> cum_;
};

}  // namespace

// --- network -------------------------------------------------------------------

void NetworkParams::validate() const {
  require(users_per_camp >= 1, "users_per_camp must be >= 1");
  require(seeds_per_camp <= users_per_camp, "seeds_per_camp must not exceed users_per_camp");
  require(viral_tweets >= 1 && viral_tweets < tweets_per_camp, "need 1 <= viral_tweets < tweets_per_camp");
  require(retweets_per_user <= tweets_per_camp - viral_tweets,
          "retweets_per_user exceeds the number of retweetable tweets");
  require(cross_camp_retweet_prob >= 0.0 && cross_camp_retweet_prob <= 1.0,
          "cross_camp_retweet_prob must lie in [0, 1]");
  require(popularity_exponent >= 0.0, "popularity_exponent must be >= 0");
}

SynthNetwork gen_polarized_network(const NetworkParams& p) {
  p.validate();
  SynthNetwork net;
  SplitMix64 rng(p.rng_seed);
  const char camp_tag[2] = {'p', 'a'};
  auto user_id = [&](int camp, std::uint32_t i) { return numbered(std::string(1, camp_tag[camp]), i, 4); };
  auto tweet_id = [&](int camp, std::uint32_t t) { return numbered(std::string("t") + camp_tag[camp], t, 5); };
  auto tweet_text = [&](int camp, std::uint32_t t) {
    return std::string(camp == 0 ? "destek" : "karsi") + " paylasim " + std::to_string(t);
  };

  for (int camp = 0; camp < 2; ++camp) {
    for (std::uint32_t i = 0; i < p.users_per_camp; ++i) {
      corpus::UserRecord u;
      u.user_id = user_id(camp, i);
      u.screen_name = "user_" + u.user_id;
      u.display_name = "user " + u.user_id;
      if (i < p.seeds_per_camp) {
        if (camp == 0) {
          u.screen_name = "akparti_" + std::to_string(i);
        } else {
          u.description = "#tamam";
        }
        net.seed_users.push_back(u.user_id);
      }
      net.gold[u.user_id] = camp == 0 ? stance::StanceLabel::Pro : stance::StanceLabel::Anti;
      net.users.push_back(std::move(u));
    }
  }

  std::uint64_t clock = 0;
  for (int camp = 0; camp < 2; ++camp) {
    for (std::uint32_t t = 0; t < p.tweets_per_camp; ++t) {
      corpus::TweetRecord r;
      r.tweet_id = tweet_id(camp, t);
      r.author_id = user_id(camp, t % p.users_per_camp);
      r.text = tweet_text(camp, t);
      r.lang = "tr";
      r.created_at = timestamp(clock++);
      net.tweets.push_back(std::move(r));
    }
  }

  const ZipfSampler pick(p.viral_tweets, p.tweets_per_camp, p.popularity_exponent);
  std::uint64_t retweet_no = 0;
  for (int camp = 0; camp < 2; ++camp) {
    for (std::uint32_t i = 0; i < p.users_per_camp; ++i) {
      std::set<std::size_t> seen;
      std::vector<std::size_t> picks;
      while (picks.size() < p.retweets_per_user) {
        const auto t = pick(rng);
        if (seen.insert(t).second) picks.push_back(t);
      }
      for (auto t : picks) {
        int target_camp = camp;
        auto target = static_cast<std::uint32_t>(t);
        if (rng.bernoulli(p.cross_camp_retweet_prob)) {
          target_camp = 1 - camp;
          target = static_cast<std::uint32_t>(rng.below(p.viral_tweets));
        }
        corpus::TweetRecord r;
        r.tweet_id = numbered("r", retweet_no++, 7);
        r.author_id = user_id(camp, i);
        r.origin_id = tweet_id(target_camp, target);
        r.text = "RT @user_" + user_id(target_camp, target % p.users_per_camp) + ": " +
                 tweet_text(target_camp, target);
        r.lang = "tr";
        r.created_at = timestamp(clock++);
        net.tweets.push_back(std::move(r));
      }
    }
  }
  return net;
}

// --- corpus --------------------------------------------------------------------

void CorpusParams::validate() const {
  require(positive_ratio_camp_a >= 0.0 && positive_ratio_camp_a <= 1.0, "positive_ratio_camp_a must lie in [0, 1]");
  require(entity_sentence_prob >= 0.0 && entity_sentence_prob <= 1.0, "entity_sentence_prob must lie in [0, 1]");
  require(background_sentiment_prob >= 0.0 && background_sentiment_prob <= 1.0,
          "background_sentiment_prob must lie in [0, 1]");
  require(lexicon_per_polarity >= 1, "lexicon_per_polarity must be >= 1");
  require(vocab_size >= 2 * lexicon_per_polarity + 2, "vocab_size too small for the lexicon");
  require(sentence_length >= 2, "sentence_length must be >= 2");
  require(window_cooccurrence >= 1, "window_cooccurrence must be >= 1");
  require(sentiment_per_entity_sentence <= std::min(sentence_length - 1, 2 * window_cooccurrence),
          "too many sentiment words for the window");
  require(authors_per_camp >= 1, "authors_per_camp must be >= 1");
  require(is_pipeline_fixed_point(entity_token), "entity_token must be unchanged by the default pipeline");
}

bool is_pipeline_fixed_point(const std::string& word) {
  if (word.empty()) return false;
  const auto toks = textprep::preprocess_tweet(word);
  return toks.size() == 1 && toks[0] == word;
}

SynthCorpus gen_polarized_corpus(const CorpusParams& p) {
  p.validate();
  SynthCorpus out;
  out.entity = p.entity_token;
  SplitMix64 root(p.rng_seed);
  SplitMix64 word_rng = root.split();

  static constexpr std::string_view kConsonants = "bcdfghklmnprstvyz";
  static constexpr std::string_view kVowels = "aeiou";
  const std::uint32_t needed = p.vocab_size - 1;
  std::vector<std::string> words;
  std::vector<std::u32string> decoded{utf8_decode(p.entity_token)};
  std::uint64_t attempts = 0;
  while (words.size() < needed) {
    require(++attempts < 1000ull * needed + 100000, "could not generate enough distinct words");
    const auto target = 5 + word_rng.below(5);
    std::string w;
    while (w.size() < target) {
      w += kConsonants[word_rng.below(kConsonants.size())];
      w += kVowels[word_rng.below(kVowels.size())];
      if (word_rng.bernoulli(0.3)) w += kConsonants[word_rng.below(kConsonants.size())];
    }
    if (w.find(p.entity_token) != std::string::npos || p.entity_token.find(w) != std::string::npos) continue;
    if (!is_pipeline_fixed_point(w)) continue;
    const auto dw = utf8_decode(w);
    bool close = false;
    for (const auto& d : decoded) {
      const auto gap = d.size() > dw.size() ? d.size() - dw.size() : dw.size() - d.size();
      if (gap < 3 && polarity::levenshtein(d, dw) < 3) {
        close = true;
        break;
      }
    }
    if (close) continue;
    decoded.push_back(dw);
    words.push_back(std::move(w));
  }

  const std::uint32_t L = p.lexicon_per_polarity;
  for (std::uint32_t i = 0; i < 2 * L; ++i) out.lexicon.push_back({words[i], i < L});
  out.fillers.assign(words.begin() + 2 * L, words.end());

  const ZipfSampler filler(0, out.fillers.size(), 1.0);
  for (int camp = 0; camp < 2; ++camp) {
    SplitMix64 rng = root.split();
    const double pos_ratio = camp == 0 ? p.positive_ratio_camp_a : 1.0 - p.positive_ratio_camp_a;
    auto& sentences = camp == 0 ? out.camp_a : out.camp_b;
    sentences.reserve(p.sentences);
    for (std::uint32_t s = 0; s < p.sentences; ++s) {
      std::vector<std::string> sent(p.sentence_length);
      for (auto& tok : sent) tok = out.fillers[filler(rng)];
      if (rng.bernoulli(p.entity_sentence_prob)) {
        const auto at = static_cast<std::int64_t>(rng.below(p.sentence_length));
        sent[at] = out.entity;
        const bool positive = rng.bernoulli(pos_ratio);
        std::vector<std::int64_t> slots;
        for (std::int64_t q = at - p.window_cooccurrence; q <= at + static_cast<std::int64_t>(p.window_cooccurrence);
             ++q)
          if (q != at && q >= 0 && q < static_cast<std::int64_t>(p.sentence_length)) slots.push_back(q);
        const auto k = std::min<std::size_t>(p.sentiment_per_entity_sentence, slots.size());
        for (std::size_t j = 0; j < k; ++j) {
          const auto pick = j + rng.below(slots.size() - j);
          std::swap(slots[j], slots[pick]);
          sent[slots[j]] = out.lexicon[(positive ? 0 : L) + rng.below(L)].word;
        }
      } else if (rng.bernoulli(p.background_sentiment_prob)) {
        sent[rng.below(p.sentence_length)] = out.lexicon[rng.below(2 * L)].word;
      }
      sentences.push_back(std::move(sent));
    }
  }
  return out;
}

CorpusRecords corpus_records(const SynthCorpus& c, const CorpusParams& p) {
  CorpusRecords rec;
  std::uint64_t clock = 0;
  for (int camp = 0; camp < 2; ++camp) {
    const std::string tag = camp == 0 ? "ca" : "cb";
    for (std::uint32_t i = 0; i < p.authors_per_camp; ++i) {
      corpus::UserRecord u;
      u.user_id = numbered(tag, i, 4);
      u.screen_name = "user_" + u.user_id;
      u.display_name = "user " + u.user_id;
      rec.gold[u.user_id] = camp == 0 ? stance::StanceLabel::Pro : stance::StanceLabel::Anti;
      rec.users.push_back(std::move(u));
    }
    const auto& sentences = camp == 0 ? c.camp_a : c.camp_b;
    for (std::size_t s = 0; s < sentences.size(); ++s) {
      corpus::TweetRecord t;
      t.tweet_id = numbered("s" + tag, s, 6);
      t.author_id = numbered(tag, s % p.authors_per_camp, 4);
      for (const auto& tok : sentences[s]) {
        if (!t.text.empty()) t.text += ' ';
        t.text += tok;
      }
      t.lang = "tr";
      t.created_at = timestamp(clock++);
      rec.tweets.push_back(std::move(t));
    }
  }
  return rec;
}

std::string lexicon_tsv(const SynthCorpus& c) {
  std::string out;
  for (const auto& w : c.lexicon) out += w.word + (w.positive ? "\tpositive\n" : "\tnegative\n");
  return out;
}

std::string entities_toml(const SynthCorpus& c, const std::vector<std::string>& spaces) {
  std::string out = "[[entity]]\ncanonical = \"" + c.entity + "\"\naliases = [\"" + c.entity + "\"]\nspaces = [";
  for (std::size_t i = 0; i < spaces.size(); ++i) out += (i ? ", \"" : "\"") + spaces[i] + "\"";
  return out + "]\n";
}

std::string archive_jsonl(const std::vector<corpus::TweetRecord>& tweets,
                          const std::vector<corpus::UserRecord>& users) {
  std::unordered_map<std::string, const corpus::UserRecord*> by_id;
  for (const auto& u : users) by_id.emplace(u.user_id, &u);
  std::string out;
  for (const auto& t : tweets) {
    corpus::UserRecord fallback;
    fallback.user_id = t.author_id;
    auto it = by_id.find(t.author_id);
    out += corpus::to_archive_json(t, it == by_id.end() ? fallback : *it->second);
    out += '\n';
  }
  return out;
}

// --- params ----------------------------------------------------------------------

namespace {

const toml::table& section(const toml::table& root, std::string_view name) {
  if (const auto* t = root[name].as_table()) return *t;
  return root;
}

template <typename T>
void read_uint(const toml::table& t, std::string_view key, T& out) {
  if (auto v = t[key].value<std::int64_t>()) {
    if (*v < 0) throw Error(ErrorCode::InvalidParams, std::string(key) + " must be non-negative");
    out = static_cast<T>(*v);
  }
}

void read_real(const toml::table& t, std::string_view key, double& out) {
  if (auto v = t[key].value<double>()) out = *v;
}

toml::table parse(const std::string& path) {
  try {
    return toml::parse_file(path);
  } catch (const toml::parse_error& e) {
    throw Error(ErrorCode::InvalidConfig, path + ": " + std::string(e.description()));
  }
}

}  // namespace

NetworkParams load_network_params(const std::string& toml_path, NetworkParams p) {
  const auto root = parse(toml_path);
  const auto& t = section(root, "network");
  read_uint(t, "users_per_camp", p.users_per_camp);
  read_uint(t, "seeds_per_camp", p.seeds_per_camp);
  read_uint(t, "tweets_per_camp", p.tweets_per_camp);
  read_uint(t, "retweets_per_user", p.retweets_per_user);
  read_real(t, "cross_camp_retweet_prob", p.cross_camp_retweet_prob);
  read_uint(t, "rng_seed", p.rng_seed);
  read_real(t, "popularity_exponent", p.popularity_exponent);
  read_uint(t, "viral_tweets", p.viral_tweets);
  p.validate();
  return p;
}

CorpusParams load_corpus_params(const std::string& toml_path, CorpusParams p) {
  const auto root = parse(toml_path);
  const auto& t = section(root, "corpus");
  read_uint(t, "vocab_size", p.vocab_size);
  read_uint(t, "sentences", p.sentences);
  read_uint(t, "sentence_length", p.sentence_length);
  if (auto v = t["entity_token"].value<std::string>()) p.entity_token = *v;
  read_real(t, "positive_ratio_camp_a", p.positive_ratio_camp_a);
  read_uint(t, "window_cooccurrence", p.window_cooccurrence);
  read_uint(t, "rng_seed", p.rng_seed);
  read_uint(t, "lexicon_per_polarity", p.lexicon_per_polarity);
  read_real(t, "entity_sentence_prob", p.entity_sentence_prob);
  read_uint(t, "sentiment_per_entity_sentence", p.sentiment_per_entity_sentence);
  read_real(t, "background_sentiment_prob", p.background_sentiment_prob);
  read_uint(t, "authors_per_camp", p.authors_per_camp);
  p.validate();
  return p;
}

}  // namespace polarembed::synth
