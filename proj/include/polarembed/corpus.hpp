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

// Tweet archive ingestion, duplicate-aware content keys and the retweet
// endorsement index.

#include <cstdint>
#include <functional>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace polarembed::corpus {

struct TweetRecord {
  std::string tweet_id;
  std::string author_id;
  std::string text;
  std::string lang;
  std::optional<std::string> origin_id;
  std::string created_at;

  bool operator==(const TweetRecord&) const = default;
};

struct UserRecord {
  std::string user_id;
  std::string screen_name;
  std::string display_name;
  std::string description;

  bool operator==(const UserRecord&) const = default;
};

struct ParsedLine {
  TweetRecord tweet;
  UserRecord user;
};

// Projects one archive status object. Throws Error(MalformedRecord) on invalid
// JSON or a missing id / user.id / text.
ParsedLine parse_tweet_line(std::string_view line);

bool filter_language(const TweetRecord& r, const std::set<std::string, std::less<>>& allowed);

struct ContentKey {
  enum class Kind : std::uint8_t { Origin, TextHash };
  Kind kind = Kind::Origin;
  std::string value;

  auto operator<=>(const ContentKey&) const = default;
  std::string str() const;  // "o:<id>" or "h:<hex>"
};

struct ContentKeyHash {
  std::size_t operator()(const ContentKey& k) const noexcept {
    return std::hash<std::string>{}(k.value) ^ static_cast<std::size_t>(k.kind);
  }
};

ContentKey content_key(const TweetRecord& r);

// Bidirectional user <-> content-key index. Users and keys are interned to
// dense ids in first-seen order; adjacency lists are kept sorted and unique.
class RetweetIndex {
 public:
  using Id = std::uint32_t;

  void add(const std::string& user_id, const ContentKey& key);
  void merge(const RetweetIndex& other);

  std::size_t user_count() const { return users_.size(); }
  std::size_t key_count() const { return keys_.size(); }

  const std::string& user(Id id) const { return users_[id]; }
  const ContentKey& key(Id id) const { return keys_[id]; }
  std::optional<Id> user_id(const std::string& user) const;
  std::optional<Id> key_id(const ContentKey& key) const;

  std::span<const Id> keys_of(Id user) const { return user_to_keys_[user]; }
  std::span<const Id> users_of(Id key) const { return key_to_users_[key]; }

  // String-keyed views, for tests and small tools.
  std::set<ContentKey> keys_of(const std::string& user) const;
  std::set<std::string> users_of(const ContentKey& key) const;

 private:
  Id intern_user(const std::string& user);
  Id intern_key(const ContentKey& key);

  std::vector<std::string> users_;
  std::unordered_map<std::string, Id> user_ids_;
  std::vector<ContentKey> keys_;
  std::unordered_map<ContentKey, Id, ContentKeyHash> key_ids_;
  std::vector<std::vector<Id>> user_to_keys_;
  std::vector<std::vector<Id>> key_to_users_;
};

RetweetIndex build_retweet_index(std::span<const TweetRecord> records);

// --- persistence --------------------------------------------------------

inline constexpr int kCorpusSchemaVersion = 1;

struct IngestStats {
  std::uint64_t total = 0;
  std::uint64_t kept = 0;
  std::uint64_t malformed = 0;
  std::uint64_t language_filtered = 0;
};

struct Corpus {
  std::vector<TweetRecord> tweets;
  std::vector<UserRecord> users;  // one per user_id, sorted by id
  IngestStats stats;
};

// Streams JSONL. Malformed lines are skipped and counted; when `allowed_langs`
// is non-empty, records outside it are dropped and counted.
void ingest_stream(std::istream& in, const std::set<std::string, std::less<>>& allowed_langs,
                   Corpus& corpus, std::map<std::string, UserRecord>& users);

Corpus ingest_files(std::span<const std::string> paths, const std::set<std::string, std::less<>>& allowed_langs);

// Writes tweets.jsonl, users.jsonl, ingest_stats.json and manifest.json.
void write_corpus(const std::string& dir, const Corpus& corpus);
Corpus read_corpus(const std::string& dir);

std::string tweet_to_json(const TweetRecord& r);
TweetRecord tweet_from_json(std::string_view line);
std::string user_to_json(const UserRecord& u);
UserRecord user_from_json(std::string_view line);

// Archive-schema status object (the shape parse_tweet_line reads).
std::string to_archive_json(const TweetRecord& r, const UserRecord& u);

std::string file_digest(const std::string& path);

}  // namespace polarembed::corpus
