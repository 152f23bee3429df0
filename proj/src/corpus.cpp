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

#include "polarembed/corpus.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "polarembed/common.hpp"
#include "polarembed/textprep.hpp"

namespace polarembed::corpus {

using nlohmann::json;

namespace {

// Ids appear as strings or integers depending on the crawler.
std::optional<std::string> id_field(const json& obj, const char* name) {
  const auto it = obj.find(name);
  if (it == obj.end()) return std::nullopt;
  if (it->is_string()) {
    auto s = it->get<std::string>();
    if (s.empty()) return std::nullopt;
    return s;
  }
  if (it->is_number_unsigned()) return std::to_string(it->get<std::uint64_t>());
  if (it->is_number_integer()) return std::to_string(it->get<std::int64_t>());
  return std::nullopt;
}

std::string str_field(const json& obj, const char* name) {
  const auto it = obj.find(name);
  if (it == obj.end() || !it->is_string()) return {};
  return it->get<std::string>();
}

void insert_sorted(std::vector<RetweetIndex::Id>& v, RetweetIndex::Id id) {
  const auto it = std::lower_bound(v.begin(), v.end(), id);
  if (it == v.end() || *it != id) v.insert(it, id);
}

void write_text(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
  if (!out) throw Error(ErrorCode::IoFailure, "cannot write " + path);
}

}  // namespace

ParsedLine parse_tweet_line(std::string_view line) {
  json obj = json::parse(line.begin(), line.end(), nullptr, /*allow_exceptions=*/false);
  if (obj.is_discarded() || !obj.is_object()) throw Error(ErrorCode::MalformedRecord, "not a JSON object");

  ParsedLine out;
  auto id = id_field(obj, "id");
  if (!id) throw Error(ErrorCode::MalformedRecord, "missing id");
  const auto user_it = obj.find("user");
  if (user_it == obj.end() || !user_it->is_object()) throw Error(ErrorCode::MalformedRecord, "missing user");
  auto uid = id_field(*user_it, "id");
  if (!uid) throw Error(ErrorCode::MalformedRecord, "missing user.id");

  const json* text = nullptr;
  if (auto it = obj.find("full_text"); it != obj.end() && it->is_string()) {
    text = &*it;
  } else if (auto it2 = obj.find("text"); it2 != obj.end() && it2->is_string()) {
    text = &*it2;
  }
  if (text == nullptr) throw Error(ErrorCode::MalformedRecord, "missing text");

  out.tweet.tweet_id = *id;
  out.tweet.author_id = *uid;
  out.tweet.text = text->get<std::string>();
  out.tweet.lang = str_field(obj, "lang");
  out.tweet.created_at = str_field(obj, "created_at");
  if (auto rt = obj.find("retweeted_status"); rt != obj.end() && rt->is_object()) {
    out.tweet.origin_id = id_field(*rt, "id");
    if (out.tweet.origin_id == out.tweet.tweet_id) {
      throw Error(ErrorCode::MalformedRecord, "retweet of itself");
    }
  }

  out.user.user_id = *uid;
  out.user.screen_name = str_field(*user_it, "screen_name");
  out.user.display_name = str_field(*user_it, "name");
  out.user.description = str_field(*user_it, "description");
  return out;
}

bool filter_language(const TweetRecord& r, const std::set<std::string, std::less<>>& allowed) {
  return !r.lang.empty() && allowed.contains(r.lang);
}

std::string ContentKey::str() const {
  return (kind == Kind::Origin ? "o:" : "h:") + value;
}

ContentKey content_key(const TweetRecord& r) {
  if (r.origin_id) return {ContentKey::Kind::Origin, *r.origin_id};
  const std::string normalized = textprep::collapse_whitespace(textprep::turkish_lowercase(r.text));
  return {ContentKey::Kind::TextHash, hex64(fnv1a64(normalized))};
}

RetweetIndex::Id RetweetIndex::intern_user(const std::string& user) {
  auto [it, inserted] = user_ids_.try_emplace(user, static_cast<Id>(users_.size()));
  if (inserted) {
    users_.push_back(user);
    user_to_keys_.emplace_back();
  }
  return it->second;
}

RetweetIndex::Id RetweetIndex::intern_key(const ContentKey& key) {
  auto [it, inserted] = key_ids_.try_emplace(key, static_cast<Id>(keys_.size()));
  if (inserted) {
    keys_.push_back(key);
    key_to_users_.emplace_back();
  }
  return it->second;
}

void RetweetIndex::add(const std::string& user_id, const ContentKey& key) {
  const Id u = intern_user(user_id);
  const Id k = intern_key(key);
  insert_sorted(user_to_keys_[u], k);
  insert_sorted(key_to_users_[k], u);
}

void RetweetIndex::merge(const RetweetIndex& other) {
  for (Id u = 0; u < other.users_.size(); ++u) {
    for (Id k : other.user_to_keys_[u]) add(other.users_[u], other.keys_[k]);
  }
}

std::optional<RetweetIndex::Id> RetweetIndex::user_id(const std::string& user) const {
  const auto it = user_ids_.find(user);
  if (it == user_ids_.end()) return std::nullopt;
  return it->second;
}

std::optional<RetweetIndex::Id> RetweetIndex::key_id(const ContentKey& key) const {
  const auto it = key_ids_.find(key);
  if (it == key_ids_.end()) return std::nullopt;
  return it->second;
}

std::set<ContentKey> RetweetIndex::keys_of(const std::string& user) const {
  std::set<ContentKey> out;
  if (auto u = user_id(user)) {
    for (Id k : user_to_keys_[*u]) out.insert(keys_[k]);
  }
  return out;
}

std::set<std::string> RetweetIndex::users_of(const ContentKey& key) const {
  std::set<std::string> out;
  if (auto k = key_id(key)) {
    for (Id u : key_to_users_[*k]) out.insert(users_[u]);
  }
  return out;
}

RetweetIndex build_retweet_index(std::span<const TweetRecord> records) {
  RetweetIndex index;
  for (const auto& r : records) index.add(r.author_id, content_key(r));
  return index;
}

// --- persistence --------------------------------------------------------

void ingest_stream(std::istream& in, const std::set<std::string, std::less<>>& allowed_langs, Corpus& corpus,
                   std::map<std::string, UserRecord>& users) {
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    ++corpus.stats.total;
    ParsedLine parsed;
    try {
      parsed = parse_tweet_line(line);
    } catch (const Error&) {
      ++corpus.stats.malformed;
      continue;
    }
    if (!allowed_langs.empty() && !filter_language(parsed.tweet, allowed_langs)) {
      ++corpus.stats.language_filtered;
      continue;
    }
    ++corpus.stats.kept;
    users[parsed.user.user_id] = std::move(parsed.user);
    corpus.tweets.push_back(std::move(parsed.tweet));
  }
}

Corpus ingest_files(std::span<const std::string> paths, const std::set<std::string, std::less<>>& allowed_langs) {
  Corpus corpus;
  std::map<std::string, UserRecord> users;
  for (const auto& path : paths) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoFailure, "cannot open " + path);
    ingest_stream(in, allowed_langs, corpus, users);
  }
  for (auto& [id, u] : users) corpus.users.push_back(std::move(u));
  return corpus;
}

std::string tweet_to_json(const TweetRecord& r) {
  json j = {{"tweet_id", r.tweet_id}, {"author_id", r.author_id}, {"text", r.text},
            {"lang", r.lang},         {"created_at", r.created_at}};
  j["origin_id"] = r.origin_id ? json(*r.origin_id) : json(nullptr);
  return j.dump();
}

TweetRecord tweet_from_json(std::string_view line) {
  json j = json::parse(line.begin(), line.end(), nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw Error(ErrorCode::MalformedRecord, "bad record line");
  TweetRecord r;
  r.tweet_id = str_field(j, "tweet_id");
  r.author_id = str_field(j, "author_id");
  r.text = str_field(j, "text");
  r.lang = str_field(j, "lang");
  r.created_at = str_field(j, "created_at");
  if (auto it = j.find("origin_id"); it != j.end() && it->is_string()) r.origin_id = it->get<std::string>();
  if (r.tweet_id.empty()) throw Error(ErrorCode::MalformedRecord, "record without tweet_id");
  return r;
}

std::string user_to_json(const UserRecord& u) {
  return json{{"user_id", u.user_id},
              {"screen_name", u.screen_name},
              {"display_name", u.display_name},
              {"description", u.description}}
      .dump();
}

UserRecord user_from_json(std::string_view line) {
  json j = json::parse(line.begin(), line.end(), nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw Error(ErrorCode::MalformedRecord, "bad user line");
  UserRecord u{str_field(j, "user_id"), str_field(j, "screen_name"), str_field(j, "display_name"),
               str_field(j, "description")};
  if (u.user_id.empty()) throw Error(ErrorCode::MalformedRecord, "user without user_id");
  return u;
}

std::string to_archive_json(const TweetRecord& r, const UserRecord& u) {
  json j = {{"id", r.tweet_id},
            {"user",
             {{"id", u.user_id}, {"screen_name", u.screen_name}, {"name", u.display_name},
              {"description", u.description}}},
            {"text", r.text},
            {"lang", r.lang},
            {"created_at", r.created_at}};
  if (r.origin_id) j["retweeted_status"] = {{"id", *r.origin_id}};
  return j.dump();
}

std::string file_digest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return hex64(fnv1a64(ss.str()));
}

void write_corpus(const std::string& dir, const Corpus& corpus) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  std::string tweets;
  for (const auto& t : corpus.tweets) tweets += tweet_to_json(t) + "\n";
  std::string users;
  for (const auto& u : corpus.users) users += user_to_json(u) + "\n";
  const std::string tweets_path = (fs::path(dir) / "tweets.jsonl").string();
  const std::string users_path = (fs::path(dir) / "users.jsonl").string();
  write_text(tweets_path, tweets);
  write_text(users_path, users);

  json stats = {{"total", corpus.stats.total},
                {"kept", corpus.stats.kept},
                {"malformed", corpus.stats.malformed},
                {"language_filtered", corpus.stats.language_filtered}};
  write_text((fs::path(dir) / "ingest_stats.json").string(), stats.dump(2) + "\n");

  json manifest = {
      {"schema_version", kCorpusSchemaVersion},
      {"files",
       json::array({{{"path", "tweets.jsonl"}, {"kind", "tweets"}, {"count", corpus.tweets.size()},
                     {"digest", hex64(fnv1a64(tweets))}},
                    {{"path", "users.jsonl"}, {"kind", "users"}, {"count", corpus.users.size()},
                     {"digest", hex64(fnv1a64(users))}}})}};
  write_text((fs::path(dir) / "manifest.json").string(), manifest.dump(2) + "\n");
}

Corpus read_corpus(const std::string& dir) {
  namespace fs = std::filesystem;
  const auto manifest_path = fs::path(dir) / "manifest.json";
  std::ifstream mf(manifest_path);
  if (!mf) throw Error(ErrorCode::IoFailure, "missing corpus manifest in " + dir);
  json manifest = json::parse(mf, nullptr, false);
  if (manifest.is_discarded()) throw Error(ErrorCode::IoFailure, "unreadable manifest in " + dir);
  if (manifest.value("schema_version", -1) != kCorpusSchemaVersion) {
    throw Error(ErrorCode::VersionMismatch, "corpus schema version");
  }
  Corpus corpus;
  for (const auto& f : manifest.at("files")) {
    const auto path = (fs::path(dir) / f.at("path").get<std::string>()).string();
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoFailure, "cannot open " + path);
    const std::string kind = f.at("kind").get<std::string>();
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      if (kind == "tweets") {
        corpus.tweets.push_back(tweet_from_json(line));
      } else if (kind == "users") {
        corpus.users.push_back(user_from_json(line));
      }
    }
  }
  std::ifstream sf(fs::path(dir) / "ingest_stats.json");
  if (sf) {
    json s = json::parse(sf, nullptr, false);
    if (!s.is_discarded()) {
      corpus.stats = {s.value("total", 0ULL), s.value("kept", 0ULL), s.value("malformed", 0ULL),
                      s.value("language_filtered", 0ULL)};
    }
  }
  return corpus;
}

}  // namespace polarembed::corpus
