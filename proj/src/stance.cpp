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

#include "polarembed/stance.hpp"

#include <algorithm>
#include <sstream>
#include <toml.hpp>

#include "polarembed/common.hpp"
#include "polarembed/kernels.hpp"
#include "polarembed/textprep.hpp"

namespace polarembed::stance {

namespace {

// Both sides are folded the same way: Turkish lowercase, then ASCII
// transliteration, so "IYI", "İYİ" and "iyi" all compare equal.
std::u32string fold(std::string_view s) {
  return utf8_decode(textprep::transliterate(textprep::turkish_lowercase(s)));
}

bool is_word_char(char32_t c) { return textprep::is_letter(c) || (c >= U'0' && c <= U'9'); }

bool contains(const std::u32string& hay, const std::u32string& needle, MatchMode mode) {
  if (needle.empty()) return false;
  std::size_t pos = hay.find(needle);
  while (pos != std::u32string::npos) {
    if (mode == MatchMode::Substring) return true;
    const bool left_ok = pos == 0 || !is_word_char(hay[pos - 1]) || !is_word_char(needle.front());
    const std::size_t end = pos + needle.size();
    const bool right_ok = end == hay.size() || !is_word_char(hay[end]) || !is_word_char(needle.back());
    if (left_ok && right_ok) return true;
    pos = hay.find(needle, pos + 1);
  }
  return false;
}

const std::string& field_of(const corpus::UserRecord& u, ProfileField f) {
  switch (f) {
    case ProfileField::ScreenName: return u.screen_name;
    case ProfileField::DisplayName: return u.display_name;
    case ProfileField::Description: return u.description;
  }
  return u.screen_name;
}

ProfileField field_from_string(std::string_view s) {
  if (s == "screen_name") return ProfileField::ScreenName;
  if (s == "display_name") return ProfileField::DisplayName;
  if (s == "description") return ProfileField::Description;
  throw Error(ErrorCode::InvalidConfig, "unknown rule field '" + std::string(s) + "'");
}

std::string_view field_name(ProfileField f) {
  switch (f) {
    case ProfileField::ScreenName: return "screen_name";
    case ProfileField::DisplayName: return "display_name";
    case ProfileField::Description: return "description";
  }
  return "?";
}

MatchMode mode_from_string(std::string_view s) {
  if (s == "substring") return MatchMode::Substring;
  if (s == "word" || s == "word_boundary") return MatchMode::WordBoundary;
  throw Error(ErrorCode::InvalidConfig, "unknown rule mode '" + std::string(s) + "'");
}

std::vector<SeedRule> rules_from_table(const toml::table& tbl) {
  std::vector<SeedRule> rules;
  const auto* arr = tbl["rule"].as_array();
  if (arr == nullptr) return rules;
  for (const auto& node : *arr) {
    const auto* t = node.as_table();
    if (t == nullptr) throw Error(ErrorCode::InvalidConfig, "[[rule]] entries must be tables");
    SeedRule r;
    r.pattern = (*t)["pattern"].value_or(std::string{});
    if (r.pattern.empty()) throw Error(ErrorCode::InvalidConfig, "rule pattern must be non-empty");
    r.field = field_from_string((*t)["field"].value_or(std::string{"screen_name"}));
    r.mode = mode_from_string((*t)["mode"].value_or(std::string{"substring"}));
    try {
      r.label = label_from_string((*t)["label"].value_or(std::string{}));
    } catch (const Error&) {
      throw Error(ErrorCode::InvalidConfig, "rule label must be pro or anti");
    }
    rules.push_back(std::move(r));
  }
  return rules;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

template <typename F>
void for_each_line(std::string_view text, F&& f) {
  std::size_t start = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!line.empty()) f(line);
    start = end + 1;
  }
}

struct DenseGraph {
  kernels::Csr user_to_keys;
  kernels::Csr key_to_users;
};

DenseGraph to_csr(const corpus::RetweetIndex& index) {
  DenseGraph g;
  for (std::uint32_t u = 0; u < index.user_count(); ++u) {
    const auto keys = index.keys_of(u);
    g.user_to_keys.targets.insert(g.user_to_keys.targets.end(), keys.begin(), keys.end());
    g.user_to_keys.offsets.push_back(static_cast<std::uint32_t>(g.user_to_keys.targets.size()));
  }
  for (std::uint32_t k = 0; k < index.key_count(); ++k) {
    const auto users = index.users_of(k);
    g.key_to_users.targets.insert(g.key_to_users.targets.end(), users.begin(), users.end());
    g.key_to_users.offsets.push_back(static_cast<std::uint32_t>(g.key_to_users.targets.size()));
  }
  return g;
}

std::vector<kernels::CampCode> camp_codes(const corpus::RetweetIndex& index, const StanceLabeling& labeling) {
  std::vector<kernels::CampCode> codes(index.user_count(), 0);
  for (const auto& [user, entry] : labeling.labels) {
    if (auto id = index.user_id(user)) codes[*id] = static_cast<kernels::CampCode>(entry.label);
  }
  return codes;
}

// One synchronous round over the dense graph; returns per-user new camp codes.
std::vector<kernels::CampCode> round(const DenseGraph& g, std::span<const kernels::CampCode> codes,
                                     const PropagationConfig& cfg) {
  std::vector<std::uint8_t> endorsement(g.key_to_users.rows());
  std::vector<kernels::CampCode> fresh(g.user_to_keys.rows());
  if (cfg.parallel) {
    kernels::endorsement_omp(g.key_to_users, codes, endorsement);
    kernels::qualify_omp(g.user_to_keys, codes, endorsement, cfg.threshold, fresh);
  } else {
    kernels::endorsement_serial(g.key_to_users, codes, endorsement);
    kernels::qualify_serial(g.user_to_keys, codes, endorsement, cfg.threshold, fresh);
  }
  return fresh;
}

void check_config(const PropagationConfig& cfg) {
  if (cfg.threshold < 1) throw Error(ErrorCode::InvalidConfig, "threshold must be >= 1");
  if (cfg.max_iterations < 1) throw Error(ErrorCode::InvalidConfig, "max_iterations must be >= 1");
}

}  // namespace

std::string_view to_string(StanceLabel label) { return label == StanceLabel::Pro ? "pro" : "anti"; }

StanceLabel label_from_string(std::string_view s) {
  if (s == "pro") return StanceLabel::Pro;
  if (s == "anti") return StanceLabel::Anti;
  throw Error(ErrorCode::InvalidConfig, "unknown stance label '" + std::string(s) + "'");
}

std::vector<SeedRule> default_seed_rules() {
  using F = ProfileField;
  using M = MatchMode;
  using L = StanceLabel;
  std::vector<SeedRule> rules;
  for (F f : {F::ScreenName, F::DisplayName}) {
    rules.push_back({"akparti", f, M::Substring, L::Pro});
    rules.push_back({"chp", f, M::Substring, L::Anti});
    rules.push_back({"hdp", f, M::Substring, L::Anti});
    rules.push_back({"iyi", f, M::WordBoundary, L::Anti});
  }
  for (F f : {F::Description, F::DisplayName}) {
    rules.push_back({"#devam", f, M::WordBoundary, L::Pro});
    rules.push_back({"#rte", f, M::WordBoundary, L::Pro});
    rules.push_back({"#tamam", f, M::WordBoundary, L::Anti});
  }
  return rules;
}

std::vector<SeedRule> parse_seed_rules(std::string_view toml_text) {
  try {
    return rules_from_table(toml::parse(toml_text));
  } catch (const toml::parse_error& e) {
    throw Error(ErrorCode::InvalidConfig, std::string(e.description()));
  }
}

std::vector<SeedRule> load_seed_rules(const std::string& toml_path) {
  try {
    return rules_from_table(toml::parse_file(toml_path));
  } catch (const toml::parse_error& e) {
    throw Error(ErrorCode::InvalidConfig, toml_path + ": " + std::string(e.description()));
  }
}

bool rule_matches(const SeedRule& rule, const corpus::UserRecord& user) {
  return contains(fold(field_of(user, rule.field)), fold(rule.pattern), rule.mode);
}

std::string Provenance::str() const {
  return (kind == Kind::Seed ? "seed:" : "propagated:") + std::to_string(value);
}

Provenance Provenance::parse(std::string_view s) {
  const auto colon = s.find(':');
  if (colon == std::string_view::npos) throw Error(ErrorCode::MalformedRecord, "bad provenance");
  const auto kind = s.substr(0, colon);
  Provenance p;
  if (kind == "seed") {
    p.kind = Kind::Seed;
  } else if (kind == "propagated") {
    p.kind = Kind::Propagated;
  } else {
    throw Error(ErrorCode::MalformedRecord, "bad provenance kind");
  }
  try {
    p.value = static_cast<std::uint32_t>(std::stoul(std::string(s.substr(colon + 1))));
  } catch (const std::exception&) {
    throw Error(ErrorCode::MalformedRecord, "bad provenance value");
  }
  if (p.kind == Kind::Propagated && p.value == 0) throw Error(ErrorCode::MalformedRecord, "iteration must be >= 1");
  return p;
}

std::optional<StanceLabel> StanceLabeling::label_of(const std::string& user) const {
  const auto it = labels.find(user);
  if (it == labels.end()) return std::nullopt;
  return it->second.label;
}

SeedResult apply_seed_rules(std::span<const corpus::UserRecord> users, std::span<const SeedRule> rules) {
  SeedResult result;
  std::vector<std::u32string> patterns;
  patterns.reserve(rules.size());
  for (const auto& r : rules) patterns.push_back(fold(r.pattern));

  for (const auto& user : users) {
    std::optional<std::size_t> first_pro;
    std::optional<std::size_t> first_anti;
    for (std::size_t i = 0; i < rules.size(); ++i) {
      if (!contains(fold(field_of(user, rules[i].field)), patterns[i], rules[i].mode)) continue;
      result.hits.push_back({user.user_id, i});
      auto& slot = rules[i].label == StanceLabel::Pro ? first_pro : first_anti;
      if (!slot) slot = i;
    }
    if (first_pro && first_anti) {
      result.labeling.labels.erase(user.user_id);
      result.labeling.conflicts.insert(user.user_id);
    } else if (first_pro || first_anti) {
      if (result.labeling.conflicts.contains(user.user_id)) continue;
      const StanceLabel label = first_pro ? StanceLabel::Pro : StanceLabel::Anti;
      const auto rule = static_cast<std::uint32_t>(first_pro ? *first_pro : *first_anti);
      auto [it, inserted] = result.labeling.labels.try_emplace(
          user.user_id, LabelEntry{label, {Provenance::Kind::Seed, rule}});
      if (!inserted && it->second.label != label) {
        result.labeling.labels.erase(it);
        result.labeling.conflicts.insert(user.user_id);
      }
    }
  }
  return result;
}

Assignment propagate_once(const corpus::RetweetIndex& index, const StanceLabeling& current,
                          const PropagationConfig& cfg) {
  check_config(cfg);
  const DenseGraph g = to_csr(index);
  const auto codes = camp_codes(index, current);
  const auto fresh = round(g, codes, cfg);
  Assignment out;
  for (std::uint32_t u = 0; u < fresh.size(); ++u) {
    if (fresh[u] != 0) out.emplace_back(index.user(u), static_cast<StanceLabel>(fresh[u]));
  }
  std::sort(out.begin(), out.end());
  return out;
}

PropagationResult propagate_to_fixpoint(const corpus::RetweetIndex& index, const StanceLabeling& seeds,
                                        const PropagationConfig& cfg) {
  check_config(cfg);
  PropagationResult result{seeds, {}, false};
  const DenseGraph g = to_csr(index);
  auto codes = camp_codes(index, seeds);
  for (std::uint32_t iteration = 1;; ++iteration) {
    const auto fresh = round(g, codes, cfg);
    std::uint64_t added = 0;
    for (std::uint32_t u = 0; u < fresh.size(); ++u) {
      if (fresh[u] == 0) continue;
      codes[u] = fresh[u];
      result.labeling.labels.emplace(
          index.user(u), LabelEntry{static_cast<StanceLabel>(fresh[u]), {Provenance::Kind::Propagated, iteration}});
      // Retweet evidence settles a profile conflict; it stays in the review file.
      result.labeling.conflicts.erase(index.user(u));
      ++added;
    }
    result.new_per_iteration.push_back(added);
    if (added == 0) break;
    if (iteration >= cfg.max_iterations) {
      result.max_iterations_reached = true;
      break;
    }
  }
  return result;
}

Evaluation evaluate_against(const StanceLabeling& result, const GoldLabels& gold) {
  if (gold.empty()) throw Error(ErrorCode::EmptyGold, "gold set is empty");
  Evaluation ev;
  for (const auto& [user, label] : gold) {
    if (!label) {
      ++ev.undecidable;
      continue;
    }
    const auto got = result.label_of(user);
    if (!got) {
      ++ev.unlabeled;
    } else if (*got == *label) {
      ++ev.match;
    } else {
      ++ev.mismatch;
    }
  }
  if (ev.match + ev.mismatch > 0) {
    ev.decided_accuracy = static_cast<double>(ev.match) / static_cast<double>(ev.match + ev.mismatch);
  }
  return ev;
}

std::string labels_to_tsv(const StanceLabeling& labeling) {
  std::string out;
  for (const auto& [user, entry] : labeling.labels) {
    out += user + "\t" + std::string(to_string(entry.label)) + "\t" + entry.provenance.str() + "\n";
  }
  return out;
}

StanceLabeling labels_from_tsv(std::string_view tsv) {
  StanceLabeling labeling;
  for_each_line(tsv, [&](std::string_view line) {
    const auto cols = split(line, '\t');
    if (cols.size() < 2) throw Error(ErrorCode::MalformedRecord, "label line needs user and label");
    LabelEntry entry{label_from_string(cols[1]), {Provenance::Kind::Seed, 0}};
    if (cols.size() >= 3) entry.provenance = Provenance::parse(cols[2]);
    labeling.labels.insert_or_assign(std::string(cols[0]), entry);
  });
  return labeling;
}

std::string review_to_tsv(const SeedResult& seeds, std::span<const SeedRule> rules) {
  std::map<std::string, std::vector<std::size_t>> hits_by_user;
  for (const auto& h : seeds.hits) hits_by_user[h.user_id].push_back(h.rule);
  std::ostringstream out;
  out << "user_id\tstatus\trule_hits\n";
  for (const auto& [user, hits] : hits_by_user) {
    out << user << '\t' << (seeds.labeling.conflicts.contains(user) ? "conflict" : "labeled") << '\t';
    for (std::size_t i = 0; i < hits.size(); ++i) {
      const auto& r = rules[hits[i]];
      if (i > 0) out << ',';
      out << hits[i] << ':' << r.pattern << '@' << field_name(r.field) << "->" << to_string(r.label);
    }
    out << '\n';
  }
  return out.str();
}

GoldLabels gold_from_tsv(std::string_view tsv) {
  GoldLabels gold;
  for_each_line(tsv, [&](std::string_view line) {
    const auto cols = split(line, '\t');
    if (cols.size() < 2) throw Error(ErrorCode::MalformedRecord, "gold line needs user and label");
    if (cols[1] == "undecidable") {
      gold[std::string(cols[0])] = std::nullopt;
    } else {
      gold[std::string(cols[0])] = label_from_string(cols[1]);
    }
  });
  return gold;
}

std::string gold_to_tsv(const GoldLabels& gold) {
  std::string out;
  for (const auto& [user, label] : gold) {
    out += user + "\t" + (label ? std::string(to_string(*label)) : std::string("undecidable")) + "\n";
  }
  return out;
}

}  // namespace polarembed::stance
