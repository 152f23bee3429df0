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

// Pro/Anti stance labels: profile seed rules, then retweet-based label
// propagation to a fixpoint.

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "polarembed/corpus.hpp"

namespace polarembed::stance {

enum class StanceLabel : std::uint8_t { Pro = 1, Anti = 2 };

std::string_view to_string(StanceLabel label);
StanceLabel label_from_string(std::string_view s);
inline StanceLabel opposite(StanceLabel l) { return l == StanceLabel::Pro ? StanceLabel::Anti : StanceLabel::Pro; }

enum class ProfileField { ScreenName, DisplayName, Description };
enum class MatchMode { Substring, WordBoundary };

struct SeedRule {
  std::string pattern;
  ProfileField field = ProfileField::ScreenName;
  MatchMode mode = MatchMode::Substring;
  StanceLabel label = StanceLabel::Pro;
};

// Party names in user/screen names, the #devam / #tamam / #rte description
// hashtags. "iyi" is word-bounded; MHP is intentionally absent.
std::vector<SeedRule> default_seed_rules();
std::vector<SeedRule> load_seed_rules(const std::string& toml_path);
std::vector<SeedRule> parse_seed_rules(std::string_view toml_text);

bool rule_matches(const SeedRule& rule, const corpus::UserRecord& user);

struct Provenance {
  enum class Kind : std::uint8_t { Seed, Propagated };
  Kind kind = Kind::Seed;
  std::uint32_t value = 0;  // rule index for Seed, iteration (>= 1) for Propagated

  bool operator==(const Provenance&) const = default;
  std::string str() const;  // "seed:<rule>" / "propagated:<iteration>"
  static Provenance parse(std::string_view s);
};

struct LabelEntry {
  StanceLabel label;
  Provenance provenance;
  bool operator==(const LabelEntry&) const = default;
};

struct StanceLabeling {
  std::map<std::string, LabelEntry> labels;
  std::set<std::string> conflicts;

  std::optional<StanceLabel> label_of(const std::string& user) const;
  bool operator==(const StanceLabeling&) const = default;
};

struct RuleHit {
  std::string user_id;
  std::size_t rule;
};

struct SeedResult {
  StanceLabeling labeling;
  std::vector<RuleHit> hits;  // every rule match, for the review file
};

SeedResult apply_seed_rules(std::span<const corpus::UserRecord> users, std::span<const SeedRule> rules);

struct PropagationConfig {
  std::uint32_t threshold = 10;
  std::uint32_t max_iterations = 50;
  bool parallel = true;  // OpenMP kernels; the serial route gives identical output
};

using Assignment = std::vector<std::pair<std::string, StanceLabel>>;

// One synchronous round; sorted by user id. Already-labeled users are never returned.
Assignment propagate_once(const corpus::RetweetIndex& index, const StanceLabeling& current,
                          const PropagationConfig& cfg);

struct PropagationResult {
  StanceLabeling labeling;
  std::vector<std::uint64_t> new_per_iteration;
  bool max_iterations_reached = false;
};

PropagationResult propagate_to_fixpoint(const corpus::RetweetIndex& index, const StanceLabeling& seeds,
                                        const PropagationConfig& cfg);

// Gold entries without a label are "undecidable".
using GoldLabels = std::map<std::string, std::optional<StanceLabel>>;

struct Evaluation {
  std::uint64_t match = 0;
  std::uint64_t mismatch = 0;
  std::uint64_t undecidable = 0;
  std::uint64_t unlabeled = 0;
  std::optional<double> decided_accuracy;  // empty when nothing was decided
};

Evaluation evaluate_against(const StanceLabeling& result, const GoldLabels& gold);

// --- files --------------------------------------------------------------

// user_id <TAB> label <TAB> provenance, sorted by user id.
std::string labels_to_tsv(const StanceLabeling& labeling);
StanceLabeling labels_from_tsv(std::string_view tsv);

// Conflicts and rule hits for manual review.
std::string review_to_tsv(const SeedResult& seeds, std::span<const SeedRule> rules);

// user_id <TAB> pro|anti|undecidable
GoldLabels gold_from_tsv(std::string_view tsv);
std::string gold_to_tsv(const GoldLabels& gold);

}  // namespace polarembed::stance
