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

// Sentiment-lexicon and entity-subsumption matching over nearest-neighbour
// lists, grouped by best rank, and rank-only comparison across spaces.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "polarembed/embedding.hpp"
#include "polarembed/textprep.hpp"

namespace polarembed::polarity {

// Unit-cost edit distance over Unicode scalar values.
std::size_t levenshtein(std::string_view a, std::string_view b);
std::size_t levenshtein(std::u32string_view a, std::u32string_view b);

enum class Polarity : std::uint8_t { Positive, Negative };
std::string_view to_string(Polarity p);

struct LexiconEntry {
  std::string surface;
  Polarity polarity = Polarity::Positive;
  std::string normalized;
};

struct Lexicon {
  std::vector<LexiconEntry> entries;  // unique normalized forms, sorted
  std::size_t dropped_empty = 0;      // surfaces that normalize to nothing
  std::size_t merged_duplicates = 0;  // repeated normalized forms, same polarity
};

// "surface<TAB>positive|negative" per line; blank lines and '#' comments are
// skipped. Throws Error(MalformedLexicon) on a bad line or a polarity conflict.
Lexicon parse_lexicon(std::string_view tsv, const textprep::PipelineConfig& cfg = {});
Lexicon load_lexicon(const std::string& path, const textprep::PipelineConfig& cfg = {});

struct EntitySpec {
  std::string canonical;             // normalized
  std::vector<std::string> aliases;  // normalized, sorted, contains canonical
  std::vector<std::string> spaces;   // model identifiers
};

// [[entity]] tables with canonical, aliases and spaces; names are normalized
// through the pipeline. Throws Error(InvalidConfig).
std::vector<EntitySpec> parse_entities(std::string_view toml_text, const textprep::PipelineConfig& cfg = {});
std::vector<EntitySpec> load_entities(const std::string& path, const textprep::PipelineConfig& cfg = {});

enum class GroupKind : std::uint8_t { Sentiment, Subsumption };

struct Member {
  std::string term;
  std::uint32_t rank = 0;
  bool operator==(const Member&) const = default;
};

struct MatchGroup {
  std::string label;
  GroupKind kind = GroupKind::Sentiment;
  Polarity polarity = Polarity::Positive;  // meaningful for Sentiment only
  std::uint32_t best_rank = 0;
  std::uint32_t occurrence_count = 0;
  std::vector<Member> members;
  bool operator==(const MatchGroup&) const = default;
};

// Terms or entries of length <= 3 only match exactly.
std::vector<MatchGroup> match_sentiment(std::span<const embed::NNResult> nns, const Lexicon& lexicon,
                                        std::uint32_t max_edit = 1);
std::vector<MatchGroup> match_subsuming(std::span<const embed::NNResult> nns, const EntitySpec& entity);

// Ascending best_rank, then Sentiment before Subsumption, then label.
void sort_groups(std::vector<MatchGroup>& groups);

std::optional<double> median(std::vector<std::uint32_t> values);

struct SpaceSection {
  std::string space;
  std::uint32_t neighbors = 0;  // length of the underlying NN list
  std::vector<MatchGroup> groups;
  std::optional<double> median_positive;
  std::optional<double> median_negative;
  bool operator==(const SpaceSection&) const = default;
};

struct MatchReport {
  std::string entity;
  std::vector<SpaceSection> spaces;
  bool operator==(const MatchReport&) const = default;
};

struct NamedModel {
  std::string id;
  const embed::EmbeddingModel* model = nullptr;
};

// Throws Error(UnrepresentableAlias) if an alias has no vector in some space.
MatchReport compare_spaces(const EntitySpec& entity, std::span<const NamedModel> models, const Lexicon& lexicon,
                           std::size_t k = 2000, std::uint32_t max_edit = 1);

// Same, from precomputed neighbour lists (one per space, in order).
SpaceSection build_section(std::string space, std::span<const embed::NNResult> nns, const EntitySpec& entity,
                           const Lexicon& lexicon, std::uint32_t max_edit = 1);

enum class ReportFormat { Json, Markdown };

// "label (rank)" or "label (rank, Nx)"; positive in *italics*, negative in **bold**.
std::string render_cell(const MatchGroup& group);
std::string render_report(const MatchReport& report, ReportFormat format);
std::string render_reports(std::span<const MatchReport> reports, ReportFormat format);

}  // namespace polarembed::polarity
