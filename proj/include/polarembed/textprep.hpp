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

// Tweet-to-token pipeline for Turkish text.

#include <string>
#include <string_view>
#include <vector>

namespace polarembed::textprep {

enum class Stage { CaseFold, StripEntities, NumberToken, RemoveNonLetters, Stem, Transliterate };

std::string_view to_string(Stage stage);
Stage stage_from_string(std::string_view name);

struct PipelineConfig {
  std::vector<Stage> stages{Stage::CaseFold,         Stage::StripEntities, Stage::NumberToken,
                            Stage::RemoveNonLetters, Stage::Stem,          Stage::Transliterate};
  std::string number_token = "number";

  // Throws Error(InvalidConfig) on repeated stages or an empty number token.
  void validate() const;
};

// Reads a [pipeline] table: stages = [...], number_token = "...".
PipelineConfig load_pipeline_config(const std::string& path);

using TokenSeq = std::vector<std::string>;

// Locale-independent Turkish lowercasing: İ->i, I->ı, everything else maps to
// its ordinary lowercase form.
std::string turkish_lowercase(std::string_view s);
char32_t turkish_lower(char32_t c);

// Letters of the Turkish Latin alphabet (plus q, w, x and the circumflexed
// vowels), both cases. Everything else counts as a non-letter.
bool is_letter(char32_t c);

std::string strip_entities(std::string_view s);
std::string number_token(std::string_view s, std::string_view token);
std::string remove_nonletters(std::string_view s);

// Snowball Turkish stemmer.
std::string stem(std::string_view word);

std::string transliterate(std::string_view s);

// Collapse whitespace runs to single spaces and trim the ends.
std::string collapse_whitespace(std::string_view s);

TokenSeq preprocess_tweet(std::string_view text, const PipelineConfig& cfg = {});

// Runs the pipeline and concatenates the resulting tokens; used for lexicon
// surfaces and entity aliases, which must be single tokens.
std::string normalize_term(std::string_view surface, const PipelineConfig& cfg = {});

}  // namespace polarembed::textprep
