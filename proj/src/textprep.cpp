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

#include "polarembed/textprep.hpp"

#include <algorithm>
#include <toml.hpp>

#include "polarembed/common.hpp"

namespace polarembed::textprep {

namespace {

bool is_space(char32_t c) {
  return c == U' ' || c == U'\t' || c == U'\n' || c == U'\r' || c == U'\f' || c == U'\v' ||
         c == 0x00A0 || c == 0x1680 || (c >= 0x2000 && c <= 0x200A) || c == 0x2028 || c == 0x2029 ||
         c == 0x202F || c == 0x205F || c == 0x3000;
}

bool is_ascii_digit(char32_t c) { return c >= U'0' && c <= U'9'; }

std::vector<std::u32string> split_ws(const std::u32string& s) {
  std::vector<std::u32string> out;
  std::u32string cur;
  for (char32_t c : s) {
    if (is_space(c)) {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

std::string join_u32(const std::vector<std::u32string>& parts) {
  std::string out;
  for (const auto& p : parts) {
    if (!out.empty()) out.push_back(' ');
    out += utf8_encode(p);
  }
  return out;
}

bool is_url(const std::u32string& tok) {
  std::u32string lower;
  lower.reserve(tok.size());
  for (char32_t c : tok) lower.push_back(turkish_lower(c));
  if (lower.rfind(U"www.", 0) == 0) return true;
  // scheme://
  const auto pos = lower.find(U"://");
  if (pos == std::u32string::npos || pos == 0) return false;
  if (!(lower[0] >= U'a' && lower[0] <= U'z')) return false;
  for (std::size_t i = 1; i < pos; ++i) {
    const char32_t c = lower[i];
    const bool ok = (c >= U'a' && c <= U'z') || is_ascii_digit(c) || c == U'+' || c == U'.' || c == U'-';
    if (!ok) return false;
  }
  return true;
}

}  // namespace

std::string_view to_string(Stage stage) {
  switch (stage) {
    case Stage::CaseFold: return "case_fold";
    case Stage::StripEntities: return "strip_entities";
    case Stage::NumberToken: return "number_token";
    case Stage::RemoveNonLetters: return "remove_nonletters";
    case Stage::Stem: return "stem";
    case Stage::Transliterate: return "transliterate";
  }
  return "?";
}

Stage stage_from_string(std::string_view name) {
  for (Stage s : {Stage::CaseFold, Stage::StripEntities, Stage::NumberToken, Stage::RemoveNonLetters,
                  Stage::Stem, Stage::Transliterate}) {
    if (to_string(s) == name) return s;
  }
  throw Error(ErrorCode::InvalidConfig, "unknown pipeline stage '" + std::string(name) + "'");
}

void PipelineConfig::validate() const {
  for (std::size_t i = 0; i < stages.size(); ++i) {
    if (std::find(stages.begin() + i + 1, stages.end(), stages[i]) != stages.end()) {
      throw Error(ErrorCode::InvalidConfig, "stage listed twice: " + std::string(to_string(stages[i])));
    }
  }
  if (number_token.empty()) throw Error(ErrorCode::InvalidConfig, "number_token must be non-empty");
}

PipelineConfig load_pipeline_config(const std::string& path) {
  toml::table tbl;
  try {
    tbl = toml::parse_file(path);
  } catch (const toml::parse_error& e) {
    throw Error(ErrorCode::InvalidConfig, path + ": " + std::string(e.description()));
  }
  PipelineConfig cfg;
  const auto* section = tbl["pipeline"].as_table();
  if (section == nullptr) return cfg;
  if (const auto* arr = (*section)["stages"].as_array()) {
    cfg.stages.clear();
    for (const auto& node : *arr) {
      const auto name = node.value<std::string>();
      if (!name) throw Error(ErrorCode::InvalidConfig, "stages must be strings");
      cfg.stages.push_back(stage_from_string(*name));
    }
  }
  if (auto tok = (*section)["number_token"].value<std::string>()) cfg.number_token = *tok;
  cfg.validate();
  return cfg;
}

char32_t turkish_lower(char32_t c) {
  if (c == U'I') return U'ı';
  if (c == 0x0130) return U'i';  // İ
  if (c >= U'A' && c <= U'Z') return c + 32;
  if (c < 0x80) return c;
  // Latin-1 supplement
  if ((c >= 0x00C0 && c <= 0x00DE) && c != 0x00D7) return c + 32;
  // Latin Extended-A: mostly even upper / odd lower pairs
  if (c >= 0x0100 && c <= 0x0137 && c != 0x0130 && c != 0x0131) return (c % 2 == 0) ? c + 1 : c;
  if (c >= 0x0139 && c <= 0x0148) return (c % 2 == 1) ? c + 1 : c;
  if (c >= 0x014A && c <= 0x0177) return (c % 2 == 0) ? c + 1 : c;
  if (c == 0x0178) return 0x00FF;
  if (c >= 0x0179 && c <= 0x017E) return (c % 2 == 1) ? c + 1 : c;
  // Greek and Cyrillic capitals
  if (c >= 0x0391 && c <= 0x03AB && c != 0x03A2) return c + 32;
  if (c >= 0x0410 && c <= 0x042F) return c + 32;
  if (c >= 0x0400 && c <= 0x040F) return c + 80;
  return c;
}

std::string turkish_lowercase(std::string_view s) {
  std::u32string u = utf8_decode(s);
  for (char32_t& c : u) c = turkish_lower(c);
  return utf8_encode(u);
}

bool is_letter(char32_t c) {
  if ((c >= U'a' && c <= U'z') || (c >= U'A' && c <= U'Z')) return true;
  switch (c) {
    case U'ç': case U'Ç': case U'ğ': case U'Ğ': case U'ı': case U'İ':
    case U'ö': case U'Ö': case U'ş': case U'Ş': case U'ü': case U'Ü':
    case U'â': case U'Â': case U'î': case U'Î': case U'û': case U'Û':
      return true;
    default:
      return false;
  }
}

std::string collapse_whitespace(std::string_view s) { return join_u32(split_ws(utf8_decode(s))); }

std::string strip_entities(std::string_view s) {
  auto tokens = split_ws(utf8_decode(s));
  std::erase_if(tokens, [](const std::u32string& t) { return t[0] == U'#' || t[0] == U'@' || is_url(t); });
  return join_u32(tokens);
}

std::string number_token(std::string_view s, std::string_view token) {
  const std::u32string u = utf8_decode(s);
  std::string out;
  std::size_t i = 0;
  while (i < u.size()) {
    if (is_ascii_digit(u[i])) {
      while (i < u.size() && is_ascii_digit(u[i])) ++i;
      out.push_back(' ');
      out += token;
      out.push_back(' ');
    } else {
      utf8_append(out, u[i]);
      ++i;
    }
  }
  return collapse_whitespace(out);
}

std::string remove_nonletters(std::string_view s) {
  std::u32string u = utf8_decode(s);
  std::erase_if(u, [](char32_t c) { return !is_letter(c) && !is_space(c); });
  return join_u32(split_ws(u));
}

std::string transliterate(std::string_view s) {
  std::u32string u = utf8_decode(s);
  for (char32_t& c : u) {
    switch (c) {
      case U'ç': c = U'c'; break;
      case U'Ç': c = U'C'; break;
      case U'ğ': c = U'g'; break;
      case U'Ğ': c = U'G'; break;
      case U'ı': c = U'i'; break;
      case U'İ': c = U'I'; break;
      case U'ö': c = U'o'; break;
      case U'Ö': c = U'O'; break;
      case U'ş': c = U's'; break;
      case U'Ş': c = U'S'; break;
      case U'ü': c = U'u'; break;
      case U'Ü': c = U'U'; break;
      case U'â': c = U'a'; break;
      case U'Â': c = U'A'; break;
      case U'î': c = U'i'; break;
      case U'Î': c = U'I'; break;
      case U'û': c = U'u'; break;
      case U'Û': c = U'U'; break;
      default: break;
    }
  }
  return utf8_encode(u);
}

TokenSeq preprocess_tweet(std::string_view text, const PipelineConfig& cfg) {
  std::string s(text);
  for (Stage stage : cfg.stages) {
    switch (stage) {
      case Stage::CaseFold: s = turkish_lowercase(s); break;
      case Stage::StripEntities: s = strip_entities(s); break;
      case Stage::NumberToken: s = number_token(s, cfg.number_token); break;
      case Stage::RemoveNonLetters: s = remove_nonletters(s); break;
      case Stage::Stem: {
        std::string out;
        for (const auto& tok : split_ws(utf8_decode(s))) {
          const std::string word = utf8_encode(tok);
          if (!out.empty()) out.push_back(' ');
          out += (word == cfg.number_token) ? word : stem(word);
        }
        s = std::move(out);
        break;
      }
      case Stage::Transliterate: s = transliterate(s); break;
    }
  }
  TokenSeq tokens;
  for (const auto& tok : split_ws(utf8_decode(s))) tokens.push_back(utf8_encode(tok));
  return tokens;
}

std::string normalize_term(std::string_view surface, const PipelineConfig& cfg) {
  std::string out;
  for (const auto& tok : preprocess_tweet(surface, cfg)) out += tok;
  return out;
}

}  // namespace polarembed::textprep
