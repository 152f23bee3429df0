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

#include "polarembed/polarity.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <nlohmann/json.hpp>
#include <sstream>
#include <toml.hpp>

#include "polarembed/common.hpp"

namespace polarembed::polarity {

std::size_t levenshtein(std::u32string_view a, std::u32string_view b) {
  if (a.size() < b.size()) std::swap(a, b);
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
      diag = up;
    }
  }
  return row[b.size()];
}

std::size_t levenshtein(std::string_view a, std::string_view b) {
  return levenshtein(utf8_decode(a), utf8_decode(b));
}

std::string_view to_string(Polarity p) { return p == Polarity::Positive ? "positive" : "negative"; }

// --- lexicon ------------------------------------------------------------------

namespace {

template <typename F>
void for_each_line(std::string_view text, F&& f) {
  std::size_t start = 0;
  std::size_t lineno = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    f(++lineno, line);
    start = end + 1;
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

Lexicon parse_lexicon(std::string_view tsv, const textprep::PipelineConfig& cfg) {
  Lexicon lex;
  std::map<std::string, LexiconEntry> by_norm;
  for_each_line(tsv, [&](std::size_t lineno, std::string_view line) {
    if (line.empty() || line.front() == '#') return;
    const auto tab = line.find('\t');
    if (tab == std::string_view::npos)
      throw Error(ErrorCode::MalformedLexicon, "line " + std::to_string(lineno) + ": expected surface<TAB>polarity");
    const std::string surface(line.substr(0, tab));
    const std::string pol = textprep::collapse_whitespace(line.substr(tab + 1));
    LexiconEntry e;
    e.surface = surface;
    if (pol == "positive") {
      e.polarity = Polarity::Positive;
    } else if (pol == "negative") {
      e.polarity = Polarity::Negative;
    } else {
      throw Error(ErrorCode::MalformedLexicon, "line " + std::to_string(lineno) + ": bad polarity '" + pol + "'");
    }
    e.normalized = textprep::normalize_term(surface, cfg);
    if (e.normalized.empty()) {
      ++lex.dropped_empty;
      return;
    }
    auto [it, inserted] = by_norm.emplace(e.normalized, e);
    if (!inserted) {
      if (it->second.polarity != e.polarity)
        throw Error(ErrorCode::MalformedLexicon, "'" + e.normalized + "' listed as both positive and negative");
      ++lex.merged_duplicates;
    }
  });
  for (auto& [norm, e] : by_norm) lex.entries.push_back(std::move(e));
  return lex;
}

Lexicon load_lexicon(const std::string& path, const textprep::PipelineConfig& cfg) {
  return parse_lexicon(read_file(path), cfg);
}

// --- entities -------------------------------------------------------------------

namespace {

std::vector<std::string> string_array(const toml::table& t, std::string_view key) {
  std::vector<std::string> out;
  const auto* arr = t[key].as_array();
  if (arr == nullptr) return out;
  for (const auto& n : *arr) {
    auto s = n.value<std::string>();
    if (!s) throw Error(ErrorCode::InvalidConfig, std::string(key) + " must be a list of strings");
    out.push_back(*s);
  }
  return out;
}

std::vector<EntitySpec> entities_from_table(const toml::table& tbl, const textprep::PipelineConfig& cfg) {
  std::vector<EntitySpec> out;
  const auto* arr = tbl["entity"].as_array();
  if (arr == nullptr) return out;
  for (const auto& node : *arr) {
    const auto* t = node.as_table();
    if (t == nullptr) throw Error(ErrorCode::InvalidConfig, "[[entity]] entries must be tables");
    EntitySpec e;
    e.canonical = textprep::normalize_term((*t)["canonical"].value_or(std::string{}), cfg);
    if (e.canonical.empty()) throw Error(ErrorCode::InvalidConfig, "entity canonical must normalize to a token");
    std::set<std::string> aliases{e.canonical};
    for (const auto& a : string_array(*t, "aliases")) {
      auto n = textprep::normalize_term(a, cfg);
      if (!n.empty()) aliases.insert(std::move(n));
    }
    e.aliases.assign(aliases.begin(), aliases.end());
    e.spaces = string_array(*t, "spaces");
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace

std::vector<EntitySpec> parse_entities(std::string_view toml_text, const textprep::PipelineConfig& cfg) {
  try {
    return entities_from_table(toml::parse(toml_text), cfg);
  } catch (const toml::parse_error& e) {
    throw Error(ErrorCode::InvalidConfig, std::string(e.description()));
  }
}

std::vector<EntitySpec> load_entities(const std::string& path, const textprep::PipelineConfig& cfg) {
  try {
    return entities_from_table(toml::parse_file(path), cfg);
  } catch (const toml::parse_error& e) {
    throw Error(ErrorCode::InvalidConfig, path + ": " + std::string(e.description()));
  }
}

// --- matching ---------------------------------------------------------------------

void sort_groups(std::vector<MatchGroup>& groups) {
  std::sort(groups.begin(), groups.end(), [](const MatchGroup& a, const MatchGroup& b) {
    if (a.best_rank != b.best_rank) return a.best_rank < b.best_rank;
    if (a.kind != b.kind) return a.kind < b.kind;
    return a.label < b.label;
  });
}

namespace {

void add_member(std::map<std::string, MatchGroup>& groups, const std::string& label, GroupKind kind,
                Polarity polarity, const embed::NNResult& nn) {
  auto [it, inserted] = groups.try_emplace(label);
  MatchGroup& g = it->second;
  if (inserted) {
    g.label = label;
    g.kind = kind;
    g.polarity = polarity;
    g.best_rank = nn.rank;
  }
  g.best_rank = std::min(g.best_rank, nn.rank);
  g.members.push_back({nn.term, nn.rank});
  g.occurrence_count = static_cast<std::uint32_t>(g.members.size());
}

std::vector<MatchGroup> finish(std::map<std::string, MatchGroup>& groups) {
  std::vector<MatchGroup> out;
  out.reserve(groups.size());
  for (auto& [label, g] : groups) {
    std::sort(g.members.begin(), g.members.end(),
              [](const Member& a, const Member& b) { return a.rank != b.rank ? a.rank < b.rank : a.term < b.term; });
    out.push_back(std::move(g));
  }
  sort_groups(out);
  return out;
}

}  // namespace

std::vector<MatchGroup> match_sentiment(std::span<const embed::NNResult> nns, const Lexicon& lexicon,
                                        std::uint32_t max_edit) {
  std::vector<std::u32string> norms;
  norms.reserve(lexicon.entries.size());
  for (const auto& e : lexicon.entries) norms.push_back(utf8_decode(e.normalized));

  std::map<std::string, MatchGroup> groups;
  for (const auto& nn : nns) {
    const auto term = utf8_decode(nn.term);
    std::size_t best = SIZE_MAX;
    std::size_t best_dist = SIZE_MAX;
    // entries are sorted, so the first minimum is the lexicographically smallest
    for (std::size_t i = 0; i < norms.size(); ++i) {
      const auto& n = norms[i];
      std::size_t d;
      if (n == term) {
        d = 0;
      } else if (max_edit == 0 || term.size() <= 3 || n.size() <= 3) {
        continue;
      } else {
        const std::size_t gap = term.size() > n.size() ? term.size() - n.size() : n.size() - term.size();
        if (gap > max_edit) continue;
        d = levenshtein(term, n);
        if (d > max_edit) continue;
      }
      if (d < best_dist) {
        best_dist = d;
        best = i;
        if (d == 0) break;
      }
    }
    if (best == SIZE_MAX) continue;
    const auto& e = lexicon.entries[best];
    add_member(groups, e.normalized, GroupKind::Sentiment, e.polarity, nn);
  }
  return finish(groups);
}

std::vector<MatchGroup> match_subsuming(std::span<const embed::NNResult> nns, const EntitySpec& entity) {
  std::map<std::string, MatchGroup> groups;
  for (const auto& nn : nns) {
    for (const auto& alias : entity.aliases) {
      if (alias.empty() || nn.term == alias) continue;
      if (nn.term.find(alias) != std::string::npos)
        add_member(groups, alias, GroupKind::Subsumption, Polarity::Positive, nn);
    }
  }
  return finish(groups);
}

std::optional<double> median(std::vector<std::uint32_t> values) {
  if (values.empty()) return std::nullopt;
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  if (n % 2 == 1) return static_cast<double>(values[n / 2]);
  return (static_cast<double>(values[n / 2 - 1]) + static_cast<double>(values[n / 2])) / 2.0;
}

SpaceSection build_section(std::string space, std::span<const embed::NNResult> nns, const EntitySpec& entity,
                           const Lexicon& lexicon, std::uint32_t max_edit) {
  SpaceSection s;
  s.space = std::move(space);
  s.neighbors = static_cast<std::uint32_t>(nns.size());
  s.groups = match_sentiment(nns, lexicon, max_edit);
  auto sub = match_subsuming(nns, entity);
  std::vector<std::uint32_t> pos;
  std::vector<std::uint32_t> neg;
  for (const auto& g : s.groups) (g.polarity == Polarity::Positive ? pos : neg).push_back(g.best_rank);
  s.median_positive = median(pos);
  s.median_negative = median(neg);
  s.groups.insert(s.groups.end(), std::make_move_iterator(sub.begin()), std::make_move_iterator(sub.end()));
  sort_groups(s.groups);
  return s;
}

MatchReport compare_spaces(const EntitySpec& entity, std::span<const NamedModel> models, const Lexicon& lexicon,
                           std::size_t k, std::uint32_t max_edit) {
  MatchReport report;
  report.entity = entity.canonical;
  for (const auto& m : models) {
    for (const auto& alias : entity.aliases) {
      if (m.model->rows_for(alias).empty())
        throw Error(ErrorCode::UnrepresentableAlias, "alias '" + alias + "' has no vector in space " + m.id);
    }
    const auto nns = embed::nearest_neighbors(*m.model, entity.canonical, k);
    report.spaces.push_back(build_section(m.id, nns, entity, lexicon, max_edit));
  }
  return report;
}

// --- rendering ------------------------------------------------------------------

std::string render_cell(const MatchGroup& g) {
  std::string label = g.label;
  if (g.kind == GroupKind::Sentiment) label = g.polarity == Polarity::Positive ? "*" + label + "*" : "**" + label + "**";
  std::string out = label + " (" + std::to_string(g.best_rank);
  if (g.occurrence_count > 1) out += ", " + std::to_string(g.occurrence_count) + "x";
  return out + ")";
}

namespace {

std::string format_median(const std::optional<double>& m) {
  if (!m) return "n/a";
  char buf[32];
  if (*m == static_cast<double>(static_cast<std::int64_t>(*m))) {
    std::snprintf(buf, sizeof buf, "%lld", static_cast<long long>(*m));
  } else {
    std::snprintf(buf, sizeof buf, "%.1f", *m);
  }
  return buf;
}

nlohmann::json report_json(const MatchReport& r) {
  nlohmann::json spaces = nlohmann::json::array();
  for (const auto& s : r.spaces) {
    nlohmann::json groups = nlohmann::json::array();
    for (const auto& g : s.groups) {
      nlohmann::json members = nlohmann::json::array();
      for (const auto& m : g.members) members.push_back({{"term", m.term}, {"rank", m.rank}});
      nlohmann::json j = {{"label", g.label},
                          {"kind", g.kind == GroupKind::Sentiment ? "sentiment" : "subsumption"},
                          {"best_rank", g.best_rank},
                          {"occurrence_count", g.occurrence_count},
                          {"members", members}};
      j["polarity"] = g.kind == GroupKind::Sentiment ? nlohmann::json(to_string(g.polarity)) : nlohmann::json();
      groups.push_back(std::move(j));
    }
    nlohmann::json sj = {{"space", s.space}, {"neighbors", s.neighbors}, {"groups", groups}};
    sj["median_positive_rank"] = s.median_positive ? nlohmann::json(*s.median_positive) : nlohmann::json();
    sj["median_negative_rank"] = s.median_negative ? nlohmann::json(*s.median_negative) : nlohmann::json();
    spaces.push_back(std::move(sj));
  }
  return {{"entity", r.entity}, {"spaces", spaces}};
}

void markdown(std::ostringstream& md, const MatchReport& r) {
  md << "## " << r.entity << "\n\n";
  md << "| Space | Neighbours |\n| --- | --- |\n";
  for (const auto& s : r.spaces) {
    md << "| " << s.space << " |";
    for (std::size_t i = 0; i < s.groups.size(); ++i) md << (i == 0 ? " " : "; ") << render_cell(s.groups[i]);
    md << " |\n";
  }
  md << "\n| Space | Median positive rank | Median negative rank |\n| --- | --- | --- |\n";
  for (const auto& s : r.spaces)
    md << "| " << s.space << " | " << format_median(s.median_positive) << " | " << format_median(s.median_negative)
       << " |\n";
}

}  // namespace

std::string render_report(const MatchReport& report, ReportFormat format) {
  if (format == ReportFormat::Json) return report_json(report).dump(2) + "\n";
  std::ostringstream md;
  markdown(md, report);
  return md.str();
}

std::string render_reports(std::span<const MatchReport> reports, ReportFormat format) {
  if (format == ReportFormat::Json) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : reports) arr.push_back(report_json(r));
    return arr.dump(2) + "\n";
  }
  std::ostringstream md;
  md << "# Polarity report\n";
  for (const auto& r : reports) {
    md << "\n";
    markdown(md, r);
  }
  return md.str();
}

}  // namespace polarembed::polarity
