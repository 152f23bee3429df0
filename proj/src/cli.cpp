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

#include "polarembed/cli.hpp"

#include <CLI11.hpp>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <nlohmann/json.hpp>
#include <sstream>

#include "polarembed/common.hpp"
#include "polarembed/corpus.hpp"
#include "polarembed/embedding.hpp"
#include "polarembed/polarity.hpp"
#include "polarembed/stance.hpp"
#include "polarembed/synth.hpp"
#include "polarembed/textprep.hpp"

#ifndef POLAREMBED_VERSION
#define POLAREMBED_VERSION "0.0.0"
#endif

namespace polarembed::cli {

namespace fs = std::filesystem;
using json = nlohmann::json;

std::string version() { return POLAREMBED_VERSION; }

namespace {

std::string read_text(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const fs::path& p, std::string_view text) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoFailure, "cannot write " + p.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw Error(ErrorCode::IoFailure, "write failed for " + p.string());
}

class Workspace {
 public:
  explicit Workspace(fs::path root) : root_(std::move(root)) {}

  fs::path path(const std::string& rel) const { return root_ / rel; }

  // Workspace-relative form for paths inside the workspace, else as given.
  std::string display(const fs::path& p) const {
    const auto rel = fs::weakly_canonical(p).lexically_relative(fs::weakly_canonical(root_));
    if (!rel.empty() && *rel.begin() != "..") return rel.generic_string();
    return p.generic_string();
  }

  // Writes <prov_rel> describing one stage run and registers its outputs in
  // the workspace manifest.
  void record(const std::string& prov_rel, const std::string& stage, const json& config,
              const std::vector<fs::path>& inputs, const std::vector<std::string>& outputs) const {
    json prov;
    prov["stage"] = stage;
    prov["tool_version"] = version();
    prov["config"] = config;
    json in = json::object();
    for (const auto& p : inputs) in[display(p)] = corpus::file_digest(p.string());
    prov["inputs"] = in;
    json out = json::object();
    for (const auto& rel : outputs) out[rel] = corpus::file_digest(path(rel).string());
    prov["outputs"] = out;
    write_text(path(prov_rel), prov.dump(2) + "\n");

    const auto manifest_path = path("manifest.json");
    json manifest;
    if (fs::exists(manifest_path)) {
      try {
        manifest = json::parse(read_text(manifest_path));
      } catch (const json::exception&) {
        throw Error(ErrorCode::VersionMismatch, "unreadable workspace manifest");
      }
      if (manifest.value("schema_version", 0) != 1)
        throw Error(ErrorCode::VersionMismatch, "unsupported workspace manifest version");
    }
    manifest["schema_version"] = 1;
    for (const auto& rel : outputs)
      manifest["artifacts"][rel] = {{"stage", stage}, {"digest", out[rel]}, {"provenance", prov_rel}};
    manifest["artifacts"][prov_rel] = {{"stage", stage}, {"digest", corpus::file_digest(path(prov_rel).string())}};
    write_text(manifest_path, manifest.dump(2) + "\n");
  }

  void require(const std::string& rel, const std::string& producer) const {
    if (!fs::exists(path(rel)))
      throw Error(ErrorCode::IoFailure, rel + " not found in workspace; run '" + producer + "' first");
  }

 private:
  fs::path root_;
};

struct Globals {
  std::string workspace = "workspace";
  std::uint64_t seed = 42;
  bool seed_given = false;
  std::uint32_t workers = 1;
};

textprep::PipelineConfig pipeline_from(const std::string& path) {
  return path.empty() ? textprep::PipelineConfig{} : textprep::load_pipeline_config(path);
}

json pipeline_json(const textprep::PipelineConfig& cfg) {
  json stages = json::array();
  for (auto s : cfg.stages) stages.push_back(std::string(textprep::to_string(s)));
  return {{"stages", stages}, {"number_token", cfg.number_token}};
}

// user -> label, from either a labels file (user, label, provenance) or a
// gold file (user, pro|anti|undecidable).
std::map<std::string, stance::StanceLabel> read_label_map(const fs::path& p) {
  std::map<std::string, stance::StanceLabel> out;
  const auto text = read_text(p);
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    const auto t1 = line.find('\t');
    if (t1 == std::string::npos)
      throw Error(ErrorCode::MalformedRecord, p.string() + ":" + std::to_string(lineno) + ": expected user<TAB>label");
    const auto t2 = line.find('\t', t1 + 1);
    const auto label = line.substr(t1 + 1, t2 == std::string::npos ? std::string::npos : t2 - t1 - 1);
    if (label == "undecidable" || label == "label") continue;
    try {
      out[line.substr(0, t1)] = stance::label_from_string(label);
    } catch (const Error&) {
      throw Error(ErrorCode::MalformedRecord, p.string() + ":" + std::to_string(lineno) + ": bad label '" + label + "'");
    }
  }
  return out;
}

std::string group_name(stance::StanceLabel l) { return std::string(stance::to_string(l)); }

// --- stages --------------------------------------------------------------------

int do_ingest(const Workspace& ws, const std::vector<std::string>& inputs, const std::vector<std::string>& langs,
              bool no_filter, std::ostream& out) {
  std::set<std::string, std::less<>> allowed;
  if (!no_filter) allowed.insert(langs.begin(), langs.end());
  const auto c = corpus::ingest_files(inputs, allowed);
  write_corpus(ws.path("corpus").string(), c);
  std::vector<fs::path> in(inputs.begin(), inputs.end());
  ws.record("corpus/corpus.prov.json", "ingest",
            {{"languages", no_filter ? json::array() : json(std::vector<std::string>(allowed.begin(), allowed.end()))},
             {"language_filter", !no_filter}},
            in,
            {"corpus/tweets.jsonl", "corpus/users.jsonl", "corpus/ingest_stats.json", "corpus/manifest.json"});
  out << "ingested " << c.stats.kept << " of " << c.stats.total << " records (" << c.stats.malformed << " malformed, "
      << c.stats.language_filtered << " language-filtered), " << c.users.size() << " users\n";
  return kExitOk;
}

int do_seed_label(const Workspace& ws, const std::string& rules_path, std::ostream& out) {
  ws.require("corpus/manifest.json", "ingest");
  const auto c = corpus::read_corpus(ws.path("corpus").string());
  const auto rules = rules_path.empty() ? stance::default_seed_rules() : stance::load_seed_rules(rules_path);
  const auto seeds = stance::apply_seed_rules(c.users, rules);
  write_text(ws.path("labels/seeds.tsv"), stance::labels_to_tsv(seeds.labeling));
  write_text(ws.path("labels/review.tsv"), stance::review_to_tsv(seeds, rules));
  std::vector<fs::path> in{ws.path("corpus/users.jsonl")};
  if (!rules_path.empty()) in.emplace_back(rules_path);
  ws.record("labels/seeds.prov.json", "seed-label", {{"rules", rules_path.empty() ? "default" : "file"}}, in,
            {"labels/seeds.tsv", "labels/review.tsv"});
  std::size_t pro = 0;
  for (const auto& [u, e] : seeds.labeling.labels) pro += e.label == stance::StanceLabel::Pro;
  out << "seeded " << seeds.labeling.labels.size() << " users (" << pro << " pro, "
      << seeds.labeling.labels.size() - pro << " anti), " << seeds.labeling.conflicts.size()
      << " conflicts for review\n";
  return kExitOk;
}

int do_propagate(const Workspace& ws, std::uint32_t threshold, std::uint32_t max_iter, bool serial,
                 std::ostream& out) {
  ws.require("labels/seeds.tsv", "seed-label");
  const auto c = corpus::read_corpus(ws.path("corpus").string());
  const auto index = corpus::build_retweet_index(c.tweets);
  const auto seeds = stance::labels_from_tsv(read_text(ws.path("labels/seeds.tsv")));
  stance::PropagationConfig cfg;
  cfg.threshold = threshold;
  cfg.max_iterations = max_iter;
  cfg.parallel = !serial;
  if (cfg.threshold < 1) throw Error(ErrorCode::InvalidConfig, "threshold must be >= 1");
  if (cfg.max_iterations < 1) throw Error(ErrorCode::InvalidConfig, "max-iter must be >= 1");
  const auto result = stance::propagate_to_fixpoint(index, seeds, cfg);
  write_text(ws.path("labels/labels.tsv"), stance::labels_to_tsv(result.labeling));
  json summary = {{"threshold", cfg.threshold},
                  {"max_iterations", cfg.max_iterations},
                  {"new_per_iteration", result.new_per_iteration},
                  {"max_iterations_reached", result.max_iterations_reached},
                  {"labeled", result.labeling.labels.size()}};
  write_text(ws.path("labels/propagation.json"), summary.dump(2) + "\n");
  ws.record("labels/labels.prov.json", "propagate", {{"threshold", cfg.threshold}, {"max_iterations", max_iter}},
            {ws.path("corpus/tweets.jsonl"), ws.path("labels/seeds.tsv")},
            {"labels/labels.tsv", "labels/propagation.json"});
  out << "labeled " << result.labeling.labels.size() << " users after " << result.new_per_iteration.size()
      << " iterations" << (result.max_iterations_reached ? " (max iterations reached)" : "") << "\n";
  return kExitOk;
}

int do_preprocess(const Workspace& ws, const std::string& pipeline_path, const std::string& labels_path,
                  bool include_retweets, std::ostream& out) {
  ws.require("corpus/manifest.json", "ingest");
  const fs::path labels = labels_path.empty() ? ws.path("labels/labels.tsv") : fs::path(labels_path);
  if (labels_path.empty()) ws.require("labels/labels.tsv", "propagate");
  const auto cfg = pipeline_from(pipeline_path);
  cfg.validate();
  const auto c = corpus::read_corpus(ws.path("corpus").string());
  const auto label_of = read_label_map(labels);
  std::map<std::string, std::string> text;
  std::map<std::string, std::uint64_t> lines;
  for (auto l : {stance::StanceLabel::Pro, stance::StanceLabel::Anti}) {
    text[group_name(l)];
    lines[group_name(l)] = 0;
  }
  for (const auto& t : c.tweets) {
    if (t.origin_id && !include_retweets) continue;
    auto it = label_of.find(t.author_id);
    if (it == label_of.end()) continue;
    const auto toks = textprep::preprocess_tweet(t.text, cfg);
    if (toks.empty()) continue;
    auto& dst = text[group_name(it->second)];
    for (std::size_t i = 0; i < toks.size(); ++i) {
      if (i) dst += ' ';
      dst += toks[i];
    }
    dst += '\n';
    ++lines[group_name(it->second)];
  }
  std::vector<std::string> outputs;
  for (const auto& [g, body] : text) {
    write_text(ws.path("text/" + g + ".txt"), body);
    outputs.push_back("text/" + g + ".txt");
    out << g << ": " << lines[g] << " lines\n";
  }
  std::vector<fs::path> in{ws.path("corpus/tweets.jsonl"), labels};
  if (!pipeline_path.empty()) in.emplace_back(pipeline_path);
  ws.record("text/text.prov.json", "preprocess",
            {{"pipeline", pipeline_json(cfg)}, {"include_retweets", include_retweets}}, in, outputs);
  return kExitOk;
}

struct TrainOpts {
  std::string group;
  std::string name;
  std::uint32_t min_count = 5;
  double sample = 1e-4;
  embed::TrainConfig train;
  embed::SubwordConfig subword;
};

int do_train(const Workspace& ws, TrainOpts o, const Globals& g, std::ostream& out) {
  const std::string text_rel = "text/" + o.group + ".txt";
  ws.require(text_rel, "preprocess");
  if (o.name.empty()) o.name = o.group;
  o.train.seed = g.seed;
  o.train.workers = g.workers;
  o.train.validate();
  o.subword.validate();
  std::ifstream in(ws.path(text_rel));
  const auto lines = embed::read_token_lines(in);
  const auto vocab = embed::build_vocab(lines, o.min_count, o.sample);

  std::string log;
  auto progress = [&](const embed::EpochStats& s) {
    json j = {{"epoch", s.epoch}, {"tokens", s.tokens}, {"mean_loss", s.mean_loss}, {"lr", s.lr}};
    log += j.dump() + "\n";
    out << j.dump() << "\n";
  };
  auto result = embed::train(lines, vocab, o.train, o.subword, progress);
  json config = {{"group", o.group},
                 {"dim", o.train.dim},
                 {"lr", o.train.lr},
                 {"epochs", o.train.epochs},
                 {"window", o.train.window},
                 {"negatives", o.train.negatives},
                 {"seed", o.train.seed},
                 {"workers", o.train.workers},
                 {"min_count", o.min_count},
                 {"sample", o.sample},
                 {"minn", o.subword.n_min},
                 {"maxn", o.subword.n_max},
                 {"buckets", o.subword.bucket_count}};
  auto& meta = result.model.metadata();
  meta.corpus_id = corpus::file_digest(ws.path(text_rel).string());
  meta.camp_id = o.group;
  meta.provenance = json({{"config", config}, {"text_digest", meta.corpus_id}}).dump();
  const std::string model_rel = "models/" + o.name + ".bin";
  const std::string log_rel = "models/" + o.name + ".train.jsonl";
  fs::create_directories(ws.path("models"));
  embed::save(result.model, ws.path(model_rel).string());
  write_text(ws.path(log_rel), log);
  ws.record("models/" + o.name + ".prov.json", "train", config, {ws.path(text_rel)}, {model_rel, log_rel});
  out << "model " << o.name << ": " << vocab.size() << " words, dim " << o.train.dim << "\n";
  return kExitOk;
}

embed::EmbeddingModel load_model(const Workspace& ws, const std::string& name) {
  const std::string rel = "models/" + name + ".bin";
  ws.require(rel, "train --name " + name);
  return embed::load(ws.path(rel).string());
}

int do_query(const Workspace& ws, const std::string& model_name, const std::string& term, std::size_t k, bool raw,
             const std::string& pipeline_path, const std::string& format, std::ostream& out) {
  if (k < 1) throw Error(ErrorCode::InvalidConfig, "k must be >= 1");
  const auto model = load_model(ws, model_name);
  const std::string q = raw ? term : textprep::normalize_term(term, pipeline_from(pipeline_path));
  if (q.empty()) throw Error(ErrorCode::NoRepresentableNgrams, "query '" + term + "' normalizes to nothing");
  const auto nns = embed::NeighborIndex(model).query(q, k);
  if (format == "json") {
    json arr = json::array();
    for (const auto& n : nns) arr.push_back({{"rank", n.rank}, {"term", n.term}, {"cosine", n.cosine}});
    out << json({{"model", model_name}, {"query", q}, {"neighbors", arr}}).dump(2) << "\n";
  } else {
    out << "rank\tterm\tcosine\n";
    char buf[32];
    for (const auto& n : nns) {
      std::snprintf(buf, sizeof buf, "%.6f", static_cast<double>(n.cosine));
      out << n.rank << '\t' << n.term << '\t' << buf << '\n';
    }
  }
  return kExitOk;
}

int do_compare(const Workspace& ws, const std::string& entities_path, const std::string& lexicon_path,
               std::vector<std::string> models, std::size_t k, std::uint32_t max_edit,
               const std::string& pipeline_path, const std::string& name, std::ostream& out) {
  if (k < 1) throw Error(ErrorCode::InvalidConfig, "k must be >= 1");
  const auto cfg = pipeline_from(pipeline_path);
  const auto entities = polarity::load_entities(entities_path, cfg);
  const auto lexicon = polarity::load_lexicon(lexicon_path, cfg);
  if (lexicon.entries.empty()) out << "warning: lexicon is empty\n";
  if (lexicon.dropped_empty > 0) out << "warning: " << lexicon.dropped_empty << " lexicon entries normalize to nothing\n";

  std::map<std::string, embed::EmbeddingModel> loaded;
  auto model_of = [&](const std::string& id) -> const embed::EmbeddingModel& {
    auto it = loaded.find(id);
    if (it == loaded.end()) it = loaded.emplace(id, load_model(ws, id)).first;
    return it->second;
  };
  std::vector<polarity::MatchReport> reports;
  std::vector<fs::path> inputs{entities_path, lexicon_path};
  for (const auto& e : entities) {
    const auto& spaces = models.empty() ? e.spaces : models;
    if (spaces.empty()) throw Error(ErrorCode::InvalidConfig, "entity " + e.canonical + " lists no spaces");
    std::vector<polarity::NamedModel> named;
    for (const auto& s : spaces) named.push_back({s, &model_of(s)});
    reports.push_back(polarity::compare_spaces(e, named, lexicon, k, max_edit));
  }
  for (const auto& [id, m] : loaded) inputs.push_back(ws.path("models/" + id + ".bin"));
  const std::string json_rel = "reports/" + name + ".json";
  const std::string md_rel = "reports/" + name + ".md";
  write_text(ws.path(json_rel), polarity::render_reports(reports, polarity::ReportFormat::Json));
  write_text(ws.path(md_rel), polarity::render_reports(reports, polarity::ReportFormat::Markdown));
  ws.record("reports/" + name + ".prov.json", "compare", {{"k", k}, {"max_edit", max_edit}, {"models", models}},
            inputs, {json_rel, md_rel});
  for (const auto& r : reports) {
    for (const auto& s : r.spaces) {
      out << r.entity << " @ " << s.space << ": " << s.groups.size() << " groups";
      if (s.median_positive) out << ", median positive rank " << *s.median_positive;
      if (s.median_negative) out << ", median negative rank " << *s.median_negative;
      out << "\n";
    }
  }
  return kExitOk;
}

int do_synth_net(const Workspace& ws, const std::string& params_path, const Globals& g, std::ostream& out) {
  auto p = params_path.empty() ? synth::NetworkParams{} : synth::load_network_params(params_path);
  if (g.seed_given || params_path.empty()) p.rng_seed = g.seed;
  const auto net = synth::gen_polarized_network(p);
  write_text(ws.path("synth/network/tweets.jsonl"), synth::archive_jsonl(net.tweets, net.users));
  write_text(ws.path("synth/network/gold.tsv"), stance::gold_to_tsv(net.gold));
  std::string seeds;
  for (const auto& s : net.seed_users) seeds += s + "\n";
  write_text(ws.path("synth/network/seeds.txt"), seeds);
  std::vector<fs::path> in;
  if (!params_path.empty()) in.emplace_back(params_path);
  ws.record("synth/network/network.prov.json", "synth-net",
            {{"users_per_camp", p.users_per_camp},
             {"seeds_per_camp", p.seeds_per_camp},
             {"tweets_per_camp", p.tweets_per_camp},
             {"retweets_per_user", p.retweets_per_user},
             {"cross_camp_retweet_prob", p.cross_camp_retweet_prob},
             {"popularity_exponent", p.popularity_exponent},
             {"viral_tweets", p.viral_tweets},
             {"rng_seed", p.rng_seed}},
            in, {"synth/network/tweets.jsonl", "synth/network/gold.tsv", "synth/network/seeds.txt"});
  out << "network: " << net.users.size() << " users, " << net.tweets.size() << " tweets -> "
      << ws.display(ws.path("synth/network")) << "\n";
  return kExitOk;
}

int do_synth_corpus(const Workspace& ws, const std::string& params_path, const Globals& g, std::ostream& out) {
  auto p = params_path.empty() ? synth::CorpusParams{} : synth::load_corpus_params(params_path);
  if (g.seed_given || params_path.empty()) p.rng_seed = g.seed;
  const auto c = synth::gen_polarized_corpus(p);
  const auto rec = synth::corpus_records(c, p);
  write_text(ws.path("synth/corpus/tweets.jsonl"), synth::archive_jsonl(rec.tweets, rec.users));
  write_text(ws.path("synth/corpus/gold.tsv"), stance::gold_to_tsv(rec.gold));
  write_text(ws.path("synth/corpus/lexicon.tsv"), synth::lexicon_tsv(c));
  write_text(ws.path("synth/corpus/entities.toml"), synth::entities_toml(c, {"pro", "anti"}));
  std::vector<fs::path> in;
  if (!params_path.empty()) in.emplace_back(params_path);
  ws.record("synth/corpus/corpus.prov.json", "synth-corpus",
            {{"vocab_size", p.vocab_size},
             {"sentences", p.sentences},
             {"sentence_length", p.sentence_length},
             {"entity_token", p.entity_token},
             {"positive_ratio_camp_a", p.positive_ratio_camp_a},
             {"window_cooccurrence", p.window_cooccurrence},
             {"lexicon_per_polarity", p.lexicon_per_polarity},
             {"entity_sentence_prob", p.entity_sentence_prob},
             {"sentiment_per_entity_sentence", p.sentiment_per_entity_sentence},
             {"background_sentiment_prob", p.background_sentiment_prob},
             {"authors_per_camp", p.authors_per_camp},
             {"rng_seed", p.rng_seed}},
            in,
            {"synth/corpus/tweets.jsonl", "synth/corpus/gold.tsv", "synth/corpus/lexicon.tsv",
             "synth/corpus/entities.toml"});
  out << "corpus: " << rec.tweets.size() << " tweets, entity " << c.entity << " -> "
      << ws.display(ws.path("synth/corpus")) << "\n";
  return kExitOk;
}

int do_eval(const Workspace& ws, const std::string& gold_path, const std::string& labels_path, std::ostream& out) {
  const fs::path labels = labels_path.empty() ? ws.path("labels/labels.tsv") : fs::path(labels_path);
  if (labels_path.empty()) ws.require("labels/labels.tsv", "propagate");
  const auto gold = stance::gold_from_tsv(read_text(gold_path));
  const auto labeling = stance::labels_from_tsv(read_text(labels));
  const auto ev = stance::evaluate_against(labeling, gold);
  json j = {{"match", ev.match},
            {"mismatch", ev.mismatch},
            {"undecidable", ev.undecidable},
            {"unlabeled", ev.unlabeled},
            {"gold_users", gold.size()}};
  j["decided_accuracy"] = ev.decided_accuracy ? json(*ev.decided_accuracy) : json();
  write_text(ws.path("reports/eval.json"), j.dump(2) + "\n");
  ws.record("reports/eval.prov.json", "eval", json::object(), {fs::path(gold_path), labels}, {"reports/eval.json"});
  out << j.dump(2) << "\n";
  return kExitOk;
}

int exit_code_for(const Error& e) {
  switch (e.code()) {
    case ErrorCode::InvalidConfig:
    case ErrorCode::InvalidParams:
      return kExitUsage;
    default:
      return kExitData;
  }
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Stance labeling and per-camp subword embeddings for polarized tweet corpora", "polarembed"};
  app.set_version_flag("--version", "polarembed " + version());
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("-w,--workspace", g.workspace, "Workspace directory")
      ->envname("POLAREMBED_WORKSPACE")
      ->capture_default_str();
  auto* seed_opt = app.add_option("--seed", g.seed, "Global random seed")->capture_default_str();
  app.add_option("--workers", g.workers, "Worker threads (1 = deterministic)")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);

  std::function<int()> action;

  std::vector<std::string> ingest_inputs;
  std::vector<std::string> ingest_langs{"tr"};
  bool no_lang_filter = false;
  auto* ingest = app.add_subcommand("ingest", "Parse JSONL status archives into the workspace corpus");
  ingest->add_option("-i,--input", ingest_inputs, "JSONL archive file(s)")->required()->check(CLI::ExistingFile);
  ingest->add_option("--lang", ingest_langs, "Allowed language codes")->capture_default_str();
  ingest->add_flag("--no-lang-filter", no_lang_filter, "Keep every language");

  std::string rules_path;
  auto* seed_label = app.add_subcommand("seed-label", "Label users from profile seed rules");
  seed_label->add_option("--rules", rules_path, "Seed rule TOML ([[rule]] tables)")->check(CLI::ExistingFile);

  std::uint32_t threshold = 10;
  std::uint32_t max_iter = 50;
  bool serial = false;
  auto* propagate = app.add_subcommand("propagate", "Propagate seed labels over the retweet index");
  propagate->add_option("--threshold", threshold, "Exclusive same-camp keys needed")->capture_default_str();
  propagate->add_option("--max-iter", max_iter, "Iteration cap")->capture_default_str();
  propagate->add_flag("--serial", serial, "Use the serial kernels");

  std::string pipeline_path;
  std::string labels_override;
  bool include_retweets = false;
  auto* preprocess = app.add_subcommand("preprocess", "Tokenize labeled users' tweets into per-camp text");
  preprocess->add_option("--pipeline", pipeline_path, "Pipeline TOML ([pipeline] table)")->check(CLI::ExistingFile);
  preprocess->add_option("--labels", labels_override, "Labels or gold TSV instead of labels/labels.tsv")
      ->check(CLI::ExistingFile);
  preprocess->add_flag("--include-retweets", include_retweets, "Also emit retweet texts");

  TrainOpts topts;
  auto* train = app.add_subcommand("train", "Train a subword skip-gram model for one camp");
  train->add_option("--group", topts.group, "Camp text to train on (pro or anti)")->required();
  train->add_option("--name", topts.name, "Model name (defaults to the group)");
  train->add_option("--dim", topts.train.dim, "Vector size")->capture_default_str();
  train->add_option("--lr", topts.train.lr, "Initial learning rate")->capture_default_str();
  train->add_option("--epochs", topts.train.epochs, "Epochs")->capture_default_str();
  train->add_option("--window", topts.train.window, "Maximum context window")->capture_default_str();
  train->add_option("--negatives", topts.train.negatives, "Negative samples per pair")->capture_default_str();
  train->add_option("--min-count", topts.min_count, "Minimum token frequency")->capture_default_str();
  train->add_option("--sample", topts.sample, "Subsampling threshold")->capture_default_str();
  train->add_option("--minn", topts.subword.n_min, "Minimum n-gram length")->capture_default_str();
  train->add_option("--maxn", topts.subword.n_max, "Maximum n-gram length")->capture_default_str();
  train->add_option("--buckets", topts.subword.bucket_count, "Hash buckets")->capture_default_str();

  std::string q_model;
  std::string q_term;
  std::size_t q_k = 2000;
  bool q_raw = false;
  std::string q_format = "tsv";
  auto* query = app.add_subcommand("query", "Nearest neighbours of a term in one model");
  query->add_option("--model", q_model, "Model name")->required();
  query->add_option("--term", q_term, "Query term")->required();
  query->add_option("--k", q_k, "Neighbours to return")->capture_default_str();
  query->add_flag("--raw", q_raw, "Do not normalize the query");
  query->add_option("--pipeline", pipeline_path, "Pipeline TOML")->check(CLI::ExistingFile);
  query->add_option("--format", q_format, "tsv or json")
      ->check(CLI::IsMember({"tsv", "json"}))
      ->capture_default_str();

  std::string c_entities;
  std::string c_lexicon;
  std::vector<std::string> c_models;
  std::size_t c_k = 2000;
  std::uint32_t c_edit = 1;
  std::string c_name = "report";
  auto* compare = app.add_subcommand("compare", "Rank-based sentiment comparison across camp models");
  compare->add_option("--entities", c_entities, "Entity TOML ([[entity]] tables)")
      ->required()
      ->check(CLI::ExistingFile);
  compare->add_option("--lexicon", c_lexicon, "Sentiment lexicon TSV")->required()->check(CLI::ExistingFile);
  compare->add_option("--models", c_models, "Model names (default: each entity's spaces)")->delimiter(',');
  compare->add_option("--k", c_k, "Neighbours per space")->capture_default_str();
  compare->add_option("--max-edit", c_edit, "Levenshtein tolerance")->capture_default_str();
  compare->add_option("--pipeline", pipeline_path, "Pipeline TOML")->check(CLI::ExistingFile);
  compare->add_option("--name", c_name, "Report name")->capture_default_str();

  std::string synth_params;
  auto* synth_net = app.add_subcommand("synth-net", "Generate a synthetic two-camp retweet network");
  synth_net->add_option("--params", synth_params, "Parameter TOML ([network] table)")->check(CLI::ExistingFile);
  auto* synth_corpus = app.add_subcommand("synth-corpus", "Generate synthetic camp corpora with planted polarity");
  synth_corpus->add_option("--params", synth_params, "Parameter TOML ([corpus] table)")->check(CLI::ExistingFile);

  std::string gold_path;
  std::string eval_labels;
  auto* eval = app.add_subcommand("eval", "Compare labels with a gold TSV");
  eval->add_option("--gold", gold_path, "Gold TSV (user, pro|anti|undecidable)")->required()->check(CLI::ExistingFile);
  eval->add_option("--labels", eval_labels, "Labels TSV (default labels/labels.tsv)")->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }
  g.seed_given = seed_opt->count() > 0;
  const Workspace ws{fs::path(g.workspace)};

  try {
    if (ingest->parsed()) return do_ingest(ws, ingest_inputs, ingest_langs, no_lang_filter, out);
    if (seed_label->parsed()) return do_seed_label(ws, rules_path, out);
    if (propagate->parsed()) return do_propagate(ws, threshold, max_iter, serial, out);
    if (preprocess->parsed()) return do_preprocess(ws, pipeline_path, labels_override, include_retweets, out);
    if (train->parsed()) return do_train(ws, topts, g, out);
    if (query->parsed()) return do_query(ws, q_model, q_term, q_k, q_raw, pipeline_path, q_format, out);
    if (compare->parsed())
      return do_compare(ws, c_entities, c_lexicon, c_models, c_k, c_edit, pipeline_path, c_name, out);
    if (synth_net->parsed()) return do_synth_net(ws, synth_params, g, out);
    if (synth_corpus->parsed()) return do_synth_corpus(ws, synth_params, g, out);
    if (eval->parsed()) return do_eval(ws, gold_path, eval_labels, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  }
  err << app.help();
  return kExitUsage;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace polarembed::cli
