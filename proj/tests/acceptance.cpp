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

// Acceptance runner: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <algorithm>
#include <chrono>
#include <climits>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "polarembed/cli.hpp"
#include "polarembed/common.hpp"
#include "polarembed/corpus.hpp"
#include "polarembed/embedding.hpp"
#include "polarembed/polarity.hpp"
#include "polarembed/stance.hpp"
#include "polarembed/synth.hpp"
#include "polarembed/textprep.hpp"

namespace fs = std::filesystem;
namespace pc = polarembed::corpus;
namespace pe = polarembed::embed;
namespace pp = polarembed::polarity;
namespace ps = polarembed::stance;
namespace sy = polarembed::synth;
using ps::StanceLabel;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

int failures = 0;

void report(int id, const std::string& name, bool ok, const std::string& detail) {
  std::cout << (ok ? "PASS" : "FAIL") << " [" << id << "] " << name << ": " << detail << std::endl;
  if (!ok) ++failures;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string fmt(double x, int prec = 2, bool sci = false) {
  std::ostringstream ss;
  ss.setf(sci ? std::ios::scientific : std::ios::fixed);
  ss.precision(prec);
  ss << x;
  return ss.str();
}

// --- 1: propagation against a from-scratch reference ------------------------------

std::map<std::string, StanceLabel> brute_force(const std::vector<std::pair<std::string, std::string>>& edges,
                                               std::map<std::string, StanceLabel> labels, std::uint32_t threshold) {
  std::set<std::string> all_users;
  for (const auto& [u, k] : edges) all_users.insert(u);
  for (;;) {
    std::set<std::string> pro_keys, anti_keys;
    for (const auto& [u, k] : edges) {
      auto it = labels.find(u);
      if (it == labels.end()) continue;
      (it->second == StanceLabel::Pro ? pro_keys : anti_keys).insert(k);
    }
    std::map<std::string, StanceLabel> fresh;
    for (const auto& u : all_users) {
      if (labels.contains(u)) continue;
      std::set<std::string> mine;
      for (const auto& [v, k] : edges)
        if (v == u) mine.insert(k);
      std::uint32_t pro = 0, anti = 0;
      for (const auto& k : mine) {
        const bool p = pro_keys.contains(k), a = anti_keys.contains(k);
        if (p && a) continue;
        pro += p;
        anti += a;
      }
      if (pro >= threshold && anti == 0) fresh[u] = StanceLabel::Pro;
      if (anti >= threshold && pro == 0) fresh[u] = StanceLabel::Anti;
    }
    if (fresh.empty()) return labels;
    labels.merge(fresh);
  }
}

void criterion_oracle() {
  const auto t0 = Clock::now();
  const std::uint32_t thresholds[] = {1, 2, 3, 10};
  std::size_t agree = 0, labeled = 0;
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    polarembed::SplitMix64 rng(seed * 7919);
    const auto users = 5 + rng.below(46);
    const auto keys = 5 + rng.below(196);
    const double density = 0.02 + 0.25 * rng.uniform();
    std::vector<std::pair<std::string, std::string>> edges;
    pc::RetweetIndex index;
    for (std::uint64_t u = 0; u < users; ++u)
      for (std::uint64_t k = 0; k < keys; ++k)
        if (rng.bernoulli(density)) {
          edges.emplace_back("u" + std::to_string(u), "k" + std::to_string(k));
          index.add(edges.back().first, {pc::ContentKey::Kind::Origin, edges.back().second});
        }
    std::map<std::string, StanceLabel> seeds;
    ps::StanceLabeling seed_labeling;
    for (std::uint64_t u = 0; u < users; ++u) {
      const double r = rng.uniform();
      if (r >= 0.16) continue;
      const auto l = r < 0.08 ? StanceLabel::Pro : StanceLabel::Anti;
      seeds["u" + std::to_string(u)] = l;
      seed_labeling.labels["u" + std::to_string(u)] = {l, {ps::Provenance::Kind::Seed, 0}};
    }
    const auto threshold = thresholds[seed % 4];
    ps::PropagationConfig cfg;
    cfg.threshold = threshold;
    const auto got = ps::propagate_to_fixpoint(index, seed_labeling, cfg);
    std::map<std::string, StanceLabel> mine;
    for (const auto& [u, e] : got.labeling.labels) mine[u] = e.label;
    const auto expected = brute_force(edges, seeds, threshold);
    agree += mine == expected;
    labeled += mine.size() - seeds.size();
  }
  const double t = seconds_since(t0);
  report(1, "propagation oracle equivalence", agree == 200 && t < 30,
         std::to_string(agree) + "/200 graphs exact, " + std::to_string(labeled) + " propagated labels, " + fmt(t) + " s");
}

// --- 2: community recovery -------------------------------------------------------

void criterion_recovery() {
  bool ok = true;
  double worst_share = 1.0, worst_time = 0.0;
  std::uint64_t wrong = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto t0 = Clock::now();
    sy::NetworkParams p;
    p.users_per_camp = 500;
    p.seeds_per_camp = 20;
    p.retweets_per_user = 12;
    p.cross_camp_retweet_prob = 0.05;
    p.rng_seed = seed;
    const auto net = sy::gen_polarized_network(p);
    // Through the archive format and ingest, as the CLI does.
    std::istringstream in(sy::archive_jsonl(net.tweets, net.users));
    pc::Corpus corpus;
    std::map<std::string, pc::UserRecord> users;
    pc::ingest_stream(in, {}, corpus, users);
    std::vector<pc::UserRecord> user_list;
    for (const auto& [id, u] : users) user_list.push_back(u);
    const auto seeds = ps::apply_seed_rules(user_list, ps::default_seed_rules());
    ps::PropagationConfig cfg;
    cfg.threshold = 10;
    const auto result = ps::propagate_to_fixpoint(pc::build_retweet_index(corpus.tweets), seeds.labeling, cfg);
    std::size_t gold = 0, correct = 0, bad = 0;
    for (const auto& [u, l] : net.gold) {
      if (!l) continue;
      ++gold;
      const auto got = result.labeling.label_of(u);
      if (got) (*got == *l ? correct : bad) += 1;
    }
    const double t = seconds_since(t0);
    const double share = static_cast<double>(correct) / static_cast<double>(gold);
    worst_share = std::min(worst_share, share);
    worst_time = std::max(worst_time, t);
    wrong += bad;
    ok = ok && share >= 0.95 && bad == 0 && t < 10;
  }
  report(2, "community recovery", ok,
         "min labeled share " + fmt(worst_share, 4) + ", wrong-camp " + std::to_string(wrong) + ", max " +
             fmt(worst_time) + " s/seed over 10 seeds");
}

// --- 3: stemmer ------------------------------------------------------------------

void criterion_stemmer() {
  std::ifstream in(std::string(POLAREMBED_TEST_DATA) + "/stemmer_golden.tsv");
  std::string line;
  std::size_t total = 0, agree = 0;
  bool root_example = false;
  while (std::getline(in, line)) {
    const auto tab = line.find('\t');
    if (tab == std::string::npos) continue;
    const auto word = line.substr(0, tab), expected = line.substr(tab + 1);
    ++total;
    const auto got = polarembed::textprep::stem(word);
    agree += got == expected;
    if (word == "okullarımızdan") root_example = got == "okul";
  }
  const double share = total ? static_cast<double>(agree) / static_cast<double>(total) : 0.0;
  report(3, "stemmer conformance", total == 1000 && share >= 0.99 && root_example,
         std::to_string(agree) + "/" + std::to_string(total) + " exact, okullarımızdan->okul " +
             (root_example ? "ok" : "wrong"));
}

// --- 4: gradient check -----------------------------------------------------------

void criterion_gradient() {
  const auto t0 = Clock::now();
  polarembed::SplitMix64 rng(4);
  double worst = 0.0;
  for (int point = 0; point < 100; ++point) {
    const std::size_t dim = 1 + rng.below(8);
    const std::size_t outs = 1 + rng.below(6);  // one positive, the rest negatives
    std::vector<double> h(dim);
    std::vector<std::vector<double>> u(outs, std::vector<double>(dim));
    for (auto& x : h) x = rng.uniform() * 2 - 1;
    for (auto& row : u)
      for (auto& x : row) x = rng.uniform() * 2 - 1;
    auto eval = [&](std::vector<double>& gh, std::vector<double>& gu) {
      std::vector<const double*> rows;
      for (auto& row : u) rows.push_back(row.data());
      return pe::ns_log_likelihood<double>(h, rows, gh, gu);
    };
    std::vector<double> gh(dim), gu(outs * dim), sh(dim), su(outs * dim);
    eval(gh, gu);
    auto check = [&](double& param, double analytic) {
      const double eps = 1e-6, saved = param;
      param = saved + eps;
      const double up = eval(sh, su);
      param = saved - eps;
      const double down = eval(sh, su);
      param = saved;
      const double numeric = (up - down) / (2 * eps);
      worst = std::max(worst, std::fabs(numeric - analytic) / std::max({std::fabs(numeric), std::fabs(analytic), 1e-3}));
    };
    for (std::size_t i = 0; i < dim; ++i) check(h[i], gh[i]);
    for (std::size_t j = 0; j < outs; ++j)
      for (std::size_t i = 0; i < dim; ++i) check(u[j][i], gu[j * dim + i]);
  }
  const double t = seconds_since(t0);
  report(4, "gradient check", worst < 1e-4 && t < 5,
         "max relative error " + fmt(worst, 2, true) + " at 100 points, " + fmt(t, 3) + " s");
}

// --- 5 and 8: planted polarity, one training run per camp and seed ----------------

std::string misspell(const std::string& word) {
  std::string out = word;
  const std::size_t mid = out.size() / 2;
  out[mid] = out[mid] == 'e' ? 'a' : 'e';
  return out;
}

void criteria_planted() {
  const auto t0 = Clock::now();
  int polarity_ok = 0, oov_ok = 0;
  std::ostringstream detail;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    sy::CorpusParams p;
    p.vocab_size = 2000;
    p.positive_ratio_camp_a = 0.9;
    p.rng_seed = seed;
    const auto c = sy::gen_polarized_corpus(p);
    const auto rec = sy::corpus_records(c, p);

    // Archive JSONL -> ingest -> split by author label -> default pipeline.
    std::istringstream in(sy::archive_jsonl(rec.tweets, rec.users));
    pc::Corpus corpus;
    std::map<std::string, pc::UserRecord> users;
    pc::ingest_stream(in, {"tr"}, corpus, users);
    pe::TokenLines pro, anti;
    for (const auto& t : corpus.tweets) {
      const auto it = rec.gold.find(t.author_id);
      if (it == rec.gold.end() || !it->second || t.origin_id) continue;
      auto toks = polarembed::textprep::preprocess_tweet(t.text);
      if (!toks.empty()) (*it->second == StanceLabel::Pro ? pro : anti).push_back(std::move(toks));
    }

    const auto lexicon = pp::parse_lexicon(sy::lexicon_tsv(c));
    pp::EntitySpec entity{c.entity, {c.entity}, {"a", "b"}};
    pe::TrainConfig tc;  // dim 100, lr 0.05, epochs 5, window 5, negatives 5
    tc.seed = 42;
    pe::SubwordConfig sc;
    std::optional<double> med[2][2];  // [camp][positive, negative]
    int oov_hits = 0;
    for (int camp = 0; camp < 2; ++camp) {
      const auto& lines = camp == 0 ? pro : anti;
      const auto trained = pe::train(lines, pe::build_vocab(lines, 5), tc, sc);
      const pp::NamedModel named{camp == 0 ? "a" : "b", &trained.model};
      const auto rep = pp::compare_spaces(entity, std::span(&named, 1), lexicon, 2000, 1);
      med[camp][0] = rep.spaces[0].median_positive;
      med[camp][1] = rep.spaces[0].median_negative;
      if (camp == 0) {
        for (const auto& nn : pe::nearest_neighbors(trained.model, misspell(c.entity), 10))
          oov_hits += nn.term == c.entity;
      }
    }
    const bool a_ok = med[0][0] && med[0][1] && *med[0][0] < *med[0][1];
    const bool b_ok = med[1][0] && med[1][1] && *med[1][1] < *med[1][0];
    polarity_ok += a_ok && b_ok;
    oov_ok += oov_hits > 0;
  }
  const double t = seconds_since(t0);
  report(5, "planted polarity recovery", polarity_ok >= 9 && t < 300,
         std::to_string(polarity_ok) + "/10 seeds ordered in both camps, " + fmt(t) + " s total");
  report(8, "subword OOV robustness", oov_ok >= 8,
         std::to_string(oov_ok) + "/10 seeds find the entity within top 10 of a 1-edit misspelling");
}

// --- 6: levenshtein --------------------------------------------------------------

std::size_t lev_oracle(const std::u32string& a, const std::u32string& b) {
  std::vector<std::vector<std::size_t>> memo(a.size() + 1, std::vector<std::size_t>(b.size() + 1, SIZE_MAX));
  std::function<std::size_t(std::size_t, std::size_t)> d = [&](std::size_t i, std::size_t j) -> std::size_t {
    if (i == 0) return j;
    if (j == 0) return i;
    auto& m = memo[i][j];
    if (m != SIZE_MAX) return m;
    m = std::min({d(i - 1, j) + 1, d(i, j - 1) + 1, d(i - 1, j - 1) + (a[i - 1] == b[j - 1] ? 0 : 1)});
    return m;
  };
  return d(a.size(), b.size());
}

void criterion_levenshtein() {
  std::vector<std::u32string> strings{U""};
  for (std::size_t begin = 0, len = 1; len <= 6; ++len) {
    const std::size_t end = strings.size();
    for (std::size_t i = begin; i < end; ++i)
      for (char32_t c : {U'x', U'y', U'ş'}) strings.push_back(strings[i] + c);
    begin = end;
  }
  std::size_t pairs = 0, mismatches = 0;
  for (const auto& a : strings)
    for (const auto& b : strings) {
      ++pairs;
      mismatches += pp::levenshtein(a, b) != lev_oracle(a, b);
    }
  polarembed::SplitMix64 rng(6);
  const std::u32string alphabet = U"abcçğıöşü";
  auto word = [&] {
    std::u32string s;
    for (auto n = rng.below(10); n > 0; --n) s += alphabet[rng.below(alphabet.size())];
    return s;
  };
  std::size_t violations = 0;
  for (int i = 0; i < 10'000; ++i) {
    const auto a = word(), b = word(), c = word();
    const auto ab = pp::levenshtein(a, b);
    violations += ab != pp::levenshtein(b, a);
    violations += (ab == 0) != (a == b);
    violations += pp::levenshtein(a, c) > ab + pp::levenshtein(b, c);
    violations += pp::levenshtein(polarembed::utf8_encode(a), polarembed::utf8_encode(b)) != ab;
  }
  report(6, "levenshtein oracle", mismatches == 0 && violations == 0,
         std::to_string(pairs) + " exhaustive pairs, " + std::to_string(mismatches) + " mismatches; " +
             "10000 random triples, " + std::to_string(violations) + " axiom violations");
}

// --- 7: determinism through the CLI ----------------------------------------------

int cli(const fs::path& ws, std::vector<std::string> args) {
  args.insert(args.begin(), {"polarembed", "-w", ws.string(), "--seed", "42", "--workers", "1"});
  std::ostringstream out, err;
  const int code = polarembed::cli::run(args, out, err);
  if (code != 0) std::cerr << "  " << ws.filename().string() << " " << args[7] << ": " << err.str();
  return code;
}

std::map<std::string, std::string> full_run(const fs::path& root) {
  fs::remove_all(root);
  const auto net = root / "network", text = root / "corpus";
  fs::create_directories(net);
  fs::create_directories(text);
  std::map<std::string, std::string> artifacts;
  if (cli(net, {"synth-net"}) || cli(net, {"ingest", "-i", (net / "synth/network/tweets.jsonl").string()}) ||
      cli(net, {"seed-label"}) || cli(net, {"propagate"}) ||
      cli(net, {"eval", "--gold", (net / "synth/network/gold.tsv").string()}))
    return {};
  const std::vector<std::string> train = {"train", "--buckets", "100000"};
  auto with = [&](std::vector<std::string> extra) {
    auto a = train;
    a.insert(a.end(), extra.begin(), extra.end());
    return a;
  };
  if (cli(text, {"synth-corpus"}) || cli(text, {"ingest", "-i", (text / "synth/corpus/tweets.jsonl").string()}) ||
      cli(text, {"preprocess", "--labels", (text / "synth/corpus/gold.tsv").string()}) ||
      cli(text, with({"--group", "pro"})) || cli(text, with({"--group", "anti"})) ||
      cli(text, {"compare", "--entities", (text / "synth/corpus/entities.toml").string(), "--lexicon",
                 (text / "synth/corpus/lexicon.tsv").string()}))
    return {};
  for (const auto& [ws, rels] :
       std::vector<std::pair<fs::path, std::vector<std::string>>>{
           {net, {"labels/labels.tsv", "labels/propagation.json", "reports/eval.json"}},
           {text,
            {"text/pro.txt", "text/anti.txt", "models/pro.bin", "models/anti.bin", "models/pro.train.jsonl",
             "models/anti.train.jsonl", "reports/report.json", "reports/report.md"}}})
    for (const auto& rel : rels) artifacts[ws.filename().string() + "/" + rel] = slurp(ws / rel);
  return artifacts;
}

void criterion_determinism() {
  const auto t0 = Clock::now();
  const auto root = fs::path(POLAREMBED_TEST_TMP) / "acceptance";
  const auto a = full_run(root / "run1");
  const auto b = full_run(root / "run2");
  std::size_t identical = 0;
  std::string differing;
  for (const auto& [name, bytes] : a) {
    const auto it = b.find(name);
    if (it != b.end() && it->second == bytes && !bytes.empty()) {
      ++identical;
    } else {
      differing += " " + name;
    }
  }
  fs::remove_all(root);
  const bool ok = !a.empty() && a.size() == b.size() && identical == a.size();
  report(7, "determinism", ok,
         a.empty() ? std::string("pipeline failed")
                   : std::to_string(identical) + "/" + std::to_string(a.size()) + " artifacts byte-identical" +
                         (differing.empty() ? "" : " (differs:" + differing + ")") + ", " + fmt(seconds_since(t0)) + " s");
}

// --- 9: golden report files ------------------------------------------------------

pp::MatchGroup group(std::string label, pp::GroupKind kind, pp::Polarity pol, std::vector<pp::Member> members) {
  pp::MatchGroup g;
  g.label = std::move(label);
  g.kind = kind;
  g.polarity = pol;
  g.members = std::move(members);
  g.occurrence_count = static_cast<std::uint32_t>(g.members.size());
  g.best_rank = g.members.front().rank;
  for (const auto& m : g.members) g.best_rank = std::min(g.best_rank, m.rank);
  return g;
}

void criterion_golden() {
  using K = pp::GroupKind;
  using P = pp::Polarity;
  pp::MatchReport r;
  r.entity = "erdogan";
  pp::SpaceSection pro{"td_pro", 2000, {}, 35.0, 490.0};
  pro.groups = {group("erdogan", K::Subsumption, P::Positive, {{"liderimerdogan", 12}, {"erdoganim", 40}, {"reiserdogan", 77}}),
                group("guzel", K::Sentiment, P::Positive, {{"guzel", 35}}),
                group("diktator", K::Sentiment, P::Negative,
                      {{"diktator", 490}, {"diktatr", 530}, {"diktatorr", 704}, {"dktator", 900}, {"diktato", 1100},
                       {"diktatoru", 1500}})};
  pp::SpaceSection anti{"td_anti", 2000, {}, 1200.0, 221.5};
  anti.groups = {group("diktator", K::Sentiment, P::Negative, {{"diktator", 143}, {"diktatr", 880}}),
                 group("kotu", K::Sentiment, P::Negative, {{"kotu", 300}}),
                 group("iyi", K::Sentiment, P::Positive, {{"iyi", 1200}})};
  pp::SpaceSection empty{"empty", 0, {}, std::nullopt, std::nullopt};
  r.spaces = {pro, anti, empty};
  const auto dir = fs::path(POLAREMBED_TEST_DATA) / "golden";
  const bool md = pp::render_report(r, pp::ReportFormat::Markdown) == slurp(dir / "report_erdogan.md");
  const bool js = pp::render_report(r, pp::ReportFormat::Json) == slurp(dir / "report_erdogan.json");
  report(9, "report format golden", md && js,
         std::string("markdown ") + (md ? "identical" : "differs") + ", json " + (js ? "identical" : "differs"));
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<void()>>> steps = {
      {"1", criterion_oracle},     {"2", criterion_recovery},   {"3", criterion_stemmer},
      {"4", criterion_gradient},   {"5,8", criteria_planted},   {"6", criterion_levenshtein},
      {"7", criterion_determinism}, {"9", criterion_golden}};
  for (const auto& [id, step] : steps) {
    try {
      step();
    } catch (const std::exception& e) {
      std::cout << "FAIL [" << id << "] raised: " << e.what() << std::endl;
      ++failures;
    }
  }
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
  return failures == 0 ? 0 : 1;
}
