// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero if any fails. Tolerances are fixed here, not configurable.

#include <sys/wait.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "k2t/corpus/jsonl.hpp"
#include "k2t/decoding/decoders.hpp"
#include "k2t/decoding/toy_model.hpp"
#include "k2t/embedding/provider.hpp"
#include "k2t/error.hpp"
#include "k2t/extraction/extractor.hpp"
#include "k2t/extraction/scoring.hpp"
#include "k2t/extraction/textrank.hpp"
#include "k2t/nlg/metrics.hpp"
#include "k2t/pipeline/build.hpp"
#include "k2t/pipeline/split.hpp"
#include "k2t/pipeline/stats.hpp"
#include "k2t/ranking/agreement.hpp"
#include "k2t/ranking/metrics.hpp"
#include "k2t/rng.hpp"
#include "k2t/text.hpp"
#include "support/models.hpp"

namespace {

using namespace k2t;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

constexpr double kMetricTolerance = 1e-6;
constexpr double kMetricSuiteSeconds = 5.0;
constexpr double kTextRankTolerance = 1e-6;
constexpr double kSuiteSeconds = 120.0;

double seconds_since(Clock::time_point t) {
  return std::chrono::duration<double>(Clock::now() - t).count();
}

struct Outcome {
  bool pass = true;
  std::string detail;
  void fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
};

// ---------------------------------------------------------------------------
// Metric oracle suite

struct MetricCase {
  std::string name;
  std::function<double()> compute;
  double expected;
};

ranking::RankedPrediction ranked(std::vector<std::string> ks) { return {"q", std::move(ks)}; }
ranking::GoldKeywords gold(std::vector<std::string> ks) { return {"q", std::move(ks)}; }

template <class F>
std::function<double()> rank_metric(F f, std::vector<std::string> pred, std::vector<std::string> g) {
  return [=] {
    const std::vector<ranking::RankedPrediction> p{ranked(pred)};
    const std::vector<ranking::GoldKeywords> q{gold(g)};
    return f(p, q);
  };
}

std::function<double()> batch_metric(double (*f)(std::span<const nlg::TextPair>), std::string ref,
                                     std::string cand) {
  return [=] {
    const std::vector<nlg::TextPair> b{{ref, cand}};
    return f(b);
  };
}

std::vector<embedding::WordEmbedding> vecs(std::vector<std::vector<double>> vs) {
  std::vector<embedding::WordEmbedding> out;
  for (std::size_t i = 0; i < vs.size(); ++i) out.push_back({"w" + std::to_string(i), vs[i], i});
  return out;
}

Outcome metric_oracles() {
  const auto mrr = [](auto p, auto g) { return ranking::mrr(p, g); };
  const auto map = [](auto p, auto g) { return ranking::mean_average_precision(p, g); };
  const auto ndcg = [](auto p, auto g) { return ranking::ndcg(p, g); };
  const double inv_log3 = 1.0 / std::log2(3.0);
  const auto em = [](std::vector<KeywordSet> p, std::vector<KeywordSet> g) {
    return [=] { return ranking::exact_match_rate(p, g); };
  };
  const auto kappa = [](std::vector<std::vector<std::size_t>> counts) {
    return [=] { return ranking::fleiss_kappa({counts}); };
  };
  const auto bleu_n = [](std::string ref, std::string cand, int n) {
    return [=] {
      const std::vector<nlg::TextPair> b{{ref, cand}};
      return nlg::bleu(b, n);
    };
  };
  const auto bert = [](std::vector<std::vector<double>> r, std::vector<std::vector<double>> c,
                       int which) {
    return [=] {
      const auto s = nlg::bertscore(vecs(r), vecs(c));
      return which == 0 ? s.precision : which == 1 ? s.recall : s.f1;
    };
  };

  const std::vector<MetricCase> cases{
      {"mrr first hit", rank_metric(mrr, {"a", "b"}, {"a"}), 1.0},
      {"mrr second rank", rank_metric(mrr, {"b", "a", "c"}, {"a"}), 0.5},
      {"mrr no hit", rank_metric(mrr, {"b", "c"}, {"a"}), 0.0},
      {"map perfect", rank_metric(map, {"a", "b"}, {"a", "b"}), 1.0},
      {"map a,c,b", rank_metric(map, {"a", "c", "b"}, {"a", "b"}), (1.0 + 2.0 / 3.0) / 2.0},
      {"map no hit", rank_metric(map, {"b"}, {"a"}), 0.0},
      {"ndcg perfect", rank_metric(ndcg, {"a", "b"}, {"b", "a"}), 1.0},
      {"ndcg a,c,b", rank_metric(ndcg, {"a", "c", "b"}, {"a", "b"}), 1.5 / (1.0 + inv_log3)},
      {"ndcg no hit", rank_metric(ndcg, {"x", "y"}, {"a"}), 0.0},
      {"exact match all", em({{"a", "b"}, {"c"}}, {{"b", "a"}, {"c"}}), 1.0},
      {"exact match 1 of 4", em({{"a"}, {"b"}, {"c"}, {"d"}}, {{"a"}, {"x"}, {"y"}, {"z"}}), 0.25},
      {"kappa full agreement", kappa({{3, 0}, {0, 3}, {3, 0}}), 1.0},
      {"kappa 2x2", kappa({{2, 0}, {0, 2}}), 1.0},
      {"kappa chance level", kappa({{3, 0}, {2, 1}, {1, 2}}), 0.0},
      {"kappa 10x14x5 table",
       kappa({{0, 0, 0, 0, 14}, {0, 2, 6, 4, 2}, {0, 0, 3, 5, 6}, {0, 3, 9, 2, 0},
              {2, 2, 8, 1, 1}, {7, 7, 0, 0, 0}, {3, 2, 6, 3, 0}, {2, 5, 3, 2, 2},
              {6, 5, 2, 1, 0}, {0, 2, 2, 3, 7}}),
       4211.0 / 20059.0},
      {"bleu identity", bleu_n("a b c d e", "a b c d e", 4), 1.0},
      {"bleu-1 a b d / a b c", bleu_n("a b d", "a b c", 1), 2.0 / 3.0},
      {"bleu disjoint", bleu_n("a b c", "x y z", 1), 0.0},
      {"bleu-1 brevity", bleu_n("a b c d", "a b", 1), std::exp(1.0 - 4.0 / 2.0)},
      {"rouge-1 identity", batch_metric(nlg::rouge1, "a b c", "a b c"), 1.0},
      {"rouge-l identity", batch_metric(nlg::rougeL, "a b c", "a b c"), 1.0},
      {"rouge-l a b c d / a c d", batch_metric(nlg::rougeL, "a c d", "a b c d"), 6.0 / 7.0},
      {"rouge-1 a b c d / a c d", batch_metric(nlg::rouge1, "a c d", "a b c d"), 6.0 / 7.0},
      {"wer identity", batch_metric(nlg::wer, "a b c", "a b c"), 0.0},
      {"wer sub+ins", batch_metric(nlg::wer, "a b c d e", "a x c d e f"), 0.4},
      {"wer empty candidate", batch_metric(nlg::wer, "a b c d", ""), 1.0},
      {"wil identity", batch_metric(nlg::wil, "a b c", "a b c"), 0.0},
      {"wil C=2 of 4", batch_metric(nlg::wil, "a b c d", "a b x y"), 0.75},
      {"wil no match", batch_metric(nlg::wil, "a b", "c d"), 1.0},
      {"bertscore identity f1", bert({{1, 2}, {3, 1}}, {{1, 2}, {3, 1}}, 2), 1.0},
      {"bertscore orthogonal f1", bert({{1, 0}}, {{0, 1}}, 2), 0.0},
      {"bertscore precision", bert({{1, 0}, {0, 1}}, {{1, 0}}, 0), 1.0},
      {"bertscore recall", bert({{1, 0}, {0, 1}}, {{1, 0}}, 1), 0.5},
      {"bertscore f1", bert({{1, 0}, {0, 1}}, {{1, 0}}, 2), 2.0 / 3.0},
  };

  Outcome o;
  const auto start = Clock::now();
  std::size_t ok = 0;
  for (const auto& c : cases) {
    double got = std::nan("");
    try {
      got = c.compute();
    } catch (const std::exception& e) {
      o.fail(c.name + " threw " + e.what());
      continue;
    }
    if (std::abs(got - c.expected) <= kMetricTolerance) {
      ++ok;
    } else {
      std::ostringstream os;
      os << c.name << ": got " << got << ", expected " << c.expected;
      o.fail(os.str());
    }
  }
  const double secs = seconds_since(start);
  if (cases.size() < 25) o.fail("fewer than 25 cases");
  if (secs >= kMetricSuiteSeconds) o.fail("took " + std::to_string(secs) + " s");
  if (o.pass) {
    std::ostringstream os;
    os << ok << "/" << cases.size() << " cases within " << kMetricTolerance << " in " << secs << " s";
    o.detail = os.str();
  }
  return o;
}

// ---------------------------------------------------------------------------
// Extraction law

std::string random_bangla_word(Rng& rng) {
  std::string w;
  const auto len = 1 + rng.below(6);
  for (std::uint64_t i = 0; i < len; ++i) {
    const char32_t cp = 0x0995 + static_cast<char32_t>(rng.below(20));  // ক..ন
    w += static_cast<char>(0xE0 | (cp >> 12));
    w += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    w += static_cast<char>(0x80 | (cp & 0x3F));
  }
  return w;
}

// round_half_up(n * fraction) in integer arithmetic, fraction in tenths.
std::size_t expected_count(std::size_t n) {
  const std::size_t tenths = n >= 10 ? 6 : n >= 5 ? 7 : 8;
  return std::max<std::size_t>(1, (2 * n * tenths + 10) / 20);
}

Outcome extraction_law() {
  Outcome o;
  Rng rng(2024);
  embedding::TestEmbeddingProvider provider(11, 32);
  std::size_t checked = 0;
  for (int d = 0; d < 1000; ++d) {
    const auto n = 1 + rng.below(40);
    std::set<std::string> seen;
    std::string text;
    while (seen.size() < n) {
      const auto w = random_bangla_word(rng);
      if (!seen.insert(w).second) continue;
      text += (text.empty() ? "" : " ") + w;
    }
    const Document doc{"d" + std::to_string(d), text};
    const auto words = text::split_words(text);
    for (auto kind : {extraction::ExtractorKind::MeanCosine, extraction::ExtractorKind::TextRank,
                      extraction::ExtractorKind::Yake}) {
      const auto ks = extraction::extract(doc, kind, &provider);
      ++checked;
      if (ks.size() != expected_count(n)) {
        o.fail(doc.id + " (" + std::string(extraction::to_string(kind)) + "): " +
               std::to_string(ks.size()) + " keywords for " + std::to_string(n) + " words");
      }
      for (const auto& k : ks) {
        if (std::find(words.begin(), words.end(), k) == words.end()) {
          o.fail(doc.id + ": keyword '" + k + "' is not a word of the text");
        }
      }
    }
  }
  if (o.pass) o.detail = std::to_string(checked) + " extractions over 1000 documents, 0 violations";
  return o;
}

// ---------------------------------------------------------------------------
// Scale invariance

std::vector<std::size_t> argsort_desc(const std::vector<extraction::ScoredWord>& s) {
  std::vector<std::size_t> idx(s.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::stable_sort(idx.begin(), idx.end(), [&](auto a, auto b) { return s[a].score > s[b].score; });
  return idx;
}

Outcome scale_invariance() {
  Outcome o;
  Rng rng(77);
  for (int t = 0; t < 100; ++t) {
    const auto n = 2 + rng.below(30);
    std::vector<std::vector<double>> vs(n, std::vector<double>(8));
    for (auto& v : vs)
      for (auto& x : v) x = rng.uniform() * 2 - 1 + 0.3;
    auto words = vecs(vs);
    const auto base = argsort_desc(extraction::score_mean_cosine(words));
    const double scale = std::exp(rng.uniform() * 9 - 4.5);  // about 0.01 .. 90
    for (auto& w : words)
      for (auto& x : w.vector) x *= scale;
    if (argsort_desc(extraction::score_mean_cosine(words)) != base) {
      o.fail("trial " + std::to_string(t) + ": ranking changed under scale " + std::to_string(scale));
    }
  }
  if (o.pass) o.detail = "100 trials, identical rankings";
  return o;
}

// ---------------------------------------------------------------------------
// TextRank

std::vector<std::vector<double>> transition(const std::vector<std::vector<double>>& vs) {
  const std::size_t n = vs.size();
  std::vector<std::vector<double>> m(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    double row = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      double dot = 0, a = 0, b = 0;
      for (std::size_t k = 0; k < vs[i].size(); ++k) {
        dot += vs[i][k] * vs[j][k];
        a += vs[i][k] * vs[i][k];
        b += vs[j][k] * vs[j][k];
      }
      m[i][j] = std::max(0.0, dot / std::sqrt(a * b));
      row += m[i][j];
    }
    for (std::size_t j = 0; j < n; ++j) m[i][j] = row > 0 ? m[i][j] / row : 1.0 / n;
  }
  return m;
}

std::vector<double> step(const std::vector<std::vector<double>>& m, const std::vector<double>& r,
                         double d) {
  const std::size_t n = r.size();
  std::vector<double> next(n, (1 - d) / n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) next[j] += d * r[i] * m[i][j];
  return next;
}

// Power iteration run to machine precision.
std::vector<double> stationary(const std::vector<std::vector<double>>& m, double d) {
  std::vector<double> r(m.size(), 1.0 / m.size());
  for (int it = 0; it < 5000; ++it) r = step(m, r, d);
  return r;
}

Outcome textrank() {
  Outcome o;
  constexpr double d = 0.85;
  double worst_residual = 0, worst_oracle = 0, worst_uniform = 0;

  // Symmetric graphs: regular polygons and identical vectors. A square is
  // left out: cos(pi/2) rounds to 6e-17 and breaks the symmetry.
  for (std::size_t n = 2; n <= 12; ++n) {
    if (n == 4) continue;
    std::vector<std::vector<double>> polygon, same;
    for (std::size_t k = 0; k < n; ++k) {
      const double a = std::numbers::pi * 2 * static_cast<double>(k) / static_cast<double>(n);
      polygon.push_back({std::cos(a), std::sin(a)});
      same.push_back({0.3, -1.2, 2.0});
    }
    for (const auto* g : {&polygon, &same}) {
      const auto r = extraction::score_textrank(vecs(*g));
      for (double x : r.ranks) worst_uniform = std::max(worst_uniform, std::abs(x - 1.0 / n));
    }
  }

  Rng rng(99);
  int graphs = 0;
  while (graphs < 50) {
    const auto n = 2 + rng.below(9);
    std::vector<std::vector<double>> vs(n, std::vector<double>(4));
    for (auto& v : vs)
      for (auto& x : v) x = rng.uniform() * 2 - 1;
    const auto r = extraction::score_textrank(vecs(vs));
    if (r.uniform_fallback) continue;
    ++graphs;
    const auto m = transition(vs);
    const auto next = step(m, r.ranks, d);
    const auto exact = stationary(m, d);
    for (std::size_t i = 0; i < n; ++i) {
      worst_residual = std::max(worst_residual, std::abs(next[i] - r.ranks[i]));
      worst_oracle = std::max(worst_oracle, std::abs(exact[i] - r.ranks[i]));
    }
  }
  std::ostringstream os;
  os << "residual " << worst_residual << ", symmetric deviation " << worst_uniform
     << ", oracle deviation " << worst_oracle << " over 50 random graphs";
  o.detail = os.str();
  if (worst_residual >= kTextRankTolerance || worst_uniform >= kTextRankTolerance ||
      worst_oracle >= kTextRankTolerance) {
    o.pass = false;
  }
  return o;
}

// ---------------------------------------------------------------------------
// Decoding equivalences

Outcome decoding_equivalences() {
  using namespace decoding;
  Outcome o;
  Rng rng(4242);
  for (int t = 0; t < 100; ++t) {
    const auto corpus = testing::random_corpus(rng, 2 + rng.below(8), 1 + rng.below(8), 10);
    ToyBigramModel m(corpus, 0.05 + rng.uniform(), rng.uniform() * 3);
    const KeywordSet kw{"w" + std::to_string(rng.below(2))};
    DecoderConfig c;
    c.max_length = 1 + rng.below(16);
    c.beam_width = 1;
    c.repetition_penalty = 1.0 + rng.uniform() * 2;
    const auto g = decode_greedy(m, kw, c);
    const auto b = decode_beam(m, kw, c);
    c.strategy = Strategy::TopK;
    c.top_k = 1;
    c.seed = static_cast<std::uint64_t>(t);
    const auto s = decode_sample(m, kw, c);
    if (g.ids != b.ids || g.ids != s.ids) o.fail("greedy/beam(1)/top-k(1) differ on model " + std::to_string(t));
  }

  int exhaustive = 0;
  for (int t = 0; t < 100; ++t) {
    const auto m = testing::random_table_model(rng, 1 + rng.below(2));  // vocab 4 or 5
    DecoderConfig c;
    c.beam_width = 10000;
    c.max_length = 1 + rng.below(5);
    c.length_penalty = rng.uniform() * 2;
    c.repetition_penalty = 1.0 + rng.uniform();
    c.temperature = 0.5 + rng.uniform();
    if (decode_beam(m, {}, c).ids != testing::exhaustive_best(m, {}, c)) {
      o.fail("exhaustive beam differs from brute force on model " + std::to_string(t));
    }
    ++exhaustive;
  }

  // top-p = 1 keeps the whole distribution.
  const auto corpus = testing::random_corpus(rng, 5, 6, 6);
  ToyBigramModel m(corpus, 0.5, 0.0);
  DecoderConfig c;
  c.strategy = Strategy::TopP;
  c.top_p = 1.0;
  c.max_length = 1;
  constexpr int draws = 10000;
  std::map<TokenId, int> counts;
  for (int s = 0; s < draws; ++s) {
    c.seed = static_cast<std::uint64_t>(s) * 7919 + 1;
    ++counts[decode_sample(m, {}, c).ids.at(0)];
  }
  double worst_z = 0;
  const auto& v = m.vocabulary();
  for (std::size_t t = 0; t < v.size(); ++t) {
    const auto id = static_cast<TokenId>(t);
    const double p = m.probability(v.bos_id(), id);
    const double sigma = std::sqrt(draws * p * (1 - p));
    const double dev = std::abs(counts[id] - draws * p);
    if (sigma > 0) worst_z = std::max(worst_z, dev / sigma);
    if (dev > 3 * sigma + 1e-9) o.fail("token " + v.token(id) + " sampled outside 3 sigma");
  }
  if (o.pass) {
    std::ostringstream os;
    os << "100 greedy/beam(1)/top-k(1) models token-exact; " << exhaustive
       << " exhaustive beams equal brute force; sampling max |z| = " << worst_z << " over 10^4 draws";
    o.detail = os.str();
  }
  return o;
}

// ---------------------------------------------------------------------------
// Constrained decoding

Outcome constrained() {
  using namespace decoding;
  Outcome o;
  Rng rng(5150);
  int successes = 0, unsatisfiable_feasible = 0, infeasible_raised = 0;
  for (int t = 0; t < 100; ++t) {
    const auto corpus = testing::random_corpus(rng, 3 + rng.below(6), 2 + rng.below(6), 8);
    ToyBigramModel m(corpus, 0.1 + rng.uniform(), rng.uniform());
    const auto& tokens = m.vocabulary().tokens();
    std::vector<std::string> forced;
    const auto want = 1 + rng.below(3);
    while (forced.size() < std::min<std::size_t>(want, tokens.size() - 3)) {
      const auto& w = tokens[3 + rng.below(tokens.size() - 3)];
      if (std::find(forced.begin(), forced.end(), w) == forced.end()) forced.push_back(w);
    }
    DecoderConfig c;
    c.max_length = 24;
    c.beam_width = 1 + rng.below(4);
    try {
      const auto r = decode_constrained(m, {}, KeywordSet(forced), c);
      for (const auto& f : forced) {
        if (r.text.find(f) == std::string::npos) o.fail("model " + std::to_string(t) + ": '" + f + "' missing");
      }
      ++successes;
    } catch (const ConstraintUnsatisfiable&) {
      ++unsatisfiable_feasible;
    }

    // A phrase needing more tokens than max_length can never be produced.
    c.max_length = 1 + rng.below(3);
    std::string phrase;
    for (std::size_t i = 0; i <= c.max_length; ++i) {
      phrase += (i ? " " : "") + tokens[3 + rng.below(tokens.size() - 3)];
    }
    try {
      decode_constrained(m, {}, KeywordSet{phrase}, c);
      o.fail("model " + std::to_string(t) + ": infeasible phrase '" + phrase + "' did not raise");
    } catch (const ConstraintUnsatisfiable&) {
      ++infeasible_raised;
    }
  }
  if (o.pass) {
    o.detail = std::to_string(successes) + " outputs contain every forced keyword (" +
               std::to_string(unsatisfiable_feasible) + " reported unsatisfiable); " +
               std::to_string(infeasible_raised) + "/100 infeasible cases raised";
  }
  return o;
}

// ---------------------------------------------------------------------------
// Pipeline

class FlakyProvider final : public embedding::EmbeddingProvider {
 public:
  explicit FlakyProvider(int ok_calls) : inner_(1, 32), ok_calls_(ok_calls) {}
  std::size_t dimension() const override { return inner_.dimension(); }
  std::size_t max_tokens() const override { return inner_.max_tokens(); }
  embedding::EmbeddingOutput embed(std::string_view text) const override {
    if (calls_.fetch_add(1) >= ok_calls_) throw ProviderUnavailable("connection refused", 1);
    return inner_.embed(text);
  }

 private:
  embedding::TestEmbeddingProvider inner_;
  int ok_calls_;
  mutable std::atomic<int> calls_{0};
};

std::string snapshot(const fs::path& dir) {
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir)) files.push_back(e.path());
  std::sort(files.begin(), files.end());
  std::string all;
  for (const auto& f : files) all += f.filename().string() + "\n" + testing::read_file(f.string());
  return all;
}

Outcome pipeline_checks(const fs::path& work) {
  Outcome o;
  std::ifstream in(testing::fixture_path("corpus26.jsonl"));
  const auto docs = jsonl::parse_documents(in);
  const auto split = pipeline::split_corpus(docs, pipeline::SplitSpec{});
  if (split.train.size() != 20 || split.validation.size() != 5 || split.test.size() != 1) {
    o.fail("split sizes " + std::to_string(split.train.size()) + "/" +
           std::to_string(split.validation.size()) + "/" + std::to_string(split.test.size()));
  }

  const extraction::ExtractorConfig ex;
  embedding::TestEmbeddingProvider good(1, 32);
  pipeline::BuildOptions clean, resumed;
  clean.output_dir = work / "pipeline_clean";
  resumed.output_dir = work / "pipeline_resumed";
  for (const auto* opt : {&clean, &resumed}) {
    fs::remove_all(opt->output_dir);
    fs::create_directories(opt->output_dir);
  }
  pipeline::build_pairs(split, ex, &good, clean);
  int interruptions = 0;
  for (int budget : {7, 9, 6}) {  // several crashes before a clean finish
    FlakyProvider flaky(budget);
    try {
      pipeline::build_pairs(split, ex, &flaky, resumed);
    } catch (const pipeline::BuildAborted&) {
      ++interruptions;
    }
  }
  std::ofstream(resumed.output_dir / "validation.jsonl", std::ios::app) << "{\"id\":\"tr";
  pipeline::build_pairs(split, ex, &good, resumed);
  const bool resume_equal = snapshot(clean.output_dir) == snapshot(resumed.output_dir);
  if (!resume_equal) o.fail("resumed build differs from uninterrupted build");
  if (interruptions < 2) o.fail("interruption scenario did not interrupt");

  std::ifstream sp(testing::fixture_path("stats_pairs.jsonl"));
  const auto stats = pipeline::compute_stats(jsonl::parse_pairs(sp));
  if (stats.keyword_to_text_length_ratio != 0.6) {
    o.fail("ratio fixture gave " + std::to_string(stats.keyword_to_text_length_ratio));
  }
  std::ifstream built(clean.output_dir / "train.jsonl");
  const auto pairs = jsonl::parse_pairs(built);
  const auto s = pipeline::compute_stats(pairs);
  std::size_t words = 0, kws = 0, max_w = 0, max_k = 0;
  for (const auto& p : pairs) {
    std::istringstream ws(p.text);
    std::size_t n = 0;
    for (std::string w; ws >> w;) ++n;
    words += n;
    kws += p.keywords.size();
    max_w = std::max(max_w, n);
    max_k = std::max(max_k, p.keywords.size());
  }
  if (s.n_texts != pairs.size() || s.total_words != words || s.total_keywords != kws ||
      s.max_words_per_text != max_w || s.max_keywords_per_text != max_k ||
      s.keyword_to_text_length_ratio != static_cast<double>(kws) / static_cast<double>(words)) {
    o.fail("stats disagree with recount on the built train split");
  }
  if (o.pass) {
    o.detail = "20/5/1 split; resumed build after " + std::to_string(interruptions) +
               " interruptions byte-equal; stats recount exact, ratio fixture 0.6";
  }
  return o;
}

// ---------------------------------------------------------------------------
// CLI reproducibility

int run_command(const std::string& cmd) {
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Outcome cli_reproducibility(const std::string& cli, const fs::path& work) {
  Outcome o;
  const std::string F = testing::fixture_path("");
  const std::vector<std::pair<std::string, std::string>> commands{
      {"extract", "extract --input " + F + "corpus26.jsonl --output "},
      {"extract-textrank", "extract --method textrank --input " + F + "corpus26.jsonl --output "},
      {"extract-yake", "extract --method yake --input " + F + "corpus26.jsonl --output "},
      {"eval-extraction", "eval-extraction --gold " + F + "gold.jsonl --pred " + F + "pred.jsonl --output "},
      {"build-dataset", "build-dataset --seed 5 --jobs 2 --input " + F + "corpus26.jsonl --output-dir "},
      {"stats", "stats --input " + F + "stats_pairs.jsonl --output "},
      {"generate-beam", "generate --input " + F + "keywords.jsonl --lm-corpus " + F + "lm_corpus.jsonl --output "},
      {"generate-sample", "generate --decoder top-p-top-k --seed 17 --input " + F + "keywords.jsonl --lm-corpus " + F +
                              "lm_corpus.jsonl --output "},
      {"generate-constrained", "generate --constrained --input " + F + "keywords.jsonl --lm-corpus " + F +
                                   "lm_corpus.jsonl --output "},
      {"eval-generation", "eval-generation --bertscore --input " + F + "eval_pairs.jsonl --output "},
  };
  for (const auto& [name, args] : commands) {
    std::string out[2];
    for (int i = 0; i < 2; ++i) {
      const fs::path target = work / ("cli_" + name + "_" + std::to_string(i));
      fs::remove_all(target);
      const int code = run_command("env -u K2T_JOBS -u K2T_GATEWAY_URL -u K2T_GATEWAY_TOKEN " + cli + " " +
                                   args + target.string() + " 2>/dev/null");
      if (code != 0) {
        o.fail(name + " exited " + std::to_string(code));
        break;
      }
      out[i] = fs::is_directory(target) ? snapshot(target) : testing::read_file(target.string());
    }
    if (o.pass && (out[0].empty() || out[0] != out[1])) o.fail(name + " outputs differ between runs");
  }
  if (o.pass) o.detail = std::to_string(commands.size()) + " command runs byte-identical across two runs";
  return o;
}

// ---------------------------------------------------------------------------

Outcome suite_runtime(const std::string& unit_tests, Clock::time_point acceptance_start) {
  Outcome o;
  double unit = 0;
  if (!unit_tests.empty()) {
    const auto start = Clock::now();
    const int code = run_command(unit_tests + " --gtest_brief=1 >/dev/null 2>&1");
    unit = seconds_since(start);
    if (code != 0) o.fail("unit tests exited " + std::to_string(code));
  }
  const double total = unit + seconds_since(acceptance_start);
  std::ostringstream os;
  os << "unit tests " << unit << " s + acceptance " << (total - unit) << " s = " << total
     << " s, no model server running";
  if (unit_tests.empty()) os << " (unit tests not timed)";
  if (total >= kSuiteSeconds) o.fail(os.str());
  if (o.pass) o.detail = os.str();
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance checks"};
  std::string cli, unit_tests, workdir = (fs::temp_directory_path() / "k2t_acceptance").string();
  app.add_option("--cli", cli, "Path of the k2t binary")->required();
  app.add_option("--unit-tests", unit_tests, "Unit test binary to time");
  app.add_option("--workdir", workdir, "Scratch directory");
  CLI11_PARSE(app, argc, argv);

  const auto start = Clock::now();
  fs::create_directories(workdir);
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"metric oracle suite", metric_oracles},
      {"extraction law", extraction_law},
      {"scale invariance", scale_invariance},
      {"textrank", textrank},
      {"decoding equivalences", decoding_equivalences},
      {"constrained decoding", constrained},
      {"pipeline", [&] { return pipeline_checks(workdir); }},
      {"cli reproducibility", [&] { return cli_reproducibility(cli, workdir); }},
      {"suite runtime", [&] { return suite_runtime(unit_tests, start); }},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    if (!o.pass) ++failed;
    std::cout << (o.pass ? "PASS " : "FAIL ") << name << ": " << o.detail << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
