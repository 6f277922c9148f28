#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "k2t/corpus/clean.hpp"
#include "k2t/corpus/jsonl.hpp"
#include "k2t/decoding/decoders.hpp"
#include "k2t/decoding/toy_model.hpp"
#include "k2t/error.hpp"
#include "k2t/extraction/extractor.hpp"
#include "k2t/gateway/remote.hpp"
#include "k2t/nlg/metrics.hpp"
#include "k2t/pipeline/build.hpp"
#include "k2t/pipeline/stats.hpp"
#include "k2t/ranking/metrics.hpp"
#include "run_config.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace k2t::cli {
namespace {

void log(const char* level, const std::string& component, const std::string& msg) {
  std::cerr << "level=" << level << " component=" << component << " msg=" << json(msg).dump()
            << '\n';
}

std::string fmt(double x) {
  std::ostringstream os;
  os << x;
  return os.str();
}

// Written next to the target and renamed into place on commit; an
// uncommitted file is deleted.
class OutputFile {
 public:
  explicit OutputFile(const fs::path& path) : final_(path), tmp_(path.string() + ".tmp") {
    out_.open(tmp_, std::ios::binary | std::ios::trunc);
    if (!out_) throw UsageError("cannot write " + path.string());
  }
  ~OutputFile() {
    if (!committed_) {
      out_.close();
      std::error_code ec;
      fs::remove(tmp_, ec);
    }
  }
  std::ostream& stream() { return out_; }
  void commit() {
    out_.close();
    if (!out_) throw Error("write failed: " + tmp_.string());
    fs::rename(tmp_, final_);
    committed_ = true;
  }

 private:
  fs::path final_;
  fs::path tmp_;
  std::ofstream out_;
  bool committed_ = false;
};

// Report to --output if given, else stdout.
void emit(const std::string& report, const std::string& output) {
  if (output.empty()) {
    std::cout << report << '\n';
    return;
  }
  OutputFile out(output);
  out.stream() << report << '\n';
  out.commit();
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open input file " + path);
  return in;
}

template <class F>
auto parse_input(const std::string& path, F parse) {
  auto in = open_input(path);
  try {
    return parse(in);
  } catch (const ParseError& e) {
    throw UsageError(path + ": " + e.what());
  }
}

std::vector<Document> read_documents(const std::string& path) {
  return parse_input(path, [](std::istream& in) { return jsonl::parse_documents(in); });
}

std::vector<nlg::TextPair> read_text_pairs(const std::string& path) {
  auto in = open_input(path);
  std::vector<nlg::TextPair> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const json obj = json::parse(line);
      out.push_back({obj.at("reference").get<std::string>(), obj.at("candidate").get<std::string>()});
    } catch (const json::exception& e) {
      throw UsageError(path + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

long elapsed_ms(std::chrono::steady_clock::time_point start) {
  return static_cast<long>(std::chrono::duration_cast<std::chrono::milliseconds>(
                               std::chrono::steady_clock::now() - start)
                               .count());
}

// Everything a flag can set. Unset optionals leave the lower layers alone.
struct Flags {
  std::string config;
  bool dry_run = false;

  std::optional<std::string> provider;
  std::optional<std::string> gateway_url;
  std::optional<std::string> gateway_token;
  std::optional<std::uint64_t> embed_seed;
  std::optional<std::size_t> embed_dim;
  std::optional<std::size_t> jobs;

  std::string input, output, gold, pred, output_dir;

  std::optional<std::string> method;
  std::string policy;

  std::optional<std::string> split;
  std::optional<std::uint64_t> seed;
  bool no_resume = false;

  std::optional<std::string> decoder;
  std::optional<std::size_t> beam_width, top_k, max_length;
  std::optional<double> top_p, temperature, repetition_penalty, length_penalty;
  std::optional<bool> constrained;
  std::optional<std::string> constraint_match;
  std::optional<std::string> lm_corpus;
  std::optional<double> smoothing, keyword_bonus;

  std::optional<std::size_t> top;
  bool bertscore = false;
};

const RunConfig kDefaults;

void add_common(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config, "JSON config file with module sections");
  cmd->add_flag("--dry-run", f.dry_run, "Resolve and validate the configuration, print it, exit");
}

void add_provider(CLI::App* cmd, Flags& f) {
  cmd->add_option("--provider", f.provider, "Embedding backend: test or gateway")
      ->default_str(kDefaults.provider.kind);
  cmd->add_option("--gateway-url", f.gateway_url, "Model server base URL (env K2T_GATEWAY_URL)");
  cmd->add_option("--gateway-token", f.gateway_token, "Bearer token (env K2T_GATEWAY_TOKEN)");
  cmd->add_option("--embed-seed", f.embed_seed, "Seed of the test embedding provider")
      ->default_str(std::to_string(kDefaults.provider.seed));
  cmd->add_option("--embed-dim", f.embed_dim, "Dimension of the test embedding provider")
      ->default_str(std::to_string(kDefaults.provider.dimension));
}

void add_extraction(CLI::App* cmd, Flags& f) {
  cmd->add_option("--method", f.method, "Keyword scorer: mean-cosine, textrank or yake")
      ->default_str(std::string(extraction::to_string(kDefaults.extraction.kind)));
  cmd->add_option("--policy", f.policy,
                  "JSON selection policy {tiers:[{min_words,max_words,fraction}],min_keywords}")
      ->default_str("60% of words for >=10, 70% for 5-9, 80% for 1-4, at least 1")
      ->check(CLI::ExistingFile);
}

void add_decoder(CLI::App* cmd, Flags& f) {
  const auto& d = kDefaults.decoder;
  cmd->add_option("--decoder", f.decoder, "greedy, beam, top-k, top-p or top-p-top-k")
      ->default_str(std::string(decoding::to_string(d.strategy)));
  cmd->add_option("--beam-width", f.beam_width, "Beam width (reference setting)")
      ->default_str(std::to_string(d.beam_width));
  cmd->add_option("--top-k", f.top_k, "Top-k cutoff (reference setting)")
      ->default_str(std::to_string(d.top_k));
  cmd->add_option("--top-p", f.top_p, "Nucleus mass (reference setting)")->default_str(fmt(d.top_p));
  cmd->add_option("--temperature", f.temperature, "Logit temperature")
      ->default_str(fmt(d.temperature));
  cmd->add_option("--repetition-penalty", f.repetition_penalty, "Repetition penalty (reference setting)")
      ->default_str(fmt(d.repetition_penalty));
  cmd->add_option("--length-penalty", f.length_penalty, "Length normalization exponent (reference setting)")
      ->default_str(fmt(d.length_penalty));
  cmd->add_option("--max-length", f.max_length, "Maximum generated tokens (reference setting)")
      ->default_str(std::to_string(d.max_length));
  cmd->add_option("--seed", f.seed, "Sampling seed")->default_str(std::to_string(d.seed));
  cmd->add_flag("--constrained", f.constrained,
                "Force every input keyword into the output (two-stage constrained beam)")
      ->default_str("false");
  cmd->add_option("--constraint-match", f.constraint_match,
                  "When a forced keyword counts as present: substring or token-sequence")
      ->default_str(std::string(decoding::to_string(d.constraint_match)));
  cmd->add_option("--lm-corpus", f.lm_corpus,
                  "Documents JSONL the toy bigram model is trained on (test provider)");
  cmd->add_option("--smoothing", f.smoothing, "Toy model additive smoothing")
      ->default_str(fmt(kDefaults.generation.smoothing));
  cmd->add_option("--keyword-bonus", f.keyword_bonus, "Toy model logit bonus for unused keywords")
      ->default_str(fmt(kDefaults.generation.keyword_bonus));
}

template <class T, class U>
void overlay(const std::optional<T>& flag, U& target) {
  if (flag) target = *flag;
}

RunConfig resolve(const Flags& f) {
  RunConfig cfg;
  if (!f.config.empty()) cfg.merge_file(f.config);
  cfg.merge_env();

  overlay(f.provider, cfg.provider.kind);
  overlay(f.gateway_url, cfg.gateway.base_url);
  overlay(f.gateway_token, cfg.gateway.auth_token);
  overlay(f.embed_seed, cfg.provider.seed);
  overlay(f.embed_dim, cfg.provider.dimension);
  overlay(f.jobs, cfg.build.jobs);

  try {
    if (f.method) cfg.extraction.kind = extraction::parse_extractor_kind(*f.method);
    if (!f.policy.empty()) cfg.extraction.policy = load_policy(f.policy);
    if (f.split) cfg.split = pipeline::SplitSpec::parse(*f.split, cfg.split.seed);
    if (f.decoder) cfg.decoder.strategy = decoding::parse_strategy(*f.decoder);
    if (f.constraint_match) {
      cfg.decoder.constraint_match = decoding::parse_constraint_match(*f.constraint_match);
    }
  } catch (const InvalidArgument& e) {
    throw UsageError(e.what());
  }
  if (f.no_resume) cfg.build.resume = false;
  overlay(f.seed, cfg.split.seed);
  overlay(f.seed, cfg.decoder.seed);
  overlay(f.beam_width, cfg.decoder.beam_width);
  overlay(f.top_k, cfg.decoder.top_k);
  overlay(f.top_p, cfg.decoder.top_p);
  overlay(f.temperature, cfg.decoder.temperature);
  overlay(f.repetition_penalty, cfg.decoder.repetition_penalty);
  overlay(f.length_penalty, cfg.decoder.length_penalty);
  overlay(f.max_length, cfg.decoder.max_length);
  overlay(f.constrained, cfg.generation.constrained);
  overlay(f.lm_corpus, cfg.generation.lm_corpus);
  overlay(f.smoothing, cfg.generation.smoothing);
  overlay(f.keyword_bonus, cfg.generation.keyword_bonus);
  overlay(f.top, cfg.stats.top);

  try {
    cfg.decoder.validate();
    cfg.extraction.policy.validate();
    cfg.split.validate();
    if (cfg.provider.kind == "gateway") cfg.gateway.validate();
  } catch (const InvalidArgument& e) {
    throw UsageError(e.what());
  }
  if (cfg.provider.kind != "test" && cfg.provider.kind != "gateway") {
    throw UsageError("unknown provider '" + cfg.provider.kind + "' (test or gateway)");
  }
  if (cfg.build.jobs == 0) throw UsageError("jobs must be >= 1");
  return cfg;
}

int cmd_extract(const Flags& f, const RunConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  const auto docs = read_documents(f.input);
  std::unique_ptr<embedding::EmbeddingProvider> provider;
  if (cfg.extraction.kind != extraction::ExtractorKind::Yake) provider = make_provider(cfg);

  std::vector<KeywordRecord> records;
  std::size_t rejects = 0;
  for (const auto& doc : docs) {
    const std::string cleaned = clean_text(doc.text);
    if (cleaned.empty()) {
      log("warn", "extract", "rejected '" + doc.id + "': empty after cleaning");
      ++rejects;
      continue;
    }
    try {
      auto result =
          extraction::extract_scored(Document{doc.id, cleaned}, cfg.extraction, provider.get());
      records.push_back({doc.id, std::move(result.keywords)});
    } catch (const ProviderUnavailable&) {
      throw;
    } catch (const Error& e) {
      log("warn", "extract", "rejected '" + doc.id + "': " + e.what());
      ++rejects;
    }
  }
  OutputFile out(f.output);
  jsonl::write_keyword_records(records, out.stream());
  out.commit();
  log("info", "extract",
      "docs=" + std::to_string(docs.size()) + " written=" + std::to_string(records.size()) +
          " rejects=" + std::to_string(rejects) + " elapsed_ms=" + std::to_string(elapsed_ms(start)));
  return 0;
}

int cmd_eval_extraction(const Flags& f, const RunConfig&) {
  auto read = [](const std::string& path) {
    return parse_input(path, [](std::istream& in) { return jsonl::parse_keyword_records(in); });
  };
  const auto gold = read(f.gold);
  const auto pred = read(f.pred);
  if (pred.empty()) throw UsageError("prediction file " + f.pred + " is empty");
  if (gold.empty()) throw UsageError("gold file " + f.gold + " is empty");
  ranking::ExtractionReport report;
  try {
    report = ranking::evaluate_extraction(pred, gold);
  } catch (const IdMismatch& e) {
    throw UsageError("predictions and gold are not aligned, first offending id '" + e.id() + "'");
  } catch (const InvalidArgument& e) {
    throw UsageError(e.what());
  }
  emit(report.to_json(), f.output);
  log("info", "eval-extraction", "queries=" + std::to_string(report.n_queries));
  return 0;
}

int cmd_build_dataset(const Flags& f, const RunConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  const auto docs = read_documents(f.input);
  CorpusSplit split;
  try {
    split = pipeline::split_corpus(docs, cfg.split);
  } catch (const InvalidArgument& e) {
    throw UsageError(f.input + ": " + e.what());
  }
  log("info", "build-dataset",
      "split train=" + std::to_string(split.train.size()) +
          " validation=" + std::to_string(split.validation.size()) +
          " test=" + std::to_string(split.test.size()));
  std::unique_ptr<embedding::EmbeddingProvider> provider;
  if (cfg.extraction.kind != extraction::ExtractorKind::Yake) provider = make_provider(cfg);

  pipeline::BuildOptions opt;
  opt.output_dir = f.output_dir;
  opt.jobs = cfg.build.jobs;
  opt.resume = cfg.build.resume;
  std::error_code ec;
  fs::create_directories(opt.output_dir, ec);
  if (ec) throw UsageError("cannot create " + f.output_dir + ": " + ec.message());

  const auto summaries = pipeline::build_pairs(split, cfg.extraction, provider.get(), opt);
  for (const auto& s : summaries) {
    log("info", "build-dataset",
        s.split + " pairs=" + std::to_string(s.pairs) + " rejects=" + std::to_string(s.rejects) +
            " resumed=" + std::to_string(s.resumed));
  }
  log("info", "build-dataset", "elapsed_ms=" + std::to_string(elapsed_ms(start)));
  return 0;
}

int cmd_stats(const Flags& f, const RunConfig& cfg) {
  const auto pairs =
      parse_input(f.input, [](std::istream& in) { return jsonl::parse_pairs(in); });
  if (pairs.empty()) throw UsageError("pair file " + f.input + " is empty");
  emit(pipeline::compute_stats(pairs, cfg.stats.top).to_json(), f.output);
  return 0;
}

int cmd_generate(const Flags& f, const RunConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  const auto records =
      parse_input(f.input, [](std::istream& in) { return jsonl::parse_keyword_records(in); });

  std::unique_ptr<decoding::LanguageModel> model;
  if (cfg.provider.kind == "gateway") {
    model = std::make_unique<gateway::RemoteLanguageModel>(
        std::make_shared<const gateway::GatewayClient>(cfg.gateway));
  } else {
    if (cfg.generation.lm_corpus.empty()) {
      throw UsageError("the test provider needs --lm-corpus to train its toy model");
    }
    const auto corpus = read_documents(cfg.generation.lm_corpus);
    try {
      model = decoding::toy_bigram_model(corpus, cfg.generation.smoothing,
                                         cfg.generation.keyword_bonus);
    } catch (const InvalidArgument& e) {
      throw UsageError(e.what());
    }
  }

  OutputFile out(f.output);
  std::size_t incomplete = 0;
  for (const auto& rec : records) {
    decoding::GenerationResult result;
    if (cfg.generation.constrained) {
      try {
        result = decoding::decode_constrained(*model, rec.keywords, rec.keywords, cfg.decoder);
      } catch (const ConstraintUnsatisfiable& e) {
        log("warn", "generate", "'" + rec.id + "': " + e.what());
        result = decoding::decode(*model, rec.keywords, cfg.decoder);
        result.missing_keywords = decoding::missing_keywords(*model, rec.keywords, result,
                                                             cfg.decoder.constraint_match);
      }
    } else {
      result = decoding::decode(*model, rec.keywords, cfg.decoder);
    }
    if (!result.missing_keywords.empty()) ++incomplete;
    ordered_json line;
    line["id"] = rec.id;
    line["keywords"] = rec.keywords.words();
    line["text"] = result.text;
    line["score"] = result.score;
    line["missing_keywords"] = result.missing_keywords.words();
    out.stream() << line.dump() << '\n';
  }
  out.commit();
  log("info", "generate",
      "records=" + std::to_string(records.size()) + " with_missing=" + std::to_string(incomplete) +
          " elapsed_ms=" + std::to_string(elapsed_ms(start)));
  return 0;
}

int cmd_eval_generation(const Flags& f, const RunConfig& cfg) {
  const auto pairs = read_text_pairs(f.input);
  if (pairs.empty()) throw UsageError("pair file " + f.input + " is empty");
  std::unique_ptr<embedding::EmbeddingProvider> provider;
  if (f.bertscore) provider = make_provider(cfg);
  nlg::GenerationReport report;
  try {
    report = nlg::evaluate_generation(pairs, provider.get());
  } catch (const InvalidArgument& e) {
    throw UsageError(f.input + ": " + e.what());
  }
  emit(report.to_json(), f.output);
  return 0;
}

}  // namespace
}  // namespace k2t::cli

int main(int argc, char** argv) {
  using namespace k2t::cli;
  CLI::App app{"k2t: Bangla keyword extraction, keyword-text dataset building and keyword-to-text generation"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every command");
  Flags f;

  auto* extract = app.add_subcommand("extract", "Extract keywords from a documents JSONL file");
  add_common(extract, f);
  extract->add_option("--input", f.input, "Documents JSONL {id, text}")->required();
  extract->add_option("--output", f.output, "Keyword records JSONL {id, keywords}")->required();
  add_extraction(extract, f);
  add_provider(extract, f);

  auto* eval_ex = app.add_subcommand("eval-extraction", "MRR, mAP, nDCG and exact match of predicted keywords");
  add_common(eval_ex, f);
  eval_ex->add_option("--gold", f.gold, "Gold keyword records JSONL")->required();
  eval_ex->add_option("--pred", f.pred, "Predicted keyword records JSONL, best keyword first")->required();
  eval_ex->add_option("--output", f.output, "Report file (default: stdout)");

  auto* build = app.add_subcommand("build-dataset", "Split a corpus and build keyword-text pair files, resumable");
  add_common(build, f);
  build->add_option("--input", f.input, "Documents JSONL {id, text}")->required();
  build->add_option("--output-dir", f.output_dir, "Directory for <split>.jsonl, rejects and progress files")->required();
  build->add_option("--split", f.split, "Train,validation,test fractions or an a:b:c ratio")
      ->default_str("20:5:1");
  build->add_option("--seed", f.seed, "Shuffle seed")->default_str("0");
  build->add_option("--jobs", f.jobs, "Documents extracted concurrently (env K2T_JOBS)")
      ->default_str(std::to_string(kDefaults.build.jobs));
  build->add_flag("--no-resume", f.no_resume, "Start over instead of continuing from progress files");
  add_extraction(build, f);
  add_provider(build, f);

  auto* stats = app.add_subcommand("stats", "Corpus statistics of a keyword-text pair file");
  add_common(stats, f);
  stats->add_option("--input", f.input, "Pairs JSONL {id, keywords, text}")->required();
  stats->add_option("--output", f.output, "Report file (default: stdout)");
  stats->add_option("--top", f.top, "Most frequent keywords listed")
      ->default_str(std::to_string(kDefaults.stats.top));

  auto* gen = app.add_subcommand("generate", "Generate text from keyword records");
  add_common(gen, f);
  gen->add_option("--input", f.input, "Keyword records JSONL {id, keywords}")->required();
  gen->add_option("--output", f.output, "Output JSONL {id, keywords, text, score, missing_keywords}")->required();
  add_decoder(gen, f);
  gen->add_option("--provider", f.provider, "Model backend: test (toy bigram) or gateway")
      ->default_str(kDefaults.provider.kind);
  gen->add_option("--gateway-url", f.gateway_url, "Model server base URL (env K2T_GATEWAY_URL)");
  gen->add_option("--gateway-token", f.gateway_token, "Bearer token (env K2T_GATEWAY_TOKEN)");

  auto* eval_gen = app.add_subcommand("eval-generation", "BLEU, ROUGE, WER, WIL and optional BERTScore");
  add_common(eval_gen, f);
  eval_gen->add_option("--input", f.input, "JSONL {id, reference, candidate}")->required();
  eval_gen->add_option("--output", f.output, "Report file (default: stdout)");
  eval_gen->add_flag("--bertscore", f.bertscore, "Also compute BERTScore with the embedding provider");
  add_provider(eval_gen, f);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  CLI::App* cmd = app.get_subcommands().front();
  const std::string name = cmd->get_name();
  try {
    const RunConfig cfg = resolve(f);
    if (f.dry_run) {
      std::cout << cfg.to_json().dump(2) << '\n';
      log("info", name, "dry run: configuration is valid");
      return 0;
    }
    if (name == "extract") return cmd_extract(f, cfg);
    if (name == "eval-extraction") return cmd_eval_extraction(f, cfg);
    if (name == "build-dataset") return cmd_build_dataset(f, cfg);
    if (name == "stats") return cmd_stats(f, cfg);
    if (name == "generate") return cmd_generate(f, cfg);
    if (name == "eval-generation") return cmd_eval_generation(f, cfg);
    return 1;
  } catch (const UsageError& e) {
    log("error", name, e.what());
    return 1;
  } catch (const k2t::InvalidArgument& e) {
    log("error", name, e.what());
    return 1;
  } catch (const std::exception& e) {
    log("error", name, e.what());
    return 2;
  }
}
