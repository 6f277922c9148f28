#include "k2t/pipeline/build.hpp"

#include <fstream>
#include <future>
#include <sstream>
#include <unordered_set>

#include "json.hpp"
#include "k2t/corpus/jsonl.hpp"

namespace k2t::pipeline {
namespace fs = std::filesystem;
namespace {

struct Outcome {
  enum class Kind { Pair, Reject, Abort } kind = Kind::Pair;
  std::string line;  // serialized pair or reject, without newline
  std::string message;
};

std::string reject_line(const std::string& id, const std::string& reason) {
  nlohmann::ordered_json obj;
  obj["id"] = id;
  obj["reason"] = reason;
  return obj.dump();
}

Outcome process(const Document& doc, const extraction::ExtractorConfig& extractor,
                const embedding::EmbeddingProvider* provider,
                const CleaningConfig& cleaning) {
  Outcome out;
  const std::string cleaned = clean_text(doc.text, cleaning);
  if (cleaned.empty()) {
    out.kind = Outcome::Kind::Reject;
    out.line = reject_line(doc.id, "empty after cleaning");
    return out;
  }
  try {
    auto result = extraction::extract_scored(Document{doc.id, cleaned}, extractor, provider);
    KeywordTextPair pair{doc.id, std::move(result.keywords), cleaned};
    pair.validate();
    std::ostringstream os;
    jsonl::write_pairs(std::span(&pair, 1), os);
    out.line = os.str();
    if (!out.line.empty() && out.line.back() == '\n') out.line.pop_back();
  } catch (const ProviderUnavailable& e) {
    out.kind = Outcome::Kind::Abort;
    out.message = e.what();
  } catch (const Error& e) {
    out.kind = Outcome::Kind::Reject;
    out.line = reject_line(doc.id, e.what());
  }
  return out;
}

// Ids of fully written progress lines. A trailing line without a newline is
// an interrupted write and does not count.
std::vector<std::string> read_progress(const fs::path& path) {
  std::vector<std::string> ids;
  std::ifstream in(path, std::ios::binary);
  if (!in) return ids;
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string data = buf.str();
  std::size_t start = 0;
  while (true) {
    const std::size_t nl = data.find('\n', start);
    if (nl == std::string::npos) break;
    if (nl > start) ids.push_back(data.substr(start, nl - start));
    start = nl + 1;
  }
  return ids;
}

// Rewrites a pair or reject file keeping the first line of each completed id.
// Returns the number of lines kept.
std::size_t compact(const fs::path& path, const std::unordered_set<std::string>& completed) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return 0;
  std::vector<std::string> kept;
  std::unordered_set<std::string> seen;
  std::string line;
  while (std::getline(in, line)) {
    if (in.eof()) break;  // no trailing newline: interrupted write
    const auto obj = nlohmann::json::parse(line, nullptr, false);
    if (obj.is_discarded() || !obj.is_object() || !obj.contains("id") ||
        !obj["id"].is_string()) {
      continue;
    }
    const std::string id = obj["id"].get<std::string>();
    if (completed.count(id) && seen.insert(id).second) kept.push_back(line);
  }
  in.close();
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    for (const auto& l : kept) out << l << '\n';
    if (!out.flush()) throw Error("cannot write " + tmp.string());
  }
  fs::rename(tmp, path);
  return kept.size();
}

void write_line(std::ofstream& out, const std::string& line, const fs::path& path) {
  out << line << '\n';
  if (!out.flush()) throw Error("cannot write " + path.string());
}

}  // namespace

SplitSummary build_split(const std::string& name, std::span<const Document> docs,
                         const extraction::ExtractorConfig& extractor,
                         const embedding::EmbeddingProvider* provider,
                         const BuildOptions& options) {
  if (options.jobs == 0) throw InvalidArgument("jobs must be at least 1");
  fs::create_directories(options.output_dir);
  const fs::path pairs_path = options.output_dir / (name + ".jsonl");
  const fs::path rejects_path = options.output_dir / (name + ".rejects.jsonl");
  const fs::path progress_path = options.output_dir / (name + ".progress");

  SplitSummary summary;
  summary.split = name;
  std::unordered_set<std::string> completed;
  std::string last_completed;
  if (options.resume) {
    const auto ids = read_progress(progress_path);
    completed.insert(ids.begin(), ids.end());
    if (!ids.empty()) last_completed = ids.back();
    summary.pairs = compact(pairs_path, completed);
    summary.rejects = compact(rejects_path, completed);
    summary.resumed = completed.size();
    // Drop a partial trailing progress line.
    std::ofstream rewrite(progress_path, std::ios::binary | std::ios::trunc);
    for (const auto& id : ids) rewrite << id << '\n';
  }

  const auto mode = std::ios::binary | (options.resume ? std::ios::app : std::ios::trunc);
  std::ofstream pairs_out(pairs_path, mode);
  std::ofstream rejects_out(rejects_path, mode);
  std::ofstream progress_out(progress_path, mode);
  if (!pairs_out || !rejects_out || !progress_out) {
    throw Error("cannot open output files in " + options.output_dir.string());
  }

  std::vector<const Document*> todo;
  for (const auto& d : docs) {
    if (!completed.count(d.id)) todo.push_back(&d);
  }

  for (std::size_t begin = 0; begin < todo.size(); begin += options.jobs) {
    const std::size_t end = std::min(todo.size(), begin + options.jobs);
    std::vector<Outcome> outcomes(end - begin);
    if (end - begin == 1) {
      outcomes[0] = process(*todo[begin], extractor, provider, options.cleaning);
    } else {
      std::vector<std::future<Outcome>> futures;
      for (std::size_t i = begin; i < end; ++i) {
        futures.push_back(std::async(std::launch::async, [&, i] {
          return process(*todo[i], extractor, provider, options.cleaning);
        }));
      }
      for (std::size_t i = 0; i < futures.size(); ++i) outcomes[i] = futures[i].get();
    }

    for (std::size_t i = 0; i < outcomes.size(); ++i) {
      const Document& doc = *todo[begin + i];
      const Outcome& o = outcomes[i];
      if (o.kind == Outcome::Kind::Abort) {
        throw BuildAborted(name, last_completed, o.message);
      }
      if (o.kind == Outcome::Kind::Pair) {
        write_line(pairs_out, o.line, pairs_path);
        ++summary.pairs;
      } else {
        write_line(rejects_out, o.line, rejects_path);
        ++summary.rejects;
      }
      write_line(progress_out, doc.id, progress_path);
      last_completed = doc.id;
    }
  }
  return summary;
}

std::vector<SplitSummary> build_pairs(const CorpusSplit& split,
                                      const extraction::ExtractorConfig& extractor,
                                      const embedding::EmbeddingProvider* provider,
                                      const BuildOptions& options) {
  std::vector<SplitSummary> out;
  out.push_back(build_split("train", split.train, extractor, provider, options));
  out.push_back(build_split("validation", split.validation, extractor, provider, options));
  out.push_back(build_split("test", split.test, extractor, provider, options));
  return out;
}

}  // namespace k2t::pipeline
