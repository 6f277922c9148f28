#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "k2t/corpus/clean.hpp"
#include "k2t/corpus/types.hpp"
#include "k2t/embedding/provider.hpp"
#include "k2t/error.hpp"
#include "k2t/extraction/extractor.hpp"

namespace k2t::pipeline {

/// Per split `<name>` the output directory holds
///   <name>.jsonl          keyword-text pairs, in split order
///   <name>.rejects.jsonl  {"id": .., "reason": ..} for documents that failed
///   <name>.progress       one completed id per line (pair or reject written)
struct BuildOptions {
  std::filesystem::path output_dir;
  CleaningConfig cleaning = CleaningConfig::defaults();
  /// Documents extracted concurrently.
  std::size_t jobs = 1;
  /// Continue from existing progress files instead of starting over.
  bool resume = true;
};

struct SplitSummary {
  std::string split;
  std::size_t pairs = 0;
  std::size_t rejects = 0;
  std::size_t resumed = 0;  // already completed before this run
};

/// Raised when the provider is unreachable. Everything up to `last_completed`
/// is durable; rerunning with resume picks up after it.
class BuildAborted : public Error {
 public:
  BuildAborted(std::string split, std::string last_completed, const std::string& why)
      : Error("build aborted in split '" + split + "' after '" + last_completed +
              "': " + why),
        split_(std::move(split)),
        last_completed_(std::move(last_completed)) {}

  const std::string& split() const noexcept { return split_; }
  const std::string& last_completed() const noexcept { return last_completed_; }

 private:
  std::string split_;
  std::string last_completed_;
};

/// Cleans and extracts every document of one split into its pair file.
/// Documents that are empty after cleaning or fail extraction are written to
/// the reject file; ProviderUnavailable aborts with BuildAborted.
SplitSummary build_split(const std::string& name, std::span<const Document> docs,
                         const extraction::ExtractorConfig& extractor,
                         const embedding::EmbeddingProvider* provider,
                         const BuildOptions& options);

/// build_split for train, validation and test in that order.
std::vector<SplitSummary> build_pairs(const CorpusSplit& split,
                                      const extraction::ExtractorConfig& extractor,
                                      const embedding::EmbeddingProvider* provider,
                                      const BuildOptions& options);

}  // namespace k2t::pipeline
