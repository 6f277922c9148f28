#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>

#include "json.hpp"
#include "k2t/decoding/config.hpp"
#include "k2t/embedding/provider.hpp"
#include "k2t/error.hpp"
#include "k2t/extraction/extractor.hpp"
#include "k2t/gateway/client.hpp"
#include "k2t/pipeline/split.hpp"

namespace k2t::cli {

/// Bad flags, config or input files; exit code 1.
class UsageError : public Error {
 public:
  using Error::Error;
};

struct ProviderSection {
  std::string kind = "test";  // "test" or "gateway"
  std::uint64_t seed = 0;
  std::size_t dimension = 64;
  std::size_t max_tokens = 512;
};

struct BuildSection {
  std::size_t jobs = 1;
  bool resume = true;
};

struct GenerationSection {
  bool constrained = false;
  /// Training text for the toy bigram model used with the test provider.
  std::string lm_corpus;
  double smoothing = 0.1;
  double keyword_bonus = 2.0;
};

struct StatsSection {
  std::size_t top = 5;
};

/// Every module setting a command can touch. Built from defaults, then the
/// config file, then K2T_* environment variables, then flags.
struct RunConfig {
  ProviderSection provider;
  gateway::GatewayConfig gateway;
  extraction::ExtractorConfig extraction;
  pipeline::SplitSpec split;
  BuildSection build;
  decoding::DecoderConfig decoder;
  GenerationSection generation;
  StatsSection stats;

  /// Overlays the sections present in `obj`. Unknown sections or keys
  /// throw UsageError.
  void merge_json(const nlohmann::json& obj);
  void merge_file(const std::filesystem::path& path);
  /// K2T_GATEWAY_URL, K2T_GATEWAY_TOKEN, K2T_JOBS.
  void merge_env();

  nlohmann::ordered_json to_json() const;
};

extraction::SelectionPolicy policy_from_json(const nlohmann::json& obj);
nlohmann::ordered_json policy_to_json(const extraction::SelectionPolicy& policy);
extraction::SelectionPolicy load_policy(const std::filesystem::path& path);

std::unique_ptr<embedding::EmbeddingProvider> make_provider(const RunConfig& config);

}  // namespace k2t::cli
