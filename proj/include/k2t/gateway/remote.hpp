#pragma once

#include <memory>
#include <string>

#include "json.hpp"
#include "k2t/decoding/config.hpp"
#include "k2t/decoding/language_model.hpp"
#include "k2t/embedding/provider.hpp"
#include "k2t/gateway/client.hpp"

namespace k2t::gateway {

/// GET /v1/info.
struct ServerInfo {
  std::size_t dimension = 0;
  std::vector<std::string> vocab;
  std::string model_id;
};

ServerInfo fetch_info(const GatewayClient& client);

/// POST /v1/embed {"text"} -> {"tokens", "embeddings"[, "truncated"]}.
/// Without an explicit "truncated" flag, a response of max_tokens tokens is
/// taken as truncated.
class RemoteEmbeddingProvider : public embedding::EmbeddingProvider {
 public:
  RemoteEmbeddingProvider(std::shared_ptr<const GatewayClient> client,
                          std::size_t max_tokens = 512);

  std::size_t dimension() const override { return dimension_; }
  std::size_t max_tokens() const override { return max_tokens_; }
  embedding::EmbeddingOutput embed(std::string_view text) const override;

 private:
  std::shared_ptr<const GatewayClient> client_;
  std::size_t dimension_;
  std::size_t max_tokens_;
};

/// Vocabulary from /v1/info; POST /v1/next_logits
/// {"prefix_ids", "keywords"} -> {"logits"}.
class RemoteLanguageModel : public decoding::LanguageModel {
 public:
  explicit RemoteLanguageModel(std::shared_ptr<const GatewayClient> client);

  const decoding::Vocabulary& vocabulary() const override { return vocab_; }
  std::vector<double> next_logits(std::span<const decoding::TokenId> prefix,
                                  const KeywordSet& keywords) const override;

 private:
  std::shared_ptr<const GatewayClient> client_;
  decoding::Vocabulary vocab_;
};

/// Keys are the DecoderConfig field names; enums as their string names.
nlohmann::ordered_json config_to_json(const decoding::DecoderConfig& config);
/// Missing keys keep their defaults; unknown keys or bad values throw
/// InvalidArgument.
decoding::DecoderConfig config_from_json(const nlohmann::json& obj);

struct RemoteGeneration {
  decoding::GenerationResult result;  // ids left empty
  nlohmann::json applied_config;
};

/// POST /v1/generate {"keywords", "config"} -> {"text", "score",
/// "applied_config"}. missing_keywords is filled by substring check.
RemoteGeneration remote_generate(const GatewayClient& client, const KeywordSet& keywords,
                                 const decoding::DecoderConfig& config);

}  // namespace k2t::gateway
