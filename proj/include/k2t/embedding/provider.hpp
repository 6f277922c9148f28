#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "k2t/embedding/embedding.hpp"

namespace k2t::embedding {

struct EmbeddingOutput {
  std::vector<TokenEmbedding> tokens;
  /// True when the provider cut the token sequence at max_tokens().
  bool truncated = false;
};

/// Source of per-token contextual vectors. Implementations must be safe to
/// call concurrently.
class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;

  virtual std::size_t dimension() const = 0;
  virtual std::size_t max_tokens() const = 0;
  virtual SubwordScheme scheme() const { return {}; }

  /// One vector of length dimension() per reported token.
  virtual EmbeddingOutput embed(std::string_view text) const = 0;
};

/// Deterministic provider for tests and desk-scale runs.
///
/// Tokenization: whitespace words, each cut into pieces of at most
/// `piece_length` code points; pieces after the first get the `##` prefix.
/// The sequence is wrapped in [CLS] ... [SEP] and cut to max_tokens.
/// Vectors: a keyed 64-bit hash of (seed, token) drives splitmix64 to fill
/// `dimension` entries in [-1, 1), then the vector is scaled to unit norm.
/// Only integer arithmetic and the scalar kernels are involved, so vectors
/// are identical across runs and platforms.
class TestEmbeddingProvider final : public EmbeddingProvider {
 public:
  TestEmbeddingProvider(std::uint64_t seed, std::size_t dimension,
                        std::size_t max_tokens = 512,
                        std::size_t piece_length = 4);

  std::size_t dimension() const override { return dimension_; }
  std::size_t max_tokens() const override { return max_tokens_; }
  EmbeddingOutput embed(std::string_view text) const override;

  std::vector<double> vector_for(std::string_view token) const;
  std::vector<std::string> tokenize(std::string_view text) const;

 private:
  std::uint64_t seed_;
  std::size_t dimension_;
  std::size_t max_tokens_;
  std::size_t piece_length_;
};

/// Throws InvalidArgument if dimension < 2.
std::unique_ptr<EmbeddingProvider> test_provider(std::uint64_t seed,
                                                 std::size_t dimension);

}  // namespace k2t::embedding
