#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "k2t/corpus/types.hpp"

namespace k2t::decoding {

using TokenId = std::int32_t;

/// Token strings of a model plus the text codec built on them.
///
/// Special tokens are looked up by name: pad is "<pad>" or "[PAD]", eos is
/// "</s>", "[SEP]" or "<eos>", bos is "<s>", "[CLS]" or "<bos>". Without a bos
/// token the pad token starts decoding (the T5 convention).
class Vocabulary {
 public:
  /// Throws InvalidArgument on duplicate tokens or missing pad/eos.
  explicit Vocabulary(std::vector<std::string> tokens);

  std::size_t size() const noexcept { return tokens_.size(); }
  const std::string& token(TokenId id) const { return tokens_.at(static_cast<std::size_t>(id)); }
  const std::vector<std::string>& tokens() const noexcept { return tokens_; }
  std::optional<TokenId> find(std::string_view token) const;

  TokenId pad_id() const noexcept { return pad_; }
  TokenId bos_id() const noexcept { return bos_; }
  TokenId eos_id() const noexcept { return eos_; }
  bool is_special(TokenId id) const noexcept {
    return id == pad_ || id == bos_ || id == eos_;
  }

  /// Whitespace words, each an exact vocabulary entry or else split
  /// greedily into the longest known prefix followed by `##` continuation
  /// pieces. Throws InvalidArgument if a word cannot be covered.
  std::vector<TokenId> encode(std::string_view text) const;

  /// Joins tokens with spaces, gluing `##` pieces to their predecessor.
  /// In a SentencePiece vocabulary (any `▁` token) words start at `▁` and
  /// every other piece is glued. Special tokens are skipped.
  std::string decode(std::span<const TokenId> ids) const;

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, TokenId> index_;
  TokenId pad_ = -1;
  TokenId bos_ = -1;
  TokenId eos_ = -1;
  bool sentencepiece_ = false;
};

/// Autoregressive next-token scorer conditioned on a keyword set.
/// Implementations must be safe for concurrent calls.
class LanguageModel {
 public:
  virtual ~LanguageModel() = default;

  virtual const Vocabulary& vocabulary() const = 0;

  /// Finite logits over the whole vocabulary for the token after `prefix`.
  /// `prefix` starts with the bos id followed by the generated tokens.
  virtual std::vector<double> next_logits(std::span<const TokenId> prefix,
                                          const KeywordSet& keywords) const = 0;
};

}  // namespace k2t::decoding
