#pragma once

#include <memory>
#include <span>
#include <vector>

#include "k2t/corpus/types.hpp"
#include "k2t/decoding/language_model.hpp"

namespace k2t::decoding {

/// Logit given to pad and bos: finite, but exp() of it is exactly 0.
inline constexpr double kExcludedLogit = -1e30;

/// Additively smoothed word bigram model, used as a deterministic stand-in
/// for a trained generator.
///
/// Vocabulary: <pad>, <s>, </s>, then the corpus words in byte order. Each
/// document is one sequence <s> w1 .. wn </s>. The next-token support is the
/// words plus </s>:
///   P(b | a) = (count(a b) + smoothing) / (count(a .) + smoothing * |support|)
/// and logits are log P. Keyword tokens not yet present in the prefix get
/// `keyword_bonus` added to their logit.
class ToyBigramModel final : public LanguageModel {
 public:
  /// Throws InvalidArgument on an empty corpus or smoothing <= 0.
  ToyBigramModel(std::span<const Document> corpus, double smoothing,
                 double keyword_bonus);

  const Vocabulary& vocabulary() const override { return vocab_; }
  std::vector<double> next_logits(std::span<const TokenId> prefix,
                                  const KeywordSet& keywords) const override;

  /// Unconditioned P(next | prev).
  double probability(TokenId prev, TokenId next) const;

 private:
  Vocabulary vocab_;
  double smoothing_;
  double keyword_bonus_;
  std::vector<std::vector<double>> log_prob_;  // [prev][next]
};

std::unique_ptr<LanguageModel> toy_bigram_model(std::span<const Document> corpus,
                                                double smoothing,
                                                double keyword_bonus);

}  // namespace k2t::decoding
