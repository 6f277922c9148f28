#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace k2t::embedding {

/// One tokenizer piece and its vector. Continuation pieces carry the
/// scheme's marker prefix (`##` by default).
struct TokenEmbedding {
  std::string token;
  std::vector<double> vector;
};

/// A whole word after sub-word pieces were merged. `position` is the
/// zero-based index among the merged words of one text.
struct WordEmbedding {
  std::string word;
  std::vector<double> vector;
  std::size_t position = 0;
};

struct MeanEmbedding {
  std::vector<double> vector;
};

/// How a provider marks continuation pieces and which tokens are
/// structural (sequence delimiters, padding) rather than text.
struct SubwordScheme {
  std::string continuation_marker = "##";
  std::vector<std::string> special_tokens = {"[CLS]", "[SEP]", "[PAD]",
                                             "[UNK]", "<s>",   "</s>",
                                             "<pad>"};

  bool is_special(const std::string& token) const;
  bool is_continuation(const std::string& token) const;
};

/// Drops special tokens, then merges every run [t, ##a, ##b, ...] into one
/// word "tab" whose vector is the mean of the run's vectors.
/// Throws EmbeddingError on a leading continuation piece, a dimension
/// mismatch, an empty vector or a non-finite entry.
std::vector<WordEmbedding> accumulate_subwords(
    std::span<const TokenEmbedding> tokens, const SubwordScheme& scheme = {});

/// Entrywise mean. Throws EmbeddingError on an empty list or mixed dimensions.
MeanEmbedding mean_embedding(std::span<const WordEmbedding> words);

}  // namespace k2t::embedding
