#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "k2t/corpus/types.hpp"
#include "k2t/embedding/provider.hpp"
#include "k2t/extraction/scoring.hpp"
#include "k2t/extraction/selection.hpp"
#include "k2t/extraction/textrank.hpp"

namespace k2t::extraction {

enum class ExtractorKind { MeanCosine, TextRank, Yake };

/// "mean-cosine", "textrank", "yake".
std::string_view to_string(ExtractorKind kind);
ExtractorKind parse_extractor_kind(std::string_view name);

struct ExtractorConfig {
  ExtractorKind kind = ExtractorKind::MeanCosine;
  SelectionPolicy policy = SelectionPolicy::defaults();
  TextRankOptions textrank;
  std::size_t yake_window = 3;
};

/// Word vectors aligned to the whitespace words of `text`.
///
/// The provider's tokens are merged with accumulate_subwords; a whitespace
/// word the tokenizer split further (e.g. trailing danda) gets the mean of
/// its pieces. When the provider truncated the input, words past the cut are
/// dropped. Throws EmbeddingError if tokens and words cannot be aligned.
std::vector<embedding::WordEmbedding> embed_words(
    std::string_view text, const embedding::EmbeddingProvider& provider);

struct Extraction {
  KeywordSet keywords;
  std::vector<ScoredWord> scored;
  bool truncated = false;
};

/// Tokenize, score with the configured method, select. `provider` may be
/// null for YAKE. Errors are rethrown with the document id in the message.
Extraction extract_scored(const Document& doc, const ExtractorConfig& config,
                          const embedding::EmbeddingProvider* provider);

KeywordSet extract(const Document& doc, ExtractorKind kind,
                   const embedding::EmbeddingProvider* provider,
                   const SelectionPolicy& policy = SelectionPolicy::defaults());

}  // namespace k2t::extraction
