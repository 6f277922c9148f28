#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "k2t/embedding/embedding.hpp"

namespace k2t::extraction {

/// Importance of one word occurrence; higher is better for every method.
struct ScoredWord {
  std::string word;
  double score = 0.0;
  std::size_t position = 0;
};

/// score(w) = cosine(w, mean of all words). One entry per input occurrence,
/// in input order. Throws EmbeddingError on a zero-norm word (the message
/// names it) or a zero-norm mean.
std::vector<ScoredWord> score_mean_cosine(
    std::span<const embedding::WordEmbedding> words);

}  // namespace k2t::extraction
