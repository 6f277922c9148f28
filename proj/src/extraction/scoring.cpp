#include "k2t/extraction/scoring.hpp"

#include <cmath>

#include "k2t/error.hpp"
#include "k2t/simd/kernels.hpp"

namespace k2t::extraction {

std::vector<ScoredWord> score_mean_cosine(
    std::span<const embedding::WordEmbedding> words) {
  if (words.empty()) throw InvalidArgument("score_mean_cosine: no words");
  const auto mean = embedding::mean_embedding(words);
  const double mean_norm = simd::norm(mean.vector);
  if (mean_norm == 0.0) throw EmbeddingError("mean embedding has zero norm");

  std::vector<ScoredWord> scored;
  scored.reserve(words.size());
  for (const auto& w : words) {
    const double n = simd::norm(w.vector);
    if (n == 0.0) {
      throw EmbeddingError("word '" + w.word + "' has a zero-norm embedding");
    }
    scored.push_back({w.word, simd::dot(w.vector, mean.vector) / (n * mean_norm),
                      w.position});
  }
  return scored;
}

}  // namespace k2t::extraction
