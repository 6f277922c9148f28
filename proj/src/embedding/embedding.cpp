#include "k2t/embedding/embedding.hpp"

#include <algorithm>
#include <cmath>

#include "k2t/error.hpp"
#include "k2t/simd/kernels.hpp"

namespace k2t::embedding {

bool SubwordScheme::is_special(const std::string& token) const {
  return std::find(special_tokens.begin(), special_tokens.end(), token) !=
         special_tokens.end();
}

bool SubwordScheme::is_continuation(const std::string& token) const {
  return !continuation_marker.empty() &&
         token.size() > continuation_marker.size() &&
         token.compare(0, continuation_marker.size(), continuation_marker) == 0;
}

std::vector<WordEmbedding> accumulate_subwords(
    std::span<const TokenEmbedding> tokens, const SubwordScheme& scheme) {
  std::vector<WordEmbedding> words;
  std::size_t dim = 0;
  std::size_t run = 0;  // pieces in the word being built

  const auto finish = [&] {
    if (run > 1) simd::scale(words.back().vector, 1.0 / static_cast<double>(run));
    run = 0;
  };

  for (const auto& t : tokens) {
    if (scheme.is_special(t.token)) continue;
    if (t.vector.empty()) {
      throw EmbeddingError("token '" + t.token + "' has an empty vector");
    }
    if (dim == 0) dim = t.vector.size();
    if (t.vector.size() != dim) {
      throw EmbeddingError("token '" + t.token + "' has dimension " +
                           std::to_string(t.vector.size()) + ", expected " +
                           std::to_string(dim));
    }
    if (!std::all_of(t.vector.begin(), t.vector.end(),
                     [](double v) { return std::isfinite(v); })) {
      throw EmbeddingError("token '" + t.token + "' has a non-finite entry");
    }

    if (scheme.is_continuation(t.token)) {
      if (words.empty()) {
        throw EmbeddingError("continuation token '" + t.token +
                             "' has no preceding word");
      }
      words.back().word += t.token.substr(scheme.continuation_marker.size());
      simd::add_into(words.back().vector, t.vector);
      ++run;
      continue;
    }

    finish();
    words.push_back({t.token, t.vector, words.size()});
    run = 1;
  }
  finish();
  return words;
}

MeanEmbedding mean_embedding(std::span<const WordEmbedding> words) {
  if (words.empty()) throw EmbeddingError("mean of an empty word list");
  MeanEmbedding mean{std::vector<double>(words.front().vector.size(), 0.0)};
  for (const auto& w : words) {
    if (w.vector.size() != mean.vector.size()) {
      throw EmbeddingError("word '" + w.word + "' has mismatched dimension");
    }
    simd::add_into(mean.vector, w.vector);
  }
  simd::scale(mean.vector, 1.0 / static_cast<double>(words.size()));
  return mean;
}

}  // namespace k2t::embedding
