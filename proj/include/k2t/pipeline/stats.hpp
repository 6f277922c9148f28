#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "k2t/corpus/types.hpp"

namespace k2t::pipeline {

/// Dataset summary; words are whitespace words of the pair text.
struct CorpusStats {
  std::size_t n_texts = 0;
  std::size_t max_keywords_per_text = 0;
  double mean_keywords_per_text = 0.0;
  std::size_t max_words_per_text = 0;
  double mean_words_per_text = 0.0;
  std::size_t total_words = 0;
  std::size_t total_keywords = 0;
  /// total_keywords / total_words
  double keyword_to_text_length_ratio = 0.0;
  /// Most frequent keywords, by count descending then bytewise ascending.
  std::vector<std::pair<std::string, std::size_t>> top_keywords;

  std::string to_json() const;
};

/// Throws InvalidArgument on an empty pair list.
CorpusStats compute_stats(std::span<const KeywordTextPair> pairs, std::size_t top_n = 5);

}  // namespace k2t::pipeline
