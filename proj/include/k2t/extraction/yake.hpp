#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "k2t/extraction/scoring.hpp"

namespace k2t::extraction {

struct YakeWord {
  std::string word;
  std::size_t position = 0;
  std::size_t sentence = 0;
};

/// Whitespace words of a cleaned text, tagged with sentence indices. A word
/// ending in danda, double danda, `?` or `!` closes its sentence.
std::vector<YakeWord> yake_words(std::string_view text);

/// Single-term statistical features of one unique word.
struct YakeTermFeatures {
  std::string word;
  std::size_t tf = 0;
  double casing = 0.0;      // constant 0 for a unicameral script
  double position = 0.0;    // ln(ln(3 + median sentence index))
  double frequency = 0.0;   // tf / (mean tf + stddev tf)
  double relatedness = 0.0; // 1 + (DL + DR) * tf / max tf
  double dispersion = 0.0;  // sentences containing the word / sentences
  double weight = 0.0;      // S(t); lower is more important
};

/// Features for every unique word in first-occurrence order.
/// Throws InvalidArgument on empty input or window == 0.
std::vector<YakeTermFeatures> yake_features(std::span<const YakeWord> words,
                                            std::size_t window = 3);

/// Per-occurrence scores 1 / (1 + S(t)), so higher is better.
std::vector<ScoredWord> score_yake(std::span<const YakeWord> words,
                                   std::size_t window = 3);

}  // namespace k2t::extraction
