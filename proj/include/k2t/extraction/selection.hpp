#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "k2t/corpus/types.hpp"
#include "k2t/extraction/scoring.hpp"

namespace k2t::extraction {

struct SelectionTier {
  std::size_t min_words = 1;
  std::size_t max_words = std::numeric_limits<std::size_t>::max();  // inclusive
  double fraction = 1.0;
};

/// Length-adaptive keyword budget: the fraction of a text's words to keep
/// depends on how many words it has.
struct SelectionPolicy {
  std::vector<SelectionTier> tiers;
  std::size_t min_keywords = 1;

  /// >= 10 words: 60 %, 5-9 words: 70 %, 1-4 words: 80 %.
  static SelectionPolicy defaults();

  /// Throws InvalidArgument unless the tiers cover every positive word count
  /// exactly once and every fraction lies in (0, 1].
  void validate() const;

  double fraction_for(std::size_t n_words) const;

  /// max(min_keywords, round_half_up(n_words * fraction)).
  std::size_t keyword_count(std::size_t n_words) const;
};

/// floor(x + 1/2), tolerant of the representation error in products such
/// as 5 * 0.7.
std::size_t round_half_up(double x);

/// Takes the keyword_count(n) best distinct surface words. Ranking is by
/// score, ties to the earlier position; a repeated word keeps its best
/// occurrence. The result is stored best-first.
KeywordSet select_keywords(std::span<const ScoredWord> scored,
                           const SelectionPolicy& policy);

}  // namespace k2t::extraction
