#pragma once

#include <cstdint>
#include <span>
#include <string_view>

#include "k2t/corpus/types.hpp"

namespace k2t::pipeline {

/// Train/validation/test fractions. The default is the exact 20:5:1 ratio.
struct SplitSpec {
  double train = 20.0 / 26.0;
  double validation = 5.0 / 26.0;
  double test = 1.0 / 26.0;
  std::uint64_t seed = 0;

  /// Throws InvalidArgument unless every fraction is >= 0 and they sum to
  /// 1 within 1e-12.
  void validate() const;

  /// "0.7692,0.1923,0.0385" (fractions) or "20:5:1" (a ratio, normalized).
  static SplitSpec parse(std::string_view text, std::uint64_t seed = 0);
};

/// Seeded Fisher-Yates shuffle, then contiguous slices: validation and test
/// get floor(n * fraction) documents, train gets the rest. Throws
/// InvalidArgument on duplicate ids.
CorpusSplit split_corpus(std::span<const Document> docs, const SplitSpec& spec);

}  // namespace k2t::pipeline
