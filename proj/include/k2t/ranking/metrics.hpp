#pragma once

// Ranking metrics for keyword extraction against gold keyword sets.
//
// Keywords match when equal after NFC normalization and trimming. Gold is an
// unordered set with binary relevance. Predictions and gold are paired by id;
// every prediction id must have exactly one gold record and vice versa.
// A query with an empty prediction list scores 0.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "k2t/corpus/types.hpp"

namespace k2t::ranking {

struct RankedPrediction {
  std::string id;
  std::vector<std::string> ranked_keywords;  // best first
};

struct GoldKeywords {
  std::string id;
  std::vector<std::string> keywords;
};

/// Mean over queries of 1 / rank of the first relevant prediction.
double mrr(std::span<const RankedPrediction> preds,
           std::span<const GoldKeywords> gold);

/// Mean over queries of (sum of precision@k at relevant ranks k) /
/// min(|gold|, |ranked|).
double mean_average_precision(std::span<const RankedPrediction> preds,
                              std::span<const GoldKeywords> gold);

/// Mean over queries of DCG / IDCG with gains 1 / log2(k + 1); the ideal list
/// holds min(|gold|, |ranked|) relevant items.
double ndcg(std::span<const RankedPrediction> preds,
            std::span<const GoldKeywords> gold);

/// Fraction of aligned pairs whose keyword sets are equal after
/// normalization. Throws InvalidArgument on empty input or length mismatch.
double exact_match_rate(std::span<const KeywordSet> preds,
                        std::span<const KeywordSet> gold);

struct ExtractionReport {
  double mrr = 0.0;
  double map = 0.0;
  double ndcg = 0.0;
  double exact_match = 0.0;
  std::size_t n_queries = 0;

  /// {"mrr":..,"map":..,"ndcg":..,"exact_match":..,"n_queries":..}
  std::string to_json() const;
};

/// All four metrics over prediction and gold keyword files. Exact match
/// compares each prediction with the gold record of the same id.
ExtractionReport evaluate_extraction(std::span<const KeywordRecord> preds,
                                     std::span<const KeywordRecord> gold);

}  // namespace k2t::ranking
