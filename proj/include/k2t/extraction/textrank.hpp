#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "k2t/embedding/embedding.hpp"
#include "k2t/extraction/scoring.hpp"

namespace k2t::extraction {

struct TextRankOptions {
  double damping = 0.85;
  double tolerance = 1e-6;
  std::size_t max_iterations = 100;
};

struct TextRankResult {
  /// One entry per input occurrence, carrying its word's rank.
  std::vector<ScoredWord> scores;
  /// Unique words in first-occurrence order and their ranks.
  std::vector<std::string> nodes;
  std::vector<double> ranks;
  /// Set when every edge weight was zero and uniform ranks were returned.
  bool uniform_fallback = false;
  std::size_t iterations = 0;
  bool converged = false;
};

/// Weighted PageRank over the complete graph of unique words.
///
/// A word's node vector is the mean of its occurrence vectors; edge weight is
/// max(0, cosine). Rows of nodes without positive out-weight jump uniformly.
/// Iterates r <- (1-d)/N + d * P^T r from r = 1/N until the L1 change is below
/// the tolerance or max_iterations is hit.
TextRankResult score_textrank(std::span<const embedding::WordEmbedding> words,
                              const TextRankOptions& options = {});

}  // namespace k2t::extraction
