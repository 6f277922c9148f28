#pragma once

// Generation-quality metrics. Texts are NFC-normalized and split on
// whitespace; all scores are fractions (multiply by 100 for percentages).

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "k2t/embedding/embedding.hpp"

namespace k2t::embedding {
class EmbeddingProvider;
}

namespace k2t::nlg {

struct TextPair {
  std::string reference;
  std::string candidate;
};

using Tokens = std::vector<std::string>;

/// Corpus BLEU: clipped n-gram matches and candidate n-gram totals pooled
/// over the batch for n = 1..max_n, geometric mean of the pooled precisions,
/// brevity penalty exp(1 - r/c) when c < r. No smoothing: any zero
/// precision gives 0. max_n must be in 1..4.
double bleu(std::span<const TextPair> batch, int max_n = 4);

/// Single-pair BLEU with add-one smoothing on the n >= 2 precisions.
/// For debugging individual outputs.
double sentence_bleu(const TextPair& pair, int max_n = 4);

/// Batch mean of per-pair unigram-overlap F1.
double rouge1(std::span<const TextPair> batch);
/// Batch mean of per-pair LCS F1.
double rougeL(std::span<const TextPair> batch);

/// Word-level edit operations of one canonical Levenshtein alignment: the
/// fewest edits, and among those the most matches. Remaining ties go to the
/// diagonal, then deletion, then insertion.
struct Alignment {
  std::size_t hits = 0;
  std::size_t substitutions = 0;
  std::size_t deletions = 0;
  std::size_t insertions = 0;

  std::size_t edits() const { return substitutions + deletions + insertions; }
};

Alignment align_words(const Tokens& reference, const Tokens& candidate);

std::size_t longest_common_subsequence(const Tokens& a, const Tokens& b);

/// Total edits / total reference words. Can exceed 1. Throws
/// InvalidArgument on an empty reference.
double wer(std::span<const TextPair> batch);

/// 1 - (C / N_ref) * (C / N_cand) with C, N_ref, N_cand summed over the
/// batch and C taken from align_words. 1 when the batch has no candidate
/// words.
double wil(std::span<const TextPair> batch);

struct BertScore {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

/// Greedy cosine matching without idf weighting or baseline rescaling.
/// Throws EmbeddingError on empty input or mismatched dimensions.
BertScore bertscore(std::span<const embedding::WordEmbedding> reference,
                    std::span<const embedding::WordEmbedding> candidate);

/// Batch mean of per-pair BERTScore using word vectors from `provider`.
/// An empty candidate scores (0, 0, 0).
BertScore bertscore(std::span<const TextPair> batch,
                    const embedding::EmbeddingProvider& provider);

struct GenerationReport {
  double bleu1 = 0.0, bleu2 = 0.0, bleu3 = 0.0, bleu4 = 0.0;
  double rouge1 = 0.0, rougeL = 0.0;
  double wer = 0.0, wil = 0.0;
  bool has_bertscore = false;
  BertScore bertscore;
  std::size_t n_pairs = 0;

  /// Fixed key order: bleu1..bleu4, rouge1, rougeL, wer, wil, then
  /// bertscore_precision/recall/f1 when computed, then n_pairs.
  std::string to_json() const;
};

/// Every metric over the batch; BERTScore only when a provider is given.
GenerationReport evaluate_generation(std::span<const TextPair> batch,
                                     const embedding::EmbeddingProvider* provider);

}  // namespace k2t::nlg
