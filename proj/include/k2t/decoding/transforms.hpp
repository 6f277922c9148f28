#pragma once

// Logit and probability transforms. The decoders apply them in one fixed
// order: temperature, repetition penalty, masking of pad/bos, softmax, then
// the top-k / top-p filters.

#include <cstddef>
#include <span>
#include <vector>

#include "k2t/decoding/config.hpp"
#include "k2t/decoding/language_model.hpp"

namespace k2t::decoding {

/// logits / temperature. Throws InvalidArgument when temperature <= 0.
std::vector<double> apply_temperature(std::span<const double> logits,
                                      double temperature);

/// For every distinct id in `generated`: positive logits are divided by the
/// penalty, non-positive ones multiplied. Throws InvalidArgument if penalty < 1.
std::vector<double> apply_repetition_penalty(std::span<const double> logits,
                                             std::span<const TokenId> generated,
                                             double penalty);

std::vector<double> softmax(std::span<const double> logits);
std::vector<double> log_softmax(std::span<const double> logits);

/// Keeps the k most probable tokens (ties to the lower id), renormalizes.
/// k larger than the vocabulary keeps everything. Throws if k == 0.
std::vector<double> filter_top_k(std::span<const double> probs, std::size_t k);

/// Keeps the shortest most-probable prefix whose mass reaches p, including
/// the token that crosses p; always at least one token. p = 1 is identity.
/// Throws InvalidArgument unless p is in (0, 1].
std::vector<double> filter_top_p(std::span<const double> probs, double p);

/// Survivors of both filters, renormalized.
std::vector<double> filter_top_p_top_k(std::span<const double> probs, double p,
                                       std::size_t k);

/// Model logits after temperature, repetition penalty over `generated`, and
/// masking of pad/bos to -inf. `prefix` is bos + generated.
std::vector<double> transformed_logits(const LanguageModel& model,
                                       std::span<const TokenId> prefix,
                                       const KeywordSet& keywords,
                                       const DecoderConfig& config);

}  // namespace k2t::decoding
