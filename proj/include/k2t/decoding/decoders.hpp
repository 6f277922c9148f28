#pragma once

#include "k2t/corpus/types.hpp"
#include "k2t/decoding/config.hpp"
#include "k2t/decoding/language_model.hpp"

namespace k2t::decoding {

/// Argmax of the transformed distribution (ties to the lower id) until eos
/// or max_length tokens.
GenerationResult decode_greedy(const LanguageModel& model,
                               const KeywordSet& keywords,
                               const DecoderConfig& config);

/// Beam search over cumulative transformed log-probabilities. Each step keeps
/// the beam_width best expansions of all live beams; expansions ending in
/// eos move to the finished bank. Live beams at max_length are finished as
/// is. The winner maximizes logprob / len^length_penalty.
GenerationResult decode_beam(const LanguageModel& model,
                             const KeywordSet& keywords,
                             const DecoderConfig& config);

/// Ancestral sampling from the filtered distribution of config.strategy
/// (TopK, TopP or TopPTopK), reproducible from config.seed.
GenerationResult decode_sample(const LanguageModel& model,
                               const KeywordSet& keywords,
                               const DecoderConfig& config);

/// Dispatches on config.strategy.
GenerationResult decode(const LanguageModel& model, const KeywordSet& keywords,
                        const DecoderConfig& config);

/// Two-stage forced-keyword generation.
///
/// Stage 1 runs decode_beam. If every forced keyword already occurs in its
/// text that result is returned unchanged. Otherwise stage 2 reruns a banked
/// constrained beam search with all forced keywords as token-sequence
/// constraints: every live beam proposes its best tokens plus the next token
/// of each unmet constraint, and beam slots are shared out across buckets of
/// equal constraint progress so partial progress is never crowded out. eos
/// is only allowed once every constraint is met.
///
/// Throws ConstraintUnsatisfiable (listing the keywords stage 1 missed) when
/// no finished hypothesis contains all forced keywords, and InvalidArgument
/// when a forced keyword cannot be encoded by the vocabulary.
GenerationResult decode_constrained(const LanguageModel& model,
                                    const KeywordSet& keywords,
                                    const KeywordSet& forced,
                                    const DecoderConfig& config);

/// Forced keywords absent from `text` under the given match rule.
KeywordSet missing_keywords(const LanguageModel& model, const KeywordSet& forced,
                            const GenerationResult& result, ConstraintMatch match);

}  // namespace k2t::decoding
