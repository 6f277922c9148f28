#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "k2t/corpus/types.hpp"
#include "k2t/decoding/language_model.hpp"

namespace k2t::decoding {

enum class Strategy { Greedy, Beam, TopK, TopP, TopPTopK };

/// "greedy", "beam", "top-k", "top-p", "top-p-top-k".
std::string_view to_string(Strategy s);
Strategy parse_strategy(std::string_view name);

/// How a forced keyword counts as present in the output.
enum class ConstraintMatch { Substring, TokenSequence };

/// "substring", "token-sequence".
std::string_view to_string(ConstraintMatch m);
ConstraintMatch parse_constraint_match(std::string_view name);

/// Defaults are the reference generation settings:
/// beam width 2, top-k 50, top-p 0.95, repetition penalty 2.5, length
/// penalty 1.0, at most 64 tokens.
struct DecoderConfig {
  Strategy strategy = Strategy::Beam;
  std::size_t beam_width = 2;
  std::size_t top_k = 50;
  double top_p = 0.95;
  double temperature = 1.0;
  double repetition_penalty = 2.5;
  double length_penalty = 1.0;
  std::size_t max_length = 64;
  std::uint64_t seed = 0;
  ConstraintMatch constraint_match = ConstraintMatch::Substring;

  /// Throws InvalidArgument on out-of-range fields.
  void validate() const;
};

struct Hypothesis {
  std::vector<TokenId> ids;
  double logprob = 0.0;
  bool finished = false;
  std::vector<std::size_t> satisfied_constraints;
};

struct GenerationResult {
  std::string text;
  std::vector<TokenId> ids;
  /// logprob / len^length_penalty of the returned sequence.
  double score = 0.0;
  /// Conditioning (or forced) keywords that do not occur in `text`.
  KeywordSet missing_keywords;
};

}  // namespace k2t::decoding
