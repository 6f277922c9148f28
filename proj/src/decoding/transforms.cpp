#include "k2t/decoding/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <unordered_set>

#include "k2t/error.hpp"

namespace k2t::decoding {
namespace {

/// Token ids sorted by probability descending, ties to the lower id.
std::vector<std::size_t> by_probability(std::span<const double> probs) {
  std::vector<std::size_t> order(probs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return probs[a] > probs[b]; });
  return order;
}

std::vector<double> keep_and_renormalize(std::span<const double> probs,
                                         const std::vector<bool>& keep) {
  std::vector<double> out(probs.size(), 0.0);
  double total = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (keep[i]) total += probs[i];
  }
  if (total <= 0.0) throw InvalidArgument("filter removed all probability mass");
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (keep[i]) out[i] = probs[i] / total;
  }
  return out;
}

std::vector<bool> top_k_mask(std::span<const double> probs, std::size_t k) {
  if (k == 0) throw InvalidArgument("top_k must be >= 1");
  std::vector<bool> keep(probs.size(), false);
  const auto order = by_probability(probs);
  for (std::size_t i = 0; i < std::min(k, order.size()); ++i) keep[order[i]] = true;
  return keep;
}

std::vector<bool> top_p_mask(std::span<const double> probs, double p) {
  if (!(p > 0.0 && p <= 1.0)) throw InvalidArgument("top_p must be in (0, 1]");
  std::vector<bool> keep(probs.size(), p >= 1.0);
  if (p >= 1.0) return keep;
  double mass = 0.0;
  for (std::size_t id : by_probability(probs)) {
    keep[id] = true;
    mass += probs[id];
    if (mass >= p) break;
  }
  return keep;
}

}  // namespace

std::string_view to_string(Strategy s) {
  switch (s) {
    case Strategy::Greedy: return "greedy";
    case Strategy::Beam: return "beam";
    case Strategy::TopK: return "top-k";
    case Strategy::TopP: return "top-p";
    case Strategy::TopPTopK: return "top-p-top-k";
  }
  return "unknown";
}

Strategy parse_strategy(std::string_view name) {
  for (Strategy s : {Strategy::Greedy, Strategy::Beam, Strategy::TopK, Strategy::TopP,
                     Strategy::TopPTopK}) {
    if (to_string(s) == name) return s;
  }
  throw InvalidArgument("unknown decoding strategy: " + std::string(name));
}

std::string_view to_string(ConstraintMatch m) {
  return m == ConstraintMatch::Substring ? "substring" : "token-sequence";
}

ConstraintMatch parse_constraint_match(std::string_view name) {
  if (name == "substring") return ConstraintMatch::Substring;
  if (name == "token-sequence") return ConstraintMatch::TokenSequence;
  throw InvalidArgument("unknown constraint match: " + std::string(name));
}

void DecoderConfig::validate() const {
  if (beam_width < 1) throw InvalidArgument("beam_width must be >= 1");
  if (top_k < 1) throw InvalidArgument("top_k must be >= 1");
  if (!(top_p > 0.0 && top_p <= 1.0)) throw InvalidArgument("top_p must be in (0, 1]");
  if (!(temperature > 0.0)) throw InvalidArgument("temperature must be > 0");
  if (!(repetition_penalty >= 1.0)) {
    throw InvalidArgument("repetition_penalty must be >= 1");
  }
  if (!std::isfinite(length_penalty)) throw InvalidArgument("length_penalty must be finite");
  if (max_length < 1) throw InvalidArgument("max_length must be >= 1");
}

std::vector<double> apply_temperature(std::span<const double> logits, double temperature) {
  if (!(temperature > 0.0)) throw InvalidArgument("temperature must be > 0");
  std::vector<double> out(logits.begin(), logits.end());
  if (temperature == 1.0) return out;
  for (auto& x : out) x /= temperature;
  return out;
}

std::vector<double> apply_repetition_penalty(std::span<const double> logits,
                                             std::span<const TokenId> generated,
                                             double penalty) {
  if (!(penalty >= 1.0)) throw InvalidArgument("repetition penalty must be >= 1");
  std::vector<double> out(logits.begin(), logits.end());
  if (penalty == 1.0) return out;
  std::unordered_set<TokenId> seen(generated.begin(), generated.end());
  for (TokenId id : seen) {
    if (id < 0 || static_cast<std::size_t>(id) >= out.size()) continue;
    auto& x = out[static_cast<std::size_t>(id)];
    x = x > 0.0 ? x / penalty : x * penalty;
  }
  return out;
}

std::vector<double> log_softmax(std::span<const double> logits) {
  const double mx = *std::max_element(logits.begin(), logits.end());
  double sum = 0.0;
  for (double x : logits) sum += std::exp(x - mx);
  const double lse = mx + std::log(sum);
  std::vector<double> out(logits.size());
  for (std::size_t i = 0; i < logits.size(); ++i) out[i] = logits[i] - lse;
  return out;
}

std::vector<double> softmax(std::span<const double> logits) {
  auto out = log_softmax(logits);
  for (auto& x : out) x = std::exp(x);
  return out;
}

std::vector<double> filter_top_k(std::span<const double> probs, std::size_t k) {
  return keep_and_renormalize(probs, top_k_mask(probs, k));
}

std::vector<double> filter_top_p(std::span<const double> probs, double p) {
  if (p == 1.0) return {probs.begin(), probs.end()};
  return keep_and_renormalize(probs, top_p_mask(probs, p));
}

std::vector<double> filter_top_p_top_k(std::span<const double> probs, double p,
                                       std::size_t k) {
  auto keep = top_k_mask(probs, k);
  const auto nucleus = top_p_mask(probs, p);
  for (std::size_t i = 0; i < keep.size(); ++i) keep[i] = keep[i] && nucleus[i];
  return keep_and_renormalize(probs, keep);
}

std::vector<double> transformed_logits(const LanguageModel& model,
                                       std::span<const TokenId> prefix,
                                       const KeywordSet& keywords,
                                       const DecoderConfig& config) {
  const Vocabulary& vocab = model.vocabulary();
  auto logits = model.next_logits(prefix, keywords);
  if (logits.size() != vocab.size()) {
    throw ProtocolError("model returned " + std::to_string(logits.size()) +
                        " logits for a vocabulary of " + std::to_string(vocab.size()));
  }
  for (double x : logits) {
    if (!std::isfinite(x)) throw ProtocolError("model returned a non-finite logit");
  }
  logits = apply_temperature(logits, config.temperature);
  logits = apply_repetition_penalty(logits, prefix.subspan(1), config.repetition_penalty);
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  logits[static_cast<std::size_t>(vocab.pad_id())] = kNegInf;
  logits[static_cast<std::size_t>(vocab.bos_id())] = kNegInf;
  return logits;
}

}  // namespace k2t::decoding
