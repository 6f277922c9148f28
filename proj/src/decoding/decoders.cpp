#include "k2t/decoding/decoders.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "k2t/decoding/transforms.hpp"
#include "k2t/error.hpp"
#include "k2t/rng.hpp"

namespace k2t::decoding {
namespace {

std::vector<TokenId> with_bos(const Vocabulary& vocab, const std::vector<TokenId>& ids) {
  std::vector<TokenId> prefix;
  prefix.reserve(ids.size() + 1);
  prefix.push_back(vocab.bos_id());
  prefix.insert(prefix.end(), ids.begin(), ids.end());
  return prefix;
}

std::vector<double> step_log_probs(const LanguageModel& model,
                                   const std::vector<TokenId>& ids,
                                   const KeywordSet& keywords,
                                   const DecoderConfig& config) {
  return log_softmax(
      transformed_logits(model, with_bos(model.vocabulary(), ids), keywords, config));
}

double ranking_score(double logprob, std::size_t length, double alpha) {
  return logprob / std::pow(static_cast<double>(std::max<std::size_t>(length, 1)), alpha);
}

GenerationResult make_result(const LanguageModel& model, const KeywordSet& keywords,
                             std::vector<TokenId> ids, double logprob,
                             const DecoderConfig& config) {
  GenerationResult r;
  r.text = model.vocabulary().decode(ids);
  r.score = ranking_score(logprob, ids.size(), config.length_penalty);
  r.ids = std::move(ids);
  r.missing_keywords = missing_keywords(model, keywords, r, ConstraintMatch::Substring);
  return r;
}

TokenId argmax(const std::vector<double>& v) {
  return static_cast<TokenId>(std::max_element(v.begin(), v.end()) - v.begin());
}

}  // namespace

KeywordSet missing_keywords(const LanguageModel& model, const KeywordSet& forced,
                            const GenerationResult& result, ConstraintMatch match) {
  std::vector<std::string> missing;
  for (const auto& k : forced) {
    bool present = false;
    if (match == ConstraintMatch::Substring) {
      present = result.text.find(k) != std::string::npos;
    } else {
      std::vector<TokenId> needle;
      try {
        needle = model.vocabulary().encode(k);
      } catch (const InvalidArgument&) {
      }
      present = !needle.empty() &&
                std::search(result.ids.begin(), result.ids.end(), needle.begin(),
                            needle.end()) != result.ids.end();
    }
    if (!present) missing.push_back(k);
  }
  return KeywordSet(std::move(missing));
}

GenerationResult decode_greedy(const LanguageModel& model, const KeywordSet& keywords,
                               const DecoderConfig& config) {
  config.validate();
  const TokenId eos = model.vocabulary().eos_id();
  std::vector<TokenId> ids;
  double logprob = 0.0;
  while (ids.size() < config.max_length) {
    const auto lp = step_log_probs(model, ids, keywords, config);
    const TokenId next = argmax(lp);
    logprob += lp[static_cast<std::size_t>(next)];
    ids.push_back(next);
    if (next == eos) break;
  }
  return make_result(model, keywords, std::move(ids), logprob, config);
}

GenerationResult decode_beam(const LanguageModel& model, const KeywordSet& keywords,
                             const DecoderConfig& config) {
  config.validate();
  const TokenId eos = model.vocabulary().eos_id();

  struct Candidate {
    std::size_t beam;
    TokenId token;
    double logprob;
  };

  std::vector<Hypothesis> live{Hypothesis{}};
  std::vector<Hypothesis> finished;
  for (std::size_t step = 0; step < config.max_length && !live.empty(); ++step) {
    std::vector<Candidate> candidates;
    for (std::size_t b = 0; b < live.size(); ++b) {
      const auto lp = step_log_probs(model, live[b].ids, keywords, config);
      for (std::size_t t = 0; t < lp.size(); ++t) {
        if (std::isinf(lp[t])) continue;
        candidates.push_back({b, static_cast<TokenId>(t), live[b].logprob + lp[t]});
      }
    }
    const std::size_t keep = std::min(config.beam_width, candidates.size());
    std::partial_sort(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(keep),
                      candidates.end(), [](const Candidate& a, const Candidate& b) {
                        if (a.logprob != b.logprob) return a.logprob > b.logprob;
                        if (a.beam != b.beam) return a.beam < b.beam;
                        return a.token < b.token;
                      });
    std::vector<Hypothesis> next_live;
    for (std::size_t i = 0; i < keep; ++i) {
      const auto& c = candidates[i];
      Hypothesis h;
      h.ids = live[c.beam].ids;
      h.ids.push_back(c.token);
      h.logprob = c.logprob;
      h.finished = c.token == eos;
      (h.finished ? finished : next_live).push_back(std::move(h));
    }
    live = std::move(next_live);
  }
  for (auto& h : live) finished.push_back(std::move(h));

  const Hypothesis* best = nullptr;
  double best_score = -std::numeric_limits<double>::infinity();
  for (const auto& h : finished) {
    const double s = ranking_score(h.logprob, h.ids.size(), config.length_penalty);
    if (best == nullptr || s > best_score) {
      best = &h;
      best_score = s;
    }
  }
  return make_result(model, keywords, best->ids, best->logprob, config);
}

GenerationResult decode_sample(const LanguageModel& model, const KeywordSet& keywords,
                               const DecoderConfig& config) {
  config.validate();
  const TokenId eos = model.vocabulary().eos_id();
  Rng rng(config.seed);
  std::vector<TokenId> ids;
  double logprob = 0.0;
  while (ids.size() < config.max_length) {
    const auto lp = step_log_probs(model, ids, keywords, config);
    std::vector<double> probs(lp.size());
    std::transform(lp.begin(), lp.end(), probs.begin(), [](double x) { return std::exp(x); });
    switch (config.strategy) {
      case Strategy::TopK: probs = filter_top_k(probs, config.top_k); break;
      case Strategy::TopP: probs = filter_top_p(probs, config.top_p); break;
      case Strategy::TopPTopK:
        probs = filter_top_p_top_k(probs, config.top_p, config.top_k);
        break;
      default:
        throw InvalidArgument("decode_sample needs a sampling strategy, got " +
                              std::string(to_string(config.strategy)));
    }
    const double u = rng.uniform();
    double cumulative = 0.0;
    TokenId next = -1;
    for (std::size_t t = 0; t < probs.size(); ++t) {
      if (probs[t] <= 0.0) continue;
      next = static_cast<TokenId>(t);  // last positive token absorbs rounding
      cumulative += probs[t];
      if (u < cumulative) break;
    }
    logprob += lp[static_cast<std::size_t>(next)];
    ids.push_back(next);
    if (next == eos) break;
  }
  return make_result(model, keywords, std::move(ids), logprob, config);
}

GenerationResult decode(const LanguageModel& model, const KeywordSet& keywords,
                        const DecoderConfig& config) {
  switch (config.strategy) {
    case Strategy::Greedy: return decode_greedy(model, keywords, config);
    case Strategy::Beam: return decode_beam(model, keywords, config);
    default: return decode_sample(model, keywords, config);
  }
}

}  // namespace k2t::decoding
