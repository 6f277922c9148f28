#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

#include "k2t/decoding/decoders.hpp"
#include "k2t/decoding/transforms.hpp"
#include "k2t/error.hpp"

namespace k2t::decoding {
namespace {

using Sequence = std::vector<TokenId>;

/// Where a hypothesis stands against a set of token-sequence constraints.
struct ConstraintState {
  std::vector<bool> satisfied;
  std::vector<std::size_t> partial;  // matched prefix length of unmet ones
  std::size_t progress = 0;          // met tokens + best partial
  bool all_met = false;
};

bool contains(const Sequence& ids, const Sequence& needle) {
  return std::search(ids.begin(), ids.end(), needle.begin(), needle.end()) != ids.end();
}

/// Longest l < |c| such that the last l ids equal the first l of c.
std::size_t partial_match(const Sequence& ids, const Sequence& c) {
  for (std::size_t l = std::min(ids.size(), c.size() - 1); l > 0; --l) {
    if (std::equal(ids.end() - static_cast<std::ptrdiff_t>(l), ids.end(), c.begin())) {
      return l;
    }
  }
  return 0;
}

ConstraintState evaluate(const Sequence& ids, const std::vector<Sequence>& constraints) {
  ConstraintState s;
  s.satisfied.resize(constraints.size());
  s.partial.resize(constraints.size(), 0);
  std::size_t best_partial = 0;
  s.all_met = true;
  for (std::size_t c = 0; c < constraints.size(); ++c) {
    s.satisfied[c] = contains(ids, constraints[c]);
    if (s.satisfied[c]) {
      s.progress += constraints[c].size();
    } else {
      s.all_met = false;
      s.partial[c] = partial_match(ids, constraints[c]);
      best_partial = std::max(best_partial, s.partial[c]);
    }
  }
  s.progress += best_partial;
  return s;
}

std::vector<TokenId> with_bos(const Vocabulary& vocab, const Sequence& ids) {
  Sequence prefix{vocab.bos_id()};
  prefix.insert(prefix.end(), ids.begin(), ids.end());
  return prefix;
}

struct Candidate {
  std::size_t beam;
  TokenId token;
  double logprob;
  ConstraintState state;
};

bool better(const Candidate& a, const Candidate& b) {
  if (a.logprob != b.logprob) return a.logprob > b.logprob;
  if (a.beam != b.beam) return a.beam < b.beam;
  return a.token < b.token;
}

/// Shares `width` slots across progress buckets: as even as possible over
/// the non-empty buckets, remainder to higher progress, and slots a bucket
/// cannot use go to the others, again highest progress first.
std::vector<Candidate> allocate(std::vector<Candidate> candidates, std::size_t width) {
  std::map<std::size_t, std::vector<Candidate>, std::greater<>> buckets;
  for (auto& c : candidates) buckets[c.state.progress].push_back(std::move(c));
  for (auto& [_, b] : buckets) std::sort(b.begin(), b.end(), better);

  std::vector<std::vector<Candidate>*> order;
  for (auto& [_, b] : buckets) order.push_back(&b);
  std::vector<std::size_t> taken(order.size(), 0);
  std::size_t remaining = width;
  while (remaining > 0) {
    std::vector<std::size_t> open;
    for (std::size_t i = 0; i < order.size(); ++i) {
      if (taken[i] < order[i]->size()) open.push_back(i);
    }
    if (open.empty()) break;
    const std::size_t base = remaining / open.size();
    std::size_t extra = remaining % open.size();
    for (std::size_t i : open) {
      std::size_t share = base + (extra > 0 ? 1 : 0);
      if (extra > 0) --extra;
      share = std::min(share, order[i]->size() - taken[i]);
      taken[i] += share;
      remaining -= share;
    }
  }

  std::vector<Candidate> selected;
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (std::size_t k = 0; k < taken[i]; ++k) selected.push_back(std::move((*order[i])[k]));
  }
  return selected;
}

GenerationResult constrained_beam(const LanguageModel& model, const KeywordSet& keywords,
                                  const KeywordSet& forced,
                                  const std::vector<Sequence>& constraints,
                                  const KeywordSet& stage1_missing,
                                  const DecoderConfig& config) {
  const Vocabulary& vocab = model.vocabulary();
  const TokenId eos = vocab.eos_id();
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();

  std::vector<Hypothesis> live{Hypothesis{}};
  std::vector<ConstraintState> live_state{evaluate({}, constraints)};
  std::vector<Hypothesis> finished;

  for (std::size_t step = 0; step < config.max_length && !live.empty(); ++step) {
    std::vector<Candidate> candidates;
    for (std::size_t b = 0; b < live.size(); ++b) {
      auto lp = log_softmax(transformed_logits(model, with_bos(vocab, live[b].ids),
                                               keywords, config));
      if (!live_state[b].all_met) lp[static_cast<std::size_t>(eos)] = kNegInf;

      std::set<TokenId> proposals;
      std::vector<TokenId> by_score;
      for (std::size_t t = 0; t < lp.size(); ++t) {
        if (!std::isinf(lp[t])) by_score.push_back(static_cast<TokenId>(t));
      }
      const std::size_t top = std::min(config.beam_width, by_score.size());
      std::partial_sort(by_score.begin(), by_score.begin() + static_cast<std::ptrdiff_t>(top),
                        by_score.end(), [&](TokenId a, TokenId b) {
                          const double la = lp[static_cast<std::size_t>(a)];
                          const double lb = lp[static_cast<std::size_t>(b)];
                          return la != lb ? la > lb : a < b;
                        });
      proposals.insert(by_score.begin(), by_score.begin() + static_cast<std::ptrdiff_t>(top));
      for (std::size_t c = 0; c < constraints.size(); ++c) {
        if (live_state[b].satisfied[c]) continue;
        const TokenId forced_token = constraints[c][live_state[b].partial[c]];
        if (!std::isinf(lp[static_cast<std::size_t>(forced_token)])) {
          proposals.insert(forced_token);
        }
        if (live_state[b].partial[c] > 0) proposals.insert(constraints[c][0]);
      }

      for (TokenId t : proposals) {
        if (std::isinf(lp[static_cast<std::size_t>(t)])) continue;
        Sequence ids = live[b].ids;
        ids.push_back(t);
        candidates.push_back(
            {b, t, live[b].logprob + lp[static_cast<std::size_t>(t)], evaluate(ids, constraints)});
      }
    }

    std::vector<Hypothesis> next_live;
    std::vector<ConstraintState> next_state;
    for (auto& c : allocate(std::move(candidates), config.beam_width)) {
      Hypothesis h;
      h.ids = live[c.beam].ids;
      h.ids.push_back(c.token);
      h.logprob = c.logprob;
      for (std::size_t k = 0; k < constraints.size(); ++k) {
        if (c.state.satisfied[k]) h.satisfied_constraints.push_back(k);
      }
      if (c.token == eos) {
        h.finished = true;
        finished.push_back(std::move(h));
      } else {
        next_live.push_back(std::move(h));
        next_state.push_back(std::move(c.state));
      }
    }
    live = std::move(next_live);
    live_state = std::move(next_state);
  }
  for (std::size_t b = 0; b < live.size(); ++b) {
    if (live_state[b].all_met) finished.push_back(std::move(live[b]));
  }

  const Hypothesis* best = nullptr;
  double best_score = kNegInf;
  GenerationResult result;
  for (const auto& h : finished) {
    GenerationResult r;
    r.ids = h.ids;
    r.text = vocab.decode(h.ids);
    if (!missing_keywords(model, forced, r, config.constraint_match).empty()) continue;
    const double s =
        h.logprob / std::pow(static_cast<double>(std::max<std::size_t>(h.ids.size(), 1)),
                             config.length_penalty);
    if (best == nullptr || s > best_score) {
      best = &h;
      best_score = s;
      result = std::move(r);
      result.score = s;
    }
  }
  if (best == nullptr) throw ConstraintUnsatisfiable(stage1_missing.words());
  result.missing_keywords = missing_keywords(model, keywords, result, ConstraintMatch::Substring);
  return result;
}

}  // namespace

GenerationResult decode_constrained(const LanguageModel& model, const KeywordSet& keywords,
                                    const KeywordSet& forced, const DecoderConfig& config) {
  config.validate();
  DecoderConfig beam_config = config;
  beam_config.strategy = Strategy::Beam;

  GenerationResult stage1 = decode_beam(model, keywords, beam_config);
  const KeywordSet missing = missing_keywords(model, forced, stage1, config.constraint_match);
  if (missing.empty()) {
    stage1.missing_keywords = KeywordSet{};
    return stage1;
  }

  std::vector<Sequence> constraints;
  for (const auto& k : forced) {
    Sequence ids = model.vocabulary().encode(k);
    if (ids.empty()) throw InvalidArgument("forced keyword '" + k + "' encodes to no tokens");
    if (ids.size() > config.max_length) throw ConstraintUnsatisfiable(missing.words());
    constraints.push_back(std::move(ids));
  }
  GenerationResult result =
      constrained_beam(model, keywords, forced, constraints, missing, beam_config);
  result.missing_keywords = KeywordSet{};
  return result;
}

}  // namespace k2t::decoding
