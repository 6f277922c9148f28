#include "k2t/decoding/toy_model.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "k2t/error.hpp"
#include "k2t/text.hpp"

namespace k2t::decoding {
namespace {

Vocabulary build_vocabulary(std::span<const Document> corpus) {
  std::set<std::string> words;
  for (const auto& d : corpus) {
    for (auto& w : text::split_words(d.text)) words.insert(std::move(w));
  }
  std::vector<std::string> tokens{"<pad>", "<s>", "</s>"};
  for (const auto& w : words) {
    if (w != "<pad>" && w != "<s>" && w != "</s>") tokens.push_back(w);
  }
  return Vocabulary(std::move(tokens));
}

}  // namespace

ToyBigramModel::ToyBigramModel(std::span<const Document> corpus, double smoothing,
                               double keyword_bonus)
    : vocab_(build_vocabulary(corpus)),
      smoothing_(smoothing),
      keyword_bonus_(keyword_bonus) {
  if (corpus.empty()) throw InvalidArgument("toy model needs a non-empty corpus");
  if (!(smoothing > 0.0)) throw InvalidArgument("smoothing must be > 0");

  const std::size_t v = vocab_.size();
  std::vector<std::vector<double>> counts(v, std::vector<double>(v, 0.0));
  for (const auto& d : corpus) {
    TokenId prev = vocab_.bos_id();
    for (const auto& w : text::split_words(d.text)) {
      const TokenId cur = *vocab_.find(w);
      counts[static_cast<std::size_t>(prev)][static_cast<std::size_t>(cur)] += 1.0;
      prev = cur;
    }
    counts[static_cast<std::size_t>(prev)][static_cast<std::size_t>(vocab_.eos_id())] += 1.0;
  }

  // Support: every token except pad and bos.
  const double support = static_cast<double>(v - 2);
  log_prob_.assign(v, std::vector<double>(v, kExcludedLogit));
  for (std::size_t a = 0; a < v; ++a) {
    double total = 0.0;
    for (double c : counts[a]) total += c;
    const double denom = total + smoothing_ * support;
    for (std::size_t b = 0; b < v; ++b) {
      if (vocab_.pad_id() == static_cast<TokenId>(b) ||
          vocab_.bos_id() == static_cast<TokenId>(b)) {
        continue;
      }
      log_prob_[a][b] = std::log((counts[a][b] + smoothing_) / denom);
    }
  }
}

double ToyBigramModel::probability(TokenId prev, TokenId next) const {
  return std::exp(log_prob_.at(static_cast<std::size_t>(prev)).at(static_cast<std::size_t>(next)));
}

std::vector<double> ToyBigramModel::next_logits(std::span<const TokenId> prefix,
                                                const KeywordSet& keywords) const {
  const TokenId prev = prefix.empty() ? vocab_.bos_id() : prefix.back();
  if (prev < 0 || static_cast<std::size_t>(prev) >= vocab_.size()) {
    throw InvalidArgument("prefix token id out of range");
  }
  std::vector<double> logits = log_prob_[static_cast<std::size_t>(prev)];
  if (keyword_bonus_ != 0.0) {
    std::set<TokenId> boosted;
    for (const auto& k : keywords) {
      try {
        for (TokenId id : vocab_.encode(k)) boosted.insert(id);
      } catch (const InvalidArgument&) {
        // Keywords outside the vocabulary cannot be boosted.
      }
    }
    for (TokenId id : boosted) {
      if (std::find(prefix.begin(), prefix.end(), id) == prefix.end()) {
        logits[static_cast<std::size_t>(id)] += keyword_bonus_;
      }
    }
  }
  return logits;
}

std::unique_ptr<LanguageModel> toy_bigram_model(std::span<const Document> corpus,
                                                double smoothing, double keyword_bonus) {
  return std::make_unique<ToyBigramModel>(corpus, smoothing, keyword_bonus);
}

}  // namespace k2t::decoding
