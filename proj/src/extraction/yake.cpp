#include "k2t/extraction/yake.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <unordered_map>

#include "k2t/error.hpp"
#include "k2t/text.hpp"

namespace k2t::extraction {
namespace {

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

bool closes_sentence(std::string_view word) {
  return ends_with(word, "।") || ends_with(word, "॥") ||
         ends_with(word, "?") || ends_with(word, "!");
}

double median(const std::set<std::size_t>& values) {
  std::vector<std::size_t> v(values.begin(), values.end());
  const std::size_t mid = v.size() / 2;
  if (v.size() % 2 == 1) return static_cast<double>(v[mid]);
  return (static_cast<double>(v[mid - 1]) + static_cast<double>(v[mid])) / 2.0;
}

struct Context {
  std::unordered_map<std::size_t, std::size_t> cooccur;  // neighbor -> count
  std::size_t total = 0;

  void add(std::size_t neighbor) {
    ++cooccur[neighbor];
    ++total;
  }
  /// Distinct neighbors per co-occurrence; 0 without neighbors.
  double diversity() const {
    return total == 0 ? 0.0
                      : static_cast<double>(cooccur.size()) /
                            static_cast<double>(total);
  }
};

}  // namespace

std::vector<YakeWord> yake_words(std::string_view text) {
  std::vector<YakeWord> out;
  std::size_t sentence = 0;
  for (auto& w : text::split_words(text)) {
    const bool closes = closes_sentence(w);
    out.push_back({std::move(w), out.size(), sentence});
    if (closes) ++sentence;
  }
  return out;
}

std::vector<YakeTermFeatures> yake_features(std::span<const YakeWord> words,
                                            std::size_t window) {
  if (words.empty()) throw InvalidArgument("YAKE needs at least one word");
  if (window == 0) throw InvalidArgument("YAKE window must be >= 1");

  std::unordered_map<std::string, std::size_t> term_of;
  std::vector<YakeTermFeatures> terms;
  std::vector<std::set<std::size_t>> sentences_of;
  std::vector<std::size_t> term_ids;
  term_ids.reserve(words.size());
  std::set<std::size_t> all_sentences;
  for (const auto& w : words) {
    auto [it, inserted] = term_of.emplace(w.word, terms.size());
    if (inserted) {
      terms.push_back({});
      terms.back().word = w.word;
      sentences_of.emplace_back();
    }
    ++terms[it->second].tf;
    sentences_of[it->second].insert(w.sentence);
    all_sentences.insert(w.sentence);
    term_ids.push_back(it->second);
  }

  // Co-occurrence within `window` words to the left, inside one sentence.
  std::vector<Context> left(terms.size());
  std::vector<Context> right(terms.size());
  for (std::size_t j = 0; j < words.size(); ++j) {
    for (std::size_t back = 1; back <= window && back <= j; ++back) {
      const std::size_t i = j - back;
      if (words[i].sentence != words[j].sentence) break;
      left[term_ids[j]].add(term_ids[i]);
      right[term_ids[i]].add(term_ids[j]);
    }
  }

  double sum_tf = 0.0;
  double max_tf = 0.0;
  for (const auto& t : terms) {
    sum_tf += static_cast<double>(t.tf);
    max_tf = std::max(max_tf, static_cast<double>(t.tf));
  }
  const double n_terms = static_cast<double>(terms.size());
  const double mean_tf = sum_tf / n_terms;
  double var = 0.0;
  for (const auto& t : terms) {
    const double dev = static_cast<double>(t.tf) - mean_tf;
    var += dev * dev;
  }
  const double std_tf = std::sqrt(var / n_terms);
  const double n_sentences = static_cast<double>(all_sentences.size());

  for (std::size_t k = 0; k < terms.size(); ++k) {
    auto& t = terms[k];
    const double tf = static_cast<double>(t.tf);
    t.casing = 0.0;
    t.position = std::log(std::log(3.0 + median(sentences_of[k])));
    t.frequency = tf / (mean_tf + std_tf);
    t.relatedness = 1.0 + (left[k].diversity() + right[k].diversity()) * tf / max_tf;
    t.dispersion = static_cast<double>(sentences_of[k].size()) / n_sentences;
    t.weight = (t.relatedness * t.position) /
               (t.casing + t.frequency / t.relatedness + t.dispersion / t.relatedness);
  }
  return terms;
}

std::vector<ScoredWord> score_yake(std::span<const YakeWord> words,
                                   std::size_t window) {
  const auto terms = yake_features(words, window);
  std::unordered_map<std::string, double> score_of;
  for (const auto& t : terms) score_of[t.word] = 1.0 / (1.0 + t.weight);
  std::vector<ScoredWord> out;
  out.reserve(words.size());
  for (const auto& w : words) out.push_back({w.word, score_of[w.word], w.position});
  return out;
}

}  // namespace k2t::extraction
