#include "k2t/pipeline/stats.hpp"

#include <algorithm>
#include <unordered_map>

#include "json.hpp"
#include "k2t/error.hpp"
#include "k2t/text.hpp"

namespace k2t::pipeline {

CorpusStats compute_stats(std::span<const KeywordTextPair> pairs, std::size_t top_n) {
  if (pairs.empty()) throw InvalidArgument("compute_stats: no pairs");
  CorpusStats s;
  s.n_texts = pairs.size();
  std::unordered_map<std::string, std::size_t> freq;
  for (const auto& p : pairs) {
    const std::size_t words = text::split_words(p.text).size();
    const std::size_t keywords = p.keywords.size();
    s.total_words += words;
    s.total_keywords += keywords;
    s.max_words_per_text = std::max(s.max_words_per_text, words);
    s.max_keywords_per_text = std::max(s.max_keywords_per_text, keywords);
    for (const auto& k : p.keywords) ++freq[k];
  }
  const double n = static_cast<double>(s.n_texts);
  s.mean_keywords_per_text = static_cast<double>(s.total_keywords) / n;
  s.mean_words_per_text = static_cast<double>(s.total_words) / n;
  s.keyword_to_text_length_ratio =
      s.total_words == 0 ? 0.0
                         : static_cast<double>(s.total_keywords) /
                               static_cast<double>(s.total_words);

  s.top_keywords.assign(freq.begin(), freq.end());
  std::sort(s.top_keywords.begin(), s.top_keywords.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });
  if (s.top_keywords.size() > top_n) s.top_keywords.resize(top_n);
  return s;
}

std::string CorpusStats::to_json() const {
  nlohmann::ordered_json obj;
  obj["n_texts"] = n_texts;
  obj["max_keywords_per_text"] = max_keywords_per_text;
  obj["mean_keywords_per_text"] = mean_keywords_per_text;
  obj["max_words_per_text"] = max_words_per_text;
  obj["mean_words_per_text"] = mean_words_per_text;
  obj["total_words"] = total_words;
  obj["total_keywords"] = total_keywords;
  obj["keyword_to_text_length_ratio"] = keyword_to_text_length_ratio;
  auto top = nlohmann::ordered_json::array();
  for (const auto& [k, c] : top_keywords) {
    nlohmann::ordered_json e;
    e["keyword"] = k;
    e["count"] = c;
    top.push_back(std::move(e));
  }
  obj["top_keywords"] = std::move(top);
  return obj.dump();
}

}  // namespace k2t::pipeline
