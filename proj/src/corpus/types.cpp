#include "k2t/corpus/types.hpp"

#include <algorithm>
#include <set>
#include <unordered_set>

#include "k2t/error.hpp"
#include "k2t/text.hpp"

namespace k2t {

KeywordSet::KeywordSet(std::vector<std::string> keywords)
    : words_(std::move(keywords)) {
  std::unordered_set<std::string> seen;
  for (const auto& w : words_) {
    if (text::is_blank(w)) {
      throw InvalidArgument("keyword set contains an empty keyword");
    }
    if (!seen.insert(w).second) {
      throw InvalidArgument("keyword set contains duplicate: " + w);
    }
  }
}

bool KeywordSet::contains(const std::string& w) const {
  return std::find(words_.begin(), words_.end(), w) != words_.end();
}

bool set_equal(const KeywordSet& a, const KeywordSet& b) {
  std::set<std::string> sa;
  std::set<std::string> sb;
  for (const auto& w : a) sa.insert(text::normalize_keyword(w));
  for (const auto& w : b) sb.insert(text::normalize_keyword(w));
  return sa == sb;
}

void KeywordTextPair::validate() const {
  if (id.empty()) throw InvalidArgument("pair has empty id");
  if (keywords.empty()) throw InvalidArgument("pair " + id + " has no keywords");
  if (text.empty()) throw InvalidArgument("pair " + id + " has empty text");
}

}  // namespace k2t
