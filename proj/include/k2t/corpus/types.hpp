#pragma once

#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

namespace k2t {

struct Document {
  std::string id;
  std::string text;

  bool operator==(const Document&) const = default;
};

/// Keywords of one text. Semantically a set; the stored order is only a
/// serialization convenience (extractors store best-first).
/// No empty or whitespace-only entries and no exact duplicates.
class KeywordSet {
 public:
  KeywordSet() = default;
  /// Throws InvalidArgument when an invariant is violated.
  explicit KeywordSet(std::vector<std::string> keywords);
  KeywordSet(std::initializer_list<std::string> keywords)
      : KeywordSet(std::vector<std::string>(keywords)) {}

  const std::vector<std::string>& words() const noexcept { return words_; }
  std::size_t size() const noexcept { return words_.size(); }
  bool empty() const noexcept { return words_.empty(); }
  auto begin() const noexcept { return words_.begin(); }
  auto end() const noexcept { return words_.end(); }

  bool contains(const std::string& w) const;

  /// Order-sensitive; use set_equal for semantic comparison.
  bool operator==(const KeywordSet&) const = default;

 private:
  std::vector<std::string> words_;
};

/// Set equality after NFC normalization and trimming of each keyword.
bool set_equal(const KeywordSet& a, const KeywordSet& b);

struct KeywordTextPair {
  std::string id;
  KeywordSet keywords;
  std::string text;

  /// Throws InvalidArgument if id, keywords or text is empty.
  void validate() const;

  bool operator==(const KeywordTextPair&) const = default;
};

/// Id plus keyword list; the schema of gold and prediction files.
struct KeywordRecord {
  std::string id;
  KeywordSet keywords;

  bool operator==(const KeywordRecord&) const = default;
};

struct CorpusSplit {
  std::vector<Document> train;
  std::vector<Document> validation;
  std::vector<Document> test;
};

}  // namespace k2t
