#include <algorithm>

#include "k2t/decoding/language_model.hpp"
#include "k2t/error.hpp"
#include "k2t/text.hpp"

namespace k2t::decoding {
namespace {

constexpr std::string_view kContinuation = "##";
constexpr std::string_view kWordBoundary = "\xE2\x96\x81";  // U+2581, SentencePiece

bool starts_with(std::string_view s, std::string_view p) {
  return s.size() >= p.size() && s.compare(0, p.size(), p) == 0;
}

}  // namespace

Vocabulary::Vocabulary(std::vector<std::string> tokens) : tokens_(std::move(tokens)) {
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    if (!index_.emplace(tokens_[i], static_cast<TokenId>(i)).second) {
      throw InvalidArgument("duplicate vocabulary entry: " + tokens_[i]);
    }
  }
  const auto first_of = [&](std::initializer_list<const char*> names) -> TokenId {
    for (const char* n : names) {
      if (auto id = find(n)) return *id;
    }
    return -1;
  };
  pad_ = first_of({"<pad>", "[PAD]"});
  eos_ = first_of({"</s>", "[SEP]", "<eos>"});
  bos_ = first_of({"<s>", "[CLS]", "<bos>"});
  if (pad_ < 0) throw InvalidArgument("vocabulary has no pad token");
  if (eos_ < 0) throw InvalidArgument("vocabulary has no eos token");
  if (bos_ < 0) bos_ = pad_;
  sentencepiece_ = std::any_of(tokens_.begin(), tokens_.end(),
                               [](const std::string& t) { return starts_with(t, kWordBoundary); });
}

std::optional<TokenId> Vocabulary::find(std::string_view token) const {
  const auto it = index_.find(std::string(token));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::vector<TokenId> Vocabulary::encode(std::string_view text) const {
  const bool sentencepiece = sentencepiece_;
  std::vector<TokenId> ids;
  for (const auto& word : text::split_words(text)) {
    const std::string head_marker = sentencepiece ? std::string(kWordBoundary) : "";
    const std::string tail_marker = sentencepiece ? "" : std::string(kContinuation);
    if (!sentencepiece) {
      if (auto id = find(word)) {
        ids.push_back(*id);
        continue;
      }
    }
    std::size_t start = 0;
    while (start < word.size()) {
      const std::string& marker = start == 0 ? head_marker : tail_marker;
      std::optional<TokenId> match;
      std::size_t end = word.size();
      for (; end > start; --end) {
        match = find(marker + word.substr(start, end - start));
        if (match) break;
      }
      if (!match) {
        throw InvalidArgument("word '" + word + "' cannot be encoded by the vocabulary");
      }
      ids.push_back(*match);
      start = end;
    }
  }
  return ids;
}

std::string Vocabulary::decode(std::span<const TokenId> ids) const {
  std::string out;
  for (TokenId id : ids) {
    if (is_special(id)) continue;
    const std::string& tok = token(id);
    if (starts_with(tok, kWordBoundary)) {
      if (!out.empty()) out.push_back(' ');
      out += tok.substr(kWordBoundary.size());
    } else if (sentencepiece_) {
      out += tok;
    } else if (starts_with(tok, kContinuation) && tok.size() > kContinuation.size() &&
               !out.empty()) {
      out += tok.substr(kContinuation.size());
    } else {
      if (!out.empty()) out.push_back(' ');
      out += tok;
    }
  }
  return out;
}

}  // namespace k2t::decoding
