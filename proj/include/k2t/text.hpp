#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace k2t::text {

/// Splits on ASCII whitespace; no empty tokens.
std::vector<std::string> split_words(std::string_view s);

/// Unicode NFC normalization. Invalid UTF-8 is replaced, never thrown on.
std::string nfc(std::string_view s);

/// NFC followed by trimming leading/trailing whitespace.
std::string normalize_keyword(std::string_view s);

/// NFC then whitespace split; the tokenization used by all text metrics.
std::vector<std::string> metric_tokens(std::string_view s);

bool is_blank(std::string_view s);

}  // namespace k2t::text
