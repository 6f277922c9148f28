#pragma once

// JSON Lines readers and writers for the corpus, pair and keyword files.
// Writers emit keys in a fixed order, UTF-8, LF line endings.

#include <iosfwd>
#include <span>
#include <vector>

#include "k2t/corpus/types.hpp"

namespace k2t::jsonl {

/// `{"id": string, "text": string}` per line. Blank lines are skipped.
/// Throws ParseError (with the 1-based line number) on malformed lines,
/// missing fields, empty ids or duplicate ids.
std::vector<Document> parse_documents(std::istream& in);
void write_documents(std::span<const Document> docs, std::ostream& out);

/// `{"id": string, "keywords": [string], "text": string}`.
std::vector<KeywordTextPair> parse_pairs(std::istream& in);
void write_pairs(std::span<const KeywordTextPair> pairs, std::ostream& out);

/// `{"id": string, "keywords": [string]}` (gold and prediction files).
std::vector<KeywordRecord> parse_keyword_records(std::istream& in);
void write_keyword_records(std::span<const KeywordRecord> records,
                           std::ostream& out);

}  // namespace k2t::jsonl
