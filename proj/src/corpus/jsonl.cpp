#include "k2t/corpus/jsonl.hpp"

#include <istream>
#include <ostream>
#include <string>
#include <unordered_set>

#include "json.hpp"
#include "k2t/error.hpp"
#include "k2t/text.hpp"

namespace k2t::jsonl {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

/// Calls fn(line_number, object) for every non-blank line.
template <typename Fn>
void for_each_object(std::istream& in, Fn&& fn) {
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (text::is_blank(line)) continue;
    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError(lineno, std::string("invalid JSON: ") + e.what());
    }
    if (!obj.is_object()) throw ParseError(lineno, "expected a JSON object");
    fn(lineno, obj);
  }
}

std::string get_string(const json& obj, const char* key, std::size_t lineno) {
  const auto it = obj.find(key);
  if (it == obj.end()) {
    throw ParseError(lineno, std::string("missing field '") + key + "'");
  }
  if (!it->is_string()) {
    throw ParseError(lineno, std::string("field '") + key + "' must be a string");
  }
  return it->get<std::string>();
}

std::string get_id(const json& obj, std::size_t lineno,
                   std::unordered_set<std::string>& seen) {
  std::string id = get_string(obj, "id", lineno);
  if (id.empty()) throw ParseError(lineno, "empty id");
  if (!seen.insert(id).second) throw ParseError(lineno, "duplicate id " + id);
  return id;
}

KeywordSet get_keywords(const json& obj, std::size_t lineno) {
  const auto it = obj.find("keywords");
  if (it == obj.end()) throw ParseError(lineno, "missing field 'keywords'");
  if (!it->is_array()) throw ParseError(lineno, "'keywords' must be an array");
  std::vector<std::string> words;
  words.reserve(it->size());
  for (const auto& k : *it) {
    if (!k.is_string()) throw ParseError(lineno, "keywords must be strings");
    words.push_back(k.get<std::string>());
  }
  try {
    return KeywordSet(std::move(words));
  } catch (const InvalidArgument& e) {
    throw ParseError(lineno, e.what());
  }
}

void emit(const ordered_json& obj, std::ostream& out) {
  out << obj.dump() << '\n';
  if (!out) throw Error("write failed");
}

}  // namespace

std::vector<Document> parse_documents(std::istream& in) {
  std::vector<Document> docs;
  std::unordered_set<std::string> seen;
  for_each_object(in, [&](std::size_t lineno, const json& obj) {
    std::string id = get_id(obj, lineno, seen);
    docs.push_back({std::move(id), get_string(obj, "text", lineno)});
  });
  return docs;
}

void write_documents(std::span<const Document> docs, std::ostream& out) {
  for (const auto& d : docs) {
    ordered_json obj;
    obj["id"] = d.id;
    obj["text"] = d.text;
    emit(obj, out);
  }
}

std::vector<KeywordTextPair> parse_pairs(std::istream& in) {
  std::vector<KeywordTextPair> pairs;
  std::unordered_set<std::string> seen;
  for_each_object(in, [&](std::size_t lineno, const json& obj) {
    KeywordTextPair p;
    p.id = get_id(obj, lineno, seen);
    p.keywords = get_keywords(obj, lineno);
    p.text = get_string(obj, "text", lineno);
    try {
      p.validate();
    } catch (const InvalidArgument& e) {
      throw ParseError(lineno, e.what());
    }
    pairs.push_back(std::move(p));
  });
  return pairs;
}

void write_pairs(std::span<const KeywordTextPair> pairs, std::ostream& out) {
  for (const auto& p : pairs) {
    ordered_json obj;
    obj["id"] = p.id;
    obj["keywords"] = p.keywords.words();
    obj["text"] = p.text;
    emit(obj, out);
  }
}

std::vector<KeywordRecord> parse_keyword_records(std::istream& in) {
  std::vector<KeywordRecord> records;
  std::unordered_set<std::string> seen;
  for_each_object(in, [&](std::size_t lineno, const json& obj) {
    std::string id = get_id(obj, lineno, seen);
    records.push_back({std::move(id), get_keywords(obj, lineno)});
  });
  return records;
}

void write_keyword_records(std::span<const KeywordRecord> records,
                           std::ostream& out) {
  for (const auto& r : records) {
    ordered_json obj;
    obj["id"] = r.id;
    obj["keywords"] = r.keywords.words();
    emit(obj, out);
  }
}

}  // namespace k2t::jsonl
