#include "k2t/corpus/clean.hpp"

#include <unicode/uchar.h>
#include <unicode/utf8.h>

namespace k2t {
namespace {

std::string strip_tags(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    if (s[i] == '<') {
      std::size_t j = i + 1;
      while (j < s.size() && s[j] != '>' && s[j] != '<') ++j;
      if (j < s.size() && s[j] == '>') {
        out.push_back(' ');
        i = j + 1;
        continue;
      }
    }
    out.push_back(s[i]);
    ++i;
  }
  return out;
}

void append_utf8(std::string& out, UChar32 cp) {
  char buf[4];
  int32_t len = 0;
  UBool err = false;
  U8_APPEND(buf, len, 4, cp, err);
  if (!err) out.append(buf, static_cast<std::size_t>(len));
}

}  // namespace

CleaningConfig CleaningConfig::defaults() {
  CleaningConfig c;
  c.allowed = {
      {0x0980, 0x09FF},  // Bangla
      {U'A', U'Z'},      {U'a', U'z'}, {U'0', U'9'},
      {0x0964, 0x0965},  // danda, double danda
      {U'?', U'?'},      {U'!', U'!'}, {U',', U','},
      {U'.', U'.'},      {U'-', U'-'},
  };
  return c;
}

bool CleaningConfig::allows(char32_t cp) const {
  for (const auto& r : allowed) {
    if (cp >= r.first && cp <= r.last) return true;
  }
  return false;
}

std::string clean_text(std::string_view raw, const CleaningConfig& config) {
  const std::string untagged =
      config.strip_html ? strip_tags(raw) : std::string(raw);

  std::string out;
  out.reserve(untagged.size());
  bool pending_space = false;
  const auto* bytes = reinterpret_cast<const uint8_t*>(untagged.data());
  const auto length = static_cast<int32_t>(untagged.size());
  int32_t i = 0;
  while (i < length) {
    UChar32 cp = 0;
    U8_NEXT(bytes, i, length, cp);
    if (cp < 0) continue;  // invalid byte sequence
    if (u_isUWhiteSpace(cp)) {
      pending_space = !out.empty();
      continue;
    }
    if (!config.allows(static_cast<char32_t>(cp))) continue;
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    append_utf8(out, cp);
  }
  return out;
}

}  // namespace k2t
