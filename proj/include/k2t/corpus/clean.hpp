#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace k2t {

struct CodepointRange {
  char32_t first;
  char32_t last;  // inclusive
};

/// Characters that survive cleaning. Everything else except whitespace is
/// deleted; whitespace is collapsed to single spaces.
struct CleaningConfig {
  std::vector<CodepointRange> allowed;
  bool strip_html = true;

  /// Bangla block U+0980-U+09FF, ASCII letters and digits, danda and double
  /// danda, and `? ! , . -`.
  static CleaningConfig defaults();

  bool allows(char32_t cp) const;
};

/// Removes `<...>` spans (no nested `<`), deletes characters outside the
/// allowed set, collapses whitespace runs and trims. Idempotent.
std::string clean_text(std::string_view raw,
                       const CleaningConfig& config = CleaningConfig::defaults());

}  // namespace k2t
