#include "k2t/extraction/selection.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "k2t/error.hpp"

namespace k2t::extraction {

SelectionPolicy SelectionPolicy::defaults() {
  SelectionPolicy p;
  p.tiers = {{10, std::numeric_limits<std::size_t>::max(), 0.60},
             {5, 9, 0.70},
             {1, 4, 0.80}};
  return p;
}

void SelectionPolicy::validate() const {
  if (tiers.empty()) throw InvalidArgument("selection policy has no tiers");
  auto sorted = tiers;
  std::sort(sorted.begin(), sorted.end(),
            [](const auto& a, const auto& b) { return a.min_words < b.min_words; });
  std::size_t next = 1;
  for (const auto& t : sorted) {
    if (!(t.fraction > 0.0 && t.fraction <= 1.0)) {
      throw InvalidArgument("tier fraction must be in (0, 1]");
    }
    if (t.min_words != next || t.max_words < t.min_words) {
      throw InvalidArgument("selection tiers must cover word counts from 1 "
                            "without gaps or overlap");
    }
    if (t.max_words == std::numeric_limits<std::size_t>::max()) {
      if (&t != &sorted.back()) {
        throw InvalidArgument("only the last tier may be unbounded");
      }
      return;
    }
    next = t.max_words + 1;
  }
  throw InvalidArgument("selection tiers must cover every word count");
}

double SelectionPolicy::fraction_for(std::size_t n_words) const {
  for (const auto& t : tiers) {
    if (n_words >= t.min_words && n_words <= t.max_words) return t.fraction;
  }
  throw InvalidArgument("no selection tier for " + std::to_string(n_words) +
                        " words");
}

std::size_t SelectionPolicy::keyword_count(std::size_t n_words) const {
  if (n_words == 0) return 0;
  const auto k = round_half_up(static_cast<double>(n_words) * fraction_for(n_words));
  return std::max(min_keywords, k);
}

std::size_t round_half_up(double x) {
  // 5 * 0.7 may land a hair below 3.5.
  return static_cast<std::size_t>(std::floor(x + 0.5 + 1e-9));
}

KeywordSet select_keywords(std::span<const ScoredWord> scored,
                           const SelectionPolicy& policy) {
  if (scored.empty()) return {};
  const std::size_t k = policy.keyword_count(scored.size());

  std::vector<const ScoredWord*> order;
  order.reserve(scored.size());
  for (const auto& s : scored) order.push_back(&s);
  std::sort(order.begin(), order.end(), [](const auto* a, const auto* b) {
    if (a->score != b->score) return a->score > b->score;
    return a->position < b->position;
  });

  std::vector<std::string> picked;
  std::unordered_set<std::string> seen;
  for (const auto* s : order) {
    if (picked.size() == k) break;
    if (seen.insert(s->word).second) picked.push_back(s->word);
  }
  return KeywordSet(std::move(picked));
}

}  // namespace k2t::extraction
