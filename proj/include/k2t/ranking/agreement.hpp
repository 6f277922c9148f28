#pragma once

#include <cstddef>
#include <vector>

namespace k2t::ranking {

/// counts[i][j]: how many annotators put item i in category j.
struct AgreementTable {
  std::vector<std::vector<std::size_t>> counts;

  std::size_t n_items() const { return counts.size(); }
  std::size_t n_categories() const {
    return counts.empty() ? 0 : counts.front().size();
  }
};

/// Fleiss' kappa. Requires >= 2 items, >= 2 annotators per item and the same
/// number of annotators on every row (InvalidArgument otherwise). When chance
/// agreement is 1 (every vote in one category) the result is 1.
double fleiss_kappa(const AgreementTable& table);

}  // namespace k2t::ranking
