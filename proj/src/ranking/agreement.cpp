#include "k2t/ranking/agreement.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "k2t/error.hpp"

namespace k2t::ranking {

double fleiss_kappa(const AgreementTable& table) {
  const std::size_t n_items = table.n_items();
  const std::size_t n_cat = table.n_categories();
  if (n_items < 2) throw InvalidArgument("Fleiss' kappa needs at least 2 items");
  if (n_cat == 0) throw InvalidArgument("Fleiss' kappa needs categories");

  std::size_t raters = 0;
  for (std::size_t i = 0; i < n_items; ++i) {
    const auto& row = table.counts[i];
    if (row.size() != n_cat) {
      throw InvalidArgument("agreement row " + std::to_string(i) +
                            " has the wrong number of categories");
    }
    const std::size_t sum = std::accumulate(row.begin(), row.end(), std::size_t{0});
    if (i == 0) raters = sum;
    if (sum != raters) {
      throw InvalidArgument("agreement row " + std::to_string(i) + " sums to " +
                            std::to_string(sum) + ", expected " +
                            std::to_string(raters));
    }
  }
  if (raters < 2) throw InvalidArgument("Fleiss' kappa needs at least 2 annotators");

  const double n = static_cast<double>(raters);
  const double N = static_cast<double>(n_items);
  double p_bar = 0.0;
  std::vector<double> category_totals(n_cat, 0.0);
  for (const auto& row : table.counts) {
    double sq = 0.0;
    for (std::size_t j = 0; j < n_cat; ++j) {
      const double c = static_cast<double>(row[j]);
      sq += c * c;
      category_totals[j] += c;
    }
    p_bar += (sq - n) / (n * (n - 1.0));
  }
  p_bar /= N;

  double p_e = 0.0;
  for (double total : category_totals) {
    const double p = total / (N * n);
    p_e += p * p;
  }
  if (std::abs(1.0 - p_e) < 1e-12) return 1.0;
  return (p_bar - p_e) / (1.0 - p_e);
}

}  // namespace k2t::ranking
