#include "k2t/pipeline/split.hpp"

#include <cmath>
#include <string>
#include <unordered_set>
#include <vector>

#include "k2t/error.hpp"
#include "k2t/rng.hpp"

namespace k2t::pipeline {
namespace {

std::vector<double> parse_numbers(std::string_view text, char sep) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t end = std::min(text.find(sep, start), text.size());
    const std::string part(text.substr(start, end - start));
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(part, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != part.size()) {
      throw InvalidArgument("bad split value '" + part + "'");
    }
    out.push_back(v);
    start = end + 1;
  }
  return out;
}

std::size_t floor_count(std::size_t n, double fraction) {
  return static_cast<std::size_t>(std::floor(static_cast<double>(n) * fraction + 1e-9));
}

}  // namespace

void SplitSpec::validate() const {
  if (train < 0.0 || validation < 0.0 || test < 0.0) {
    throw InvalidArgument("split fractions must be non-negative");
  }
  if (std::abs(train + validation + test - 1.0) > 1e-12) {
    throw InvalidArgument("split fractions must sum to 1");
  }
}

SplitSpec SplitSpec::parse(std::string_view text, std::uint64_t seed) {
  const bool ratio = text.find(':') != std::string_view::npos;
  const auto v = parse_numbers(text, ratio ? ':' : ',');
  if (v.size() != 3) throw InvalidArgument("split needs three values");
  SplitSpec s;
  s.seed = seed;
  if (ratio) {
    const double total = v[0] + v[1] + v[2];
    if (!(total > 0.0)) throw InvalidArgument("split ratio must be positive");
    s.train = v[0] / total;
    s.validation = v[1] / total;
    s.test = v[2] / total;
    // Absorb rounding so the three sum to 1.
    s.train = 1.0 - s.validation - s.test;
  } else {
    s.train = v[0];
    s.validation = v[1];
    s.test = v[2];
  }
  s.validate();
  return s;
}

CorpusSplit split_corpus(std::span<const Document> docs, const SplitSpec& spec) {
  spec.validate();
  std::unordered_set<std::string> ids;
  for (const auto& d : docs) {
    if (!ids.insert(d.id).second) throw InvalidArgument("duplicate document id " + d.id);
  }

  std::vector<std::size_t> order(docs.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng rng(spec.seed);
  for (std::size_t i = order.size(); i > 1; --i) {
    std::swap(order[i - 1], order[rng.below(i)]);
  }

  const std::size_t n = docs.size();
  const std::size_t n_validation = floor_count(n, spec.validation);
  const std::size_t n_test = std::min(n - n_validation, floor_count(n, spec.test));
  const std::size_t n_train = n - n_validation - n_test;

  CorpusSplit split;
  for (std::size_t i = 0; i < n; ++i) {
    const Document& d = docs[order[i]];
    if (i < n_train) {
      split.train.push_back(d);
    } else if (i < n_train + n_validation) {
      split.validation.push_back(d);
    } else {
      split.test.push_back(d);
    }
  }
  return split;
}

}  // namespace k2t::pipeline
