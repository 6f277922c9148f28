#include "k2t/extraction/textrank.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "k2t/error.hpp"
#include "k2t/simd/kernels.hpp"

namespace k2t::extraction {

TextRankResult score_textrank(std::span<const embedding::WordEmbedding> words,
                              const TextRankOptions& options) {
  if (words.empty()) throw InvalidArgument("score_textrank: no words");
  if (!(options.damping > 0.0 && options.damping < 1.0)) {
    throw InvalidArgument("damping must be in (0, 1)");
  }

  TextRankResult result;
  std::unordered_map<std::string, std::size_t> node_of;
  std::vector<std::vector<double>> vectors;
  std::vector<std::size_t> counts;
  std::vector<std::size_t> occurrence_node;
  occurrence_node.reserve(words.size());
  for (const auto& w : words) {
    auto [it, inserted] = node_of.emplace(w.word, result.nodes.size());
    if (inserted) {
      result.nodes.push_back(w.word);
      vectors.push_back(w.vector);
      counts.push_back(1);
    } else {
      simd::add_into(vectors[it->second], w.vector);
      ++counts[it->second];
    }
    occurrence_node.push_back(it->second);
  }
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    if (counts[i] > 1) simd::scale(vectors[i], 1.0 / static_cast<double>(counts[i]));
  }

  const std::size_t n = result.nodes.size();
  const double uniform = 1.0 / static_cast<double>(n);

  const auto finish = [&](std::vector<double> ranks) {
    result.ranks = std::move(ranks);
    result.scores.reserve(words.size());
    for (std::size_t i = 0; i < words.size(); ++i) {
      result.scores.push_back(
          {words[i].word, result.ranks[occurrence_node[i]], words[i].position});
    }
    return result;
  };

  if (n == 1) {
    result.converged = true;
    return finish({1.0});
  }

  // Row-normalized transition weights; rows with no positive weight are
  // dangling and jump uniformly.
  std::vector<double> weight(n * n, 0.0);
  std::vector<double> out_weight(n, 0.0);
  bool any_edge = false;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double w = std::max(0.0, simd::cosine(vectors[i], vectors[j]));
      weight[i * n + j] = w;
      weight[j * n + i] = w;
      out_weight[i] += w;
      out_weight[j] += w;
      any_edge = any_edge || w > 0.0;
    }
  }
  if (!any_edge) {
    result.uniform_fallback = true;
    result.converged = true;
    return finish(std::vector<double>(n, uniform));
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (out_weight[i] > 0.0) {
      simd::scale(std::span<double>(weight.data() + i * n, n), 1.0 / out_weight[i]);
    }
  }

  const double d = options.damping;
  std::vector<double> rank(n, uniform);
  std::vector<double> next(n);
  for (std::size_t iter = 0; iter < options.max_iterations; ++iter) {
    double dangling = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (out_weight[i] == 0.0) dangling += rank[i];
    }
    std::fill(next.begin(), next.end(), (1.0 - d) * uniform + d * dangling * uniform);
    for (std::size_t i = 0; i < n; ++i) {
      if (out_weight[i] == 0.0) continue;
      const double* row = weight.data() + i * n;
      const double share = d * rank[i];
      for (std::size_t j = 0; j < n; ++j) next[j] += share * row[j];
    }
    double change = 0.0;
    for (std::size_t j = 0; j < n; ++j) change += std::abs(next[j] - rank[j]);
    rank.swap(next);
    result.iterations = iter + 1;
    if (change < options.tolerance) {
      result.converged = true;
      break;
    }
  }
  return finish(std::move(rank));
}

}  // namespace k2t::extraction
