#include "k2t/ranking/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <unordered_map>
#include <unordered_set>

#include "json.hpp"
#include "k2t/error.hpp"
#include "k2t/text.hpp"

namespace k2t::ranking {
namespace {

using Relevance = std::vector<bool>;

/// Pairs predictions with gold by id and calls fn(relevance, n_gold) per
/// query in prediction order. relevance[k] is true when the k-th prediction
/// is a gold keyword not already matched higher up.
void for_each_query(std::span<const RankedPrediction> preds,
                    std::span<const GoldKeywords> gold,
                    const std::function<void(const Relevance&, std::size_t)>& fn) {
  if (preds.empty()) throw InvalidArgument("no queries to evaluate");
  std::unordered_map<std::string, const GoldKeywords*> gold_by_id;
  for (const auto& g : gold) {
    if (!gold_by_id.emplace(g.id, &g).second) {
      throw IdMismatch(g.id, "duplicate gold id");
    }
  }
  std::unordered_set<std::string> seen;
  for (const auto& p : preds) {
    const auto it = gold_by_id.find(p.id);
    if (it == gold_by_id.end()) throw IdMismatch(p.id, "prediction without gold");
    if (!seen.insert(p.id).second) throw IdMismatch(p.id, "duplicate prediction id");
  }
  if (seen.size() != gold_by_id.size()) {
    for (const auto& g : gold) {
      if (!seen.count(g.id)) throw IdMismatch(g.id, "gold without prediction");
    }
  }

  for (const auto& p : preds) {
    const GoldKeywords& g = *gold_by_id.at(p.id);
    std::unordered_set<std::string> remaining;
    for (const auto& k : g.keywords) remaining.insert(text::normalize_keyword(k));
    if (remaining.empty()) throw InvalidArgument("gold record " + g.id + " is empty");
    const std::size_t n_gold = remaining.size();
    Relevance rel;
    rel.reserve(p.ranked_keywords.size());
    for (const auto& k : p.ranked_keywords) {
      rel.push_back(remaining.erase(text::normalize_keyword(k)) > 0);
    }
    fn(rel, n_gold);
  }
}

}  // namespace

double mrr(std::span<const RankedPrediction> preds,
           std::span<const GoldKeywords> gold) {
  double sum = 0.0;
  for_each_query(preds, gold, [&](const Relevance& rel, std::size_t) {
    const auto it = std::find(rel.begin(), rel.end(), true);
    if (it != rel.end()) sum += 1.0 / static_cast<double>(it - rel.begin() + 1);
  });
  return sum / static_cast<double>(preds.size());
}

double mean_average_precision(std::span<const RankedPrediction> preds,
                              std::span<const GoldKeywords> gold) {
  double sum = 0.0;
  for_each_query(preds, gold, [&](const Relevance& rel, std::size_t n_gold) {
    if (rel.empty()) return;
    double hits = 0.0;
    double precision_sum = 0.0;
    for (std::size_t k = 0; k < rel.size(); ++k) {
      if (!rel[k]) continue;
      hits += 1.0;
      precision_sum += hits / static_cast<double>(k + 1);
    }
    sum += precision_sum / static_cast<double>(std::min(n_gold, rel.size()));
  });
  return sum / static_cast<double>(preds.size());
}

double ndcg(std::span<const RankedPrediction> preds,
            std::span<const GoldKeywords> gold) {
  double sum = 0.0;
  for_each_query(preds, gold, [&](const Relevance& rel, std::size_t n_gold) {
    double dcg = 0.0;
    for (std::size_t k = 0; k < rel.size(); ++k) {
      if (rel[k]) dcg += 1.0 / std::log2(static_cast<double>(k + 2));
    }
    double idcg = 0.0;
    const std::size_t ideal = std::min(n_gold, rel.size());
    for (std::size_t k = 0; k < ideal; ++k) {
      idcg += 1.0 / std::log2(static_cast<double>(k + 2));
    }
    if (idcg > 0.0) sum += dcg / idcg;
  });
  return sum / static_cast<double>(preds.size());
}

double exact_match_rate(std::span<const KeywordSet> preds,
                        std::span<const KeywordSet> gold) {
  if (preds.empty()) throw InvalidArgument("exact_match_rate: empty input");
  if (preds.size() != gold.size()) {
    throw InvalidArgument("exact_match_rate: " + std::to_string(preds.size()) +
                          " predictions vs " + std::to_string(gold.size()) +
                          " gold sets");
  }
  std::size_t matches = 0;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    if (set_equal(preds[i], gold[i])) ++matches;
  }
  return static_cast<double>(matches) / static_cast<double>(preds.size());
}

std::string ExtractionReport::to_json() const {
  nlohmann::ordered_json obj;
  obj["mrr"] = mrr;
  obj["map"] = map;
  obj["ndcg"] = ndcg;
  obj["exact_match"] = exact_match;
  obj["n_queries"] = n_queries;
  return obj.dump();
}

ExtractionReport evaluate_extraction(std::span<const KeywordRecord> preds,
                                     std::span<const KeywordRecord> gold) {
  std::vector<RankedPrediction> ranked;
  ranked.reserve(preds.size());
  for (const auto& p : preds) ranked.push_back({p.id, p.keywords.words()});
  std::vector<GoldKeywords> gold_sets;
  gold_sets.reserve(gold.size());
  for (const auto& g : gold) gold_sets.push_back({g.id, g.keywords.words()});

  ExtractionReport report;
  report.mrr = mrr(ranked, gold_sets);
  report.map = mean_average_precision(ranked, gold_sets);
  report.ndcg = ndcg(ranked, gold_sets);
  report.n_queries = preds.size();

  // Ids are validated above; align gold to prediction order.
  std::unordered_map<std::string, const KeywordSet*> gold_by_id;
  for (const auto& g : gold) gold_by_id.emplace(g.id, &g.keywords);
  std::vector<KeywordSet> pred_sets;
  std::vector<KeywordSet> aligned_gold;
  for (const auto& p : preds) {
    pred_sets.push_back(p.keywords);
    aligned_gold.push_back(*gold_by_id.at(p.id));
  }
  report.exact_match = exact_match_rate(pred_sets, aligned_gold);
  return report;
}

}  // namespace k2t::ranking
