#include "k2t/nlg/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "json.hpp"
#include "k2t/embedding/provider.hpp"
#include "k2t/error.hpp"
#include "k2t/extraction/extractor.hpp"
#include "k2t/simd/kernels.hpp"
#include "k2t/text.hpp"

namespace k2t::nlg {
namespace {

using NgramCounts = std::map<std::vector<std::string>, std::size_t>;

NgramCounts ngrams(const Tokens& t, std::size_t n) {
  NgramCounts counts;
  if (t.size() < n) return counts;
  for (std::size_t i = 0; i + n <= t.size(); ++i) {
    ++counts[Tokens(t.begin() + static_cast<std::ptrdiff_t>(i),
                    t.begin() + static_cast<std::ptrdiff_t>(i + n))];
  }
  return counts;
}

std::size_t clipped_matches(const NgramCounts& cand, const NgramCounts& ref) {
  std::size_t m = 0;
  for (const auto& [gram, c] : cand) {
    const auto it = ref.find(gram);
    if (it != ref.end()) m += std::min(c, it->second);
  }
  return m;
}

void check_max_n(int max_n) {
  if (max_n < 1 || max_n > 4) throw InvalidArgument("BLEU max_n must be in 1..4");
}

double f1(double p, double r) { return p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r); }

void check_batch(std::span<const TextPair> batch) {
  if (batch.empty()) throw InvalidArgument("empty evaluation batch");
}

Tokens checked_reference(const TextPair& pair) {
  Tokens ref = text::metric_tokens(pair.reference);
  if (ref.empty()) throw InvalidArgument("empty reference text");
  return ref;
}

}  // namespace

double bleu(std::span<const TextPair> batch, int max_n) {
  check_batch(batch);
  check_max_n(max_n);
  std::vector<std::size_t> matches(static_cast<std::size_t>(max_n), 0);
  std::vector<std::size_t> totals(static_cast<std::size_t>(max_n), 0);
  std::size_t ref_len = 0;
  std::size_t cand_len = 0;
  for (const auto& pair : batch) {
    const Tokens ref = text::metric_tokens(pair.reference);
    const Tokens cand = text::metric_tokens(pair.candidate);
    ref_len += ref.size();
    cand_len += cand.size();
    for (std::size_t n = 1; n <= static_cast<std::size_t>(max_n); ++n) {
      matches[n - 1] += clipped_matches(ngrams(cand, n), ngrams(ref, n));
      if (cand.size() >= n) totals[n - 1] += cand.size() - n + 1;
    }
  }
  if (cand_len == 0) return 0.0;
  double log_sum = 0.0;
  for (std::size_t i = 0; i < matches.size(); ++i) {
    if (matches[i] == 0) return 0.0;
    log_sum += std::log(static_cast<double>(matches[i]) /
                        static_cast<double>(totals[i]));
  }
  const double bp = cand_len < ref_len
                        ? std::exp(1.0 - static_cast<double>(ref_len) /
                                             static_cast<double>(cand_len))
                        : 1.0;
  return bp * std::exp(log_sum / static_cast<double>(max_n));
}

double sentence_bleu(const TextPair& pair, int max_n) {
  check_max_n(max_n);
  const Tokens ref = text::metric_tokens(pair.reference);
  const Tokens cand = text::metric_tokens(pair.candidate);
  if (cand.empty()) return 0.0;
  double log_sum = 0.0;
  for (std::size_t n = 1; n <= static_cast<std::size_t>(max_n); ++n) {
    double m = static_cast<double>(clipped_matches(ngrams(cand, n), ngrams(ref, n)));
    double total = cand.size() >= n ? static_cast<double>(cand.size() - n + 1) : 0.0;
    if (n >= 2) {
      m += 1.0;
      total += 1.0;
    }
    if (m == 0.0) return 0.0;
    log_sum += std::log(m / total);
  }
  const double bp = cand.size() < ref.size()
                        ? std::exp(1.0 - static_cast<double>(ref.size()) /
                                             static_cast<double>(cand.size()))
                        : 1.0;
  return bp * std::exp(log_sum / static_cast<double>(max_n));
}

double rouge1(std::span<const TextPair> batch) {
  check_batch(batch);
  double sum = 0.0;
  for (const auto& pair : batch) {
    const Tokens ref = checked_reference(pair);
    const Tokens cand = text::metric_tokens(pair.candidate);
    if (cand.empty()) continue;
    const double overlap = static_cast<double>(clipped_matches(ngrams(cand, 1), ngrams(ref, 1)));
    sum += f1(overlap / static_cast<double>(cand.size()),
              overlap / static_cast<double>(ref.size()));
  }
  return sum / static_cast<double>(batch.size());
}

std::size_t longest_common_subsequence(const Tokens& a, const Tokens& b) {
  std::vector<std::size_t> prev(b.size() + 1, 0);
  std::vector<std::size_t> cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

double rougeL(std::span<const TextPair> batch) {
  check_batch(batch);
  double sum = 0.0;
  for (const auto& pair : batch) {
    const Tokens ref = checked_reference(pair);
    const Tokens cand = text::metric_tokens(pair.candidate);
    if (cand.empty()) continue;
    const double lcs = static_cast<double>(longest_common_subsequence(ref, cand));
    sum += f1(lcs / static_cast<double>(cand.size()), lcs / static_cast<double>(ref.size()));
  }
  return sum / static_cast<double>(batch.size());
}

Alignment align_words(const Tokens& reference, const Tokens& candidate) {
  const std::size_t n = reference.size();
  const std::size_t m = candidate.size();
  // Cost is (edits, -hits): fewest edits first, then the most matches.
  struct Cost {
    std::size_t edits = 0;
    std::size_t hits = 0;
    bool operator==(const Cost&) const = default;
    bool better(const Cost& o) const {
      return edits != o.edits ? edits < o.edits : hits > o.hits;
    }
  };
  std::vector<Cost> cost((n + 1) * (m + 1));
  const auto at = [&](std::size_t i, std::size_t j) -> Cost& {
    return cost[i * (m + 1) + j];
  };
  const auto diag = [&](std::size_t i, std::size_t j) {
    Cost c = at(i - 1, j - 1);
    if (reference[i - 1] == candidate[j - 1]) {
      ++c.hits;
    } else {
      ++c.edits;
    }
    return c;
  };
  const auto gap = [](Cost c) {
    ++c.edits;
    return c;
  };
  for (std::size_t i = 0; i <= n; ++i) at(i, 0) = {i, 0};
  for (std::size_t j = 0; j <= m; ++j) at(0, j) = {j, 0};
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      Cost best = diag(i, j);
      for (const Cost& c : {gap(at(i - 1, j)), gap(at(i, j - 1))}) {
        if (c.better(best)) best = c;
      }
      at(i, j) = best;
    }
  }

  Alignment a;
  std::size_t i = n;
  std::size_t j = m;
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0 && at(i, j) == diag(i, j)) {
      reference[i - 1] == candidate[j - 1] ? ++a.hits : ++a.substitutions;
      --i;
      --j;
    } else if (i > 0 && at(i, j) == gap(at(i - 1, j))) {
      ++a.deletions;
      --i;
    } else {
      ++a.insertions;
      --j;
    }
  }
  return a;
}

double wer(std::span<const TextPair> batch) {
  check_batch(batch);
  std::size_t edits = 0;
  std::size_t ref_words = 0;
  for (const auto& pair : batch) {
    const Tokens ref = checked_reference(pair);
    edits += align_words(ref, text::metric_tokens(pair.candidate)).edits();
    ref_words += ref.size();
  }
  return static_cast<double>(edits) / static_cast<double>(ref_words);
}

double wil(std::span<const TextPair> batch) {
  check_batch(batch);
  std::size_t hits = 0;
  std::size_t ref_words = 0;
  std::size_t cand_words = 0;
  for (const auto& pair : batch) {
    const Tokens ref = checked_reference(pair);
    const Tokens cand = text::metric_tokens(pair.candidate);
    hits += align_words(ref, cand).hits;
    ref_words += ref.size();
    cand_words += cand.size();
  }
  if (cand_words == 0) return 1.0;
  const double c = static_cast<double>(hits);
  return 1.0 - (c / static_cast<double>(ref_words)) * (c / static_cast<double>(cand_words));
}

BertScore bertscore(std::span<const embedding::WordEmbedding> reference,
                    std::span<const embedding::WordEmbedding> candidate) {
  if (reference.empty() || candidate.empty()) {
    throw EmbeddingError("BERTScore needs non-empty reference and candidate");
  }
  const std::size_t dim = reference.front().vector.size();
  const auto check = [dim](const embedding::WordEmbedding& w) {
    if (w.vector.size() != dim) {
      throw EmbeddingError("BERTScore dimension mismatch at '" + w.word + "'");
    }
  };
  for (const auto& w : reference) check(w);
  for (const auto& w : candidate) check(w);

  std::vector<double> sim(reference.size() * candidate.size());
  for (std::size_t i = 0; i < reference.size(); ++i) {
    for (std::size_t j = 0; j < candidate.size(); ++j) {
      sim[i * candidate.size() + j] = simd::cosine(reference[i].vector, candidate[j].vector);
    }
  }
  double recall = 0.0;
  for (std::size_t i = 0; i < reference.size(); ++i) {
    const auto row = sim.begin() + static_cast<std::ptrdiff_t>(i * candidate.size());
    recall += *std::max_element(row, row + static_cast<std::ptrdiff_t>(candidate.size()));
  }
  double precision = 0.0;
  for (std::size_t j = 0; j < candidate.size(); ++j) {
    double best = sim[j];
    for (std::size_t i = 1; i < reference.size(); ++i) {
      best = std::max(best, sim[i * candidate.size() + j]);
    }
    precision += best;
  }
  BertScore s;
  s.precision = precision / static_cast<double>(candidate.size());
  s.recall = recall / static_cast<double>(reference.size());
  s.f1 = f1(s.precision, s.recall);
  return s;
}

BertScore bertscore(std::span<const TextPair> batch,
                    const embedding::EmbeddingProvider& provider) {
  check_batch(batch);
  BertScore mean;
  for (const auto& pair : batch) {
    checked_reference(pair);
    if (text::metric_tokens(pair.candidate).empty()) continue;
    const auto ref = extraction::embed_words(text::nfc(pair.reference), provider);
    const auto cand = extraction::embed_words(text::nfc(pair.candidate), provider);
    const BertScore s = bertscore(ref, cand);
    mean.precision += s.precision;
    mean.recall += s.recall;
    mean.f1 += s.f1;
  }
  const double n = static_cast<double>(batch.size());
  mean.precision /= n;
  mean.recall /= n;
  mean.f1 /= n;
  return mean;
}

std::string GenerationReport::to_json() const {
  nlohmann::ordered_json obj;
  obj["bleu1"] = bleu1;
  obj["bleu2"] = bleu2;
  obj["bleu3"] = bleu3;
  obj["bleu4"] = bleu4;
  obj["rouge1"] = rouge1;
  obj["rougeL"] = rougeL;
  obj["wer"] = wer;
  obj["wil"] = wil;
  if (has_bertscore) {
    obj["bertscore_precision"] = bertscore.precision;
    obj["bertscore_recall"] = bertscore.recall;
    obj["bertscore_f1"] = bertscore.f1;
  }
  obj["n_pairs"] = n_pairs;
  return obj.dump();
}

GenerationReport evaluate_generation(std::span<const TextPair> batch,
                                     const embedding::EmbeddingProvider* provider) {
  GenerationReport r;
  r.bleu1 = bleu(batch, 1);
  r.bleu2 = bleu(batch, 2);
  r.bleu3 = bleu(batch, 3);
  r.bleu4 = bleu(batch, 4);
  r.rouge1 = nlg::rouge1(batch);
  r.rougeL = nlg::rougeL(batch);
  r.wer = nlg::wer(batch);
  r.wil = nlg::wil(batch);
  if (provider != nullptr) {
    r.has_bertscore = true;
    r.bertscore = nlg::bertscore(batch, *provider);
  }
  r.n_pairs = batch.size();
  return r;
}

}  // namespace k2t::nlg
