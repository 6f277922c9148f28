#include "k2t/extraction/extractor.hpp"

#include "k2t/error.hpp"
#include "k2t/extraction/yake.hpp"
#include "k2t/simd/kernels.hpp"
#include "k2t/text.hpp"

namespace k2t::extraction {
namespace {

template <typename E>
[[noreturn]] void rethrow_for(const std::string& id, const E& e) {
  throw E(std::string("document ") + id + ": " + e.what());
}

}  // namespace

std::string_view to_string(ExtractorKind kind) {
  switch (kind) {
    case ExtractorKind::MeanCosine: return "mean-cosine";
    case ExtractorKind::TextRank: return "textrank";
    case ExtractorKind::Yake: return "yake";
  }
  return "unknown";
}

ExtractorKind parse_extractor_kind(std::string_view name) {
  if (name == "mean-cosine") return ExtractorKind::MeanCosine;
  if (name == "textrank") return ExtractorKind::TextRank;
  if (name == "yake") return ExtractorKind::Yake;
  throw InvalidArgument("unknown extraction method: " + std::string(name));
}

std::vector<embedding::WordEmbedding> embed_words(
    std::string_view text, const embedding::EmbeddingProvider& provider) {
  const auto words = text::split_words(text);
  const auto output = provider.embed(text);
  const auto pieces = embedding::accumulate_subwords(output.tokens, provider.scheme());

  std::vector<embedding::WordEmbedding> aligned;
  aligned.reserve(words.size());
  std::size_t j = 0;
  for (const auto& word : words) {
    const std::string target = text::nfc(word);
    std::string joined;
    std::vector<double> sum;
    std::size_t consumed = 0;
    while (j < pieces.size() && joined.size() < target.size()) {
      joined = text::nfc(joined + pieces[j].word);
      if (sum.empty()) {
        sum = pieces[j].vector;
      } else {
        simd::add_into(sum, pieces[j].vector);
      }
      ++consumed;
      ++j;
    }
    if (joined != target) {
      const bool cut_short = j == pieces.size() && output.truncated &&
                             target.compare(0, joined.size(), joined) == 0;
      if (cut_short) break;
      throw EmbeddingError("tokens do not align with word '" + word + "'");
    }
    if (consumed > 1) simd::scale(sum, 1.0 / static_cast<double>(consumed));
    aligned.push_back({word, std::move(sum), aligned.size()});
  }
  if (j != pieces.size()) {
    throw EmbeddingError("provider returned tokens beyond the text's words");
  }
  return aligned;
}

Extraction extract_scored(const Document& doc, const ExtractorConfig& config,
                          const embedding::EmbeddingProvider* provider) {
  Extraction result;
  try {
    if (config.kind == ExtractorKind::Yake) {
      const auto words = yake_words(doc.text);
      if (words.empty()) throw InvalidArgument("document has no words");
      result.scored = score_yake(words, config.yake_window);
    } else {
      if (provider == nullptr) {
        throw InvalidArgument(std::string(to_string(config.kind)) +
                              " extraction needs an embedding provider");
      }
      const auto words = embed_words(doc.text, *provider);
      if (words.empty()) throw InvalidArgument("document has no words");
      result.truncated = words.size() < text::split_words(doc.text).size();
      result.scored = config.kind == ExtractorKind::MeanCosine
                          ? score_mean_cosine(words)
                          : score_textrank(words, config.textrank).scores;
    }
    result.keywords = select_keywords(result.scored, config.policy);
  } catch (const ProviderUnavailable& e) {
    throw ProviderUnavailable("document " + doc.id + ": " + e.what(), e.attempts());
  } catch (const ProtocolError& e) {
    rethrow_for(doc.id, e);
  } catch (const EmbeddingError& e) {
    rethrow_for(doc.id, e);
  } catch (const InvalidArgument& e) {
    rethrow_for(doc.id, e);
  }
  return result;
}

KeywordSet extract(const Document& doc, ExtractorKind kind,
                   const embedding::EmbeddingProvider* provider,
                   const SelectionPolicy& policy) {
  ExtractorConfig config;
  config.kind = kind;
  config.policy = policy;
  return extract_scored(doc, config, provider).keywords;
}

}  // namespace k2t::extraction
