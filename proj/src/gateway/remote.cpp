#include "k2t/gateway/remote.hpp"

#include <cmath>
#include <set>

#include "k2t/error.hpp"
#include "k2t/text.hpp"

namespace k2t::gateway {
namespace {

using nlohmann::json;

const json& field(const json& obj, const char* name, const char* path) {
  auto it = obj.find(name);
  if (it == obj.end()) {
    throw ProtocolError(std::string(path) + ": missing field '" + name + "'");
  }
  return *it;
}

std::vector<double> number_array(const json& v, const char* what) {
  if (!v.is_array()) throw ProtocolError(std::string(what) + " is not an array");
  std::vector<double> out;
  out.reserve(v.size());
  for (const auto& x : v) {
    if (!x.is_number()) throw ProtocolError(std::string(what) + " holds a non-number");
    out.push_back(x.get<double>());
  }
  return out;
}

json keyword_array(const KeywordSet& keywords) {
  json arr = json::array();
  for (const auto& k : keywords) arr.push_back(k);
  return arr;
}

}  // namespace

ServerInfo fetch_info(const GatewayClient& client) {
  const json resp = client.get("/v1/info");
  ServerInfo info;
  const auto& dim = field(resp, "dimension", "/v1/info");
  const auto& vocab = field(resp, "vocab", "/v1/info");
  const auto& id = field(resp, "model_id", "/v1/info");
  if (!dim.is_number_integer() || dim.get<long long>() < 0) {
    throw ProtocolError("/v1/info: dimension is not a non-negative integer");
  }
  if (!vocab.is_array() || !id.is_string()) throw ProtocolError("/v1/info: bad field types");
  info.dimension = dim.get<std::size_t>();
  for (const auto& t : vocab) {
    if (!t.is_string()) throw ProtocolError("/v1/info: vocab entry is not a string");
    info.vocab.push_back(t.get<std::string>());
  }
  info.model_id = id.get<std::string>();
  return info;
}

RemoteEmbeddingProvider::RemoteEmbeddingProvider(std::shared_ptr<const GatewayClient> client,
                                                 std::size_t max_tokens)
    : client_(std::move(client)), dimension_(fetch_info(*client_).dimension),
      max_tokens_(max_tokens) {
  if (dimension_ == 0) throw ProtocolError("/v1/info: server declares dimension 0");
}

embedding::EmbeddingOutput RemoteEmbeddingProvider::embed(std::string_view text) const {
  const json resp = client_->post("/v1/embed", json{{"text", std::string(text)}});
  const auto& tokens = field(resp, "tokens", "/v1/embed");
  const auto& vectors = field(resp, "embeddings", "/v1/embed");
  if (!tokens.is_array() || !vectors.is_array()) {
    throw ProtocolError("/v1/embed: tokens and embeddings must be arrays");
  }
  if (tokens.size() != vectors.size()) {
    throw ProtocolError("/v1/embed: " + std::to_string(tokens.size()) + " tokens but " +
                        std::to_string(vectors.size()) + " embeddings");
  }
  embedding::EmbeddingOutput out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (!tokens[i].is_string()) throw ProtocolError("/v1/embed: token is not a string");
    auto v = number_array(vectors[i], "/v1/embed embedding");
    if (v.size() != dimension_) {
      throw ProtocolError("/v1/embed: embedding of length " + std::to_string(v.size()) +
                          ", server dimension is " + std::to_string(dimension_));
    }
    out.tokens.push_back({tokens[i].get<std::string>(), std::move(v)});
  }
  if (auto it = resp.find("truncated"); it != resp.end() && it->is_boolean()) {
    out.truncated = it->get<bool>();
  } else {
    out.truncated = out.tokens.size() >= max_tokens_;
  }
  return out;
}

RemoteLanguageModel::RemoteLanguageModel(std::shared_ptr<const GatewayClient> client)
    : client_(std::move(client)), vocab_(fetch_info(*client_).vocab) {}

std::vector<double> RemoteLanguageModel::next_logits(std::span<const decoding::TokenId> prefix,
                                                     const KeywordSet& keywords) const {
  json body;
  body["prefix_ids"] = std::vector<decoding::TokenId>(prefix.begin(), prefix.end());
  body["keywords"] = keyword_array(keywords);
  const json resp = client_->post("/v1/next_logits", body);
  auto logits = number_array(field(resp, "logits", "/v1/next_logits"), "/v1/next_logits logits");
  if (logits.size() != vocab_.size()) {
    throw ProtocolError("/v1/next_logits: " + std::to_string(logits.size()) +
                        " logits for a vocabulary of " + std::to_string(vocab_.size()));
  }
  return logits;
}

nlohmann::ordered_json config_to_json(const decoding::DecoderConfig& c) {
  nlohmann::ordered_json obj;
  obj["strategy"] = std::string(to_string(c.strategy));
  obj["beam_width"] = c.beam_width;
  obj["top_k"] = c.top_k;
  obj["top_p"] = c.top_p;
  obj["temperature"] = c.temperature;
  obj["repetition_penalty"] = c.repetition_penalty;
  obj["length_penalty"] = c.length_penalty;
  obj["max_length"] = c.max_length;
  obj["seed"] = c.seed;
  obj["constraint_match"] = std::string(to_string(c.constraint_match));
  return obj;
}

decoding::DecoderConfig config_from_json(const nlohmann::json& obj) {
  if (!obj.is_object()) throw InvalidArgument("decoder config must be an object");
  decoding::DecoderConfig c;
  auto count = [](const json& v, const std::string& key) {
    if (!v.is_number_unsigned()) throw InvalidArgument(key + " must be a non-negative integer");
    return v.get<std::uint64_t>();
  };
  auto real = [](const json& v, const std::string& key) {
    if (!v.is_number()) throw InvalidArgument(key + " must be a number");
    return v.get<double>();
  };
  auto name = [](const json& v, const std::string& key) {
    if (!v.is_string()) throw InvalidArgument(key + " must be a string");
    return v.get<std::string>();
  };
  for (const auto& [key, v] : obj.items()) {
    if (key == "strategy") c.strategy = decoding::parse_strategy(name(v, key));
    else if (key == "beam_width") c.beam_width = count(v, key);
    else if (key == "top_k") c.top_k = count(v, key);
    else if (key == "top_p") c.top_p = real(v, key);
    else if (key == "temperature") c.temperature = real(v, key);
    else if (key == "repetition_penalty") c.repetition_penalty = real(v, key);
    else if (key == "length_penalty") c.length_penalty = real(v, key);
    else if (key == "max_length") c.max_length = count(v, key);
    else if (key == "seed") c.seed = count(v, key);
    else if (key == "constraint_match") c.constraint_match = decoding::parse_constraint_match(name(v, key));
    else throw InvalidArgument("unknown decoder config key: " + key);
  }
  c.validate();
  return c;
}

RemoteGeneration remote_generate(const GatewayClient& client, const KeywordSet& keywords,
                                 const decoding::DecoderConfig& config) {
  config.validate();
  json body;
  body["keywords"] = keyword_array(keywords);
  body["config"] = config_to_json(config);
  const json resp = client.post("/v1/generate", body);
  const auto& text = field(resp, "text", "/v1/generate");
  const auto& score = field(resp, "score", "/v1/generate");
  if (!text.is_string() || !score.is_number()) {
    throw ProtocolError("/v1/generate: bad field types");
  }
  RemoteGeneration out;
  out.result.text = text.get<std::string>();
  out.result.score = score.get<double>();
  if (auto it = resp.find("applied_config"); it != resp.end()) out.applied_config = *it;

  const std::string normalized = text::nfc(out.result.text);
  std::vector<std::string> missing;
  for (const auto& k : keywords) {
    if (normalized.find(text::normalize_keyword(k)) == std::string::npos) missing.push_back(k);
  }
  out.result.missing_keywords = KeywordSet(std::move(missing));
  return out;
}

}  // namespace k2t::gateway
