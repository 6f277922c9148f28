#include "run_config.hpp"

#include <cstdlib>
#include <fstream>
#include <functional>
#include <limits>
#include <map>

#include "k2t/gateway/remote.hpp"

namespace k2t::cli {
namespace {

using nlohmann::json;
using Setters = std::map<std::string, std::function<void(const json&)>>;

void apply(const json& obj, const std::string& where, const Setters& setters) {
  if (!obj.is_object()) throw UsageError("config: '" + where + "' must be an object");
  for (const auto& [key, value] : obj.items()) {
    const auto it = setters.find(key);
    if (it == setters.end()) throw UsageError("config: unknown key '" + where + "." + key + "'");
    try {
      it->second(value);
    } catch (const UsageError&) {
      throw;
    } catch (const std::exception& e) {
      throw UsageError("config: '" + where + "." + key + "': " + e.what());
    }
  }
}

std::size_t as_count(const json& v) {
  if (!v.is_number_unsigned()) throw UsageError("expected a non-negative integer, got " + v.dump());
  return v.get<std::size_t>();
}

int as_int(const json& v) {
  if (!v.is_number_integer()) throw UsageError("expected an integer, got " + v.dump());
  return v.get<int>();
}

double as_double(const json& v) {
  if (!v.is_number()) throw UsageError("expected a number, got " + v.dump());
  return v.get<double>();
}

std::string as_string(const json& v) {
  if (!v.is_string()) throw UsageError("expected a string, got " + v.dump());
  return v.get<std::string>();
}

bool as_bool(const json& v) {
  if (!v.is_boolean()) throw UsageError("expected true or false, got " + v.dump());
  return v.get<bool>();
}

}  // namespace

extraction::SelectionPolicy policy_from_json(const json& obj) {
  extraction::SelectionPolicy policy = extraction::SelectionPolicy::defaults();
  apply(obj, "policy",
        {{"tiers",
          [&](const json& v) {
            if (!v.is_array()) throw UsageError("expected an array of tiers");
            policy.tiers.clear();
            for (const auto& t : v) {
              extraction::SelectionTier tier;
              apply(t, "policy.tiers[]",
                    {{"min_words", [&](const json& x) { tier.min_words = as_count(x); }},
                     {"max_words",
                      [&](const json& x) {
                        tier.max_words = x.is_null() ? std::numeric_limits<std::size_t>::max()
                                                     : as_count(x);
                      }},
                     {"fraction", [&](const json& x) { tier.fraction = as_double(x); }}});
              policy.tiers.push_back(tier);
            }
          }},
         {"min_keywords", [&](const json& v) { policy.min_keywords = as_count(v); }}});
  try {
    policy.validate();
  } catch (const InvalidArgument& e) {
    throw UsageError(std::string("policy: ") + e.what());
  }
  return policy;
}

nlohmann::ordered_json policy_to_json(const extraction::SelectionPolicy& policy) {
  nlohmann::ordered_json tiers = nlohmann::ordered_json::array();
  for (const auto& t : policy.tiers) {
    nlohmann::ordered_json j;
    j["min_words"] = t.min_words;
    if (t.max_words == std::numeric_limits<std::size_t>::max()) {
      j["max_words"] = nullptr;
    } else {
      j["max_words"] = t.max_words;
    }
    j["fraction"] = t.fraction;
    tiers.push_back(std::move(j));
  }
  nlohmann::ordered_json out;
  out["tiers"] = std::move(tiers);
  out["min_keywords"] = policy.min_keywords;
  return out;
}

static json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw UsageError(path.string() + ": " + e.what());
  }
}

extraction::SelectionPolicy load_policy(const std::filesystem::path& path) {
  return policy_from_json(read_json_file(path));
}

void RunConfig::merge_json(const json& obj) {
  auto& ex = extraction;
  apply(obj, "config",
        {{"provider",
          [&](const json& s) {
            apply(s, "provider",
                  {{"kind", [&](const json& v) { provider.kind = as_string(v); }},
                   {"seed", [&](const json& v) { provider.seed = as_count(v); }},
                   {"dimension", [&](const json& v) { provider.dimension = as_count(v); }},
                   {"max_tokens", [&](const json& v) { provider.max_tokens = as_count(v); }}});
          }},
         {"gateway",
          [&](const json& s) {
            apply(s, "gateway",
                  {{"url", [&](const json& v) { gateway.base_url = as_string(v); }},
                   {"token", [&](const json& v) { gateway.auth_token = as_string(v); }},
                   {"timeout_ms", [&](const json& v) { gateway.timeout_ms = as_int(v); }},
                   {"max_retries", [&](const json& v) { gateway.max_retries = as_int(v); }},
                   {"max_in_flight", [&](const json& v) { gateway.max_in_flight = as_count(v); }},
                   {"backoff_base_ms",
                    [&](const json& v) { gateway.backoff_base_ms = as_int(v); }}});
          }},
         {"extraction",
          [&](const json& s) {
            apply(s, "extraction",
                  {{"method",
                    [&](const json& v) { ex.kind = extraction::parse_extractor_kind(as_string(v)); }},
                   {"policy", [&](const json& v) { ex.policy = policy_from_json(v); }},
                   {"yake_window", [&](const json& v) { ex.yake_window = as_count(v); }},
                   {"textrank", [&](const json& t) {
                      apply(t, "extraction.textrank",
                            {{"damping", [&](const json& v) { ex.textrank.damping = as_double(v); }},
                             {"tolerance",
                              [&](const json& v) { ex.textrank.tolerance = as_double(v); }},
                             {"max_iterations", [&](const json& v) {
                                ex.textrank.max_iterations = as_count(v);
                              }}});
                    }}});
          }},
         {"split",
          [&](const json& s) {
            apply(s, "split",
                  {{"fractions",
                    [&](const json& v) {
                      std::string text;
                      if (v.is_array()) {
                        for (const auto& x : v) text += (text.empty() ? "" : ",") + json(as_double(x)).dump();
                      } else {
                        text = as_string(v);
                      }
                      split = pipeline::SplitSpec::parse(text, split.seed);
                    }},
                   {"seed", [&](const json& v) { split.seed = as_count(v); }}});
          }},
         {"build",
          [&](const json& s) {
            apply(s, "build",
                  {{"jobs", [&](const json& v) { build.jobs = as_count(v); }},
                   {"resume", [&](const json& v) { build.resume = as_bool(v); }}});
          }},
         {"decoder",
          [&](const json& s) {
            if (!s.is_object()) throw UsageError("config: 'decoder' must be an object");
            json merged = gateway::config_to_json(decoder);
            for (const auto& [k, v] : s.items()) merged[k] = v;
            decoder = gateway::config_from_json(merged);
          }},
         {"generation",
          [&](const json& s) {
            apply(s, "generation",
                  {{"constrained", [&](const json& v) { generation.constrained = as_bool(v); }},
                   {"lm_corpus", [&](const json& v) { generation.lm_corpus = as_string(v); }},
                   {"smoothing", [&](const json& v) { generation.smoothing = as_double(v); }},
                   {"keyword_bonus",
                    [&](const json& v) { generation.keyword_bonus = as_double(v); }}});
          }},
         {"stats", [&](const json& s) {
            apply(s, "stats", {{"top", [&](const json& v) { stats.top = as_count(v); }}});
          }}});
}

void RunConfig::merge_file(const std::filesystem::path& path) {
  const json obj = read_json_file(path);
  try {
    merge_json(obj);
  } catch (const UsageError& e) {
    throw UsageError(path.string() + ": " + e.what());
  }
}

void RunConfig::merge_env() {
  if (const char* url = std::getenv("K2T_GATEWAY_URL"); url && *url) gateway.base_url = url;
  if (const char* token = std::getenv("K2T_GATEWAY_TOKEN"); token && *token) {
    gateway.auth_token = token;
  }
  if (const char* jobs = std::getenv("K2T_JOBS"); jobs && *jobs) {
    char* end = nullptr;
    const unsigned long n = std::strtoul(jobs, &end, 10);
    if (*end != '\0' || n == 0 || jobs[0] == '-') {
      throw UsageError(std::string("K2T_JOBS must be a positive integer, got '") + jobs + "'");
    }
    build.jobs = n;
  }
}

nlohmann::ordered_json RunConfig::to_json() const {
  nlohmann::ordered_json out;
  out["provider"] = {{"kind", provider.kind},
                     {"seed", provider.seed},
                     {"dimension", provider.dimension},
                     {"max_tokens", provider.max_tokens}};
  nlohmann::ordered_json gw;
  gw["url"] = gateway.base_url;
  gw["token"] = gateway.auth_token.empty() ? "" : "***";
  gw["timeout_ms"] = gateway.timeout_ms;
  gw["max_retries"] = gateway.max_retries;
  gw["max_in_flight"] = gateway.max_in_flight;
  gw["backoff_base_ms"] = gateway.backoff_base_ms;
  out["gateway"] = std::move(gw);
  nlohmann::ordered_json ex;
  ex["method"] = extraction::to_string(extraction.kind);
  ex["policy"] = policy_to_json(extraction.policy);
  ex["yake_window"] = extraction.yake_window;
  ex["textrank"] = {{"damping", extraction.textrank.damping},
                    {"tolerance", extraction.textrank.tolerance},
                    {"max_iterations", extraction.textrank.max_iterations}};
  out["extraction"] = std::move(ex);
  out["split"] = {{"fractions", {split.train, split.validation, split.test}},
                  {"seed", split.seed}};
  out["build"] = {{"jobs", build.jobs}, {"resume", build.resume}};
  out["decoder"] = gateway::config_to_json(decoder);
  nlohmann::ordered_json gen;
  gen["constrained"] = generation.constrained;
  gen["lm_corpus"] = generation.lm_corpus;
  gen["smoothing"] = generation.smoothing;
  gen["keyword_bonus"] = generation.keyword_bonus;
  out["generation"] = std::move(gen);
  out["stats"] = {{"top", stats.top}};
  return out;
}

std::unique_ptr<embedding::EmbeddingProvider> make_provider(const RunConfig& config) {
  if (config.provider.kind == "test") {
    if (config.provider.dimension < 2) throw UsageError("provider dimension must be >= 2");
    return std::make_unique<embedding::TestEmbeddingProvider>(
        config.provider.seed, config.provider.dimension, config.provider.max_tokens);
  }
  if (config.provider.kind == "gateway") {
    auto client = std::make_shared<const gateway::GatewayClient>(config.gateway);
    return std::make_unique<gateway::RemoteEmbeddingProvider>(client, config.provider.max_tokens);
  }
  throw UsageError("unknown provider '" + config.provider.kind + "' (test or gateway)");
}

}  // namespace k2t::cli
