#include <gtest/gtest.h>

#include <fstream>
#include <future>
#include <vector>

#include "json.hpp"
#include "k2t/corpus/jsonl.hpp"
#include "k2t/decoding/decoders.hpp"
#include "k2t/decoding/toy_model.hpp"
#include "k2t/embedding/provider.hpp"
#include "k2t/error.hpp"
#include "k2t/gateway/client.hpp"
#include "k2t/gateway/remote.hpp"
#include "support/fake_server.hpp"
#include "support/models.hpp"

namespace k2t::gateway {
namespace {

using testing::FakeModelServer;
using testing::fixture_path;

std::vector<Document> lm_corpus() {
  std::ifstream in(fixture_path("lm_corpus.jsonl"));
  return jsonl::parse_documents(in);
}

class Gateway : public ::testing::Test {
 protected:
  Gateway()
      : docs_(lm_corpus()),
        model_(docs_, 0.1, 2.0),
        provider_(1, 8),
        server_(&model_, &provider_) {}

  std::shared_ptr<GatewayClient> client(int retries = 2) {
    GatewayConfig c;
    c.base_url = server_.url();
    c.max_retries = retries;
    c.backoff_base_ms = 1;
    c.timeout_ms = 5000;
    return std::make_shared<GatewayClient>(c);
  }

  std::vector<Document> docs_;
  decoding::ToyBigramModel model_;
  embedding::TestEmbeddingProvider provider_;
  FakeModelServer server_;
};

TEST(GatewayConfigTest, Validation) {
  GatewayConfig c;
  EXPECT_THROW(c.validate(), InvalidArgument);
  c.base_url = "http://127.0.0.1:1";
  EXPECT_NO_THROW(c.validate());
  c.max_in_flight = 0;
  EXPECT_THROW(c.validate(), InvalidArgument);
  c.max_in_flight = 1;
  c.timeout_ms = 0;
  EXPECT_THROW(c.validate(), InvalidArgument);
}

TEST_F(Gateway, InfoAndEmbedding) {
  auto c = client();
  const auto info = fetch_info(*c);
  EXPECT_EQ(info.dimension, 8u);
  EXPECT_EQ(info.vocab, model_.vocabulary().tokens());

  RemoteEmbeddingProvider remote(c);
  EXPECT_EQ(remote.dimension(), 8u);
  const auto out = remote.embed("আমি ভাত");
  const auto local = provider_.embed("আমি ভাত");
  ASSERT_EQ(out.tokens.size(), local.tokens.size());
  for (std::size_t i = 0; i < out.tokens.size(); ++i) {
    EXPECT_EQ(out.tokens[i].token, local.tokens[i].token);
    EXPECT_EQ(out.tokens[i].vector, local.tokens[i].vector);
  }
}

TEST_F(Gateway, ConformanceCases) {
  std::ifstream in(fixture_path("gateway_conformance.json"));
  const auto cases = nlohmann::json::parse(in);
  // The canned bodies use two-dimensional vectors.
  const embedding::TestEmbeddingProvider small(1, 2);
  FakeModelServer server(&model_, &small);
  GatewayConfig cfg;
  cfg.base_url = server.url();
  cfg.max_retries = 1;
  cfg.backoff_base_ms = 1;
  auto c = std::make_shared<GatewayClient>(cfg);
  RemoteEmbeddingProvider embed(c);
  RemoteLanguageModel lm(c);
  const std::vector<decoding::TokenId> prefix{lm.vocabulary().bos_id()};

  auto run = [&](const nlohmann::json& tc, auto&& call) {
    SCOPED_TRACE(tc["name"].get<std::string>());
    const std::string expect = tc["expect"];
    if (expect == "ok") {
      call();
    } else if (expect == "protocol_error") {
      EXPECT_THROW(call(), ProtocolError);
    } else if (expect == "rejected") {
      try {
        call();
        ADD_FAILURE() << "no exception";
      } catch (const RequestRejected& e) {
        EXPECT_EQ(e.status(), tc["status"].get<int>());
      }
    } else if (expect == "unavailable") {
      EXPECT_THROW(call(), ProviderUnavailable);
    } else {
      FAIL() << "unknown expectation " << expect;
    }
  };

  for (const auto& tc : cases["embed"]) {
    server.override_response("/v1/embed", tc["body"], tc["status"]);
    run(tc, [&] {
      const auto out = embed.embed("a");
      EXPECT_EQ(out.tokens.size(), tc["tokens"].get<std::size_t>());
      EXPECT_EQ(out.truncated, tc["truncated"].get<bool>());
    });
  }
  for (const auto& tc : cases["next_logits"]) {
    server.override_response("/v1/next_logits", tc["body"], tc["status"]);
    run(tc, [&] { lm.next_logits(prefix, KeywordSet{}); });
  }
}

TEST_F(Gateway, ImplicitTruncationAtMaxTokens) {
  server_.override_response(
      "/v1/embed", {{"tokens", {"a", "b"}}, {"embeddings", {{1, 0, 0, 0, 0, 0, 0, 0}, {0, 1, 0, 0, 0, 0, 0, 0}}}});
  RemoteEmbeddingProvider remote(client(), 2);
  EXPECT_TRUE(remote.embed("a b c").truncated);
}

TEST_F(Gateway, RetriesTransientFailures) {
  auto c = client(3);
  RemoteEmbeddingProvider remote(c);
  server_.fail_next("/v1/embed", 2);
  EXPECT_NO_THROW(remote.embed("আমি"));
  EXPECT_EQ(c->retries(), 2);
  EXPECT_EQ(server_.hits("/v1/embed"), 3);
}

TEST_F(Gateway, ExhaustedRetriesReportAttempts) {
  auto c = client(2);
  RemoteEmbeddingProvider remote(c);
  server_.fail_next("/v1/embed", 10);
  try {
    remote.embed("আমি");
    FAIL() << "expected ProviderUnavailable";
  } catch (const ProviderUnavailable& e) {
    EXPECT_EQ(e.attempts(), 3);
  }
  EXPECT_EQ(server_.hits("/v1/embed"), 3);
}

TEST(GatewayOffline, UnreachableServer) {
  GatewayConfig c;
  c.base_url = "http://127.0.0.1:1";
  c.max_retries = 1;
  c.backoff_base_ms = 1;
  c.timeout_ms = 500;
  GatewayClient client(c);
  try {
    client.get("/v1/info");
    FAIL() << "expected ProviderUnavailable";
  } catch (const ProviderUnavailable& e) {
    EXPECT_EQ(e.attempts(), 2);
  }
}

TEST_F(Gateway, RemoteDecodingMatchesLocal) {
  RemoteLanguageModel remote(client());
  const KeywordSet kw{"ভাত"};
  for (auto strategy : {decoding::Strategy::Greedy, decoding::Strategy::Beam,
                        decoding::Strategy::TopK}) {
    decoding::DecoderConfig cfg;
    cfg.strategy = strategy;
    cfg.max_length = 8;
    cfg.seed = 5;
    const auto a = decoding::decode(model_, kw, cfg);
    const auto b = decoding::decode(remote, kw, cfg);
    EXPECT_EQ(a.ids, b.ids);
    EXPECT_EQ(a.text, b.text);
    EXPECT_DOUBLE_EQ(a.score, b.score);
  }
}

TEST_F(Gateway, BosOnlyPrefix) {
  RemoteLanguageModel remote(client());
  const std::vector<decoding::TokenId> prefix{remote.vocabulary().bos_id()};
  EXPECT_EQ(remote.next_logits(prefix, KeywordSet{}), model_.next_logits(prefix, KeywordSet{}));
}

TEST_F(Gateway, GenerateEchoesAppliedConfig) {
  auto c = client();
  decoding::DecoderConfig cfg;
  cfg.strategy = decoding::Strategy::Greedy;
  cfg.max_length = 10;
  const KeywordSet kw{"ভাত"};
  const auto gen = remote_generate(*c, kw, cfg);
  const auto local = decoding::decode(model_, kw, cfg);
  EXPECT_EQ(gen.result.text, local.text);
  EXPECT_NEAR(gen.result.score, local.score, 1e-12);
  EXPECT_EQ(gen.applied_config, nlohmann::json(config_to_json(cfg)));
  EXPECT_EQ(config_from_json(gen.applied_config).max_length, 10u);
}

TEST_F(Gateway, UnknownStrategyIsRejected) {
  auto c = client();
  try {
    c->post("/v1/generate", {{"keywords", {"ভাত"}}, {"config", {{"strategy", "nucleus"}}}});
    FAIL() << "expected RequestRejected";
  } catch (const RequestRejected& e) {
    EXPECT_EQ(e.status(), 400);
  }
  EXPECT_EQ(c->retries(), 0);
}

TEST(ConfigJson, RoundTripAndValidation) {
  decoding::DecoderConfig cfg;
  cfg.strategy = decoding::Strategy::TopPTopK;
  cfg.top_p = 0.5;
  cfg.constraint_match = decoding::ConstraintMatch::TokenSequence;
  const auto j = config_to_json(cfg);
  std::vector<std::string> keys;
  for (const auto& [k, v] : j.items()) keys.push_back(k);
  EXPECT_EQ(keys, (std::vector<std::string>{"strategy", "beam_width", "top_k", "top_p",
                                            "temperature", "repetition_penalty",
                                            "length_penalty", "max_length", "seed",
                                            "constraint_match"}));
  EXPECT_EQ(j["strategy"], "top-p-top-k");
  const auto back = config_from_json(j);
  EXPECT_EQ(back.strategy, cfg.strategy);
  EXPECT_EQ(back.top_p, 0.5);
  EXPECT_EQ(back.constraint_match, cfg.constraint_match);
  EXPECT_THROW(config_from_json({{"beam", 2}}), InvalidArgument);
  EXPECT_THROW(config_from_json({{"top_p", 0.0}}), InvalidArgument);
  EXPECT_THROW(config_from_json({{"beam_width", "two"}}), InvalidArgument);
}

TEST_F(Gateway, BearerToken) {
  server_.require_token("s3cret");
  EXPECT_THROW(fetch_info(*client()), RequestRejected);
  GatewayConfig c;
  c.base_url = server_.url();
  c.auth_token = "s3cret";
  EXPECT_NO_THROW(fetch_info(GatewayClient(c)));
}

TEST_F(Gateway, ConcurrentCallsShareClient) {
  auto c = client();
  RemoteEmbeddingProvider remote(c);
  std::vector<std::future<std::size_t>> futures;
  for (int i = 0; i < 16; ++i) {
    futures.push_back(std::async(std::launch::async, [&remote, i] {
      return remote.embed("শব্দ " + std::to_string(i)).tokens.size();
    }));
  }
  for (auto& f : futures) EXPECT_GT(f.get(), 2u);
  EXPECT_EQ(server_.hits("/v1/embed"), 16);
}

}  // namespace
}  // namespace k2t::gateway
