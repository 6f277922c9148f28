#pragma once

#include <atomic>
#include <deque>
#include <functional>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <unordered_map>

#include "json.hpp"
#include "k2t/decoding/language_model.hpp"
#include "k2t/embedding/provider.hpp"

namespace httplib {
class Server;
struct Response;
}

namespace k2t::testing {

/// In-process model server speaking the gateway protocol, backed by local
/// models. Failures can be scripted per path.
class FakeModelServer {
 public:
  /// Either backend may be null; the matching endpoints then answer 501.
  FakeModelServer(const decoding::LanguageModel* model,
                  const embedding::EmbeddingProvider* provider);
  ~FakeModelServer();

  FakeModelServer(const FakeModelServer&) = delete;
  FakeModelServer& operator=(const FakeModelServer&) = delete;

  std::string url() const;

  /// The next `count` requests to `path` answer `status` without work.
  void fail_next(const std::string& path, int count, int status = 503);
  /// Replaces the handler of `path` with a canned JSON body.
  void override_response(const std::string& path, nlohmann::json body, int status = 200);
  /// Requests without `Authorization: Bearer <token>` get 401.
  void require_token(std::string token);

  /// Requests received per path, including failed ones.
  int hits(const std::string& path) const;

 private:
  bool intercept(const std::string& path, const std::string& auth, httplib::Response& res);

  const decoding::LanguageModel* model_;
  const embedding::EmbeddingProvider* provider_;
  std::unique_ptr<httplib::Server> server_;
  std::thread thread_;
  int port_ = 0;

  mutable std::mutex mutex_;
  struct Failure {
    std::string path;
    int status;
  };
  std::deque<Failure> failures_;
  std::unordered_map<std::string, std::pair<nlohmann::json, int>> overrides_;
  std::unordered_map<std::string, int> hits_;
  std::string token_;
};

}  // namespace k2t::testing
