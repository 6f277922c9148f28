#pragma once

#include <atomic>
#include <cstddef>
#include <memory>
#include <mutex>
#include <semaphore>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "k2t/rng.hpp"

namespace httplib {
class Client;
}

namespace k2t::gateway {

struct GatewayConfig {
  /// e.g. "http://127.0.0.1:8080"
  std::string base_url;
  int timeout_ms = 30000;
  int max_retries = 3;
  std::size_t max_in_flight = 4;
  /// Sent as `Authorization: Bearer <token>` when non-empty.
  std::string auth_token;
  /// First retry waits about this long; doubles per retry, capped at timeout_ms.
  int backoff_base_ms = 100;

  /// Throws InvalidArgument unless timeout_ms > 0, max_retries >= 0,
  /// max_in_flight >= 1 and base_url is set.
  void validate() const;
};

/// JSON-over-HTTP client shared by the remote providers. Safe for concurrent
/// calls; at most max_in_flight requests are outstanding at once.
///
/// Transport failures, timeouts and 5xx responses are retried with jittered
/// exponential backoff; after max_retries retries ProviderUnavailable is
/// thrown with the attempt count. 4xx raises RequestRejected and malformed
/// bodies raise ProtocolError, neither retried.
class GatewayClient {
 public:
  explicit GatewayClient(GatewayConfig config);
  ~GatewayClient();

  GatewayClient(const GatewayClient&) = delete;
  GatewayClient& operator=(const GatewayClient&) = delete;

  nlohmann::json get(std::string_view path) const;
  nlohmann::json post(std::string_view path, const nlohmann::json& body) const;

  const GatewayConfig& config() const noexcept { return config_; }
  /// Retries performed so far, over all calls.
  long retries() const noexcept { return retries_.load(); }

 private:
  nlohmann::json call(bool is_post, std::string_view path, const nlohmann::json* body) const;
  std::unique_ptr<httplib::Client> acquire() const;
  void release(std::unique_ptr<httplib::Client> client) const;
  int backoff_ms(int retry) const;

  GatewayConfig config_;
  mutable std::counting_semaphore<> slots_;
  mutable std::mutex mutex_;  // guards idle_ and jitter_
  mutable std::vector<std::unique_ptr<httplib::Client>> idle_;
  mutable Rng jitter_;
  mutable std::atomic<long> retries_{0};
};

}  // namespace k2t::gateway
