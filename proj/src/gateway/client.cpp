#include "k2t/gateway/client.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <thread>

#include "httplib.h"
#include "k2t/error.hpp"

namespace k2t::gateway {
namespace {

std::ptrdiff_t slot_count(const GatewayConfig& c) {
  c.validate();
  return static_cast<std::ptrdiff_t>(c.max_in_flight);
}

// Returns the semaphore slot on every exit path.
class SlotGuard {
 public:
  explicit SlotGuard(std::counting_semaphore<>& s) : s_(s) { s_.acquire(); }
  ~SlotGuard() { s_.release(); }
  SlotGuard(const SlotGuard&) = delete;
  SlotGuard& operator=(const SlotGuard&) = delete;

 private:
  std::counting_semaphore<>& s_;
};

}  // namespace

void GatewayConfig::validate() const {
  if (base_url.empty()) throw InvalidArgument("gateway base_url is empty");
  if (timeout_ms <= 0) throw InvalidArgument("gateway timeout must be > 0");
  if (max_retries < 0) throw InvalidArgument("gateway max_retries must be >= 0");
  if (max_in_flight < 1) throw InvalidArgument("gateway max_in_flight must be >= 1");
  if (backoff_base_ms < 0) throw InvalidArgument("gateway backoff must be >= 0");
}

GatewayClient::GatewayClient(GatewayConfig config)
    : config_(std::move(config)), slots_(slot_count(config_)), jitter_(0x6a7e) {}

GatewayClient::~GatewayClient() = default;

std::unique_ptr<httplib::Client> GatewayClient::acquire() const {
  {
    std::lock_guard lock(mutex_);
    if (!idle_.empty()) {
      auto c = std::move(idle_.back());
      idle_.pop_back();
      return c;
    }
  }
  auto c = std::make_unique<httplib::Client>(config_.base_url);
  if (!c->is_valid()) throw InvalidArgument("bad gateway url: " + config_.base_url);
  const auto timeout = std::chrono::milliseconds(config_.timeout_ms);
  c->set_connection_timeout(timeout);
  c->set_read_timeout(timeout);
  c->set_write_timeout(timeout);
  c->set_keep_alive(true);
  return c;
}

void GatewayClient::release(std::unique_ptr<httplib::Client> client) const {
  std::lock_guard lock(mutex_);
  idle_.push_back(std::move(client));
}

int GatewayClient::backoff_ms(int retry) const {
  const double base = static_cast<double>(config_.backoff_base_ms) * std::ldexp(1.0, retry);
  const double capped = std::min(base, static_cast<double>(config_.timeout_ms));
  double u;
  {
    std::lock_guard lock(mutex_);
    u = jitter_.uniform();
  }
  return static_cast<int>(capped * (0.5 + 0.5 * u));
}

nlohmann::json GatewayClient::get(std::string_view path) const {
  return call(false, path, nullptr);
}

nlohmann::json GatewayClient::post(std::string_view path, const nlohmann::json& body) const {
  return call(true, path, &body);
}

nlohmann::json GatewayClient::call(bool is_post, std::string_view path,
                                   const nlohmann::json* body) const {
  SlotGuard slot(slots_);
  httplib::Headers headers;
  if (!config_.auth_token.empty()) {
    headers.emplace("Authorization", "Bearer " + config_.auth_token);
  }
  const std::string p(path);
  const std::string payload = body ? body->dump() : std::string();
  std::string last_error;
  const int attempts = config_.max_retries + 1;

  for (int attempt = 1; attempt <= attempts; ++attempt) {
    if (attempt > 1) {
      retries_.fetch_add(1);
      std::this_thread::sleep_for(std::chrono::milliseconds(backoff_ms(attempt - 2)));
    }
    auto client = acquire();
    auto res = is_post ? client->Post(p, headers, payload, "application/json")
                       : client->Get(p, headers);
    if (!res) {
      // Drop the connection; it may be half-open.
      last_error = p + ": " + httplib::to_string(res.error());
      continue;
    }
    release(std::move(client));
    const int status = res->status;
    if (status >= 500) {
      last_error = p + ": HTTP " + std::to_string(status);
      continue;
    }
    if (status >= 400) throw RequestRejected(status, p + ": " + res->body);
    if (status < 200 || status >= 300) {
      throw ProtocolError(p + ": unexpected HTTP " + std::to_string(status));
    }
    auto parsed = nlohmann::json::parse(res->body, nullptr, false);
    if (parsed.is_discarded() || !parsed.is_object()) {
      throw ProtocolError(p + ": response is not a JSON object");
    }
    return parsed;
  }
  throw ProviderUnavailable(last_error + " (after " + std::to_string(attempts) + " attempts)",
                            attempts);
}

}  // namespace k2t::gateway
