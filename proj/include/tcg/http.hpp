#pragma once

#include <chrono>
#include <functional>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "tcg/errors.hpp"

namespace tcg {

struct HttpRequest {
  std::string url;  // absolute: scheme://host[:port]/path
  std::vector<std::pair<std::string, std::string>> headers;
  std::string body;
  std::chrono::milliseconds timeout{60000};
};

// status 0 means no HTTP response arrived (connect failure, timeout).
struct HttpResponse {
  int status = 0;
  std::string body;
  std::string error;
};

class HttpTransport {
 public:
  virtual ~HttpTransport() = default;
  virtual HttpResponse post(const HttpRequest& request) = 0;
};

// cpp-httplib client; https when built with OpenSSL.
class HttplibTransport final : public HttpTransport {
 public:
  HttpResponse post(const HttpRequest& request) override;
};

struct RetryPolicy {
  int max_attempts = 3;
  std::chrono::milliseconds backoff_base{500};
  double backoff_multiplier = 2.0;

  // Delay before attempt `attempt + 1`, given `attempt` >= 1 failures so far.
  std::chrono::milliseconds delay_after(int attempt) const;
};

using Sleeper = std::function<void(std::chrono::milliseconds)>;

inline Sleeper real_sleeper() {
  return [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
}

// 429, 5xx, and transport failures.
bool is_retryable_status(int status) noexcept;
bool is_auth_status(int status) noexcept;

struct RetryLog {
  int attempts = 0;
  std::vector<std::string> lines;  // one per retry
};

// Calls `attempt` until it yields a 2xx status, a non-retryable status, or
// max_attempts is reached. `attempt` must return an object with an `int
// status` member and an `std::string error` member. 401/403 throw AuthError
// immediately; other failures throw TransportError carrying the last status.
template <typename Fn>
auto with_retry(const RetryPolicy& policy, const Sleeper& sleep, RetryLog& log, Fn&& attempt) -> decltype(attempt()) {
  const int max_attempts = policy.max_attempts < 1 ? 1 : policy.max_attempts;
  for (int n = 1;; ++n) {
    auto result = attempt();
    log.attempts = n;
    const int status = result.status;
    if (status >= 200 && status < 300) return result;
    const std::string detail = status == 0 ? result.error : "HTTP " + std::to_string(status);
    if (is_auth_status(status)) throw AuthError("authentication failed (" + detail + "); not retrying", status, n);
    if (!is_retryable_status(status)) throw TransportError("request failed: " + detail, status, n);
    if (n >= max_attempts)
      throw TransportError("request failed after " + std::to_string(n) + " attempts: " + detail, status, n);
    const auto delay = policy.delay_after(n);
    log.lines.push_back("attempt " + std::to_string(n) + " failed (" + detail + "); retrying in " +
                        std::to_string(delay.count()) + " ms");
    if (sleep) sleep(delay);
  }
}

// Value of the named environment variable, if set and non-empty.
std::optional<std::string> env_secret(const std::string& var);

// Splits "http://host:port/base" into ("http://host:port", "/base").
std::pair<std::string, std::string> split_url(const std::string& url);

}  // namespace tcg
