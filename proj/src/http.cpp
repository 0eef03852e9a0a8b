#include "tcg/http.hpp"

#include <cmath>
#include <cstdlib>

#include <httplib.h>

namespace tcg {

std::chrono::milliseconds RetryPolicy::delay_after(int attempt) const {
  const double factor = std::pow(backoff_multiplier, std::max(0, attempt - 1));
  return std::chrono::milliseconds(static_cast<long long>(static_cast<double>(backoff_base.count()) * factor));
}

bool is_retryable_status(int status) noexcept { return status == 0 || status == 429 || (status >= 500 && status < 600); }

bool is_auth_status(int status) noexcept { return status == 401 || status == 403; }

std::optional<std::string> env_secret(const std::string& var) {
  if (var.empty()) return std::nullopt;
  const char* v = std::getenv(var.c_str());
  if (!v || !*v) return std::nullopt;
  return std::string(v);
}

std::pair<std::string, std::string> split_url(const std::string& url) {
  const auto scheme_end = url.find("://");
  const std::size_t host_start = scheme_end == std::string::npos ? 0 : scheme_end + 3;
  const auto path_start = url.find('/', host_start);
  if (path_start == std::string::npos) return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

HttpResponse HttplibTransport::post(const HttpRequest& request) {
  auto [origin, path] = split_url(request.url);
  HttpResponse out;
  try {
    httplib::Client client(origin);
    const auto secs = std::chrono::duration_cast<std::chrono::seconds>(request.timeout);
    const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(request.timeout - secs);
    client.set_connection_timeout(secs.count(), static_cast<time_t>(usecs.count()));
    client.set_read_timeout(secs.count(), static_cast<time_t>(usecs.count()));
    client.set_write_timeout(secs.count(), static_cast<time_t>(usecs.count()));
    httplib::Headers headers;
    std::string content_type = "application/json";
    for (const auto& [k, v] : request.headers) {
      if (k == "Content-Type") {
        content_type = v;
      } else {
        headers.emplace(k, v);
      }
    }
    auto res = client.Post(path, headers, request.body, content_type);
    if (!res) {
      out.error = httplib::to_string(res.error());
      return out;
    }
    out.status = res->status;
    out.body = res->body;
  } catch (const std::exception& e) {
    out.error = e.what();
  }
  return out;
}

}  // namespace tcg
