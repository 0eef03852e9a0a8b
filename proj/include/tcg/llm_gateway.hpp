#pragma once

#include <chrono>
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tcg/corpus.hpp"
#include "tcg/http.hpp"
#include "tcg/prompt.hpp"

namespace tcg {

enum class WireMode { Chat, Completion };

std::string to_string(WireMode mode);
WireMode wire_mode_from_string(std::string_view s);

// base_url schemes: http(s)://... for a real endpoint, or one of
//   mock://echo           returns the target's ground-truth body
//   mock://dropper        ground truth with one invoked method removed
//   mock://script:<path>  replays status/content steps from a JSON file
struct LlmEndpointConfig {
  std::string base_url = "mock://echo";
  std::string model_name;
  double temperature = 0.0;
  int max_output_tokens = 1024;
  std::chrono::milliseconds timeout{120000};
  RetryPolicy retry;
  WireMode mode = WireMode::Chat;
  std::size_t max_in_flight = 4;
  std::string api_key_env = "LLM_API_KEY";
};

struct Usage {
  long long prompt_tokens = 0;
  long long completion_tokens = 0;

  bool operator==(const Usage&) const = default;
};

struct GenerationResult {
  std::string raw_text;
  std::string extracted_code;
  std::optional<Usage> usage;
  std::chrono::milliseconds latency{0};
  int attempts = 0;
  std::vector<std::string> retry_log;
};

// One try against a backend. status follows HTTP; 0 is a transport failure.
struct AttemptResult {
  int status = 0;
  std::string text;
  std::optional<Usage> usage;
  std::string error;
};

class LlmBackend {
 public:
  virtual ~LlmBackend() = default;
  virtual AttemptResult attempt(const PromptBundle& bundle, const LlmEndpointConfig& config) = 0;
};

// Request body for the configured wire mode. Same bundle and config give the
// same bytes.
std::string build_request_body(const PromptBundle& bundle, const LlmEndpointConfig& config);
// Pulls text and usage from a 2xx response body; throws FormatError.
AttemptResult parse_response_body(std::string_view body, WireMode mode);

class HttpLlmBackend final : public LlmBackend {
 public:
  explicit HttpLlmBackend(std::shared_ptr<HttpTransport> transport);
  AttemptResult attempt(const PromptBundle& bundle, const LlmEndpointConfig& config) override;

 private:
  std::shared_ptr<HttpTransport> transport_;
};

class EchoBackend final : public LlmBackend {
 public:
  AttemptResult attempt(const PromptBundle& bundle, const LlmEndpointConfig& config) override;
};

struct DropResult {
  std::string text;
  std::string dropped;  // empty when the body had no invocations
};

// Replaces every call site of the lexicographically smallest invoked name
// with a comment, so that name disappears from the invocation set.
DropResult drop_one_invocation(std::string_view body, const InvocationOptions& options = {});

class DropperBackend final : public LlmBackend {
 public:
  AttemptResult attempt(const PromptBundle& bundle, const LlmEndpointConfig& config) override;
};

struct ScriptStep {
  int status = 200;
  std::string content;  // "{{reference}}" and "{{tcbd}}" are substituted
  std::chrono::milliseconds delay{0};
  std::string error;
};

// Steps are consumed in order across calls; the last one repeats.
class ScriptBackend final : public LlmBackend {
 public:
  explicit ScriptBackend(std::vector<ScriptStep> steps);
  // File holds [{"status", "content", "delay_ms", "error"}, ...] or {"steps": [...]}.
  static std::vector<ScriptStep> load_steps(const std::filesystem::path& path);

  AttemptResult attempt(const PromptBundle& bundle, const LlmEndpointConfig& config) override;
  std::size_t calls() const;

 private:
  std::vector<ScriptStep> steps_;
  mutable std::mutex mu_;
  std::size_t next_ = 0;
};

// Picks a backend from the base_url scheme. `transport` defaults to httplib.
std::shared_ptr<LlmBackend> make_backend(const LlmEndpointConfig& config,
                                         std::shared_ptr<HttpTransport> transport = nullptr);

// Fenced block interior if any, else the TestBegin..TestEnd span, else the
// trimmed text.
std::string extract_code(std::string_view raw, const CorpusConventions& conventions = {});

// Retries per config.retry. Throws AuthError / TransportError when the
// backend gives up.
GenerationResult generate(const PromptBundle& bundle, const LlmEndpointConfig& config, LlmBackend& backend,
                          const Sleeper& sleeper = real_sleeper());

}  // namespace tcg
