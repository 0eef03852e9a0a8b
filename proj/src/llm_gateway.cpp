#include "tcg/llm_gateway.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "tcg/errors.hpp"
#include "tcg/lexer.hpp"

namespace tcg {

using nlohmann::json;

std::string to_string(WireMode mode) { return mode == WireMode::Chat ? "chat" : "completion"; }

WireMode wire_mode_from_string(std::string_view s) {
  if (s == "chat") return WireMode::Chat;
  if (s == "completion") return WireMode::Completion;
  throw ConfigError("wire mode must be 'chat' or 'completion', got '" + std::string(s) + "'");
}

std::string build_request_body(const PromptBundle& bundle, const LlmEndpointConfig& config) {
  json body = json::object();
  body["model"] = config.model_name;
  if (config.mode == WireMode::Chat) {
    body["messages"] = json::array({json{{"role", "user"}, {"content", bundle.rendered}}});
  } else {
    body["prompt"] = "<s>" + bundle.rendered;
  }
  body["temperature"] = config.temperature;
  body["max_tokens"] = config.max_output_tokens;
  return body.dump();
}

AttemptResult parse_response_body(std::string_view body, WireMode mode) {
  AttemptResult out;
  out.status = 200;
  try {
    const json doc = json::parse(body);
    const json& choice = doc.at("choices").at(0);
    out.text = mode == WireMode::Chat ? choice.at("message").at("content").get<std::string>()
                                      : choice.at("text").get<std::string>();
    if (auto it = doc.find("usage"); it != doc.end() && it->is_object()) {
      Usage u;
      u.prompt_tokens = it->value("prompt_tokens", 0LL);
      u.completion_tokens = it->value("completion_tokens", 0LL);
      out.usage = u;
    }
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed completion response: ") + e.what());
  }
  return out;
}

HttpLlmBackend::HttpLlmBackend(std::shared_ptr<HttpTransport> transport) : transport_(std::move(transport)) {
  if (!transport_) transport_ = std::make_shared<HttplibTransport>();
}

AttemptResult HttpLlmBackend::attempt(const PromptBundle& bundle, const LlmEndpointConfig& config) {
  HttpRequest req;
  std::string base = config.base_url;
  while (!base.empty() && base.back() == '/') base.pop_back();
  req.url = base + (config.mode == WireMode::Chat ? "/chat/completions" : "/completions");
  req.body = build_request_body(bundle, config);
  req.timeout = config.timeout;
  req.headers.emplace_back("Content-Type", "application/json");
  if (auto key = env_secret(config.api_key_env)) req.headers.emplace_back("Authorization", "Bearer " + *key);

  const HttpResponse res = transport_->post(req);
  if (res.status < 200 || res.status >= 300) {
    AttemptResult out;
    out.status = res.status;
    out.error = res.error;
    return out;
  }
  return parse_response_body(res.body, config.mode);
}

namespace {

std::string java_quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

void replace_all(std::string& s, std::string_view from, std::string_view to) {
  for (std::size_t pos = 0; (pos = s.find(from, pos)) != std::string::npos; pos += to.size())
    s.replace(pos, from.size(), to);
}

}  // namespace

AttemptResult EchoBackend::attempt(const PromptBundle& bundle, const LlmEndpointConfig&) {
  AttemptResult out;
  out.status = 200;
  out.text = bundle.reference_body ? *bundle.reference_body
                                   : "TestBegin(" + java_quote(bundle.target_tcbd) + ");\nTestEnd();";
  return out;
}

DropResult drop_one_invocation(std::string_view body, const InvocationOptions& options) {
  DropResult out;
  out.text = std::string(body);
  const auto names = invocation_names(body, options);
  if (names.empty()) return out;
  out.dropped = names.front();

  const LexResult lx = lex(body);
  std::vector<std::pair<std::size_t, std::size_t>> sites;
  for (std::size_t i = 0; i + 1 < lx.tokens.size(); ++i) {
    if (lx.tokens[i].is_ident() && lx.text_of(i) == out.dropped && lx.tokens[i + 1].is('('))
      sites.emplace_back(lx.tokens[i].begin, lx.tokens[i].end);
  }
  for (auto it = sites.rbegin(); it != sites.rend(); ++it)
    out.text.replace(it->first, it->second - it->first, "/*dropped*/");
  return out;
}

AttemptResult DropperBackend::attempt(const PromptBundle& bundle, const LlmEndpointConfig& config) {
  AttemptResult out = EchoBackend{}.attempt(bundle, config);
  out.text = drop_one_invocation(out.text).text;
  return out;
}

ScriptBackend::ScriptBackend(std::vector<ScriptStep> steps) : steps_(std::move(steps)) {
  if (steps_.empty()) throw ConfigError("script backend needs at least one step");
}

std::vector<ScriptStep> ScriptBackend::load_steps(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw NotFoundError("script file not found: " + path.string());
  std::vector<ScriptStep> steps;
  try {
    json doc = json::parse(in);
    const json& arr = doc.is_object() ? doc.at("steps") : doc;
    for (const auto& s : arr) {
      ScriptStep step;
      step.status = s.value("status", 200);
      step.content = s.value("content", std::string{});
      step.delay = std::chrono::milliseconds(s.value("delay_ms", 0));
      step.error = s.value("error", std::string{});
      steps.push_back(std::move(step));
    }
  } catch (const json::exception& e) {
    throw ConfigError("bad script file " + path.string() + ": " + e.what());
  }
  if (steps.empty()) throw ConfigError("script file has no steps: " + path.string());
  return steps;
}

AttemptResult ScriptBackend::attempt(const PromptBundle& bundle, const LlmEndpointConfig&) {
  ScriptStep step;
  {
    std::lock_guard lock(mu_);
    step = steps_[std::min(next_, steps_.size() - 1)];
    ++next_;
  }
  if (step.delay.count() > 0) std::this_thread::sleep_for(step.delay);
  AttemptResult out;
  out.status = step.status;
  out.error = step.error.empty() && step.status == 0 ? "scripted transport failure" : step.error;
  if (step.status >= 200 && step.status < 300) {
    out.text = step.content;
    replace_all(out.text, "{{reference}}", bundle.reference_body.value_or(""));
    replace_all(out.text, "{{tcbd}}", bundle.target_tcbd);
  }
  return out;
}

std::size_t ScriptBackend::calls() const {
  std::lock_guard lock(mu_);
  return next_;
}

std::shared_ptr<LlmBackend> make_backend(const LlmEndpointConfig& config, std::shared_ptr<HttpTransport> transport) {
  const std::string& url = config.base_url;
  if (url == "mock://echo") return std::make_shared<EchoBackend>();
  if (url == "mock://dropper") return std::make_shared<DropperBackend>();
  if (url.starts_with("mock://script:"))
    return std::make_shared<ScriptBackend>(ScriptBackend::load_steps(url.substr(std::string_view("mock://script:").size())));
  if (url.starts_with("http://") || url.starts_with("https://"))
    return std::make_shared<HttpLlmBackend>(std::move(transport));
  throw ConfigError("unsupported endpoint url '" + url + "'");
}

std::string extract_code(std::string_view raw, const CorpusConventions& conventions) {
  if (auto open = raw.find("```"); open != std::string_view::npos) {
    const auto line_end = raw.find('\n', open);
    if (line_end != std::string_view::npos) {
      const auto close = raw.find("```", line_end + 1);
      std::string_view inner = raw.substr(line_end + 1, close == std::string_view::npos ? raw.npos : close - line_end - 1);
      if (!inner.empty() && inner.back() == '\n') inner.remove_suffix(1);
      if (!inner.empty() && inner.back() == '\r') inner.remove_suffix(1);
      return std::string(inner);
    }
  }

  const auto begin = raw.find(conventions.begin_marker);
  if (begin != std::string_view::npos) {
    const auto end = raw.find(conventions.end_marker, begin + conventions.begin_marker.size());
    if (end != std::string_view::npos) {
      std::size_t stop = end + conventions.end_marker.size();
      std::size_t i = stop;
      while (i < raw.size() && (raw[i] == ' ' || raw[i] == '\t')) ++i;
      if (i < raw.size() && raw[i] == '(') {
        const auto close = raw.find(')', i);
        if (close != std::string_view::npos) {
          stop = close + 1;
          i = stop;
          while (i < raw.size() && (raw[i] == ' ' || raw[i] == '\t')) ++i;
          if (i < raw.size() && raw[i] == ';') stop = i + 1;
        }
      }
      return std::string(raw.substr(begin, stop - begin));
    }
  }

  const auto first = raw.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = raw.find_last_not_of(" \t\r\n");
  return std::string(raw.substr(first, last - first + 1));
}

GenerationResult generate(const PromptBundle& bundle, const LlmEndpointConfig& config, LlmBackend& backend,
                          const Sleeper& sleeper) {
  const auto start = std::chrono::steady_clock::now();
  RetryLog log;
  AttemptResult res = with_retry(config.retry, sleeper, log, [&] { return backend.attempt(bundle, config); });
  GenerationResult out;
  out.raw_text = std::move(res.text);
  out.extracted_code = extract_code(out.raw_text);
  out.usage = res.usage;
  out.latency = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start);
  out.attempts = log.attempts;
  out.retry_log = std::move(log.lines);
  return out;
}

}  // namespace tcg
