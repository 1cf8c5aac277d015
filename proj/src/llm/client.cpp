#include "freightneg/llm/client.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>

#include <httplib.h>

namespace freightneg::llm {

namespace {

std::string env_or(const char* name, std::string fallback) {
  const char* v = std::getenv(name);
  return v && *v ? std::string(v) : fallback;
}

}  // namespace

EndpointConfig EndpointConfig::from_env() {
  EndpointConfig c;
  c.base_url = env_or("FREIGHTNEG_LLM_BASE_URL", c.base_url);
  c.model = env_or("FREIGHTNEG_LLM_MODEL", c.model);
  c.api_key = env_or("FREIGHTNEG_LLM_API_KEY", c.api_key);
  const std::string timeout = env_or("FREIGHTNEG_LLM_TIMEOUT_MS", "");
  if (!timeout.empty()) c.timeout = std::chrono::milliseconds(std::stoll(timeout));
  return c;
}

void EndpointConfig::validate() const {
  if (base_url.empty()) throw std::invalid_argument("endpoint base URL is empty");
  if (model.empty()) throw std::invalid_argument("endpoint model is empty");
  if (timeout.count() <= 0) throw std::invalid_argument("timeout must be positive");
  if (max_retries < 0) throw std::invalid_argument("max_retries must be >= 0");
  if (!(backoff_factor >= 1.0)) throw std::invalid_argument("backoff_factor must be >= 1");
  if (max_response_chars == 0) throw std::invalid_argument("max_response_chars is 0");
}

ChatError::ChatError(Kind kind, const std::string& message, int attempts,
                     std::optional<Kind> cause, int http_status)
    : std::runtime_error(message),
      kind_(kind),
      cause_(cause),
      attempts_(attempts),
      http_status_(http_status) {}

bool ChatError::transient() const {
  switch (kind_) {
    case Kind::Timeout:
    case Kind::Transport:
      return true;
    case Kind::HttpStatus:
      return http_status_ == 429 || http_status_ >= 500;
    case Kind::MalformedResponse:
    case Kind::RetryExhausted:
      return false;
  }
  return false;
}

std::string to_string(ChatError::Kind kind) {
  switch (kind) {
    case ChatError::Kind::Timeout:
      return "timeout";
    case ChatError::Kind::Transport:
      return "transport";
    case ChatError::Kind::HttpStatus:
      return "http_status";
    case ChatError::Kind::MalformedResponse:
      return "malformed_response";
    case ChatError::Kind::RetryExhausted:
      return "retry_exhausted";
  }
  return "unknown";
}

nlohmann::json build_request(const std::string& model, double temperature,
                             const std::vector<ChatMessage>& messages) {
  nlohmann::json msgs = nlohmann::json::array();
  for (const auto& m : messages) msgs.push_back({{"role", m.role}, {"content", m.content}});
  return {{"model", model}, {"temperature", temperature}, {"messages", std::move(msgs)}};
}

std::string extract_reply(const std::string& body, std::size_t max_chars) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(body);
  } catch (const nlohmann::json::parse_error& e) {
    throw ChatError(ChatError::Kind::MalformedResponse,
                    std::string("response is not JSON: ") + e.what());
  }
  const auto* content = [&]() -> const nlohmann::json* {
    if (!j.is_object() || !j.contains("choices")) return nullptr;
    const auto& choices = j["choices"];
    if (!choices.is_array() || choices.empty() || !choices[0].is_object()) return nullptr;
    const auto& first = choices[0];
    if (!first.contains("message") || !first["message"].is_object()) return nullptr;
    const auto& msg = first["message"];
    if (!msg.contains("content") || !msg["content"].is_string()) return nullptr;
    return &msg["content"];
  }();
  if (!content) {
    throw ChatError(ChatError::Kind::MalformedResponse,
                    "response lacks choices[0].message.content");
  }
  std::string text = content->get<std::string>();
  if (text.size() > max_chars) text.resize(max_chars);
  return text;
}

HttpChatClient::HttpChatClient(EndpointConfig config, Sleeper sleeper)
    : config_(std::move(config)), sleep_(std::move(sleeper)) {
  config_.validate();
  if (!sleep_) sleep_ = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
}

std::string HttpChatClient::attempt(const std::string& body) {
  httplib::Client cli(config_.base_url);
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(config_.timeout);
  const auto usecs =
      std::chrono::duration_cast<std::chrono::microseconds>(config_.timeout - secs);
  cli.set_connection_timeout(secs.count(), usecs.count());
  cli.set_read_timeout(secs.count(), usecs.count());
  cli.set_write_timeout(secs.count(), usecs.count());
  httplib::Headers headers;
  if (!config_.api_key.empty()) {
    headers.emplace("Authorization", "Bearer " + config_.api_key);
  }

  const auto start = std::chrono::steady_clock::now();
  auto res = cli.Post(config_.path, headers, body, "application/json");
  if (!res) {
    const auto err = res.error();
    const auto elapsed = std::chrono::steady_clock::now() - start;
    const bool timed_out = err == httplib::Error::ConnectionTimeout ||
                           (err == httplib::Error::Read && elapsed >= config_.timeout);
    throw ChatError(timed_out ? ChatError::Kind::Timeout : ChatError::Kind::Transport,
                    "request to " + config_.base_url + " failed: " +
                        httplib::to_string(err));
  }
  if (res->status != 200) {
    throw ChatError(ChatError::Kind::HttpStatus,
                    "endpoint returned HTTP " + std::to_string(res->status), 1,
                    std::nullopt, res->status);
  }
  return extract_reply(res->body, config_.max_response_chars);
}

std::string HttpChatClient::complete(const std::vector<ChatMessage>& messages,
                                     double temperature) {
  const std::string body = build_request(config_.model, temperature, messages).dump();
  auto delay = config_.initial_backoff;
  for (int attempt_no = 1;; ++attempt_no) {
    try {
      return attempt(body);
    } catch (const ChatError& e) {
      if (!e.transient()) throw;
      if (attempt_no > config_.max_retries) {
        if (config_.max_retries == 0) throw;
        throw ChatError(ChatError::Kind::RetryExhausted,
                        "gave up after " + std::to_string(attempt_no) +
                            " attempts: " + e.what(),
                        attempt_no, e.kind(), e.http_status());
      }
      sleep_(delay);
      delay = std::min(config_.max_backoff,
                       std::chrono::milliseconds(static_cast<std::int64_t>(
                           static_cast<double>(delay.count()) * config_.backoff_factor)));
    }
  }
}

struct MockEndpoint::Impl {
  Handler handler;
  httplib::Server server;
  std::thread thread;
  std::atomic<std::size_t> requests{0};
};

MockEndpoint::MockEndpoint(Handler handler) : impl_(std::make_unique<Impl>()) {
  impl_->handler = std::move(handler);
  Impl* impl = impl_.get();
  impl_->server.Post(".*", [impl](const httplib::Request& req, httplib::Response& res) {
    ++impl->requests;
    nlohmann::json request;
    try {
      request = nlohmann::json::parse(req.body);
    } catch (const nlohmann::json::parse_error&) {
      res.status = 400;
      return;
    }
    const Reply reply = impl->handler(request);
    if (reply.delay.count() > 0) std::this_thread::sleep_for(reply.delay);
    res.status = reply.status;
    if (reply.raw_body) {
      res.set_content(*reply.raw_body, "application/json");
      return;
    }
    const nlohmann::json body{
        {"choices",
         {{{"index", 0},
           {"message", {{"role", "assistant"}, {"content", reply.content}}}}}}};
    res.set_content(body.dump(), "application/json");
  });
  port_ = impl_->server.bind_to_any_port("127.0.0.1");
  if (port_ <= 0) throw std::runtime_error("mock endpoint could not bind");
  impl_->thread = std::thread([impl] { impl->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
}

MockEndpoint::~MockEndpoint() {
  impl_->server.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

std::string MockEndpoint::base_url() const {
  return "http://127.0.0.1:" + std::to_string(port_);
}

std::size_t MockEndpoint::request_count() const { return impl_->requests.load(); }

}  // namespace freightneg::llm
