#pragma once

#include <chrono>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"

namespace freightneg::llm {

struct ChatMessage {
  std::string role;  // "system", "user" or "assistant"
  std::string content;

  friend bool operator==(const ChatMessage&, const ChatMessage&) = default;
};

struct EndpointConfig {
  std::string base_url = "http://127.0.0.1:11434";
  std::string path = "/v1/chat/completions";
  std::string model = "gpt-oss:20b";
  std::string api_key;
  std::chrono::milliseconds timeout{60000};
  int max_retries = 3;
  std::chrono::milliseconds initial_backoff{500};
  double backoff_factor = 2.0;
  std::chrono::milliseconds max_backoff{8000};
  std::size_t max_response_chars = 4000;

  // FREIGHTNEG_LLM_BASE_URL, FREIGHTNEG_LLM_MODEL, FREIGHTNEG_LLM_API_KEY,
  // FREIGHTNEG_LLM_TIMEOUT_MS override the defaults when set.
  static EndpointConfig from_env();
  void validate() const;
};

class ChatError : public std::runtime_error {
 public:
  enum class Kind { Timeout, Transport, HttpStatus, MalformedResponse, RetryExhausted };

  ChatError(Kind kind, const std::string& message, int attempts = 1,
            std::optional<Kind> cause = std::nullopt, int http_status = 0);

  Kind kind() const { return kind_; }
  // For RetryExhausted: what the last attempt failed with.
  std::optional<Kind> cause() const { return cause_; }
  int attempts() const { return attempts_; }
  int http_status() const { return http_status_; }
  bool transient() const;

 private:
  Kind kind_;
  std::optional<Kind> cause_;
  int attempts_;
  int http_status_;
};

std::string to_string(ChatError::Kind kind);

nlohmann::json build_request(const std::string& model, double temperature,
                             const std::vector<ChatMessage>& messages);
// choices[0].message.content, truncated to `max_chars`. Throws ChatError
// (MalformedResponse) when the body does not have that shape.
std::string extract_reply(const std::string& body, std::size_t max_chars);

// Anything that turns a conversation into one assistant message.
class ChatBackend {
 public:
  virtual ~ChatBackend() = default;
  virtual std::string complete(const std::vector<ChatMessage>& messages,
                               double temperature) = 0;
};

// Generic chat-completion client over HTTP with capped exponential backoff.
class HttpChatClient final : public ChatBackend {
 public:
  using Sleeper = std::function<void(std::chrono::milliseconds)>;

  explicit HttpChatClient(EndpointConfig config, Sleeper sleeper = {});

  std::string complete(const std::vector<ChatMessage>& messages,
                       double temperature) override;

  const EndpointConfig& config() const { return config_; }

 private:
  std::string attempt(const std::string& body);

  EndpointConfig config_;
  Sleeper sleep_;
};

// In-process HTTP server speaking the chat-completion wire format, for tests
// and offline demos. The handler sees the decoded request and returns the
// assistant text; `Reply::status` other than 200 is sent back as an error.
class MockEndpoint {
 public:
  struct Reply {
    std::string content;
    int status = 200;
    std::chrono::milliseconds delay{0};
    // Sent verbatim instead of a well-formed body when set.
    std::optional<std::string> raw_body;

    static Reply text(std::string content) {
      Reply r;
      r.content = std::move(content);
      return r;
    }
    static Reply error(int status) {
      Reply r;
      r.status = status;
      return r;
    }
  };
  using Handler = std::function<Reply(const nlohmann::json& request)>;

  explicit MockEndpoint(Handler handler);
  ~MockEndpoint();
  MockEndpoint(const MockEndpoint&) = delete;
  MockEndpoint& operator=(const MockEndpoint&) = delete;

  std::string base_url() const;
  int port() const { return port_; }
  std::size_t request_count() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  int port_ = 0;
};

}  // namespace freightneg::llm
