#pragma once

#include <chrono>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace folpipe::pipeline {

struct ChatMessage {
  std::string role;  // system | user | assistant
  std::string content;
};

struct RetryPolicy {
  int max_attempts = 3;
  std::chrono::milliseconds backoff{250};
};

struct GeneratorConfig {
  std::string endpoint;  // e.g. "http://localhost:8000"; a path component overrides /v1/chat/completions
  std::string api_key;
  std::string model;
  double temperature = 0.1;
  int max_output_tokens = 1000;
  std::vector<std::string> stop;
  RetryPolicy retry;
  std::chrono::milliseconds request_timeout{30000};
  std::chrono::milliseconds min_request_interval{0};  // global rate limit
};

struct Completion {
  std::string text;
  int completion_tokens = 0;
  std::chrono::milliseconds latency{0};
};

struct ClientResult {
  std::optional<Completion> completion;
  std::string error;  // non-empty on failure
  bool ok() const { return completion.has_value(); }
};

// Stage names keyed by the replay client: "standard", "predicates", "fol",
// "verifier".
struct ChatRequest {
  std::string problem_id;
  std::string stage;
  std::vector<ChatMessage> messages;
  int max_tokens = 1000;
  std::vector<std::string> stop;
};

class ChatClient {
 public:
  virtual ~ChatClient() = default;
  virtual ClientResult complete(const ChatRequest& request) = 0;
};

// Whitespace-delimited token count, used when the server reports no usage.
int approx_token_count(std::string_view text);

// Truncates at the earliest stop-sequence occurrence.
std::string apply_stop_sequences(std::string text, const std::vector<std::string>& stop);

// Keeps at most `max_tokens` whitespace-delimited tokens.
std::string truncate_to_tokens(std::string text, int max_tokens);

// Chat-completions JSON over HTTP. Retries per policy on transport errors,
// non-2xx statuses and malformed responses; enforces a global minimum
// interval between requests.
class HttpChatClient : public ChatClient {
 public:
  explicit HttpChatClient(GeneratorConfig config);
  ClientResult complete(const ChatRequest& request) override;

 private:
  GeneratorConfig config_;
  std::mutex mutex_;
  std::chrono::steady_clock::time_point last_request_{};
};

// File-backed determinism for tests: responses keyed by (problem id, stage).
// Stop sequences and the token cap are applied client-side, mirroring what a
// server would do.
class ReplayChatClient : public ChatClient {
 public:
  static ReplayChatClient from_file(const std::string& path);
  static ReplayChatClient from_jsonl(std::istream& in);

  void add(const std::string& id, const std::string& stage, std::string response);
  ClientResult complete(const ChatRequest& request) override;

 private:
  std::map<std::pair<std::string, std::string>, std::string> responses_;
};

// Degenerate generator stuck in a repetition loop; fills the token budget
// with "IsFavorite(x, y)" and never emits section headers.
class LoopMockClient : public ChatClient {
 public:
  ClientResult complete(const ChatRequest& request) override;
};

// Test hook: delegate to an arbitrary function.
class FunctionChatClient : public ChatClient {
 public:
  using Handler = std::function<ClientResult(const ChatRequest&)>;
  explicit FunctionChatClient(Handler handler) : handler_(std::move(handler)) {}
  ClientResult complete(const ChatRequest& request) override { return handler_(request); }

 private:
  Handler handler_;
};

}  // namespace folpipe::pipeline
