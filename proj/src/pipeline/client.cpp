#include "folpipe/pipeline/client.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <httplib.h>
#include <json.hpp>

namespace folpipe::pipeline {

int approx_token_count(std::string_view text) {
  int count = 0;
  bool in_token = false;
  for (char c : text) {
    const bool ws = c == ' ' || c == '\t' || c == '\n' || c == '\r';
    if (!ws && !in_token) ++count;
    in_token = !ws;
  }
  return count;
}

std::string apply_stop_sequences(std::string text, const std::vector<std::string>& stop) {
  std::size_t cut = std::string::npos;
  for (const auto& s : stop) {
    if (s.empty()) continue;
    const auto pos = text.find(s);
    if (pos != std::string::npos && pos < cut) cut = pos;
  }
  if (cut != std::string::npos) text.resize(cut);
  return text;
}

std::string truncate_to_tokens(std::string text, int max_tokens) {
  if (max_tokens <= 0) return "";
  int count = 0;
  bool in_token = false;
  std::size_t last_token_end = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    const bool ws = c == ' ' || c == '\t' || c == '\n' || c == '\r';
    if (!ws) {
      if (!in_token) {
        if (count == max_tokens) {
          text.resize(last_token_end);
          return text;
        }
        ++count;
      }
      last_token_end = i + 1;
    }
    in_token = !ws;
  }
  if (count >= max_tokens) text.resize(last_token_end);
  return text;
}

namespace {

struct EndpointParts {
  std::string base;  // scheme://host:port
  std::string path;  // request path
};

EndpointParts split_endpoint(const std::string& endpoint) {
  const auto scheme = endpoint.find("://");
  const std::size_t host_start = scheme == std::string::npos ? 0 : scheme + 3;
  const auto slash = endpoint.find('/', host_start);
  if (slash == std::string::npos) return {endpoint, "/v1/chat/completions"};
  return {endpoint.substr(0, slash), endpoint.substr(slash)};
}

}  // namespace

HttpChatClient::HttpChatClient(GeneratorConfig config) : config_(std::move(config)) {
  if (config_.endpoint.empty()) {
    throw std::invalid_argument("HTTP client needs an endpoint URL");
  }
  if (config_.temperature < 0.0) {
    throw std::invalid_argument("temperature must be non-negative");
  }
  if (config_.max_output_tokens <= 0) {
    throw std::invalid_argument("max output tokens must be positive");
  }
}

ClientResult HttpChatClient::complete(const ChatRequest& request) {
  const EndpointParts endpoint = split_endpoint(config_.endpoint);

  nlohmann::json body{{"model", config_.model},
                      {"temperature", config_.temperature},
                      {"max_tokens", request.max_tokens}};
  auto& messages = body["messages"] = nlohmann::json::array();
  for (const auto& m : request.messages) {
    messages.push_back({{"role", m.role}, {"content", m.content}});
  }
  if (!request.stop.empty()) body["stop"] = request.stop;
  const std::string payload = body.dump();

  std::string last_error = "no attempts made";
  for (int attempt = 1; attempt <= config_.retry.max_attempts; ++attempt) {
    if (attempt > 1) std::this_thread::sleep_for(config_.retry.backoff * (attempt - 1));

    // One request at a time; also enforces the global minimum interval.
    std::lock_guard<std::mutex> lock(mutex_);
    if (config_.min_request_interval.count() > 0) {
      const auto now = std::chrono::steady_clock::now();
      const auto next_allowed = last_request_ + config_.min_request_interval;
      if (now < next_allowed) std::this_thread::sleep_for(next_allowed - now);
    }
    last_request_ = std::chrono::steady_clock::now();

    httplib::Client http(endpoint.base);
    const auto timeout_s = std::chrono::duration_cast<std::chrono::seconds>(
        config_.request_timeout);
    http.set_connection_timeout(timeout_s.count(), 0);
    http.set_read_timeout(timeout_s.count(), 0);
    httplib::Headers headers;
    if (!config_.api_key.empty()) {
      headers.emplace("Authorization", "Bearer " + config_.api_key);
    }

    const auto started = std::chrono::steady_clock::now();
    auto response = http.Post(endpoint.path, headers, payload, "application/json");
    const auto latency = std::chrono::duration_cast<std::chrono::milliseconds>(
        std::chrono::steady_clock::now() - started);

    if (!response) {
      last_error = "transport error: " + httplib::to_string(response.error());
      continue;
    }
    if (response->status < 200 || response->status >= 300) {
      last_error = "HTTP " + std::to_string(response->status);
      continue;
    }
    try {
      const auto j = nlohmann::json::parse(response->body);
      Completion done;
      done.text = j.at("choices").at(0).at("message").at("content").get<std::string>();
      done.latency = latency;
      if (j.contains("usage") && j["usage"].contains("completion_tokens")) {
        done.completion_tokens = j["usage"]["completion_tokens"].get<int>();
      } else {
        done.completion_tokens = approx_token_count(done.text);
      }
      return {std::move(done), ""};
    } catch (const std::exception& e) {
      last_error = std::string("malformed response: ") + e.what();
      continue;
    }
  }
  return {std::nullopt, last_error};
}

ReplayChatClient ReplayChatClient::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open replay file: " + path);
  return from_jsonl(in);
}

ReplayChatClient ReplayChatClient::from_jsonl(std::istream& in) {
  ReplayChatClient client;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      client.add(j.at("id").get<std::string>(), j.at("stage").get<std::string>(),
                 j.at("response").get<std::string>());
    } catch (const std::exception& e) {
      throw std::runtime_error("replay line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return client;
}

void ReplayChatClient::add(const std::string& id, const std::string& stage,
                           std::string response) {
  responses_[{id, stage}] = std::move(response);
}

ClientResult ReplayChatClient::complete(const ChatRequest& request) {
  const auto it = responses_.find({request.problem_id, request.stage});
  if (it == responses_.end()) {
    return {std::nullopt,
            "no replay response for (" + request.problem_id + ", " + request.stage + ")"};
  }
  std::string text = apply_stop_sequences(it->second, request.stop);
  text = truncate_to_tokens(std::move(text), request.max_tokens);
  Completion done;
  done.completion_tokens = approx_token_count(text);
  done.text = std::move(text);
  return {std::move(done), ""};
}

ClientResult LoopMockClient::complete(const ChatRequest& request) {
  std::string text;
  // Two whitespace tokens per repetition.
  const int repetitions = std::max(1, request.max_tokens / 2);
  for (int i = 0; i < repetitions; ++i) text += "IsFavorite(x, y)\n";
  text = truncate_to_tokens(std::move(text), request.max_tokens);
  Completion done;
  done.completion_tokens = approx_token_count(text);
  done.text = std::move(text);
  return {std::move(done), ""};
}

}  // namespace folpipe::pipeline
