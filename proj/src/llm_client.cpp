#include "invforge/llm_client.hpp"

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "httplib.h"
#include "json.hpp"

#include <chrono>
#include <cstdlib>
#include <mutex>
#include <semaphore>
#include <thread>

namespace invforge::llm {

namespace {

struct endpoint_parts {
  std::string base;  // scheme://host[:port]
  std::string path;  // /v1/chat/completions
};

endpoint_parts split_endpoint(const std::string& url) {
  std::size_t scheme = url.find("://");
  if (scheme == std::string::npos)
    throw generation_error("endpoint URL has no scheme: " + url);
  std::size_t path = url.find('/', scheme + 3);
  if (path == std::string::npos)
    return {url, "/"};
  return {url.substr(0, path), url.substr(path)};
}

bool retryable_status(int status) {
  return status == 429 || status >= 500;
}

}  // namespace

struct client::impl {
  options opt;
  endpoint_parts endpoint;
  std::counting_semaphore<64> slots;

  explicit impl(options o)
      : opt(std::move(o)),
        endpoint(split_endpoint(opt.endpoint_url)),
        slots(std::max(1, std::min(64, opt.max_concurrent))) {}

  std::string api_key() const {
    if (!opt.api_key.empty())
      return opt.api_key;
    const char* env = std::getenv("INVFORGE_API_KEY");
    return env ? env : "";
  }

  std::vector<std::string> complete(const std::string& prompt) {
    nlohmann::json body = {
        {"model", opt.model},
        {"messages",
         nlohmann::json::array({{{"role", "user"}, {"content", prompt}}})},
        {"temperature", opt.temperature},
        {"n", opt.n},
    };
    const std::string payload = body.dump();

    slots.acquire();
    struct release_guard {
      std::counting_semaphore<64>& s;
      ~release_guard() { s.release(); }
    } guard{slots};

    int last_status = 0;
    std::string last_error = "no attempt made";
    for (int attempt = 0; attempt <= opt.max_retries; ++attempt) {
      if (attempt > 0) {
        double delay = opt.backoff_seconds * (1 << (attempt - 1));
        std::this_thread::sleep_for(std::chrono::duration<double>(delay));
      }
      httplib::Client cli(endpoint.base);
      cli.set_connection_timeout(std::chrono::duration<double>(
          opt.timeout_seconds));
      cli.set_read_timeout(std::chrono::duration<double>(opt.timeout_seconds));
      httplib::Headers headers;
      std::string key = api_key();
      if (!key.empty())
        headers.emplace("Authorization", "Bearer " + key);

      httplib::Result res =
          cli.Post(endpoint.path, headers, payload, "application/json");
      if (!res) {
        last_status = 0;
        last_error = "transport error: " + httplib::to_string(res.error());
        continue;
      }
      last_status = res->status;
      if (retryable_status(res->status)) {
        last_error = "HTTP " + std::to_string(res->status);
        continue;
      }
      if (res->status != 200)
        throw generation_error(
            "endpoint returned HTTP " + std::to_string(res->status) + ": " +
                res->body.substr(0, 400),
            res->status);
      return parse_choices(res->body);
    }
    throw generation_error("request failed after " +
                               std::to_string(opt.max_retries + 1) +
                               " attempts: " + last_error,
                           last_status);
  }

  static std::vector<std::string> parse_choices(const std::string& body) {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(body);
    } catch (const nlohmann::json::exception& e) {
      throw generation_error(std::string("malformed response body: ") +
                             e.what());
    }
    if (!j.contains("choices") || !j["choices"].is_array())
      throw generation_error("response has no choices array");
    std::vector<std::string> out;
    for (const auto& choice : j["choices"]) {
      if (choice.contains("message") && choice["message"].contains("content"))
        out.push_back(choice["message"]["content"].get<std::string>());
    }
    if (out.empty())
      throw generation_error("response contained no completion text");
    return out;
  }
};

client::client(options o) : impl_(std::make_unique<impl>(std::move(o))) {}
client::~client() = default;

std::vector<std::string> client::complete(const std::string& prompt) {
  return impl_->complete(prompt);
}

}  // namespace invforge::llm
