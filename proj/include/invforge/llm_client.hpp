#ifndef INVFORGE_LLM_CLIENT_HPP
#define INVFORGE_LLM_CLIENT_HPP

#include "invforge/errors.hpp"

#include <memory>
#include <string>
#include <vector>

namespace invforge::llm {

/// Chat-completions client in the common open API shape: one user message,
/// n sampled completions per request. Provider-agnostic so local model
/// servers work with the same code path.
class client {
 public:
  struct options {
    std::string endpoint_url;  // full URL including path
    std::string model;
    double temperature = 0.2;
    int n = 5;
    std::string api_key;  // empty: read INVFORGE_API_KEY
    double timeout_seconds = 120.0;
    int max_retries = 3;
    double backoff_seconds = 1.0;  // doubled per retry
    int max_concurrent = 4;        // in-flight request cap
  };

  explicit client(options o);
  ~client();

  client(const client&) = delete;
  client& operator=(const client&) = delete;

  /// Returns the n completion texts. Retries transport errors and
  /// retryable HTTP statuses (429, 5xx) with exponential backoff, then
  /// throws generation_error carrying the last status.
  std::vector<std::string> complete(const std::string& prompt);

 private:
  struct impl;
  std::unique_ptr<impl> impl_;
};

}  // namespace invforge::llm

#endif
