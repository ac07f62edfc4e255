#ifndef INVFORGE_GENERATION_HPP
#define INVFORGE_GENERATION_HPP

#include "invforge/acsl.hpp"
#include "invforge/cminus.hpp"
#include "invforge/errors.hpp"

#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace invforge::generation {

struct config {
  double temperature = 0.2;
  int samples_k = 5;
  std::string model = "gpt-3.5-turbo";
  std::string endpoint_url = "https://api.openai.com/v1/chat/completions";
  int max_feedback_rounds = 2;
  double request_timeout_seconds = 120.0;
  std::string api_key;  // empty: read INVFORGE_API_KEY at request time
  int max_concurrent_requests = 4;
  int max_retries = 3;
  double retry_backoff_seconds = 1.0;
  // Extension, off by default: also propose weakened loop-condition
  // candidates (e.g. x >= 0 from `while (x > 0)`).
  bool heuristic_weaken_loop_condition = false;
};

struct candidate {
  acsl::invariant_text text;
  std::string generator_id;
  int sample_index = 0;  // response the candidate came from
  int round = 0;         // 0 = initial prompt, >=1 = feedback rounds
};

/// Pulls every `//@ loop invariant E;`-shaped fragment out of a response,
/// whitespace-tolerant, first-occurrence order, deduplicated by trimmed
/// text within the response. An empty result signals a malformed response
/// (no crash; the sample just yields nothing).
std::vector<std::string> extract_candidates(std::string_view response);

/// The fixed instruction sentence plus the masked task source rendered with
/// the [invariant] placeholder.
std::string build_prompt(std::string_view masked_source);

/// Original prompt plus a structured failure paragraph asking for a
/// corrected invariant.
std::string build_feedback_prompt(std::string_view masked_source,
                                  std::string_view failed_candidate,
                                  std::string_view failure_paragraph);

/// What a generator sees of the task at hand.
struct task_view {
  std::string name;
  const cminus::program* prog = nullptr;
  std::string masked_source;  // with [mask]
};

class generator {
 public:
  virtual ~generator() = default;
  virtual std::string id() const = 0;
  /// One string per sampled completion. May return fewer than k texts;
  /// throws generation_error only when the whole round is unusable.
  virtual std::vector<std::string> sample(const task_view& task,
                                          const std::string& prompt,
                                          int round) = 0;
};

/// Assertion condition verbatim plus each of its top-level conjuncts
/// (the conjuncts only when there are at least two).
std::vector<expr_ptr> heuristic_copy_assertion(const cminus::program& p);

std::unique_ptr<generator> make_heuristic_generator(const config& cfg);
std::unique_ptr<generator> make_replay_generator(std::string fixture_dir);
std::unique_ptr<generator> make_llm_generator(const config& cfg);

struct generate_result {
  std::vector<candidate> candidates;       // deduped, parseable or not
  std::vector<std::string> raw_responses;  // one per sample, for audit
  int empty_samples = 0;                   // responses with no extractable line
};

/// Samples one round and extracts candidates. `seen` carries dedup keys
/// (canonical printed form when parseable, trimmed raw text otherwise)
/// across rounds; new keys are inserted.
generate_result generate(generator& g, const task_view& task,
                         const std::string& prompt, int round,
                         std::set<std::string>& seen);

}  // namespace invforge::generation

#endif
