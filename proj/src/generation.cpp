#include "invforge/generation.hpp"

#include "invforge/annotate.hpp"
#include "invforge/llm_client.hpp"

#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>
#include <utility>

namespace invforge::generation {

namespace {

constexpr const char* instruction =
    "Compute a loop invariant for the annotated loop including [invariant] "
    "in the following C code. Please use the format of ACSL annotations and "
    "always end your response with //@ loop invariant X ; where X is the "
    "computed invariant.";

std::string trim(std::string_view s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos)
    return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

}  // namespace

std::vector<std::string> extract_candidates(std::string_view response) {
  static const std::regex pattern(R"(//@\s*loop\s+invariant\s*([^;]*);)");
  std::vector<std::string> out;
  std::set<std::string> seen_here;
  std::string text(response);
  for (std::sregex_iterator it(text.begin(), text.end(), pattern), end;
       it != end; ++it) {
    std::string body = trim((*it)[1].str());
    if (body.empty() || body == annotate::mask_token ||
        body == annotate::prompt_token)
      continue;
    if (seen_here.insert(body).second)
      out.push_back(std::move(body));
  }
  return out;
}

std::string build_prompt(std::string_view masked_source) {
  return std::string(instruction) + "\n" +
         annotate::render_for_prompt(masked_source);
}

std::string build_feedback_prompt(std::string_view masked_source,
                                  std::string_view failed_candidate,
                                  std::string_view failure_paragraph) {
  std::string prompt = build_prompt(masked_source);
  prompt += "\nYour previous loop invariant candidate `";
  prompt += failed_candidate;
  prompt += "` was rejected. ";
  prompt += failure_paragraph;
  prompt +=
      "\nPlease propose a corrected loop invariant and always end your "
      "response with //@ loop invariant X ; where X is the computed "
      "invariant.";
  return prompt;
}

std::vector<expr_ptr> heuristic_copy_assertion(const cminus::program& p) {
  std::vector<expr_ptr> out;
  out.push_back(p.post_assertion);

  std::vector<expr_ptr> conjuncts;
  auto split = [&conjuncts](const expr_ptr& e, auto&& self) -> void {
    if (const auto* b = std::get_if<expr::binary>(&e->node);
        b && b->op == binary_op::logical_and) {
      self(b->lhs, self);
      self(b->rhs, self);
      return;
    }
    conjuncts.push_back(e);
  };
  split(p.post_assertion, split);
  if (conjuncts.size() > 1)
    for (auto& c : conjuncts)
      out.push_back(std::move(c));
  return out;
}

namespace {

class heuristic_generator final : public generator {
 public:
  explicit heuristic_generator(const config& cfg)
      : weaken_(cfg.heuristic_weaken_loop_condition) {}

  std::string id() const override { return "heuristic"; }

  std::vector<std::string> sample(const task_view& task, const std::string&,
                                  int round) override {
    if (round > 0 || task.prog == nullptr)
      return {};  // one deterministic idea set; feedback adds nothing
    std::vector<expr_ptr> proposals = heuristic_copy_assertion(*task.prog);
    if (weaken_) {
      if (expr_ptr w = weakened_condition(task.prog->task_loop.condition))
        proposals.push_back(std::move(w));
    }
    std::ostringstream response;
    response << "Candidate invariants derived from the task's assertion:\n";
    for (const auto& e : proposals)
      response << "//@ loop invariant " << print_expr(e) << " ;\n";
    return {response.str()};
  }

 private:
  bool weaken_;

  static expr_ptr weakened_condition(const expr_ptr& cond) {
    const auto* b = std::get_if<expr::binary>(&cond->node);
    if (!b)
      return nullptr;
    switch (b->op) {
      case binary_op::lt:
        return mk_binary(binary_op::le, b->lhs, b->rhs);
      case binary_op::gt:
        return mk_binary(binary_op::ge, b->lhs, b->rhs);
      default:
        return nullptr;
    }
  }
};

class replay_generator final : public generator {
 public:
  explicit replay_generator(std::string dir) : dir_(std::move(dir)) {}

  std::string id() const override { return "replay:" + dir_; }

  std::vector<std::string> sample(const task_view& task, const std::string&,
                                  int round) override {
    std::filesystem::path path =
        std::filesystem::path(dir_) /
        (task.name + ".round" + std::to_string(round) + ".response.txt");
    std::ifstream in(path);
    if (!in) {
      if (round == 0)
        throw generation_error("no replay fixture: " + path.string());
      return {};
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return {buf.str()};
  }

 private:
  std::string dir_;
};

class llm_generator final : public generator {
 public:
  explicit llm_generator(const config& cfg) : cfg_(cfg) {
    llm::client::options o;
    o.endpoint_url = cfg.endpoint_url;
    o.model = cfg.model;
    o.temperature = cfg.temperature;
    o.n = cfg.samples_k;
    o.api_key = cfg.api_key;
    o.timeout_seconds = cfg.request_timeout_seconds;
    o.max_retries = cfg.max_retries;
    o.backoff_seconds = cfg.retry_backoff_seconds;
    o.max_concurrent = cfg.max_concurrent_requests;
    client_ = std::make_unique<llm::client>(std::move(o));
  }

  std::string id() const override { return "llm:" + cfg_.model; }

  std::vector<std::string> sample(const task_view&, const std::string& prompt,
                                  int) override {
    return client_->complete(prompt);
  }

 private:
  config cfg_;
  std::unique_ptr<llm::client> client_;
};

}  // namespace

std::unique_ptr<generator> make_heuristic_generator(const config& cfg) {
  return std::make_unique<heuristic_generator>(cfg);
}

std::unique_ptr<generator> make_replay_generator(std::string fixture_dir) {
  return std::make_unique<replay_generator>(std::move(fixture_dir));
}

std::unique_ptr<generator> make_llm_generator(const config& cfg) {
  return std::make_unique<llm_generator>(cfg);
}

generate_result generate(generator& g, const task_view& task,
                         const std::string& prompt, int round,
                         std::set<std::string>& seen) {
  generate_result out;
  out.raw_responses = g.sample(task, prompt, round);
  for (std::size_t i = 0; i < out.raw_responses.size(); ++i) {
    std::vector<std::string> texts = extract_candidates(out.raw_responses[i]);
    if (texts.empty()) {
      ++out.empty_samples;
      continue;
    }
    for (auto& raw : texts) {
      acsl::invariant_text inv = acsl::make_invariant_text(std::move(raw));
      std::string key = inv.parsed_ok() ? acsl::print_invariant(inv.parsed)
                                        : trim(inv.raw);
      if (!seen.insert(key).second)
        continue;
      candidate c;
      c.text = std::move(inv);
      c.generator_id = g.id();
      c.sample_index = static_cast<int>(i);
      c.round = round;
      out.candidates.push_back(std::move(c));
    }
  }
  return out;
}

}  // namespace invforge::generation
