#ifndef INVFORGE_ADAPTERS_HPP
#define INVFORGE_ADAPTERS_HPP

#include "invforge/subprocess.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace invforge::adapters {

enum class outcome {
  proved,
  not_proved,
  tool_error,
  timeout,
  tool_not_found,
};

std::string outcome_name(outcome o);

struct tool_verdict {
  std::string tool;
  outcome result = outcome::tool_error;
  double wall_seconds = 0;
  std::string raw_log_path;  // empty when no log directory was configured
  std::string detail;        // short human-readable reason

  bool ok() const { return result == outcome::proved; }
};

struct tool_config {
  std::string framac_command = "frama-c";
  std::vector<std::string> framac_extra_args;
  std::string kinduction_command = "cpachecker";
  // The k-induction configuration is tool- and version-specific, so the
  // flags are configurable rather than baked in.
  std::vector<std::string> kinduction_extra_args = {"--kInduction"};
  double validity_timeout_seconds = 10;
  double verify_timeout_seconds = 900;
  std::uint64_t memory_limit_bytes = 0;
  std::string log_dir;  // raw tool output is written here when set
};

/// Output classification, version-pinned per tool. Exposed so the pattern
/// tables can be tested without the tools installed. Returns nothing when
/// no known pattern matches (mapped to tool_error by the runners).
std::optional<outcome> classify_framac_wp(const std::string& log);
std::optional<outcome> classify_framac_sv(const std::string& log);
std::optional<outcome> classify_kinduction(const std::string& log);

/// Runs Frama-C WP on an ACSL-annotated source file: proved iff every
/// generated goal (invariant establishment and preservation) is discharged
/// within the validity timeout.
tool_verdict run_validity_check(const std::string& annotated_source_path,
                                const tool_config& cfg);

/// Runs Frama-C as a full verifier on the annotated source: proved iff the
/// assertion goal is discharged too.
tool_verdict run_framac_sv(const std::string& annotated_source_path,
                           const tool_config& cfg);

/// Runs a k-induction verifier on the plain source, optionally consuming a
/// correctness witness (empty path: no witness, the baseline run).
tool_verdict run_kinduction(const std::string& source_path,
                            const std::string& witness_path,
                            const tool_config& cfg);

}  // namespace invforge::adapters

#endif
