#ifndef INVFORGE_HARNESS_HPP
#define INVFORGE_HARNESS_HPP

#include "invforge/adapters.hpp"
#include "invforge/errors.hpp"
#include "invforge/generation.hpp"
#include "invforge/oracle.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace invforge::harness {

enum class generator_kind { llm, heuristic, replay };
enum class validator_kind { oracle, framac };
enum class verifier_kind { oracle, framac_sv, kinduction };

std::string generator_kind_name(generator_kind k);
std::string validator_kind_name(validator_kind k);
std::string verifier_kind_name(verifier_kind k);

struct run_config {
  generation::config gen;
  oracle::domain_config domain;
  generator_kind generator = generator_kind::heuristic;
  std::string replay_dir;  // replay generator fixture directory
  validator_kind validator = validator_kind::oracle;
  verifier_kind verifier = verifier_kind::oracle;
  adapters::tool_config tools;
  bool compare_human = false;
  int jobs = 1;
  std::string out_dir;  // artifacts land here; empty: no artifacts
  // When set, tasks whose source carries no loop-invariant annotation are
  // excluded (the benchmark selection criterion "has ACSL annotations").
  bool require_annotation = false;
};

struct candidate_report {
  std::string raw;        // candidate text as extracted
  std::string canonical;  // printed form when parseable, else empty
  int round = 0;
  int sample_index = 0;
  oracle::validation_verdict verdict;
};

struct human_report {
  std::string invariant;  // canonical print of the benchmark annotation
  bool validated = false;
  bool verified_with = false;
  bool useful = false;
};

struct task_report {
  std::string name;
  std::string subcategory;
  std::string status = "ok";  // "parse-error: ..." / "generation-failed: ..."
  std::vector<candidate_report> candidates;
  std::string conjoined_invariant;  // canonical print; empty when nothing validated
  bool validated = false;
  bool verified_with = false;
  bool verified_without = false;
  bool useful = false;  // verified_with && !verified_without
  int rounds_used = 0;  // 0: initial prompt sufficed
  bool trusted = false;  // no metadata; expected verdict taken on trust
  std::optional<human_report> human;
};

struct excluded_task {
  std::string path;
  std::string reason;
};

struct selected_task {
  std::string path;
  std::string name;         // file stem, the task id
  std::string subcategory;  // parent directory name
  std::string source;
  bool trusted = false;
};

struct selection {
  std::vector<selected_task> tasks;      // sorted by (subcategory, name)
  std::vector<excluded_task> excluded;   // with reasons, same order
};

/// Walks dir recursively for .c files and keeps those that parse with
/// exactly one loop and whose metadata (a .yml next to the source, SV-COMP
/// style) expects the assertion to hold. Tasks without metadata are kept
/// but flagged as trusted.
selection select_tasks(const std::string& dir, bool require_annotation);

struct run_record {
  int schema = 1;
  std::string started;  // ISO 8601 UTC, empty when unknown
  std::string generator_id;
  std::map<std::string, std::string> tool_versions;  // probed when on PATH
  run_config config;
  std::vector<excluded_task> excluded;
  std::vector<task_report> tasks;
};

/// Executes the cooperative loop on one task: generate k candidates,
/// validate each, conjoin the valid ones, check usefulness with the
/// configured verifier, and feed failures back to the generator until the
/// round budget is spent. Generation failures are recorded in the report's
/// status, not thrown.
task_report run_task(const selected_task& t, const run_config& cfg,
                     generation::generator& g);

/// Runs every selected task (in parallel up to cfg.jobs), writes artifacts
/// and run.jsonl/report.txt/report.csv when cfg.out_dir is set.
run_record run_benchmark(const selection& sel, const run_config& cfg);

struct benchmark_row {
  std::string subcategory;
  int total = 0;
  int val_invs = 0;
  int verified_gpt = 0;
  int useful_gpt = 0;
  int verified_human = 0;
  int useful_human = 0;
};

struct benchmark_report {
  std::vector<benchmark_row> rows;  // sorted by subcategory
  benchmark_row totals;             // subcategory "total"
};

benchmark_report summarize(const std::vector<task_report>& tasks);
std::string render_table(const benchmark_report& r);
std::string render_csv(const benchmark_report& r);

struct schema_version_mismatch : error {
  using error::error;
};
struct truncated_record : error {
  using error::error;
};

/// Line-delimited JSON: a header object, then one task report per line.
void persist_run(const run_record& r, const std::string& path);
run_record load_run(const std::string& path);

}  // namespace invforge::harness

#endif
