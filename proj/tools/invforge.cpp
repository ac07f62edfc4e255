#include "invforge/annotate.hpp"
#include "invforge/harness.hpp"

#include <CLI11.hpp>
#include <yaml-cpp/yaml.h>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace invforge;

struct usage_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

double parse_duration(const std::string& text) {
  std::string t = text;
  if (!t.empty() && t.back() == 's')
    t.pop_back();
  std::size_t pos = 0;
  double v = 0;
  try {
    v = std::stod(t, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (t.empty() || pos != t.size() || v < 0)
    throw usage_error("invalid duration '" + text + "' (expected e.g. 10s)");
  return v;
}

void apply_config_file(const std::string& path, harness::run_config& cfg) {
  YAML::Node doc;
  try {
    doc = YAML::LoadFile(path);
  } catch (const std::exception& e) {
    throw usage_error("cannot read config " + path + ": " + e.what());
  }
  if (doc["endpoint_url"])
    cfg.gen.endpoint_url = doc["endpoint_url"].as<std::string>();
  if (doc["model"])
    cfg.gen.model = doc["model"].as<std::string>();
  if (doc["temperature"])
    cfg.gen.temperature = doc["temperature"].as<double>();
  if (doc["samples_k"])
    cfg.gen.samples_k = doc["samples_k"].as<int>();
  if (doc["max_feedback_rounds"])
    cfg.gen.max_feedback_rounds = doc["max_feedback_rounds"].as<int>();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw usage_error("cannot read " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void print_verdict(const oracle::validation_verdict& v) {
  std::cout << "validation: " << oracle::validation_kind_name(v.kind);
  if (!v.symbol.empty())
    std::cout << " (symbol " << v.symbol << ")";
  if (!v.message.empty())
    std::cout << " - " << v.message;
  std::cout << "\n";
  if (v.cex) {
    std::cout << "counterexample:";
    for (const auto& [name, value] : *v.cex)
      std::cout << " " << name << "=" << value.str();
    std::cout << "\n";
  }
  std::cout << "states explored: " << v.states_explored << "\n";
}

int cmd_run(const std::string& dir, const std::string& generator,
            const std::string& validator, const std::string& verifier,
            bool compare_human, int jobs, const std::string& out_dir,
            const std::string& config_file, const std::string& validity_timeout,
            const std::string& verify_timeout, bool require_annotation,
            const std::string& framac_command,
            const std::string& kinduction_command) {
  harness::run_config cfg;
  if (!config_file.empty())
    apply_config_file(config_file, cfg);

  if (generator == "llm") {
    cfg.generator = harness::generator_kind::llm;
    if (cfg.gen.api_key.empty() && !std::getenv("INVFORGE_API_KEY"))
      throw usage_error(
          "the llm generator needs an API key (set INVFORGE_API_KEY)");
  } else if (generator == "heuristic") {
    cfg.generator = harness::generator_kind::heuristic;
  } else if (generator.rfind("replay:", 0) == 0) {
    cfg.generator = harness::generator_kind::replay;
    cfg.replay_dir = generator.substr(7);
    if (cfg.replay_dir.empty())
      throw usage_error("replay generator needs a directory: replay:<dir>");
  } else {
    throw usage_error("unknown generator '" + generator +
                      "' (llm, heuristic, or replay:<dir>)");
  }

  if (validator == "oracle")
    cfg.validator = harness::validator_kind::oracle;
  else if (validator == "framac")
    cfg.validator = harness::validator_kind::framac;
  else
    throw usage_error("unknown validator '" + validator + "'");

  if (verifier == "oracle")
    cfg.verifier = harness::verifier_kind::oracle;
  else if (verifier == "framac_sv")
    cfg.verifier = harness::verifier_kind::framac_sv;
  else if (verifier == "kinduction")
    cfg.verifier = harness::verifier_kind::kinduction;
  else
    throw usage_error("unknown verifier '" + verifier + "'");

  cfg.compare_human = compare_human;
  cfg.jobs = jobs;
  cfg.out_dir = out_dir;
  cfg.require_annotation = require_annotation;
  cfg.tools.validity_timeout_seconds = parse_duration(validity_timeout);
  cfg.tools.verify_timeout_seconds = parse_duration(verify_timeout);
  if (!framac_command.empty())
    cfg.tools.framac_command = framac_command;
  if (!kinduction_command.empty())
    cfg.tools.kinduction_command = kinduction_command;
  if (!out_dir.empty())
    cfg.tools.log_dir = out_dir + "/tools";

  harness::selection sel = harness::select_tasks(dir, require_annotation);
  for (const auto& e : sel.excluded)
    std::cerr << "excluded " << e.path << ": " << e.reason << "\n";
  if (sel.tasks.empty()) {
    std::cerr << "no tasks selected under " << dir << "\n";
    return 2;
  }

  harness::run_record rec = harness::run_benchmark(sel, cfg);
  std::cout << harness::render_table(harness::summarize(rec.tasks));
  if (!out_dir.empty())
    std::cout << "\nrun written to " << out_dir << "\n";
  return 0;
}

int cmd_check(const std::string& file, const std::string& invariant,
              std::uint64_t max_states) {
  std::string source = read_file(file);
  auto stripped = annotate::strip_annotations(source);
  cminus::program p;
  try {
    std::string name = file;
    if (auto slash = name.find_last_of('/'); slash != std::string::npos)
      name = name.substr(slash + 1);
    if (name.size() > 2 && name.substr(name.size() - 2) == ".c")
      name = name.substr(0, name.size() - 2);
    p = cminus::parse_task(stripped.source, name, "");
  } catch (const std::exception& e) {
    std::cerr << "cannot parse " << file << ": " << e.what() << "\n";
    return 2;
  }

  acsl::parse_result parsed = acsl::parse_invariant(invariant);
  acsl::invariant_text text;
  text.raw = invariant;
  text.parsed = parsed.ast;
  text.failure = parsed.failure;

  oracle::domain_config domain;
  if (max_states)
    domain.max_states = max_states;

  oracle::validation_verdict v = oracle::validate(p, text, domain);
  if (text.parsed)
    std::cout << "invariant: " << acsl::print_invariant(text.parsed) << "\n";
  else
    std::cout << "invariant: " << invariant << "\n";
  print_verdict(v);

  if (v.ok()) {
    oracle::usefulness_verdict u = oracle::check_useful(p, text.parsed, domain);
    std::cout << "usefulness: " << oracle::usefulness_kind_name(u.kind);
    if (!u.message.empty())
      std::cout << " - " << u.message;
    std::cout << "\n";
    if (u.cex) {
      std::cout << "counterexample:";
      for (const auto& [name, value] : *u.cex)
        std::cout << " " << name << "=" << value.str();
      std::cout << "\n";
    }
    bool baseline =
        oracle::check_useful(p, oracle::trivial_invariant(), domain).ok();
    std::cout << "verified without invariant: " << (baseline ? "yes" : "no")
              << "\n";
    std::cout << "operationally useful: "
              << (u.ok() && !baseline ? "yes" : "no") << "\n";
  }
  return 0;
}

int cmd_report(const std::string& rundir, const std::string& format) {
  harness::run_record rec;
  try {
    rec = harness::load_run(rundir + "/run.jsonl");
  } catch (const std::exception& e) {
    std::cerr << "cannot load run: " << e.what() << "\n";
    return 1;
  }
  harness::benchmark_report rep = harness::summarize(rec.tasks);
  if (format == "csv")
    std::cout << harness::render_csv(rep);
  else
    std::cout << harness::render_table(rep);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"loop invariant generation and validation pipeline"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "run the pipeline over a task directory");
  std::string dir, generator = "heuristic", validator = "oracle",
                   verifier = "oracle", out_dir, config_file;
  std::string validity_timeout = "10s", verify_timeout = "900s";
  std::string framac_command, kinduction_command;
  bool compare_human = false, require_annotation = false;
  int jobs = 1;
  run->add_option("dir", dir, "task directory")->required();
  run->add_option("--generator", generator, "llm, heuristic, or replay:<dir>");
  run->add_option("--validator", validator, "oracle or framac");
  run->add_option("--verifier", verifier, "oracle, framac_sv, or kinduction");
  run->add_flag("--compare-human", compare_human,
                "also evaluate the benchmark's own annotation");
  run->add_option("--jobs", jobs, "parallel tasks")->check(CLI::PositiveNumber);
  run->add_option("--out", out_dir, "run directory for artifacts");
  run->add_option("--config", config_file, "YAML config (endpoint_url, model, "
                  "temperature, samples_k, max_feedback_rounds)");
  run->add_option("--validity-timeout", validity_timeout,
                  "per-candidate validity tool limit (e.g. 10s)");
  run->add_option("--verify-timeout", verify_timeout,
                  "verifier tool limit (e.g. 900s)");
  run->add_flag("--require-annotation", require_annotation,
                "select only tasks that carry a loop-invariant annotation");
  run->add_option("--framac-command", framac_command, "frama-c executable");
  run->add_option("--kinduction-command", kinduction_command,
                  "k-induction verifier executable");

  auto* check = app.add_subcommand("check", "validate one invariant on one task");
  std::string check_file, check_invariant;
  std::uint64_t check_max_states = 0;
  check->add_option("file", check_file, "task source file")->required();
  check->add_option("--invariant", check_invariant, "invariant expression")
      ->required();
  check->add_option("--max-states", check_max_states,
                    "state budget override for the bounded checks");

  auto* report = app.add_subcommand("report", "render a stored run");
  std::string report_dir, report_format = "table";
  report->add_option("rundir", report_dir, "run directory")->required();
  report->add_option("--format", report_format, "table or csv")
      ->check(CLI::IsMember({"table", "csv"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (run->parsed())
      return cmd_run(dir, generator, validator, verifier, compare_human, jobs,
                     out_dir, config_file, validity_timeout, verify_timeout,
                     require_annotation, framac_command, kinduction_command);
    if (check->parsed())
      return cmd_check(check_file, check_invariant, check_max_states);
    if (report->parsed())
      return cmd_report(report_dir, report_format);
  } catch (const usage_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
