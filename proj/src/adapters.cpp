#include "invforge/adapters.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <regex>

namespace invforge::adapters {

namespace fs = std::filesystem;

std::string outcome_name(outcome o) {
  switch (o) {
    case outcome::proved:
      return "proved";
    case outcome::not_proved:
      return "not-proved";
    case outcome::tool_error:
      return "tool-error";
    case outcome::timeout:
      return "timeout";
    case outcome::tool_not_found:
      return "tool-not-found";
  }
  return "tool-error";
}

// Pattern tables. Pinned to the output of Frama-C 26 (WP prints a final
// "Proved goals: m / n" summary) and CPAchecker 2.x ("Verification result:
// TRUE|FALSE|UNKNOWN"). Anything else is unrecognized and the caller maps
// it to tool_error instead of guessing.

std::optional<outcome> classify_framac_wp(const std::string& log) {
  static const std::regex goals(R"(Proved goals:\s*(\d+)\s*/\s*(\d+))");
  std::smatch m;
  if (!std::regex_search(log, m, goals))
    return std::nullopt;
  long proved = std::stol(m[1].str());
  long total = std::stol(m[2].str());
  if (total > 0 && proved == total)
    return outcome::proved;
  return outcome::not_proved;
}

std::optional<outcome> classify_framac_sv(const std::string& log) {
  return classify_framac_wp(log);
}

std::optional<outcome> classify_kinduction(const std::string& log) {
  static const std::regex verdict(
      R"(Verification result:\s*(TRUE|FALSE|UNKNOWN))");
  std::smatch m;
  if (!std::regex_search(log, m, verdict))
    return std::nullopt;
  if (m[1].str() == "TRUE")
    return outcome::proved;
  return outcome::not_proved;
}

namespace {

std::string write_log(const tool_config& cfg, const std::string& source_path,
                      const std::string& tool, const std::string& text) {
  if (cfg.log_dir.empty())
    return "";
  std::error_code ec;
  fs::create_directories(cfg.log_dir, ec);
  fs::path p = fs::path(cfg.log_dir) /
               (fs::path(source_path).filename().string() + "." + tool + ".log");
  std::ofstream out(p);
  out << text;
  return p.string();
}

tool_verdict run_tool(
    const std::string& tool, std::vector<std::string> argv,
    const tool_config& cfg, double timeout_seconds,
    const std::string& source_path,
    std::optional<outcome> (*classify)(const std::string&)) {
  tool_verdict v;
  v.tool = tool;
  if (proc::find_on_path(argv[0]).empty()) {
    v.result = outcome::tool_not_found;
    v.detail = "'" + argv[0] + "' is not on PATH";
    return v;
  }
  proc::limits lim;
  lim.wall_seconds = timeout_seconds;
  lim.memory_bytes = cfg.memory_limit_bytes;
  proc::result r = proc::run(argv, lim);
  v.wall_seconds = r.wall_seconds;
  v.raw_log_path = write_log(cfg, source_path, tool, r.output);
  if (!r.started) {
    v.result = outcome::tool_error;
    v.detail = r.error;
    return v;
  }
  if (r.timed_out) {
    v.result = outcome::timeout;
    v.detail = "killed after " + std::to_string(timeout_seconds) + "s";
    return v;
  }
  if (auto o = classify(r.output)) {
    v.result = *o;
    return v;
  }
  v.result = outcome::tool_error;
  v.detail = r.exit_code != 0
                 ? "exited with code " + std::to_string(r.exit_code)
                 : "unrecognized output";
  return v;
}

int whole_seconds(double s) { return std::max(1, (int)std::lround(s)); }

}  // namespace

tool_verdict run_validity_check(const std::string& annotated_source_path,
                                const tool_config& cfg) {
  std::vector<std::string> argv = {
      cfg.framac_command, "-wp",
      "-wp-timeout", std::to_string(whole_seconds(cfg.validity_timeout_seconds))};
  argv.insert(argv.end(), cfg.framac_extra_args.begin(),
              cfg.framac_extra_args.end());
  argv.push_back(annotated_source_path);
  return run_tool("framac_wp", std::move(argv), cfg,
                  cfg.validity_timeout_seconds, annotated_source_path,
                  classify_framac_wp);
}

tool_verdict run_framac_sv(const std::string& annotated_source_path,
                           const tool_config& cfg) {
  std::vector<std::string> argv = {
      cfg.framac_command, "-wp",
      "-wp-timeout", std::to_string(whole_seconds(cfg.verify_timeout_seconds))};
  argv.insert(argv.end(), cfg.framac_extra_args.begin(),
              cfg.framac_extra_args.end());
  argv.push_back(annotated_source_path);
  return run_tool("framac_sv", std::move(argv), cfg, cfg.verify_timeout_seconds,
                  annotated_source_path, classify_framac_sv);
}

tool_verdict run_kinduction(const std::string& source_path,
                            const std::string& witness_path,
                            const tool_config& cfg) {
  std::vector<std::string> argv = {cfg.kinduction_command};
  argv.insert(argv.end(), cfg.kinduction_extra_args.begin(),
              cfg.kinduction_extra_args.end());
  if (!witness_path.empty()) {
    argv.push_back("--witness");
    argv.push_back(witness_path);
  }
  argv.push_back(source_path);
  return run_tool("kinduction", std::move(argv), cfg,
                  cfg.verify_timeout_seconds, source_path,
                  classify_kinduction);
}

}  // namespace invforge::adapters
