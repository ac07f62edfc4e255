#include "invforge/harness.hpp"

#include "invforge/annotate.hpp"
#include "invforge/witness.hpp"

#include <json.hpp>
#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <atomic>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>
#include <unistd.h>

namespace invforge::harness {

namespace fs = std::filesystem;
using nlohmann::json;

std::string generator_kind_name(generator_kind k) {
  switch (k) {
    case generator_kind::llm:
      return "llm";
    case generator_kind::heuristic:
      return "heuristic";
    case generator_kind::replay:
      return "replay";
  }
  return "heuristic";
}

std::string validator_kind_name(validator_kind k) {
  return k == validator_kind::framac ? "framac" : "oracle";
}

std::string verifier_kind_name(verifier_kind k) {
  switch (k) {
    case verifier_kind::oracle:
      return "oracle";
    case verifier_kind::framac_sv:
      return "framac_sv";
    case verifier_kind::kinduction:
      return "kinduction";
  }
  return "oracle";
}

namespace {

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in)
    throw error("cannot read " + p.string());
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void write_file(const fs::path& p, const std::string& text) {
  std::error_code ec;
  fs::create_directories(p.parent_path(), ec);
  std::ofstream out(p, std::ios::binary);
  if (!out)
    throw error("cannot write " + p.string());
  out << text;
}

// ---------------------------------------------------------------------
// Task selection
// ---------------------------------------------------------------------

// SV-COMP style metadata: a .yml next to the source listing property files
// with expected verdicts. Only the unreach-call property matters here.
struct task_metadata {
  bool found = false;            // a .yml next to the source
  bool has_unreach_call = false;
  bool expected_verdict = true;
};

task_metadata read_metadata(const fs::path& c_path) {
  task_metadata m;
  fs::path yml = c_path;
  yml.replace_extension(".yml");
  if (!fs::exists(yml))
    return m;
  m.found = true;
  YAML::Node doc = YAML::LoadFile(yml.string());
  for (const auto& prop : doc["properties"]) {
    auto file = prop["property_file"];
    if (!file || file.as<std::string>().find("unreach-call") == std::string::npos)
      continue;
    m.has_unreach_call = true;
    if (prop["expected_verdict"])
      m.expected_verdict = prop["expected_verdict"].as<bool>();
    break;
  }
  return m;
}

}  // namespace

selection select_tasks(const std::string& dir, bool require_annotation) {
  selection sel;
  std::vector<fs::path> paths;
  if (fs::is_directory(dir))
    for (const auto& e : fs::recursive_directory_iterator(dir))
      if (e.is_regular_file() && e.path().extension() == ".c")
        paths.push_back(e.path());
  std::sort(paths.begin(), paths.end());

  for (const auto& path : paths) {
    std::string source = read_file(path);
    auto stripped = annotate::strip_annotations(source);
    if (require_annotation && stripped.removed.empty()) {
      sel.excluded.push_back({path.string(), "no loop-invariant annotation"});
      continue;
    }
    std::string name = path.stem().string();
    std::string subcategory = path.parent_path().filename().string();
    try {
      (void)cminus::parse_task(stripped.source, name, subcategory);
    } catch (const std::exception& e) {
      sel.excluded.push_back({path.string(), e.what()});
      continue;
    }
    task_metadata meta;
    try {
      meta = read_metadata(path);
    } catch (const std::exception& e) {
      sel.excluded.push_back(
          {path.string(), std::string("metadata unreadable: ") + e.what()});
      continue;
    }
    if (meta.has_unreach_call && !meta.expected_verdict) {
      sel.excluded.push_back({path.string(), "expected verdict is false"});
      continue;
    }
    selected_task t;
    t.path = path.string();
    t.name = std::move(name);
    t.subcategory = std::move(subcategory);
    t.source = std::move(source);
    t.trusted = !meta.has_unreach_call;
    sel.tasks.push_back(std::move(t));
  }
  std::sort(sel.tasks.begin(), sel.tasks.end(),
            [](const selected_task& a, const selected_task& b) {
              return std::tie(a.subcategory, a.name) <
                     std::tie(b.subcategory, b.name);
            });
  return sel;
}

// ---------------------------------------------------------------------
// The cooperative loop
// ---------------------------------------------------------------------

namespace {

std::string cex_text(const oracle::cex_map& cex) {
  std::string out;
  for (const auto& [name, value] : cex) {
    if (!out.empty())
      out += ", ";
    out += name + "=" + value.str();
  }
  return out;
}

// One feedback paragraph per rejection cause, fed back verbatim to the
// generator.
std::string failure_paragraph(const oracle::validation_verdict& v) {
  using K = oracle::validation_kind;
  switch (v.kind) {
    case K::parse_failed:
      return "It could not be parsed: " + v.message + ".";
    case K::unsupported:
      return "It uses the unsupported symbol `" + v.symbol + "`.";
    case K::not_established:
      return "It does not hold when the loop is first reached, for example "
             "with " +
             cex_text(*v.cex) + ".";
    case K::not_inductive:
      return "It is not preserved by one loop iteration starting from " +
             cex_text(*v.cex) + ".";
    case K::undefined_semantics:
      return "Its evaluation is undefined (" + v.message + ")" +
             (v.cex ? " at " + cex_text(*v.cex) : "") + ".";
    case K::unknown:
      return "Its validity could not be decided: " + v.message + ".";
    case K::valid:
      break;
  }
  return "";
}

// Inserts a line directly above the given 1-based line, copying its
// indentation (same convention as the mask line).
std::string insert_line_above(const std::string& text, int line,
                              const std::string& content) {
  std::istringstream in(text);
  std::ostringstream out;
  std::string row;
  int n = 0;
  while (std::getline(in, row)) {
    ++n;
    if (n == line) {
      std::size_t indent = row.find_first_not_of(" \t");
      out << row.substr(0, indent == std::string::npos ? 0 : indent) << content
          << "\n";
    }
    out << row << "\n";
  }
  return out.str();
}

// On-disk staging for the external tools: annotated sources, baseline
// sources, and witnesses, laid out per task. Created on first use.
struct tool_workspace {
  const run_config* cfg = nullptr;
  const selected_task* task = nullptr;
  const cminus::program* prog = nullptr;
  std::string stripped;
  std::string dir;

  const std::string& ensure() {
    if (dir.empty()) {
      fs::path base = cfg->out_dir.empty()
                          ? fs::temp_directory_path() /
                                ("invforge-" + std::to_string(getpid()))
                          : fs::path(cfg->out_dir) / "tools";
      dir = (base / task->name).string();
      fs::create_directories(dir);
    }
    return dir;
  }

  // The ACSL assert mirroring the C assertion, placed directly above it so
  // the proof obligation exists for WP-style tools. `shift` accounts for
  // lines inserted above the assertion (the invariant annotation).
  std::string with_acsl_assert(const std::string& text, int shift) const {
    return insert_line_above(
        text, prog->assertion_line + shift,
        "//@ assert " + witness::c_expr(prog->post_assertion) + ";");
  }
};

oracle::validation_verdict parse_scope_verdict(
    const cminus::program& p, const acsl::invariant_text& cand,
    const oracle::domain_config& d) {
  oracle::validation_verdict v;
  v.domain = d;
  if (!cand.parsed_ok()) {
    const auto& f = *cand.failure;
    v.kind = f.unsupported ? oracle::validation_kind::unsupported
                           : oracle::validation_kind::parse_failed;
    v.symbol = f.symbol;
    v.message = f.message;
    return v;
  }
  for (const auto& name : acsl::free_vars(cand.parsed))
    if (!p.declares(name)) {
      v.kind = oracle::validation_kind::unsupported;
      v.symbol = name;
      v.message = "identifier not in scope at the loop head";
      return v;
    }
  v.kind = oracle::validation_kind::valid;
  return v;
}

oracle::validation_verdict validate_candidate(const cminus::program& p,
                                              const acsl::invariant_text& cand,
                                              const std::string& masked,
                                              const run_config& cfg,
                                              tool_workspace& ws,
                                              int candidate_index) {
  if (cfg.validator == validator_kind::oracle)
    return oracle::validate(p, cand, cfg.domain);

  oracle::validation_verdict v = parse_scope_verdict(p, cand, cfg.domain);
  if (!v.ok())
    return v;
  fs::path file = fs::path(ws.ensure()) /
                  (p.name + ".cand" + std::to_string(candidate_index) + ".c");
  write_file(file, annotate::instantiate(masked, p, cand.parsed));
  adapters::tool_verdict t = adapters::run_validity_check(file.string(), cfg.tools);
  if (t.ok())
    return v;  // valid
  v.kind = oracle::validation_kind::unknown;
  v.message = t.tool + ": " + adapters::outcome_name(t.result) +
              (t.detail.empty() ? "" : " (" + t.detail + ")");
  return v;
}

bool verify_with(const cminus::program& p, const expr_ptr& inv,
                 const std::string& masked, const std::string& tag,
                 const run_config& cfg, tool_workspace& ws) {
  switch (cfg.verifier) {
    case verifier_kind::oracle:
      return oracle::check_useful(p, inv, cfg.domain).ok();
    case verifier_kind::framac_sv: {
      // The annotation line above the loop shifts the assertion down one
      // line relative to the stripped text.
      std::string text = ws.with_acsl_assert(
          annotate::instantiate(masked, p, inv), /*shift=*/1);
      fs::path file = fs::path(ws.ensure()) / (p.name + "." + tag + ".c");
      write_file(file, text);
      return adapters::run_framac_sv(file.string(), cfg.tools).ok();
    }
    case verifier_kind::kinduction: {
      fs::path src = fs::path(ws.ensure()) / (p.name + ".c");
      write_file(src, ws.stripped);
      witness::document doc =
          witness::export_witness(p, inv, p.name + ".c", ws.stripped);
      fs::path wit =
          fs::path(ws.ensure()) / (p.name + "." + tag + ".witness.graphml");
      write_file(wit, doc.graphml);
      return adapters::run_kinduction(src.string(), wit.string(), cfg.tools)
          .ok();
    }
  }
  return false;
}

bool verify_without(const cminus::program& p, const run_config& cfg,
                    tool_workspace& ws) {
  switch (cfg.verifier) {
    case verifier_kind::oracle:
      return oracle::check_useful(p, oracle::trivial_invariant(), cfg.domain)
          .ok();
    case verifier_kind::framac_sv: {
      std::string text = ws.with_acsl_assert(ws.stripped, /*shift=*/0);
      fs::path file = fs::path(ws.ensure()) / (p.name + ".noinv.c");
      write_file(file, text);
      return adapters::run_framac_sv(file.string(), cfg.tools).ok();
    }
    case verifier_kind::kinduction: {
      fs::path src = fs::path(ws.ensure()) / (p.name + ".c");
      write_file(src, ws.stripped);
      return adapters::run_kinduction(src.string(), "", cfg.tools).ok();
    }
  }
  return false;
}

void write_responses(const run_config& cfg, const selected_task& t, int round,
                     const std::vector<std::string>& responses) {
  if (cfg.out_dir.empty())
    return;
  for (std::size_t i = 0; i < responses.size(); ++i)
    write_file(fs::path(cfg.out_dir) / "responses" /
                   (t.name + ".round" + std::to_string(round) + ".sample" +
                    std::to_string(i) + ".txt"),
               responses[i]);
}

}  // namespace

task_report run_task(const selected_task& t, const run_config& cfg,
                     generation::generator& g) {
  task_report rep;
  rep.name = t.name;
  rep.subcategory = t.subcategory;
  rep.trusted = t.trusted;

  auto stripped = annotate::strip_annotations(t.source);
  cminus::program p;
  try {
    p = cminus::parse_task(stripped.source, t.name, t.subcategory);
  } catch (const std::exception& e) {
    rep.status = std::string("parse-error: ") + e.what();
    return rep;
  }

  tool_workspace ws;
  ws.cfg = &cfg;
  ws.task = &t;
  ws.prog = &p;
  ws.stripped = stripped.source;

  std::string masked =
      annotate::insert_mask(stripped.source, p.task_loop.header_line);
  std::string prompt_src = annotate::render_for_prompt(masked);
  std::string initial_prompt = generation::build_prompt(prompt_src);

  generation::task_view view;
  view.name = t.name;
  view.prog = &p;
  view.masked_source = masked;

  std::set<std::string> seen;
  std::vector<expr_ptr> valid;
  expr_ptr conjoined;
  std::string prompt = initial_prompt;

  for (int round = 0;;) {
    generation::generate_result gr;
    try {
      gr = generation::generate(g, view, prompt, round, seen);
    } catch (const generation_error& e) {
      rep.status = std::string("generation-failed: ") + e.what();
      break;
    }
    rep.rounds_used = round;
    write_responses(cfg, t, round, gr.raw_responses);
    for (const auto& c : gr.candidates) {
      candidate_report cr;
      cr.raw = c.text.raw;
      cr.canonical = c.text.parsed_ok() ? acsl::print_invariant(c.text.parsed)
                                        : std::string();
      cr.round = c.round;
      cr.sample_index = c.sample_index;
      cr.verdict = validate_candidate(p, c.text, masked, cfg, ws,
                                      (int)rep.candidates.size());
      if (cr.verdict.ok())
        valid.push_back(c.text.parsed);
      rep.candidates.push_back(std::move(cr));
    }

    if (!valid.empty()) {
      conjoined = acsl::conjoin(valid);
      rep.conjoined_invariant = acsl::print_invariant(conjoined);
      rep.validated = true;
      rep.verified_with = verify_with(p, conjoined, masked,
                                      "round" + std::to_string(round), cfg, ws);
      if (rep.verified_with)
        break;
      if (round >= cfg.gen.max_feedback_rounds)
        break;
      std::string para =
          "The invariant was validated but the verifier cannot prove the "
          "assertion `" +
          witness::c_expr(p.post_assertion) +
          "` with it. Propose a stronger loop invariant.";
      prompt = generation::build_feedback_prompt(
          prompt_src, rep.conjoined_invariant, para);
      ++round;
    } else {
      if (round >= cfg.gen.max_feedback_rounds)
        break;
      // Feed back the first candidate of the latest round that produced
      // any; without candidates there is nothing to correct, so the
      // original prompt is repeated.
      int last_round = -1;
      for (const auto& cr : rep.candidates)
        last_round = std::max(last_round, cr.round);
      const candidate_report* fail = nullptr;
      for (const auto& cr : rep.candidates)
        if (cr.round == last_round) {
          fail = &cr;
          break;
        }
      prompt = fail ? generation::build_feedback_prompt(
                          prompt_src, fail->raw, failure_paragraph(fail->verdict))
                    : initial_prompt;
      ++round;
    }
  }

  rep.verified_without = verify_without(p, cfg, ws);
  rep.useful = rep.verified_with && !rep.verified_without;

  if (cfg.compare_human && !stripped.removed.empty()) {
    human_report h;
    std::vector<expr_ptr> parts;
    bool all_parse = true;
    for (const auto& raw : stripped.removed) {
      acsl::parse_result r = acsl::parse_invariant(raw);
      if (!r.ok()) {
        all_parse = false;
        h.invariant = raw;
        break;
      }
      parts.push_back(r.ast);
    }
    if (all_parse) {
      expr_ptr hinv = acsl::conjoin(parts);
      h.invariant = acsl::print_invariant(hinv);
      acsl::invariant_text text;
      text.raw = h.invariant;
      text.parsed = hinv;
      h.validated =
          validate_candidate(p, text, masked, cfg, ws,
                             (int)rep.candidates.size())
              .ok();
      if (h.validated)
        h.verified_with = verify_with(p, hinv, masked, "human", cfg, ws);
      h.useful = h.verified_with && !rep.verified_without;
    }
    rep.human = std::move(h);
  }

  if (!cfg.out_dir.empty() && rep.validated) {
    write_file(fs::path(cfg.out_dir) / (t.name + ".annotated.c"),
               annotate::instantiate(masked, p, conjoined));
    witness::document doc =
        witness::export_witness(p, conjoined, t.name + ".c", stripped.source);
    write_file(fs::path(cfg.out_dir) / (t.name + ".witness.graphml"),
               doc.graphml);
  }
  return rep;
}

// ---------------------------------------------------------------------
// Aggregation and rendering
// ---------------------------------------------------------------------

benchmark_report summarize(const std::vector<task_report>& tasks) {
  std::map<std::string, benchmark_row> rows;
  for (const auto& t : tasks) {
    benchmark_row& r = rows[t.subcategory];
    r.subcategory = t.subcategory;
    r.total += 1;
    r.val_invs += t.validated;
    r.verified_gpt += t.verified_with;
    r.useful_gpt += t.useful;
    if (t.human) {
      r.verified_human += t.human->verified_with;
      r.useful_human += t.human->useful;
    }
  }
  benchmark_report rep;
  rep.totals.subcategory = "total";
  for (auto& [_, r] : rows) {
    rep.totals.total += r.total;
    rep.totals.val_invs += r.val_invs;
    rep.totals.verified_gpt += r.verified_gpt;
    rep.totals.useful_gpt += r.useful_gpt;
    rep.totals.verified_human += r.verified_human;
    rep.totals.useful_human += r.useful_human;
    rep.rows.push_back(std::move(r));
  }
  return rep;
}

namespace {

std::vector<std::string> row_cells(const benchmark_row& r) {
  return {r.subcategory, std::to_string(r.total), std::to_string(r.val_invs),
          std::to_string(r.verified_gpt) + " (" + std::to_string(r.useful_gpt) +
              ")",
          std::to_string(r.verified_human) + " (" +
              std::to_string(r.useful_human) + ")"};
}

}  // namespace

std::string render_table(const benchmark_report& r) {
  const std::vector<std::string> header = {"subcategory", "total", "val-invs",
                                           "GPT invs.", "Human invs."};
  std::vector<std::vector<std::string>> body;
  for (const auto& row : r.rows)
    body.push_back(row_cells(row));
  std::vector<std::string> totals = row_cells(r.totals);

  std::vector<std::size_t> width(header.size());
  for (std::size_t c = 0; c < header.size(); ++c)
    width[c] = header[c].size();
  for (const auto& cells : body)
    for (std::size_t c = 0; c < cells.size(); ++c)
      width[c] = std::max(width[c], cells[c].size());
  for (std::size_t c = 0; c < totals.size(); ++c)
    width[c] = std::max(width[c], totals[c].size());

  auto line = [&](const std::vector<std::string>& cells) {
    std::string out;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (c)
        out += "  ";
      std::size_t pad = width[c] - cells[c].size();
      if (c == 0)
        out += cells[c] + std::string(pad, ' ');
      else
        out += std::string(pad, ' ') + cells[c];
    }
    while (!out.empty() && out.back() == ' ')
      out.pop_back();
    return out + "\n";
  };
  std::string rule;
  for (std::size_t c = 0; c < width.size(); ++c) {
    if (c)
      rule += "  ";
    rule += std::string(width[c], '-');
  }
  rule += "\n";

  std::string out = line(header) + rule;
  for (const auto& cells : body)
    out += line(cells);
  out += rule + line(totals);
  return out;
}

std::string render_csv(const benchmark_report& r) {
  std::string out =
      "subcategory,total,val_invs,verified_gpt,useful_gpt,verified_human,"
      "useful_human\n";
  auto row = [&](const benchmark_row& b) {
    out += b.subcategory + "," + std::to_string(b.total) + "," +
           std::to_string(b.val_invs) + "," + std::to_string(b.verified_gpt) +
           "," + std::to_string(b.useful_gpt) + "," +
           std::to_string(b.verified_human) + "," +
           std::to_string(b.useful_human) + "\n";
  };
  for (const auto& b : r.rows)
    row(b);
  row(r.totals);
  return out;
}

// ---------------------------------------------------------------------
// Persistence
// ---------------------------------------------------------------------

namespace {

json domain_to_json(const oracle::domain_config& d) {
  return json{{"nondet_unsigned", {d.nondet_unsigned_lo.str(), d.nondet_unsigned_hi.str()}},
              {"nondet_signed", {d.nondet_signed_lo.str(), d.nondet_signed_hi.str()}},
              {"state_unsigned", {d.state_unsigned_lo.str(), d.state_unsigned_hi.str()}},
              {"state_signed", {d.state_signed_lo.str(), d.state_signed_hi.str()}},
              {"max_states", d.max_states}};
}

oracle::domain_config domain_from_json(const json& j) {
  oracle::domain_config d;
  auto pair = [&](const char* key, bigint& lo, bigint& hi) {
    lo = bigint(j.at(key).at(0).get<std::string>());
    hi = bigint(j.at(key).at(1).get<std::string>());
  };
  pair("nondet_unsigned", d.nondet_unsigned_lo, d.nondet_unsigned_hi);
  pair("nondet_signed", d.nondet_signed_lo, d.nondet_signed_hi);
  pair("state_unsigned", d.state_unsigned_lo, d.state_unsigned_hi);
  pair("state_signed", d.state_signed_lo, d.state_signed_hi);
  d.max_states = j.at("max_states").get<std::uint64_t>();
  return d;
}

oracle::validation_kind validation_kind_from_name(const std::string& name) {
  using K = oracle::validation_kind;
  for (K k : {K::valid, K::parse_failed, K::unsupported, K::not_established,
              K::not_inductive, K::undefined_semantics, K::unknown})
    if (name == oracle::validation_kind_name(k))
      return k;
  throw error("unknown validation kind '" + name + "'");
}

json verdict_to_json(const oracle::validation_verdict& v) {
  json j{{"kind", oracle::validation_kind_name(v.kind)},
         {"symbol", v.symbol},
         {"message", v.message},
         {"states_explored", v.states_explored},
         {"domain", domain_to_json(v.domain)}};
  if (v.cex) {
    json c = json::object();
    for (const auto& [name, value] : *v.cex)
      c[name] = value.str();
    j["cex"] = c;
  }
  return j;
}

oracle::validation_verdict verdict_from_json(const json& j) {
  oracle::validation_verdict v;
  v.kind = validation_kind_from_name(j.at("kind").get<std::string>());
  v.symbol = j.at("symbol").get<std::string>();
  v.message = j.at("message").get<std::string>();
  v.states_explored = j.at("states_explored").get<std::uint64_t>();
  v.domain = domain_from_json(j.at("domain"));
  if (j.contains("cex")) {
    oracle::cex_map cex;
    for (const auto& [name, value] : j.at("cex").items())
      cex[name] = bigint(value.get<std::string>());
    v.cex = std::move(cex);
  }
  return v;
}

json task_to_json(const task_report& t) {
  json cands = json::array();
  for (const auto& c : t.candidates)
    cands.push_back(json{{"raw", c.raw},
                         {"canonical", c.canonical},
                         {"round", c.round},
                         {"sample_index", c.sample_index},
                         {"verdict", verdict_to_json(c.verdict)}});
  json j{{"name", t.name},
         {"subcategory", t.subcategory},
         {"status", t.status},
         {"candidates", std::move(cands)},
         {"conjoined_invariant", t.conjoined_invariant},
         {"validated", t.validated},
         {"verified_with", t.verified_with},
         {"verified_without", t.verified_without},
         {"useful", t.useful},
         {"rounds_used", t.rounds_used},
         {"trusted", t.trusted}};
  if (t.human)
    j["human"] = json{{"invariant", t.human->invariant},
                      {"validated", t.human->validated},
                      {"verified_with", t.human->verified_with},
                      {"useful", t.human->useful}};
  return j;
}

task_report task_from_json(const json& j) {
  task_report t;
  t.name = j.at("name").get<std::string>();
  t.subcategory = j.at("subcategory").get<std::string>();
  t.status = j.at("status").get<std::string>();
  for (const auto& c : j.at("candidates")) {
    candidate_report cr;
    cr.raw = c.at("raw").get<std::string>();
    cr.canonical = c.at("canonical").get<std::string>();
    cr.round = c.at("round").get<int>();
    cr.sample_index = c.at("sample_index").get<int>();
    cr.verdict = verdict_from_json(c.at("verdict"));
    t.candidates.push_back(std::move(cr));
  }
  t.conjoined_invariant = j.at("conjoined_invariant").get<std::string>();
  t.validated = j.at("validated").get<bool>();
  t.verified_with = j.at("verified_with").get<bool>();
  t.verified_without = j.at("verified_without").get<bool>();
  t.useful = j.at("useful").get<bool>();
  t.rounds_used = j.at("rounds_used").get<int>();
  t.trusted = j.at("trusted").get<bool>();
  if (j.contains("human")) {
    human_report h;
    const json& hj = j.at("human");
    h.invariant = hj.at("invariant").get<std::string>();
    h.validated = hj.at("validated").get<bool>();
    h.verified_with = hj.at("verified_with").get<bool>();
    h.useful = hj.at("useful").get<bool>();
    t.human = std::move(h);
  }
  return t;
}

json config_to_json(const run_config& c) {
  return json{{"generator", generator_kind_name(c.generator)},
              {"replay_dir", c.replay_dir},
              {"validator", validator_kind_name(c.validator)},
              {"verifier", verifier_kind_name(c.verifier)},
              {"model", c.gen.model},
              {"endpoint_url", c.gen.endpoint_url},
              {"temperature", c.gen.temperature},
              {"samples_k", c.gen.samples_k},
              {"max_feedback_rounds", c.gen.max_feedback_rounds},
              {"heuristic_weaken_loop_condition",
               c.gen.heuristic_weaken_loop_condition},
              {"compare_human", c.compare_human},
              {"jobs", c.jobs},
              {"require_annotation", c.require_annotation},
              {"out_dir", c.out_dir},
              {"validity_timeout_seconds", c.tools.validity_timeout_seconds},
              {"verify_timeout_seconds", c.tools.verify_timeout_seconds},
              {"framac_command", c.tools.framac_command},
              {"kinduction_command", c.tools.kinduction_command},
              {"domain", domain_to_json(c.domain)}};
}

run_config config_from_json(const json& j) {
  run_config c;
  std::string gen = j.at("generator").get<std::string>();
  c.generator = gen == "llm"      ? generator_kind::llm
                : gen == "replay" ? generator_kind::replay
                                  : generator_kind::heuristic;
  c.replay_dir = j.at("replay_dir").get<std::string>();
  c.validator = j.at("validator").get<std::string>() == "framac"
                    ? validator_kind::framac
                    : validator_kind::oracle;
  std::string ver = j.at("verifier").get<std::string>();
  c.verifier = ver == "framac_sv"    ? verifier_kind::framac_sv
               : ver == "kinduction" ? verifier_kind::kinduction
                                     : verifier_kind::oracle;
  c.gen.model = j.at("model").get<std::string>();
  c.gen.endpoint_url = j.at("endpoint_url").get<std::string>();
  c.gen.temperature = j.at("temperature").get<double>();
  c.gen.samples_k = j.at("samples_k").get<int>();
  c.gen.max_feedback_rounds = j.at("max_feedback_rounds").get<int>();
  c.gen.heuristic_weaken_loop_condition =
      j.at("heuristic_weaken_loop_condition").get<bool>();
  c.compare_human = j.at("compare_human").get<bool>();
  c.jobs = j.at("jobs").get<int>();
  c.require_annotation = j.at("require_annotation").get<bool>();
  c.out_dir = j.at("out_dir").get<std::string>();
  c.tools.validity_timeout_seconds =
      j.at("validity_timeout_seconds").get<double>();
  c.tools.verify_timeout_seconds = j.at("verify_timeout_seconds").get<double>();
  c.tools.framac_command = j.at("framac_command").get<std::string>();
  c.tools.kinduction_command = j.at("kinduction_command").get<std::string>();
  c.domain = domain_from_json(j.at("domain"));
  return c;
}

}  // namespace

void persist_run(const run_record& r, const std::string& path) {
  json excluded = json::array();
  for (const auto& e : r.excluded)
    excluded.push_back(json{{"path", e.path}, {"reason", e.reason}});
  json header{{"schema", r.schema},
              {"started", r.started},
              {"generator", r.generator_id},
              {"tool_versions", r.tool_versions},
              {"config", config_to_json(r.config)},
              {"excluded", std::move(excluded)}};
  std::error_code ec;
  fs::create_directories(fs::path(path).parent_path(), ec);
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw error("cannot write " + path);
  out << header.dump() << "\n";
  for (const auto& t : r.tasks)
    out << task_to_json(t).dump() << "\n";
}

run_record load_run(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw error("cannot open " + path);
  std::string line;
  if (!std::getline(in, line))
    throw schema_version_mismatch("empty run file: " + path);
  run_record r;
  try {
    json header = json::parse(line);
    if (!header.contains("schema") || !header.at("schema").is_number_integer())
      throw schema_version_mismatch("run file header carries no schema");
    int schema = header.at("schema").get<int>();
    if (schema != 1)
      throw schema_version_mismatch("unsupported schema " +
                                    std::to_string(schema));
    r.schema = schema;
    r.started = header.at("started").get<std::string>();
    r.generator_id = header.at("generator").get<std::string>();
    r.tool_versions =
        header.at("tool_versions").get<std::map<std::string, std::string>>();
    r.config = config_from_json(header.at("config"));
    for (const auto& e : header.at("excluded"))
      r.excluded.push_back({e.at("path").get<std::string>(),
                            e.at("reason").get<std::string>()});
  } catch (const schema_version_mismatch&) {
    throw;
  } catch (const std::exception& e) {
    throw schema_version_mismatch(std::string("run file header unreadable: ") +
                                  e.what());
  }
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty())
      continue;
    try {
      r.tasks.push_back(task_from_json(json::parse(line)));
    } catch (const std::exception& e) {
      throw truncated_record("line " + std::to_string(lineno) + ": " +
                             e.what());
    }
  }
  return r;
}

// ---------------------------------------------------------------------
// Whole-benchmark driver
// ---------------------------------------------------------------------

namespace {

std::unique_ptr<generation::generator> make_generator(const run_config& cfg) {
  switch (cfg.generator) {
    case generator_kind::llm:
      return generation::make_llm_generator(cfg.gen);
    case generator_kind::replay:
      return generation::make_replay_generator(cfg.replay_dir);
    case generator_kind::heuristic:
      break;
  }
  return generation::make_heuristic_generator(cfg.gen);
}

std::string utc_now() {
  std::time_t now = std::time(nullptr);
  std::tm tm;
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string probe_tool_version(const std::string& cmd,
                               const std::string& flag) {
  if (proc::find_on_path(cmd).empty())
    return "";
  proc::limits lim;
  lim.wall_seconds = 5;
  proc::result r = proc::run({cmd, flag}, lim);
  if (!r.started || r.timed_out)
    return "";
  std::string first = r.output.substr(0, r.output.find('\n'));
  while (!first.empty() && (first.back() == '\r' || first.back() == ' '))
    first.pop_back();
  return first;
}

}  // namespace

run_record run_benchmark(const selection& sel, const run_config& cfg) {
  run_record rec;
  rec.started = utc_now();
  rec.config = cfg;
  rec.excluded = sel.excluded;

  std::unique_ptr<generation::generator> gen = make_generator(cfg);
  rec.generator_id = gen->id();

  if (cfg.validator == validator_kind::framac ||
      cfg.verifier == verifier_kind::framac_sv) {
    std::string v = probe_tool_version(cfg.tools.framac_command, "-version");
    if (!v.empty())
      rec.tool_versions[cfg.tools.framac_command] = v;
  }
  if (cfg.verifier == verifier_kind::kinduction) {
    std::string v =
        probe_tool_version(cfg.tools.kinduction_command, "--version");
    if (!v.empty())
      rec.tool_versions[cfg.tools.kinduction_command] = v;
  }

  rec.tasks.resize(sel.tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= sel.tasks.size())
        return;
      try {
        rec.tasks[i] = run_task(sel.tasks[i], cfg, *gen);
      } catch (const std::exception& e) {
        task_report r;
        r.name = sel.tasks[i].name;
        r.subcategory = sel.tasks[i].subcategory;
        r.trusted = sel.tasks[i].trusted;
        r.status = std::string("error: ") + e.what();
        rec.tasks[i] = std::move(r);
      }
    }
  };
  int jobs = std::max(1, cfg.jobs);
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < jobs; ++i)
      pool.emplace_back(worker);
    for (auto& th : pool)
      th.join();
  }

  if (!cfg.out_dir.empty()) {
    persist_run(rec, (fs::path(cfg.out_dir) / "run.jsonl").string());
    benchmark_report rep = summarize(rec.tasks);
    write_file(fs::path(cfg.out_dir) / "report.txt", render_table(rep));
    write_file(fs::path(cfg.out_dir) / "report.csv", render_csv(rep));
  }
  return rec;
}

}  // namespace invforge::harness
