#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "invforge/acsl.hpp"
#include "invforge/annotate.hpp"
#include "invforge/cminus.hpp"
#include "invforge/oracle.hpp"

#include <fstream>
#include <sstream>
#include <string>

using namespace invforge;

namespace {

cminus::program load_task(const std::string& rel, const std::string& name) {
  std::ifstream in(std::string(INVFORGE_FIXTURES) + "/" + rel);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return cminus::parse_task(annotate::strip_annotations(buf.str()).source,
                            name);
}

expr_ptr inv(const std::string& text) {
  acsl::parse_result r = acsl::parse_invariant(text);
  REQUIRE(r.ok());
  return r.ast;
}

oracle::validation_verdict validate(const cminus::program& p,
                                    const std::string& text,
                                    const oracle::domain_config& d = {}) {
  return oracle::validate(p, acsl::make_invariant_text(text), d);
}

state state_of(const cminus::program& p, const oracle::cex_map& cex) {
  state s;
  for (const auto& [name, value] : cex) {
    auto t = p.type_of(name);
    REQUIRE(t.has_value());
    s[name] = truncate_to(*t, value);
  }
  return s;
}

// Every counterexample must reproduce its violation when replayed.
void replay_not_established(const cminus::program& p, const expr_ptr& e,
                            const oracle::validation_verdict& v) {
  REQUIRE(v.cex.has_value());
  cminus::prologue_result r = cminus::run_prologue(p, *v.cex);
  auto* reached = std::get_if<cminus::prologue_reached>(&r);
  REQUIRE(reached != nullptr);
  CHECK(acsl::eval(e, reached->s).is_false());
}

void replay_not_inductive(const cminus::program& p, const expr_ptr& e,
                          const oracle::validation_verdict& v) {
  REQUIRE(v.cex.has_value());
  state s = state_of(p, *v.cex);
  CHECK(acsl::eval(e, s).is_true());
  cminus::cond_value c = cminus::eval_condition(p.task_loop.condition, s);
  REQUIRE(c.ok);
  CHECK(c.truth);
  cminus::step_result step = cminus::step_body(p, s);
  auto* ok = std::get_if<cminus::step_ok>(&step);
  REQUIRE(ok != nullptr);
  CHECK(acsl::eval(e, ok->s).is_false());
}

void replay_not_useful(const cminus::program& p, const expr_ptr& e,
                       const oracle::usefulness_verdict& v) {
  REQUIRE(v.cex.has_value());
  state s = state_of(p, *v.cex);
  CHECK(acsl::eval(e, s).is_true());
  cminus::cond_value c = cminus::eval_condition(p.task_loop.condition, s);
  REQUIRE(c.ok);
  CHECK_FALSE(c.truth);
  cminus::cond_value a = cminus::eval_condition(p.post_assertion, s);
  REQUIRE(a.ok);
  CHECK_FALSE(a.truth);
}

}  // namespace

TEST_CASE("count_up_down: assertion copied verbatim is not established") {
  cminus::program p =
      load_task("tasks/loops/count_up_down-1.c", "count_up_down-1");
  oracle::validation_verdict v = validate(p, "y == n");
  CHECK(v.kind == oracle::validation_kind::not_established);
  CHECK(v.cex == oracle::cex_map{{"n", 1}});
  CHECK(v.states_explored == 2);
  replay_not_established(p, inv("y == n"), v);
}

TEST_CASE("count_up_down: x <= n is valid but does not prove the assertion") {
  cminus::program p =
      load_task("tasks/loops/count_up_down-1.c", "count_up_down-1");

  oracle::validation_verdict v = validate(p, "x <= n");
  CHECK(v.kind == oracle::validation_kind::valid);
  CHECK(v.states_explored == 4930);  // 17 inputs + 17^3 states
  CHECK_FALSE(v.cex.has_value());

  oracle::usefulness_verdict u = oracle::check_useful(p, inv("x <= n"), {});
  CHECK(u.kind == oracle::usefulness_kind::not_useful);
  CHECK(u.cex == oracle::cex_map{{"n", 0}, {"x", 0}, {"y", 1}});
  CHECK(u.states_explored == 2);
  replay_not_useful(p, inv("x <= n"), u);
}

TEST_CASE("count_up_down: x + y == n is valid and useful") {
  cminus::program p =
      load_task("tasks/loops/count_up_down-1.c", "count_up_down-1");

  oracle::validation_verdict v = validate(p, "x + y == n");
  CHECK(v.kind == oracle::validation_kind::valid);
  CHECK(v.states_explored == 4930);

  oracle::usefulness_verdict u =
      oracle::check_useful(p, inv("x + y == n"), {});
  CHECK(u.kind == oracle::usefulness_kind::useful);
  CHECK(u.states_explored == 4913);

  SUBCASE("the model-written spelling y + x == n behaves identically") {
    CHECK(validate(p, "y + x == n").kind == oracle::validation_kind::valid);
    CHECK(oracle::check_useful(p, inv("y + x == n"), {}).ok());
  }
}

TEST_CASE("count_up_down: the trivial invariant cannot prove the assertion") {
  cminus::program p =
      load_task("tasks/loops/count_up_down-1.c", "count_up_down-1");
  expr_ptr one = oracle::trivial_invariant();
  CHECK(print_expr(one) == "1");

  oracle::usefulness_verdict u = oracle::check_useful(p, one, {});
  CHECK(u.kind == oracle::usefulness_kind::not_useful);
  CHECK(u.cex == oracle::cex_map{{"n", 0}, {"x", 0}, {"y", 1}});
  CHECK(u.states_explored == 2);
  replay_not_useful(p, one, u);
}

TEST_CASE("count_up_down: division by a loop variable has no defined meaning") {
  cminus::program p =
      load_task("tasks/loops/count_up_down-1.c", "count_up_down-1");
  oracle::validation_verdict v = validate(p, "n / x == 1");
  CHECK(v.kind == oracle::validation_kind::undefined_semantics);
  CHECK(v.cex == oracle::cex_map{{"n", 0}, {"x", 0}, {"y", 0}});
  CHECK(v.states_explored == 1);
  CHECK(v.message.find("division by zero") != std::string::npos);
}

TEST_CASE("benchmark04: k >= 0 alone is established but not inductive") {
  cminus::program p = load_task("tasks/loop-zilu/benchmark04_conjunctive.c",
                                "benchmark04_conjunctive");

  oracle::validation_verdict est =
      oracle::check_established(p, inv("k >= 0"), {});
  CHECK(est.kind == oracle::validation_kind::valid);
  CHECK(est.states_explored == 4913);  // 17^3 input vectors

  oracle::validation_verdict ind =
      oracle::check_inductive(p, inv("k >= 0"), {});
  CHECK(ind.kind == oracle::validation_kind::not_inductive);
  CHECK(ind.cex == oracle::cex_map{{"j", 0}, {"k", 0}, {"n", 1}});
  CHECK(ind.states_explored == 2);
  replay_not_inductive(p, inv("k >= 0"), ind);

  oracle::validation_verdict both = validate(p, "k >= 0");
  CHECK(both.kind == oracle::validation_kind::not_inductive);
  CHECK(both.states_explored == 4915);
}

TEST_CASE("benchmark04: the four-conjunct candidate is valid and useful") {
  cminus::program p = load_task("tasks/loop-zilu/benchmark04_conjunctive.c",
                                "benchmark04_conjunctive");
  const std::string candidate = "j >= 0 && k >= 0 && j <= n && k >= n - j";

  oracle::validation_verdict v = validate(p, candidate);
  CHECK(v.kind == oracle::validation_kind::valid);
  CHECK(v.states_explored == 9826);

  oracle::usefulness_verdict u = oracle::check_useful(p, inv(candidate), {});
  CHECK(u.kind == oracle::usefulness_kind::useful);
  CHECK(u.states_explored == 4913);
}

TEST_CASE("benchmark04: the chained human annotation is valid and useful") {
  cminus::program p = load_task("tasks/loop-zilu/benchmark04_conjunctive.c",
                                "benchmark04_conjunctive");

  oracle::validation_verdict v = validate(p, "j <= n <= k + j");
  CHECK(v.kind == oracle::validation_kind::valid);
  CHECK(v.states_explored == 9826);
  CHECK(oracle::check_useful(p, inv("j <= n <= k + j"), {}).ok());

  SUBCASE("conjoining k >= 0 on top stays valid") {
    expr_ptr joined = acsl::conjoin({inv("k >= 0"), inv("j <= n <= k + j")});
    oracle::validation_verdict est = oracle::check_established(p, joined, {});
    oracle::validation_verdict ind = oracle::check_inductive(p, joined, {});
    CHECK(est.ok());
    CHECK(ind.ok());
    CHECK(oracle::check_useful(p, joined, {}).ok());
  }
}

TEST_CASE("benchmark04: the trivial invariant leaves the assertion open") {
  cminus::program p = load_task("tasks/loop-zilu/benchmark04_conjunctive.c",
                                "benchmark04_conjunctive");
  oracle::usefulness_verdict u =
      oracle::check_useful(p, oracle::trivial_invariant(), {});
  CHECK(u.kind == oracle::usefulness_kind::not_useful);
  CHECK(u.cex == oracle::cex_map{{"j", 0}, {"k", -1}, {"n", 0}});
  CHECK(u.states_explored == 579);
  replay_not_useful(p, oracle::trivial_invariant(), u);
}

TEST_CASE("underapprox: the shift spelling validates where pow cannot") {
  cminus::program p = load_task("tasks/loop-acceleration/underapprox_1-2.c",
                                "underapprox_1-2");

  oracle::validation_verdict rejected =
      validate(p, "x <= 6 && y == pow(2, x)");
  CHECK(rejected.kind == oracle::validation_kind::unsupported);
  CHECK(rejected.symbol == "pow");

  oracle::validation_verdict v = validate(p, "y == 1 << x");
  CHECK(v.kind == oracle::validation_kind::valid);
  CHECK(v.states_explored == 290);  // one input vector + 17^2 states

  oracle::usefulness_verdict u = oracle::check_useful(p, inv("y == 1 << x"), {});
  CHECK(u.kind == oracle::usefulness_kind::useful);
  CHECK(u.states_explored == 289);
}

TEST_CASE("underapprox: baseline check finds the assertion violation") {
  cminus::program p = load_task("tasks/loop-acceleration/underapprox_1-2.c",
                                "underapprox_1-2");
  oracle::usefulness_verdict u =
      oracle::check_useful(p, oracle::trivial_invariant(), {});
  CHECK(u.kind == oracle::usefulness_kind::not_useful);
  CHECK(u.cex == oracle::cex_map{{"x", 6}, {"y", 0}});
  CHECK(u.states_explored == 103);
}

TEST_CASE("validate classifies malformed and out-of-scope candidates") {
  cminus::program p = load_task("tasks/loops/count_up_down-1.c",
                                "count_up_down-1");

  oracle::validation_verdict broken = validate(p, "x ==");
  CHECK(broken.kind == oracle::validation_kind::parse_failed);
  CHECK_FALSE(broken.message.empty());

  oracle::validation_verdict quantified = validate(p, "\\forall integer i; i");
  CHECK(quantified.kind == oracle::validation_kind::unsupported);
  CHECK(quantified.symbol == "\\forall");

  oracle::validation_verdict foreign = validate(p, "q >= 0");
  CHECK(foreign.kind == oracle::validation_kind::unsupported);
  CHECK(foreign.symbol == "q");
  CHECK(foreign.message.find("scope") != std::string::npos);
}

TEST_CASE("the state budget degrades verdicts to unknown") {
  cminus::program p = load_task("tasks/loop-zilu/benchmark04_conjunctive.c",
                                "benchmark04_conjunctive");
  oracle::domain_config d;
  d.max_states = 10;

  oracle::validation_verdict v = validate(p, "1 == 1", d);
  CHECK(v.kind == oracle::validation_kind::unknown);
  CHECK(v.states_explored == 10);
  CHECK(v.message == "state budget exhausted");

  oracle::usefulness_verdict u =
      oracle::check_useful(p, oracle::trivial_invariant(), d);
  CHECK(u.kind == oracle::usefulness_kind::unknown);
  CHECK(u.states_explored == 10);
}

TEST_CASE("verdicts carry the enumeration ranges they were computed under") {
  cminus::program p = load_task("tasks/loops/count_up_down-1.c",
                                "count_up_down-1");
  oracle::domain_config d;
  d.nondet_unsigned_hi = 4;
  oracle::validation_verdict v = validate(p, "y == n", d);
  CHECK(v.kind == oracle::validation_kind::not_established);
  CHECK(v.domain.nondet_unsigned_hi == 4);
  CHECK(v.domain.max_states == d.max_states);
}

TEST_CASE("prologue faults and early returns do not count against a candidate") {
  cminus::program p = cminus::parse_task(
      "void func(int a) {\n"
      "  int q = 10 / a;\n"
      "  while (q > 0) { q--; }\n"
      "  assert(q == 0);\n"
      "}\n");
  oracle::validation_verdict v =
      oracle::check_established(p, inv("q >= 0"), {});
  CHECK(v.kind == oracle::validation_kind::not_established);
  CHECK(v.cex == oracle::cex_map{{"a", -1}});  // a=0 faults and is skipped
  CHECK(v.states_explored == 3);
}

TEST_CASE("body faults leave no successor state to judge") {
  cminus::program p = cminus::parse_task(
      "void func(int a, int b) {\n"
      "  while (a > 0) { b = 10 / (a - 1); a--; }\n"
      "  assert(1);\n"
      "}\n");
  // a=1 faults in the body; every surviving step keeps a <= 8
  oracle::validation_verdict v = oracle::check_inductive(p, inv("a <= 8"), {});
  CHECK(v.kind == oracle::validation_kind::valid);
  CHECK(v.states_explored == 289);
}

TEST_CASE("faulting loop conditions are not treated as loop exits") {
  cminus::program p = cminus::parse_task(
      "void func(int a) {\n"
      "  while (10 / a > 0) { a--; }\n"
      "  assert(a != 0);\n"
      "}\n");
  // the assertion is false at a=0, but the condition faults there first
  oracle::usefulness_verdict u =
      oracle::check_useful(p, oracle::trivial_invariant(), {});
  CHECK(u.kind == oracle::usefulness_kind::useful);
  CHECK(u.states_explored == 17);
}

TEST_CASE("undefined invariant semantics surface on successor states too") {
  cminus::program p = cminus::parse_task(
      "void func(int a) {\n"
      "  while (a < 0) { a--; }\n"
      "  assert(1);\n"
      "}\n");
  oracle::validation_verdict v =
      oracle::check_inductive(p, inv("10 / (a + 9) >= 0"), {});
  CHECK(v.kind == oracle::validation_kind::undefined_semantics);
  CHECK(v.cex == oracle::cex_map{{"a", -9}});
  CHECK(v.states_explored == 17);
  CHECK(v.message.find("after one iteration") != std::string::npos);

  SUBCASE("and conservatively on premise states") {
    oracle::validation_verdict pre =
        oracle::check_inductive(p, inv("10 / a >= -100"), {});
    CHECK(pre.kind == oracle::validation_kind::undefined_semantics);
    CHECK(pre.cex == oracle::cex_map{{"a", 0}});
    CHECK(pre.states_explored == 1);
  }

  SUBCASE("usefulness degrades to unknown instead") {
    oracle::usefulness_verdict u =
        oracle::check_useful(p, inv("10 / a >= -100"), {});
    CHECK(u.kind == oracle::usefulness_kind::unknown);
    CHECK(u.message.find("division by zero") != std::string::npos);
  }
}

TEST_CASE("verdict kinds have stable names") {
  CHECK(oracle::validation_kind_name(oracle::validation_kind::valid) ==
        std::string("valid"));
  CHECK(oracle::validation_kind_name(
            oracle::validation_kind::not_established) ==
        std::string("not-established"));
  CHECK(oracle::validation_kind_name(oracle::validation_kind::not_inductive) ==
        std::string("not-inductive"));
  CHECK(oracle::usefulness_kind_name(oracle::usefulness_kind::not_useful) ==
        std::string("not-useful"));
}
