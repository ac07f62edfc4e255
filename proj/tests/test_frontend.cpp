#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "invforge/cminus.hpp"
#include "invforge/expr_parser.hpp"
#include "invforge/lexer.hpp"

#include <string>
#include <vector>

using namespace invforge;
using namespace invforge::cminus;

namespace {

expr_ptr parse_c_expr(const std::string& text) {
  std::vector<token> toks = lex(text);
  std::size_t pos = 0;
  return parse_expression(toks, pos, expr_dialect::c);
}

std::string printed(const std::string& text) {
  return print_expr(parse_c_expr(text));
}

const char* count_up_down_src = R"(extern void abort(void);
extern void __assert_fail(const char *, const char *, unsigned int, const char *) __attribute__ ((__nothrow__ , __leaf__)) __attribute__ ((__noreturn__));
void reach_error() { __assert_fail("0", "count_up_down-1.c", 3, "reach_error"); }

extern unsigned int __VERIFIER_nondet_uint(void);

void __VERIFIER_assert(int cond) {
  if (!(cond)) {
    ERROR: {reach_error();abort();}
  }
}

int main() {
  unsigned int n = __VERIFIER_nondet_uint();
  unsigned int x = n, y = 0;

  while (x > 0) {
    x--;
    y++;
  }

  __VERIFIER_assert(y == n);
  return 0;
}
)";

state reached_state(const program& p, std::map<std::string, bigint> inputs) {
  prologue_result r = run_prologue(p, inputs);
  REQUIRE(std::holds_alternative<prologue_reached>(r));
  return std::get<prologue_reached>(r).s;
}

}  // namespace

TEST_CASE("lexer splits punctuation with maximal munch") {
  std::vector<token> toks = lex("a ==> b <= c << 2");
  REQUIRE(toks.size() == 8);  // incl. end
  CHECK(toks[1].is("==>"));
  CHECK(toks[3].is("<="));
  CHECK(toks[5].is("<<"));
  CHECK(toks[7].kind == token_kind::end);
}

TEST_CASE("lexer drops comments and preprocessor lines") {
  std::vector<token> toks = lex(
      "#include <assert.h>\n"
      "x /* block\n comment */ + // line comment\n y");
  REQUIRE(toks.size() == 4);
  CHECK(toks[0].is_ident("x"));
  CHECK(toks[1].is("+"));
  CHECK(toks[2].is_ident("y"));
  CHECK(toks[2].line == 4);
}

TEST_CASE("lexer keeps ACSL backslash keywords as one identifier") {
  std::vector<token> toks = lex("\\forall integer i");
  CHECK(toks[0].is_ident("\\forall"));
}

TEST_CASE("lexer rejects stray characters") {
  CHECK_THROWS_AS(lex("x @ y"), parse_error);
}

TEST_CASE("expression precedence in canonical print") {
  CHECK(printed("x + y == n") == "((x + y) == n)");
  CHECK(printed("x == 1 << 2") == "(x == (1 << 2))");
  CHECK(printed("a && b || c") == "((a && b) || c)");
  CHECK(printed("- x * y") == "((-x) * y)");
  CHECK(printed("x - y - z") == "((x - y) - z)");
  CHECK(printed("a == b < c") == "(a == (b < c))");
  CHECK(printed("!(x < 3)") == "(!(x < 3))");
  CHECK(printed("x * (y + 1)") == "(x * (y + 1))");
}

TEST_CASE("comparison chains become conjunctions") {
  CHECK(printed("0 <= i <= n") == "((0 <= i) && (i <= n))");
  CHECK(printed("j <= n <= k + j") == "((j <= n) && (n <= (k + j)))");
  CHECK(printed("a == b == c") == "((a == b) && (b == c))");
  CHECK(printed("a >= b > c") == "((a >= b) && (b > c))");
}

TEST_CASE("mixed-direction and != chains are rejected") {
  CHECK_THROWS_AS(parse_c_expr("0 <= i >= j"), expr_parse_error);
  CHECK_THROWS_AS(parse_c_expr("a != b != c"), expr_parse_error);
}

TEST_CASE("bitwise and ternary operators are flagged as unsupported") {
  for (const char* text : {"x & y", "x | y", "x ^ y", "x ? y : z", "~x"}) {
    try {
      parse_c_expr(text);
      FAIL("expected expr_parse_error for ", text);
    } catch (const expr_parse_error& e) {
      CHECK(e.unsupported);
      CHECK(!e.symbol.empty());
    }
  }
}

TEST_CASE("integer literals with suffixes and bases") {
  auto lit = [](const std::string& s) {
    return std::get<expr::literal>(parse_c_expr(s)->node);
  };
  CHECK(lit("5u").value == 5);
  CHECK(lit("5u").unsigned_hint);
  CHECK(lit("0x10").value == 16);
  CHECK(lit("4294967295").value == bigint("4294967295"));
  CHECK(lit("4294967295").unsigned_hint);
  CHECK_FALSE(lit("42").unsigned_hint);
}

TEST_CASE("parses an SV-COMP style task") {
  program p = parse_task(count_up_down_src, "count_up_down-1", "loops");
  CHECK(p.name == "count_up_down-1");
  CHECK(p.params.empty());

  auto nondet = p.nondet_variables();
  REQUIRE(nondet.size() == 1);
  CHECK(nondet[0].name == "n");
  CHECK(nondet[0].type == ctype::u32);

  auto sc = p.scope();
  REQUIRE(sc.size() == 3);
  CHECK(sc[0].name == "n");
  CHECK(sc[1].name == "x");
  CHECK(sc[2].name == "y");

  CHECK(print_expr(p.task_loop.condition) == "(x > 0)");
  CHECK(print_expr(p.post_assertion) == "(y == n)");
  CHECK(p.task_loop.header_line == 17);
  CHECK(p.task_loop.body.size() == 2);
}

TEST_CASE("print and reparse yields a structurally identical program") {
  program p = parse_task(count_up_down_src);
  std::string text = print_program(p);
  program q = parse_task(text);
  CHECK(structurally_equal(p, q));
  CHECK(print_program(q) == text);
}

TEST_CASE("for loops desugar into while form") {
  program p = parse_task(R"(
int main() {
  int n = __VERIFIER_nondet_int();
  int s = 0;
  for (int i = 0; i < n; i++) {
    s += 1;
  }
  assert(s >= 0);
  return 0;
}
)");
  auto sc = p.scope();
  REQUIRE(sc.size() == 3);
  CHECK(sc[2].name == "i");
  CHECK(print_expr(p.task_loop.condition) == "(i < n)");
  REQUIRE(p.task_loop.body.size() == 2);
  CHECK(p.task_loop.body[1].target == "i");
  CHECK(p.task_loop.body[1].k == stmt::kind::compound_assign);

  program q = parse_task(print_program(p));
  CHECK(structurally_equal(p, q));
}

TEST_CASE("guard returns filter the input space") {
  program p = parse_task(R"(
int main() {
  int n = __VERIFIER_nondet_int();
  if (!(n < 100)) return 0;
  int i = 0;
  while (i < n) {
    i++;
  }
  assert(i >= 0);
  return 0;
}
)");
  prologue_result hit = run_prologue(p, {{"n", 100}});
  CHECK(std::holds_alternative<prologue_returned_early>(hit));

  state s = reached_state(p, {{"n", 5}});
  CHECK(lift(s.at("n")) == 5);
  CHECK(lift(s.at("i")) == 0);
}

TEST_CASE("out-of-subset constructs are reported by name") {
  auto construct_of = [](const char* src) {
    try {
      parse_task(src);
      return std::string("(parsed)");
    } catch (const unsupported_construct& e) {
      return e.construct;
    }
  };
  CHECK(construct_of("int main() { while (1) { while (1) {} } }") ==
        "nested loop");
  CHECK(construct_of(R"(
int main() {
  int x = 0;
  if (x > 0) { x = 1; }
  while (x < 3) { x++; }
  assert(x >= 0);
}
)") == "general if statement");
  CHECK(construct_of("int main() { int a[10]; }") == "array declaration");
  CHECK(construct_of("int main() { int *p; }") == "pointer declaration");
  CHECK(construct_of(R"(
int main() {
  int x = 0;
  while (x < 3) { x++; }
  while (x > 0) { x--; }
  assert(x == 0);
}
)") == "multiple loops");
  CHECK(construct_of(R"(
int main() {
  int x = 0;
  while (x < 3) { x++; }
}
)") == "missing post-loop assertion");
  CHECK(construct_of(R"(
int main() {
  int x = 0;
  while (x < 3) { x++; }
  x = 0;
  assert(x == 0);
}
)") == "statement after the loop");
  CHECK(construct_of(R"(
int main() {
  long x = 0;
  while (x < 3) { x++; }
  assert(x >= 0);
}
)") == "type 'long'");
}

TEST_CASE("undeclared identifiers are parse errors") {
  CHECK_THROWS_AS(parse_task(R"(
int main() {
  int x = 0;
  while (x < m) { x++; }
  assert(x >= 0);
}
)"),
                  parse_error);
}

TEST_CASE("prologue evaluates declarations in order") {
  program p = parse_task(count_up_down_src);
  state s = reached_state(p, {{"n", 5}});
  CHECK(lift(s.at("n")) == 5);
  CHECK(lift(s.at("x")) == 5);
  CHECK(lift(s.at("y")) == 0);

  prologue_result missing = run_prologue(p, {});
  CHECK(std::holds_alternative<prologue_fault>(missing));
}

TEST_CASE("one body step updates the state") {
  program p = parse_task(count_up_down_src);
  state s = reached_state(p, {{"n", 5}});
  step_result r = step_body(p, s);
  REQUIRE(std::holds_alternative<step_ok>(r));
  const state& s2 = std::get<step_ok>(r).s;
  CHECK(lift(s2.at("x")) == 4);
  CHECK(lift(s2.at("y")) == 1);
  CHECK(lift(s2.at("n")) == 5);
}

TEST_CASE("unsigned decrement wraps at zero") {
  program p = parse_task(count_up_down_src);
  state s = reached_state(p, {{"n", 5}});
  s.at("x") = make_u32(0);
  step_result r = step_body(p, s);
  REQUIRE(std::holds_alternative<step_ok>(r));
  CHECK(lift(std::get<step_ok>(r).s.at("x")) == bigint("4294967295"));
}

TEST_CASE("signed increment wraps at INT_MAX") {
  program p = parse_task(R"(
int main() {
  int x = __VERIFIER_nondet_int();
  while (x < 5) {
    x += 1;
  }
  assert(x == 5);
}
)");
  state s = reached_state(p, {{"x", 2147483647}});
  // 2147483647 < 5 is false, but step_body itself only runs the body.
  s.at("x") = truncate_to(ctype::i32, 2147483647);
  step_result r = step_body(p, s);
  REQUIRE(std::holds_alternative<step_ok>(r));
  CHECK(lift(std::get<step_ok>(r).s.at("x")) == bigint("-2147483648"));
}

TEST_CASE("division faults surface as step faults") {
  program p = parse_task(R"(
int main() {
  int x = __VERIFIER_nondet_int();
  int y = __VERIFIER_nondet_int();
  int q = 0;
  while (x > 0) {
    q = x / y;
    x -= 1;
  }
  assert(q >= 0 || q < 0);
}
)");
  state s = reached_state(p, {{"x", 4}, {"y", 0}});
  step_result r = step_body(p, s);
  REQUIRE(std::holds_alternative<step_fault>(r));
  CHECK(std::get<step_fault>(r).reason == "division by zero");
  CHECK(std::get<step_fault>(r).at == "q = (x / y);");

  state s2 = reached_state(p, {{"x", 7}, {"y", -2}});
  step_result r2 = step_body(p, s2);
  REQUIRE(std::holds_alternative<step_ok>(r2));
  CHECK(lift(std::get<step_ok>(r2).s.at("q")) == -3);  // truncated division
}

TEST_CASE("INT_MIN / -1 wraps instead of faulting") {
  program p = parse_task(R"(
int main() {
  int y = __VERIFIER_nondet_int();
  int q = 0;
  while (q == 0) {
    q = y / -1;
  }
  assert(q != 0);
}
)");
  state s = reached_state(p, {{"y", 7}});
  s.at("y") = truncate_to(ctype::i32, bigint("-2147483648"));
  step_result r = step_body(p, s);
  REQUIRE(std::holds_alternative<step_ok>(r));
  CHECK(lift(std::get<step_ok>(r).s.at("q")) == bigint("-2147483648"));
}

TEST_CASE("condition evaluation uses machine semantics") {
  program p = parse_task(R"(
int main() {
  int x = __VERIFIER_nondet_int();
  while (x + 1 > x) {
    x += 1;
  }
  assert(x == x);
}
)");
  state s;
  s["x"] = truncate_to(ctype::i32, 2147483647);
  cond_value c = eval_condition(p.task_loop.condition, s);
  REQUIRE(c.ok);
  CHECK_FALSE(c.truth);  // INT_MAX + 1 wraps to INT_MIN

  s["x"] = make_i32(0);
  c = eval_condition(p.task_loop.condition, s);
  REQUIRE(c.ok);
  CHECK(c.truth);
}

TEST_CASE("condition faults are reported, not thrown") {
  program p = parse_task(R"(
int main() {
  int x = __VERIFIER_nondet_int();
  while (10 / x > 0) {
    x -= 1;
  }
  assert(x <= 0 || x > 0);
}
)");
  state s;
  s["x"] = make_i32(0);
  cond_value c = eval_condition(p.task_loop.condition, s);
  CHECK_FALSE(c.ok);
  CHECK(c.fault == "division by zero");
}

TEST_CASE("mixed signed/unsigned comparison converts to unsigned") {
  // (-1) compared against an unsigned operand is 4294967295 in C.
  program p = parse_task(R"(
int main() {
  unsigned int u = __VERIFIER_nondet_uint();
  int x = -1;
  while (u < x) {
    u += 1;
  }
  assert(u <= x);
}
)");
  state s = reached_state(p, {{"u", 3}});
  cond_value c = eval_condition(p.task_loop.condition, s);
  REQUIRE(c.ok);
  CHECK(c.truth);  // 3 < 4294967295u
}
