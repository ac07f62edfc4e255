#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "invforge/acsl.hpp"
#include "invforge/annotate.hpp"
#include "invforge/cminus.hpp"

#include <fstream>
#include <sstream>
#include <string>

using namespace invforge;

namespace {

std::string read_fixture(const std::string& rel) {
  std::ifstream in(std::string(INVFORGE_FIXTURES) + "/" + rel);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

const char* small_task = R"(void func(int k, int j, int n) {
  if (!(n>=1 && k>=n && j==0)) return;
  //@ loop invariant j <= n <= k + j;
  while (j<=n-1) { j++; k--; }
  assert(k>=0);
}
)";

}  // namespace

TEST_CASE("strip removes annotation lines and reports their bodies") {
  annotate::strip_result r = annotate::strip_annotations(small_task);
  REQUIRE(r.removed.size() == 1);
  CHECK(r.removed[0] == "j <= n <= k + j");
  CHECK(r.source == R"(void func(int k, int j, int n) {
  if (!(n>=1 && k>=n && j==0)) return;
  while (j<=n-1) { j++; k--; }
  assert(k>=0);
}
)");
}

TEST_CASE("strip on unannotated source is the identity") {
  const std::string plain = "int main() {\n  return 0;\n}\n";
  annotate::strip_result r = annotate::strip_annotations(plain);
  CHECK(r.removed.empty());
  CHECK(r.source == plain);
}

TEST_CASE("strip tolerates spacing variants and trailing blanks") {
  annotate::strip_result r = annotate::strip_annotations(
      "\t//@loop   invariant   x>=0   ;  \nwhile (x) { x--; }\n");
  REQUIRE(r.removed.size() == 1);
  CHECK(r.removed[0] == "x>=0");
  CHECK(r.source == "while (x) { x--; }\n");
}

TEST_CASE("mask goes directly above the loop header with its indentation") {
  annotate::strip_result stripped = annotate::strip_annotations(small_task);
  cminus::program p = cminus::parse_task(stripped.source);
  std::string masked =
      annotate::insert_mask(stripped.source, p.task_loop.header_line);
  CHECK(masked == R"(void func(int k, int j, int n) {
  if (!(n>=1 && k>=n && j==0)) return;
  //@ loop invariant [mask];
  while (j<=n-1) { j++; k--; }
  assert(k>=0);
}
)");
  CHECK(annotate::has_mask(masked));
  CHECK_FALSE(annotate::has_mask(stripped.source));
}

TEST_CASE("masking twice is an error") {
  annotate::strip_result stripped = annotate::strip_annotations(small_task);
  cminus::program p = cminus::parse_task(stripped.source);
  std::string masked =
      annotate::insert_mask(stripped.source, p.task_loop.header_line);
  CHECK_THROWS_AS(annotate::insert_mask(masked, p.task_loop.header_line),
                  already_masked_error);
}

TEST_CASE("mask line must exist") {
  CHECK_THROWS_AS(annotate::insert_mask("one line\n", 5), error);
  CHECK_THROWS_AS(annotate::insert_mask("one line\n", 0), error);
}

TEST_CASE("prompt rendering rewrites the placeholder") {
  CHECK(annotate::render_for_prompt("  //@ loop invariant [mask];\n") ==
        "  //@ loop invariant [invariant];\n");
  CHECK(annotate::render_for_prompt("no placeholder\n") == "no placeholder\n");
}

TEST_CASE("instantiate replaces the mask with the canonical spelling") {
  annotate::strip_result stripped = annotate::strip_annotations(small_task);
  cminus::program p = cminus::parse_task(stripped.source);
  std::string masked =
      annotate::insert_mask(stripped.source, p.task_loop.header_line);

  acsl::parse_result inv = acsl::parse_invariant("k >= n - j");
  REQUIRE(inv.ok());
  std::string out = annotate::instantiate(masked, p, inv.ast);
  CHECK(out == R"(void func(int k, int j, int n) {
  if (!(n>=1 && k>=n && j==0)) return;
  //@ loop invariant (k >= (n - j));
  while (j<=n-1) { j++; k--; }
  assert(k>=0);
}
)");

  SUBCASE("instantiated source parses to the same program") {
    annotate::strip_result again = annotate::strip_annotations(out);
    REQUIRE(again.removed.size() == 1);
    CHECK(again.removed[0] == "(k >= (n - j))");
    CHECK(cminus::structurally_equal(cminus::parse_task(again.source), p));
  }
}

TEST_CASE("instantiate rejects out-of-scope identifiers") {
  annotate::strip_result stripped = annotate::strip_annotations(small_task);
  cminus::program p = cminus::parse_task(stripped.source);
  std::string masked =
      annotate::insert_mask(stripped.source, p.task_loop.header_line);

  acsl::parse_result inv = acsl::parse_invariant("k >= m && q == 0");
  REQUIRE(inv.ok());
  try {
    annotate::instantiate(masked, p, inv.ast);
    FAIL("expected scope_error");
  } catch (const scope_error& e) {
    CHECK(e.vars == std::set<std::string>{"m", "q"});
  }
}

TEST_CASE("instantiate without a mask is an error") {
  annotate::strip_result stripped = annotate::strip_annotations(small_task);
  cminus::program p = cminus::parse_task(stripped.source);
  acsl::parse_result inv = acsl::parse_invariant("k >= 0");
  REQUIRE(inv.ok());
  CHECK_THROWS_AS(annotate::instantiate(stripped.source, p, inv.ast), error);
}

TEST_CASE("strip/mask round-trip on the full harness-style task file") {
  std::string original = read_fixture("tasks/loops/count_up_down-1.c");
  annotate::strip_result stripped = annotate::strip_annotations(original);
  REQUIRE(stripped.removed.size() == 1);
  CHECK(stripped.removed[0] == "x + y == n");

  cminus::program p = cminus::parse_task(stripped.source, "count_up_down-1");
  std::string masked =
      annotate::insert_mask(stripped.source, p.task_loop.header_line);

  // re-instantiating the stripped human invariant puts the annotation back
  // on the same line, modulo canonical parenthesization
  acsl::parse_result human = acsl::parse_invariant(stripped.removed[0]);
  REQUIRE(human.ok());
  std::string restored = annotate::instantiate(masked, p, human.ast);
  std::string expected = original;
  std::size_t at = expected.find("x + y == n");
  REQUIRE(at != std::string::npos);
  expected.replace(at, std::string("x + y == n").size(), "((x + y) == n)");
  CHECK(restored == expected);
}
