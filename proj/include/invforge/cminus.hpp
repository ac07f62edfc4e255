#ifndef INVFORGE_CMINUS_HPP
#define INVFORGE_CMINUS_HPP

#include "invforge/errors.hpp"
#include "invforge/expr.hpp"
#include "invforge/machine.hpp"

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace invforge::cminus {

struct source_pos {
  int line = 0;
  int column = 0;
};

struct var_decl {
  enum class init_kind { constant, nondet, expression };

  std::string name;
  ctype type = ctype::i32;
  init_kind kind = init_kind::nondet;
  expr_ptr init;  // null for nondet
};

/// Statements of the supported subset. ++/-- desugar to compound_assign
/// with the literal 1 at parse time.
struct stmt {
  enum class kind { declare, assign, compound_assign, guard_return };

  kind k = kind::assign;
  var_decl decl;          // declare
  std::string target;     // assign / compound_assign
  binary_op op = binary_op::add;  // compound_assign: add, sub or mul
  expr_ptr value;         // assign / compound_assign RHS, guard condition E
  int line = 0;
};

struct loop {
  expr_ptr condition;
  std::vector<stmt> body;
  source_pos annotation_site;  // where the annotation line goes, directly above the header
  int header_line = 0;         // line of the while/for keyword
};

struct program {
  std::string name;         // task id, e.g. "count_up_down-1"
  std::string subcategory;  // parent directory of the task file
  std::string function = "func";  // name of the task function in the source
  std::vector<var_decl> params;
  std::vector<stmt> prologue;
  loop task_loop;
  expr_ptr post_assertion;
  int assertion_line = 0;

  /// All declared variables (params then prologue declarations), in
  /// declaration order. This is the scope at the loop head.
  std::vector<var_decl> scope() const;
  std::optional<ctype> type_of(const std::string& name) const;
  bool declares(const std::string& name) const;
  /// Variables whose value comes from the environment (params and
  /// __VERIFIER_nondet_* initializers), in declaration order.
  std::vector<var_decl> nondet_variables() const;
};

/// Parses one task in the supported C subset. SV-COMP harness boilerplate
/// (extern decls, reach_error, the __VERIFIER_assert definition,
/// __VERIFIER_nondet_* prototypes) is recognized and skipped; `for` loops
/// desugar to the while form. Throws parse_error or unsupported_construct.
program parse_task(std::string_view source, std::string name = "",
                   std::string subcategory = "");

/// Renders a program back into the subset. parse_task(print_program(p))
/// is structurally equal to p.
std::string print_program(const program& p);

bool structurally_equal(const program& a, const program& b);

// --- concrete execution -----------------------------------------------

struct prologue_reached {
  state s;
};
struct prologue_returned_early {};
struct prologue_fault {
  std::string reason;
};
using prologue_result =
    std::variant<prologue_reached, prologue_returned_early, prologue_fault>;

/// Runs declarations, assignments and guard-returns up to the loop head.
/// `inputs` must assign a value to every nondet variable; values are
/// truncated to the declared 32-bit type.
prologue_result run_prologue(const program& p,
                             const std::map<std::string, bigint>& inputs);

struct step_ok {
  state s;
};
struct step_fault {
  std::string reason;
  std::string at;  // statement rendering
};
using step_result = std::variant<step_ok, step_fault>;

/// Executes every statement of the loop body once, with two's-complement
/// 32-bit wraparound semantics. pre: s satisfies the loop condition.
step_result step_body(const program& p, const state& s);

struct cond_value {
  bool ok = false;
  bool truth = false;
  std::string fault;
};

/// Machine-semantics (32-bit) evaluation of a C-side condition over s;
/// nonzero is true. Division by zero and out-of-range shifts surface as
/// faults, never exceptions.
cond_value eval_condition(const expr& e, const state& s);
inline cond_value eval_condition(const expr_ptr& e, const state& s) {
  return eval_condition(*e, s);
}

}  // namespace invforge::cminus

#endif
