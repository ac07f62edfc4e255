#ifndef INVFORGE_EXPR_HPP
#define INVFORGE_EXPR_HPP

#include "invforge/machine.hpp"

#include <memory>
#include <string>
#include <variant>

namespace invforge {

enum class unary_op { neg, logical_not };

enum class binary_op {
  add,
  sub,
  mul,
  div,
  mod,
  shl,
  shr,
  lt,
  le,
  gt,
  ge,
  eq,
  ne,
  logical_and,
  logical_or,
  implies,
};

/// Operator spelling as it appears in canonical printed form.
const char* binary_op_token(binary_op op);
const char* unary_op_token(unary_op op);

bool is_comparison(binary_op op);
bool is_logical(binary_op op);

struct expr;
using expr_ptr = std::shared_ptr<const expr>;

/// Expression tree shared by the C-subset frontend and the ACSL invariant
/// language. Nodes are immutable after construction, so trees can be shared
/// freely across threads.
struct expr {
  struct literal {
    bigint value;
    bool unsigned_hint;  // carried a u/U suffix or exceeds INT32_MAX
  };
  struct identifier {
    std::string name;
  };
  struct unary {
    unary_op op;
    expr_ptr operand;
  };
  struct binary {
    binary_op op;
    expr_ptr lhs;
    expr_ptr rhs;
  };

  std::variant<literal, identifier, unary, binary> node;
};

expr_ptr mk_literal(bigint value, bool unsigned_hint = false);
expr_ptr mk_identifier(std::string name);
expr_ptr mk_unary(unary_op op, expr_ptr operand);
expr_ptr mk_binary(binary_op op, expr_ptr lhs, expr_ptr rhs);

bool structurally_equal(const expr& a, const expr& b);
inline bool structurally_equal(const expr_ptr& a, const expr_ptr& b) {
  return a && b && structurally_equal(*a, *b);
}

/// Fully parenthesized canonical rendering, e.g. "((x + y) == n)".
std::string print_expr(const expr& e);
inline std::string print_expr(const expr_ptr& e) { return print_expr(*e); }

}  // namespace invforge

#endif
