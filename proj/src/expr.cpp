#include "invforge/expr.hpp"

namespace invforge {

const char* binary_op_token(binary_op op) {
  switch (op) {
    case binary_op::add: return "+";
    case binary_op::sub: return "-";
    case binary_op::mul: return "*";
    case binary_op::div: return "/";
    case binary_op::mod: return "%";
    case binary_op::shl: return "<<";
    case binary_op::shr: return ">>";
    case binary_op::lt: return "<";
    case binary_op::le: return "<=";
    case binary_op::gt: return ">";
    case binary_op::ge: return ">=";
    case binary_op::eq: return "==";
    case binary_op::ne: return "!=";
    case binary_op::logical_and: return "&&";
    case binary_op::logical_or: return "||";
    case binary_op::implies: return "==>";
  }
  return "?";
}

const char* unary_op_token(unary_op op) {
  return op == unary_op::neg ? "-" : "!";
}

bool is_comparison(binary_op op) {
  switch (op) {
    case binary_op::lt:
    case binary_op::le:
    case binary_op::gt:
    case binary_op::ge:
    case binary_op::eq:
    case binary_op::ne:
      return true;
    default:
      return false;
  }
}

bool is_logical(binary_op op) {
  return op == binary_op::logical_and || op == binary_op::logical_or ||
         op == binary_op::implies;
}

expr_ptr mk_literal(bigint value, bool unsigned_hint) {
  auto e = std::make_shared<expr>();
  e->node = expr::literal{std::move(value), unsigned_hint};
  return e;
}

expr_ptr mk_identifier(std::string name) {
  auto e = std::make_shared<expr>();
  e->node = expr::identifier{std::move(name)};
  return e;
}

expr_ptr mk_unary(unary_op op, expr_ptr operand) {
  auto e = std::make_shared<expr>();
  e->node = expr::unary{op, std::move(operand)};
  return e;
}

expr_ptr mk_binary(binary_op op, expr_ptr lhs, expr_ptr rhs) {
  auto e = std::make_shared<expr>();
  e->node = expr::binary{op, std::move(lhs), std::move(rhs)};
  return e;
}

std::string print_expr(const expr& e) {
  if (const auto* lit = std::get_if<expr::literal>(&e.node))
    return lit->value.str();
  if (const auto* id = std::get_if<expr::identifier>(&e.node))
    return id->name;
  if (const auto* u = std::get_if<expr::unary>(&e.node))
    return std::string("(") + unary_op_token(u->op) + print_expr(*u->operand) +
           ")";
  const auto& b = std::get<expr::binary>(e.node);
  return "(" + print_expr(*b.lhs) + " " + binary_op_token(b.op) + " " +
         print_expr(*b.rhs) + ")";
}

bool structurally_equal(const expr& a, const expr& b) {
  if (a.node.index() != b.node.index())
    return false;
  if (const auto* la = std::get_if<expr::literal>(&a.node)) {
    const auto& lb = std::get<expr::literal>(b.node);
    return la->value == lb.value;
  }
  if (const auto* ia = std::get_if<expr::identifier>(&a.node)) {
    const auto& ib = std::get<expr::identifier>(b.node);
    return ia->name == ib.name;
  }
  if (const auto* ua = std::get_if<expr::unary>(&a.node)) {
    const auto& ub = std::get<expr::unary>(b.node);
    return ua->op == ub.op && structurally_equal(*ua->operand, *ub.operand);
  }
  const auto& ba = std::get<expr::binary>(a.node);
  const auto& bb = std::get<expr::binary>(b.node);
  return ba.op == bb.op && structurally_equal(*ba.lhs, *bb.lhs) &&
         structurally_equal(*ba.rhs, *bb.rhs);
}

}  // namespace invforge
