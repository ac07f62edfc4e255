#include "invforge/acsl.hpp"

#include "invforge/expr_parser.hpp"
#include "invforge/lexer.hpp"

#include <utility>
#include <variant>

namespace invforge::acsl {

namespace {

// Shift amounts beyond this allocate unbounded memory under exact
// mathematical semantics; unreachable at the oracle's default domain ranges.
constexpr long max_shift_bits = 4096;

struct undefined {
  std::string reason;
};

using value_or_undef = std::variant<bigint, undefined>;

bigint pow2(long n) {
  bigint r = 1;
  return r << n;
}

bigint floor_div_pow2(const bigint& a, long n) {
  if (a >= 0)
    return a >> static_cast<unsigned>(n);
  // Arithmetic right shift: floor division by 2^n.
  bigint d = pow2(n);
  bigint q = (-a + d - 1) / d;
  return -q;
}

class evaluator {
 public:
  explicit evaluator(const state& s) : s_(s) {}

  value_or_undef run(const expr& e) {
    if (const auto* lit = std::get_if<expr::literal>(&e.node))
      return lit->value;
    if (const auto* id = std::get_if<expr::identifier>(&e.node)) {
      auto it = s_.find(id->name);
      if (it == s_.end())
        throw unbound_variable(id->name);
      return lift(it->second);
    }
    if (const auto* u = std::get_if<expr::unary>(&e.node)) {
      value_or_undef v = run(*u->operand);
      if (std::holds_alternative<undefined>(v))
        return v;
      const bigint& x = std::get<bigint>(v);
      if (u->op == unary_op::neg)
        return -x;
      return bigint(x == 0 ? 1 : 0);
    }
    const auto& b = std::get<expr::binary>(e.node);
    if (is_logical(b.op))
      return run_logical(b);

    value_or_undef lv = run(*b.lhs);
    if (std::holds_alternative<undefined>(lv))
      return lv;
    value_or_undef rv = run(*b.rhs);
    if (std::holds_alternative<undefined>(rv))
      return rv;
    const bigint& l = std::get<bigint>(lv);
    const bigint& r = std::get<bigint>(rv);

    switch (b.op) {
      case binary_op::add: return l + r;
      case binary_op::sub: return l - r;
      case binary_op::mul: return l * r;
      case binary_op::div:
        if (r == 0)
          return undefined{"division by zero"};
        return l / r;  // truncated, like C
      case binary_op::mod:
        if (r == 0)
          return undefined{"modulo by zero"};
        return l % r;
      case binary_op::shl: {
        if (r < 0)
          return undefined{"shift by negative amount"};
        if (l == 0)
          return bigint(0);
        if (r > max_shift_bits)
          return undefined{"shift-amount-too-large"};
        return l * pow2(static_cast<long>(r));
      }
      case binary_op::shr: {
        if (r < 0)
          return undefined{"shift by negative amount"};
        if (r > max_shift_bits)
          return bigint(l < 0 ? -1 : 0);
        return floor_div_pow2(l, static_cast<long>(r));
      }
      case binary_op::lt: return bigint(l < r ? 1 : 0);
      case binary_op::le: return bigint(l <= r ? 1 : 0);
      case binary_op::gt: return bigint(l > r ? 1 : 0);
      case binary_op::ge: return bigint(l >= r ? 1 : 0);
      case binary_op::eq: return bigint(l == r ? 1 : 0);
      case binary_op::ne: return bigint(l != r ? 1 : 0);
      default: return undefined{"unhandled operator"};
    }
  }

 private:
  value_or_undef run_logical(const expr::binary& b) {
    value_or_undef lv = run(*b.lhs);
    if (std::holds_alternative<undefined>(lv))
      return lv;
    bool l = std::get<bigint>(lv) != 0;
    // Short-circuit, matching C and keeping guarded divisions defined.
    if (b.op == binary_op::logical_and && !l)
      return bigint(0);
    if (b.op == binary_op::logical_or && l)
      return bigint(1);
    if (b.op == binary_op::implies && !l)
      return bigint(1);
    value_or_undef rv = run(*b.rhs);
    if (std::holds_alternative<undefined>(rv))
      return rv;
    bool r = std::get<bigint>(rv) != 0;
    return bigint(r ? 1 : 0);
  }

  const state& s_;
};

}  // namespace

parse_result parse_invariant(std::string_view raw) {
  parse_result out;
  try {
    std::vector<token> toks = lex(raw);
    std::size_t pos = 0;
    expr_ptr e = parse_expression(toks, pos, expr_dialect::acsl);
    if (toks[pos].kind != token_kind::end) {
      out.failure = parse_failure{
          false, "", "trailing input after expression: '" + toks[pos].text + "'",
          toks[pos].line};
      return out;
    }
    out.ast = std::move(e);
    return out;
  } catch (const expr_parse_error& e) {
    out.failure = parse_failure{e.unsupported, e.symbol, e.message, e.line};
    return out;
  } catch (const parse_error& e) {
    out.failure = parse_failure{false, "", e.message, e.line};
    return out;
  }
}

std::string print_invariant(const expr& e) {
  return print_expr(e);
}

expr_ptr conjoin(const std::vector<expr_ptr>& es) {
  expr_ptr result = es.back();
  for (auto it = es.rbegin() + 1; it != es.rend(); ++it)
    result = mk_binary(binary_op::logical_and, *it, result);
  return result;
}

std::set<std::string> free_vars(const expr& e) {
  std::set<std::string> vars;
  auto walk = [&vars](const expr& node, auto&& self) -> void {
    if (const auto* id = std::get_if<expr::identifier>(&node.node)) {
      vars.insert(id->name);
      return;
    }
    if (const auto* u = std::get_if<expr::unary>(&node.node)) {
      self(*u->operand, self);
      return;
    }
    if (const auto* b = std::get_if<expr::binary>(&node.node)) {
      self(*b->lhs, self);
      self(*b->rhs, self);
    }
  };
  walk(e, walk);
  return vars;
}

eval_result eval(const expr& e, const state& s) {
  value_or_undef v = evaluator(s).run(e);
  if (const auto* u = std::get_if<undefined>(&v))
    return eval_result{truth::undefined, u->reason};
  return eval_result{std::get<bigint>(v) != 0 ? truth::yes : truth::no, ""};
}

invariant_text make_invariant_text(std::string raw) {
  invariant_text out;
  out.raw = std::move(raw);
  parse_result r = parse_invariant(out.raw);
  out.parsed = r.ast;
  out.failure = r.failure;
  return out;
}

}  // namespace invforge::acsl
