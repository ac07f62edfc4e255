#include "invforge/expr_parser.hpp"

#include <optional>

namespace invforge {

namespace {

class parser {
 public:
  parser(const std::vector<token>& toks, std::size_t& pos, expr_dialect d)
      : toks_(toks), pos_(pos), dialect_(d) {}

  expr_ptr parse() {
    expr_ptr e = parse_implication();
    reject_unsupported_operator();
    return e;
  }

 private:
  const std::vector<token>& toks_;
  std::size_t& pos_;
  expr_dialect dialect_;

  const token& peek() const { return toks_[pos_]; }
  const token& get() { return toks_[pos_++]; }

  [[noreturn]] void fail(const std::string& msg) const {
    throw expr_parse_error{false, "", msg, peek().line};
  }
  [[noreturn]] void fail_unsupported(const std::string& symbol) const {
    throw expr_parse_error{true, symbol, "unsupported symbol '" + symbol + "'",
                           peek().line};
  }

  bool accept(std::string_view p) {
    if (peek().is(p)) {
      ++pos_;
      return true;
    }
    return false;
  }

  // Bitwise and ternary operators are valid C but outside the subset;
  // naming them beats a bare "unexpected token" in feedback messages.
  void reject_unsupported_operator() const {
    const token& t = peek();
    if (t.is("&") || t.is("|") || t.is("^") || t.is("?"))
      fail_unsupported(t.text);
  }

  // ==> is right-associative and binds loosest (ACSL dialect only).
  expr_ptr parse_implication() {
    expr_ptr lhs = parse_or();
    if (dialect_ == expr_dialect::acsl && peek().is("==>")) {
      get();
      return mk_binary(binary_op::implies, std::move(lhs), parse_implication());
    }
    return lhs;
  }

  expr_ptr parse_or() {
    expr_ptr e = parse_and();
    while (accept("||"))
      e = mk_binary(binary_op::logical_or, std::move(e), parse_and());
    return e;
  }

  expr_ptr parse_and() {
    expr_ptr e = parse_equality();
    while (accept("&&"))
      e = mk_binary(binary_op::logical_and, std::move(e), parse_equality());
    return e;
  }

  static std::optional<binary_op> as_equality(const token& t) {
    if (t.is("=="))
      return binary_op::eq;
    if (t.is("!="))
      return binary_op::ne;
    return std::nullopt;
  }

  static std::optional<binary_op> as_relational(const token& t) {
    if (t.is("<"))
      return binary_op::lt;
    if (t.is("<="))
      return binary_op::le;
    if (t.is(">"))
      return binary_op::gt;
    if (t.is(">="))
      return binary_op::ge;
    return std::nullopt;
  }

  // Builds a comparison chain: single op -> plain binary node, several ops
  // -> conjunction of adjacent comparisons, folded left-to-right.
  expr_ptr parse_chain(expr_ptr (parser::*next)(),
                       std::optional<binary_op> (*classify)(const token&),
                       bool allow_chain_fn(binary_op),
                       const char* chain_error) {
    expr_ptr first = (this->*next)();
    std::optional<binary_op> op = classify(peek());
    if (!op)
      return first;

    std::vector<expr_ptr> operands;
    std::vector<binary_op> ops;
    operands.push_back(std::move(first));
    while (op) {
      get();
      ops.push_back(*op);
      operands.push_back((this->*next)());
      op = classify(peek());
    }
    if (ops.size() == 1)
      return mk_binary(ops[0], operands[0], operands[1]);

    for (binary_op o : ops) {
      if (!allow_chain_fn(o))
        fail(chain_error);
    }
    // Chains must keep one direction (<,<= or >,>=); == chains freely.
    bool has_lt = false, has_gt = false;
    for (binary_op o : ops) {
      has_lt |= (o == binary_op::lt || o == binary_op::le);
      has_gt |= (o == binary_op::gt || o == binary_op::ge);
    }
    if (has_lt && has_gt)
      fail("comparison chain mixes < and > directions");

    expr_ptr result =
        mk_binary(ops[0], operands[0], operands[1]);
    for (std::size_t i = 1; i < ops.size(); ++i) {
      expr_ptr link = mk_binary(ops[i], operands[i], operands[i + 1]);
      result = mk_binary(binary_op::logical_and, std::move(result),
                         std::move(link));
    }
    return result;
  }

  expr_ptr parse_equality() {
    return parse_chain(
        &parser::parse_relational, &as_equality,
        [](binary_op o) { return o == binary_op::eq; },
        "'!=' cannot appear in a comparison chain");
  }

  expr_ptr parse_relational() {
    return parse_chain(
        &parser::parse_shift, &as_relational, [](binary_op) { return true; },
        "unsupported comparison chain");
  }

  expr_ptr parse_shift() {
    expr_ptr e = parse_additive();
    for (;;) {
      if (accept("<<"))
        e = mk_binary(binary_op::shl, std::move(e), parse_additive());
      else if (accept(">>"))
        e = mk_binary(binary_op::shr, std::move(e), parse_additive());
      else
        return e;
    }
  }

  expr_ptr parse_additive() {
    expr_ptr e = parse_multiplicative();
    for (;;) {
      if (accept("+"))
        e = mk_binary(binary_op::add, std::move(e), parse_multiplicative());
      else if (accept("-"))
        e = mk_binary(binary_op::sub, std::move(e), parse_multiplicative());
      else
        return e;
    }
  }

  expr_ptr parse_multiplicative() {
    expr_ptr e = parse_unary();
    for (;;) {
      if (accept("*"))
        e = mk_binary(binary_op::mul, std::move(e), parse_unary());
      else if (accept("/"))
        e = mk_binary(binary_op::div, std::move(e), parse_unary());
      else if (accept("%"))
        e = mk_binary(binary_op::mod, std::move(e), parse_unary());
      else
        return e;
    }
  }

  expr_ptr parse_unary() {
    if (accept("-"))
      return mk_unary(unary_op::neg, parse_unary());
    if (accept("!"))
      return mk_unary(unary_op::logical_not, parse_unary());
    if (accept("+"))
      return parse_unary();
    if (peek().is("~") || peek().is("*") || peek().is("&"))
      fail_unsupported(peek().text);
    return parse_primary();
  }

  expr_ptr parse_primary() {
    const token& t = peek();
    if (t.kind == token_kind::number) {
      get();
      return parse_number(t);
    }
    if (t.kind == token_kind::identifier) {
      if (!t.text.empty() && t.text[0] == '\\') {
        if (dialect_ == expr_dialect::acsl)
          fail_unsupported(t.text);
        fail("unexpected '" + t.text + "'");
      }
      get();
      if (peek().is("(")) {
        // Function application: no built-ins in the subset (e.g. pow).
        if (dialect_ == expr_dialect::acsl)
          fail_unsupported(t.text);
        fail("call to '" + t.text + "' is not supported here");
      }
      return mk_identifier(t.text);
    }
    if (accept("(")) {
      expr_ptr e = parse_implication();
      reject_unsupported_operator();
      if (!accept(")"))
        fail("expected ')'");
      return e;
    }
    if (t.kind == token_kind::end)
      fail("unexpected end of expression");
    fail("unexpected token '" + t.text + "'");
  }

  expr_ptr parse_number(const token& t) const {
    std::string digits = t.text;
    bool unsigned_hint = false;
    while (!digits.empty()) {
      char c = digits.back();
      if (c == 'u' || c == 'U') {
        unsigned_hint = true;
        digits.pop_back();
      } else if (c == 'l' || c == 'L') {
        digits.pop_back();
      } else {
        break;
      }
    }
    bigint value;
    try {
      if (digits.size() > 2 && digits[0] == '0' &&
          (digits[1] == 'x' || digits[1] == 'X')) {
        value = bigint(digits);  // cpp_int understands the 0x prefix
      } else {
        value = bigint(digits);
      }
    } catch (const std::exception&) {
      throw expr_parse_error{false, "", "malformed integer literal '" + t.text +
                                        "'",
                             t.line};
    }
    if (value > bigint(0x7fffffff))
      unsigned_hint = true;
    return mk_literal(std::move(value), unsigned_hint);
  }
};

}  // namespace

expr_ptr parse_expression(const std::vector<token>& tokens, std::size_t& pos,
                          expr_dialect dialect) {
  return parser(tokens, pos, dialect).parse();
}

}  // namespace invforge
