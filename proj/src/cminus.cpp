#include "invforge/cminus.hpp"

#include "invforge/expr_parser.hpp"
#include "invforge/lexer.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <utility>

namespace invforge::cminus {

namespace {

// ---------------------------------------------------------------------
// Machine (32-bit, wraparound) expression evaluation
// ---------------------------------------------------------------------

struct mfault {
  std::string reason;
};
using mresult = std::variant<machine_value, mfault>;

ctype merge_types(ctype a, ctype b) {
  return (a == ctype::u32 || b == ctype::u32) ? ctype::u32 : ctype::i32;
}

bool truthy(machine_value v) {
  return v.bits != 0;
}

mresult eval_machine(const expr& e, const state& s);

mresult eval_binary(const expr::binary& b, const state& s) {
  if (is_logical(b.op)) {
    mresult lv = eval_machine(*b.lhs, s);
    if (std::holds_alternative<mfault>(lv))
      return lv;
    bool l = truthy(std::get<machine_value>(lv));
    if (b.op == binary_op::logical_and && !l)
      return make_i32(0);
    if (b.op == binary_op::logical_or && l)
      return make_i32(1);
    if (b.op == binary_op::implies && !l)
      return make_i32(1);
    mresult rv = eval_machine(*b.rhs, s);
    if (std::holds_alternative<mfault>(rv))
      return rv;
    return make_i32(truthy(std::get<machine_value>(rv)) ? 1 : 0);
  }

  mresult lv = eval_machine(*b.lhs, s);
  if (std::holds_alternative<mfault>(lv))
    return lv;
  mresult rv = eval_machine(*b.rhs, s);
  if (std::holds_alternative<mfault>(rv))
    return rv;
  machine_value l = std::get<machine_value>(lv);
  machine_value r = std::get<machine_value>(rv);
  ctype t = merge_types(l.type, r.type);

  switch (b.op) {
    case binary_op::add:
      return machine_value{l.bits + r.bits, t};
    case binary_op::sub:
      return machine_value{l.bits - r.bits, t};
    case binary_op::mul:
      return machine_value{l.bits * r.bits, t};
    case binary_op::div: {
      if (r.bits == 0)
        return mfault{"division by zero"};
      if (t == ctype::u32)
        return machine_value{l.bits / r.bits, t};
      auto ls = static_cast<std::int32_t>(l.bits);
      auto rs = static_cast<std::int32_t>(r.bits);
      if (ls == INT32_MIN && rs == -1)
        return machine_value{static_cast<std::uint32_t>(INT32_MIN), t};
      return machine_value{static_cast<std::uint32_t>(ls / rs), t};
    }
    case binary_op::mod: {
      if (r.bits == 0)
        return mfault{"modulo by zero"};
      if (t == ctype::u32)
        return machine_value{l.bits % r.bits, t};
      auto ls = static_cast<std::int32_t>(l.bits);
      auto rs = static_cast<std::int32_t>(r.bits);
      if (ls == INT32_MIN && rs == -1)
        return machine_value{0, t};
      return machine_value{static_cast<std::uint32_t>(ls % rs), t};
    }
    case binary_op::shl:
    case binary_op::shr: {
      std::int64_t count = r.type == ctype::u32
                               ? static_cast<std::int64_t>(r.bits)
                               : static_cast<std::int32_t>(r.bits);
      if (count < 0 || count >= 32)
        return mfault{"shift amount out of range"};
      if (b.op == binary_op::shl)
        return machine_value{l.bits << count, l.type};
      if (l.type == ctype::u32)
        return machine_value{l.bits >> count, l.type};
      auto ls = static_cast<std::int32_t>(l.bits);
      return machine_value{static_cast<std::uint32_t>(ls >> count), l.type};
    }
    case binary_op::lt:
    case binary_op::le:
    case binary_op::gt:
    case binary_op::ge:
    case binary_op::eq:
    case binary_op::ne: {
      int cmp;
      if (t == ctype::u32)
        cmp = l.bits < r.bits ? -1 : (l.bits == r.bits ? 0 : 1);
      else {
        auto ls = static_cast<std::int32_t>(l.bits);
        auto rs = static_cast<std::int32_t>(r.bits);
        cmp = ls < rs ? -1 : (ls == rs ? 0 : 1);
      }
      bool res = false;
      switch (b.op) {
        case binary_op::lt: res = cmp < 0; break;
        case binary_op::le: res = cmp <= 0; break;
        case binary_op::gt: res = cmp > 0; break;
        case binary_op::ge: res = cmp >= 0; break;
        case binary_op::eq: res = cmp == 0; break;
        case binary_op::ne: res = cmp != 0; break;
        default: break;
      }
      return make_i32(res ? 1 : 0);
    }
    default:
      return mfault{"unhandled operator"};
  }
}

mresult eval_machine(const expr& e, const state& s) {
  if (const auto* lit = std::get_if<expr::literal>(&e.node))
    return truncate_to(lit->unsigned_hint ? ctype::u32 : ctype::i32,
                       lit->value);
  if (const auto* id = std::get_if<expr::identifier>(&e.node)) {
    auto it = s.find(id->name);
    if (it == s.end())
      return mfault{"unbound variable '" + id->name + "'"};
    return it->second;
  }
  if (const auto* u = std::get_if<expr::unary>(&e.node)) {
    mresult v = eval_machine(*u->operand, s);
    if (std::holds_alternative<mfault>(v))
      return v;
    machine_value x = std::get<machine_value>(v);
    if (u->op == unary_op::neg)
      return machine_value{0u - x.bits, x.type};
    return make_i32(truthy(x) ? 0 : 1);
  }
  return eval_binary(std::get<expr::binary>(e.node), s);
}

std::string compound_token(binary_op op) {
  switch (op) {
    case binary_op::add: return "+=";
    case binary_op::sub: return "-=";
    case binary_op::mul: return "*=";
    default: return "?=";
  }
}

std::string print_stmt(const stmt& st) {
  switch (st.k) {
    case stmt::kind::declare: {
      std::string out = std::string(ctype_name(st.decl.type)) + " " +
                        st.decl.name + " = ";
      if (st.decl.kind == var_decl::init_kind::nondet)
        out += st.decl.type == ctype::u32 ? "__VERIFIER_nondet_uint()"
                                          : "__VERIFIER_nondet_int()";
      else
        out += print_expr(st.decl.init);
      return out + ";";
    }
    case stmt::kind::assign:
      return st.target + " = " + print_expr(st.value) + ";";
    case stmt::kind::compound_assign:
      return st.target + " " + compound_token(st.op) + " " +
             print_expr(st.value) + ";";
    case stmt::kind::guard_return:
      return "if (!(" + print_expr(st.value) + ")) return;";
  }
  return ";";
}

// ---------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------

bool is_nondet_call_name(const std::string& name) {
  return name.rfind("__VERIFIER_nondet", 0) == 0;
}

class task_parser {
 public:
  explicit task_parser(std::string_view source) : toks_(lex(source)) {}

  program parse(std::string name, std::string subcategory) {
    prog_.name = std::move(name);
    prog_.subcategory = std::move(subcategory);
    while (peek().kind != token_kind::end)
      parse_toplevel();
    if (!have_function_)
      throw unsupported_construct("no task function", 1);
    finalize();
    return std::move(prog_);
  }

 private:
  std::vector<token> toks_;
  std::size_t pos_ = 0;
  program prog_;
  bool have_function_ = false;
  bool have_loop_ = false;
  bool have_assertion_ = false;

  const token& peek(std::size_t ahead = 0) const {
    std::size_t i = pos_ + ahead;
    return i < toks_.size() ? toks_[i] : toks_.back();
  }
  const token& get() { return toks_[std::min(pos_++, toks_.size() - 1)]; }

  bool accept(std::string_view p) {
    if (peek().is(p)) {
      ++pos_;
      return true;
    }
    return false;
  }
  bool accept_ident(std::string_view name) {
    if (peek().is_ident(name)) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(std::string_view p, const char* what) {
    if (!accept(p))
      throw parse_error(peek().line, std::string("expected '") +
                                         std::string(p) + "' " + what +
                                         ", got '" + peek().text + "'");
  }
  std::string expect_identifier(const char* what) {
    if (peek().kind != token_kind::identifier)
      throw parse_error(peek().line,
                        std::string("expected identifier ") + what);
    return get().text;
  }

  expr_ptr parse_expr() {
    try {
      return parse_expression(toks_, pos_, expr_dialect::c);
    } catch (const expr_parse_error& e) {
      if (e.unsupported)
        throw unsupported_construct(e.symbol, e.line);
      throw parse_error(e.line, e.message);
    }
  }

  void skip_until_semicolon() {
    while (peek().kind != token_kind::end && !accept(";"))
      get();
  }

  void skip_balanced(std::string_view open, std::string_view close) {
    expect(open, "to open a block");
    int depth = 1;
    while (depth > 0) {
      const token& t = get();
      if (t.kind == token_kind::end)
        throw parse_error(t.line, std::string("unterminated '") +
                                      std::string(open) + "' block");
      if (t.is(open))
        ++depth;
      else if (t.is(close))
        --depth;
    }
  }

  static bool is_type_keyword(const token& t) {
    return t.is_ident("int") || t.is_ident("unsigned") || t.is_ident("signed");
  }

  static bool is_foreign_type_keyword(const token& t) {
    return t.is_ident("long") || t.is_ident("short") || t.is_ident("char") ||
           t.is_ident("float") || t.is_ident("double") || t.is_ident("_Bool") ||
           t.is_ident("const");
  }

  ctype parse_type() {
    const token& t = peek();
    if (accept_ident("unsigned") || t.is_ident("signed")) {
      bool is_unsigned = t.is_ident("unsigned");
      if (!is_unsigned)
        get();
      if (is_foreign_type_keyword(peek()))
        throw unsupported_construct(
            "type '" + t.text + " " + peek().text + "'", peek().line);
      accept_ident("int");
      return is_unsigned ? ctype::u32 : ctype::i32;
    }
    if (accept_ident("int"))
      return ctype::i32;
    throw unsupported_construct("type '" + t.text + "'", t.line);
  }

  void parse_toplevel() {
    const token& t = peek();
    if (t.is_ident("extern")) {
      skip_until_semicolon();
      return;
    }
    if (t.is_ident("void") || is_type_keyword(t)) {
      std::size_t save = pos_;
      bool is_void = accept_ident("void");
      ctype ret = ctype::i32;
      if (!is_void)
        ret = parse_type();
      (void)ret;
      std::string name = expect_identifier("after type");
      if (name == "reach_error" || name == "__VERIFIER_assert" ||
          name == "abort" || name == "__assert_fail" || name == "assume_abort_if_not") {
        // SV-COMP harness boilerplate: skip the whole definition.
        skip_balanced("(", ")");
        while (peek().kind == token_kind::identifier)
          get();  // trailing __attribute__ tokens, if any
        if (peek().is("{"))
          skip_balanced("{", "}");
        else
          skip_until_semicolon();
        return;
      }
      if (is_nondet_call_name(name)) {
        skip_balanced("(", ")");
        expect(";", "after nondet prototype");
        return;
      }
      if (peek().is("(")) {
        if (have_function_)
          throw unsupported_construct("multiple functions", t.line);
        have_function_ = true;
        prog_.function = name;
        parse_function();
        return;
      }
      pos_ = save;
      throw unsupported_construct("global variable declaration", t.line);
    }
    if (is_foreign_type_keyword(t) || t.is_ident("struct") ||
        t.is_ident("typedef"))
      throw unsupported_construct("type '" + t.text + "'", t.line);
    throw parse_error(t.line, "unexpected token '" + t.text + "' at top level");
  }

  void parse_function() {
    expect("(", "to open the parameter list");
    if (!accept(")")) {
      if (accept_ident("void")) {
        expect(")", "after 'void' parameter list");
      } else {
        for (;;) {
          var_decl param;
          param.type = parse_type();
          if (peek().is("*"))
            throw unsupported_construct("pointer parameter", peek().line);
          param.name = expect_identifier("as parameter name");
          if (peek().is("["))
            throw unsupported_construct("array parameter", peek().line);
          param.kind = var_decl::init_kind::nondet;
          prog_.params.push_back(std::move(param));
          if (accept(","))
            continue;
          expect(")", "after parameters");
          break;
        }
      }
    }
    expect("{", "to open the function body");
    while (!peek().is("}")) {
      if (peek().kind == token_kind::end)
        throw parse_error(peek().line, "unterminated function body");
      parse_body_statement();
    }
    expect("}", "to close the function body");
  }

  void parse_body_statement() {
    const token& t = peek();
    if (accept(";"))
      return;
    if (is_foreign_type_keyword(t))
      throw unsupported_construct(t.is_ident("const")
                                      ? "const qualifier"
                                      : "type '" + t.text + "'",
                                  t.line);
    if (is_type_keyword(t)) {
      require_prologue_phase(t, "declaration");
      parse_declaration();
      return;
    }
    if (t.is_ident("if")) {
      require_prologue_phase(t, "guard");
      parse_guard();
      return;
    }
    if (t.is_ident("while") || t.is_ident("for")) {
      if (have_loop_)
        throw unsupported_construct("multiple loops", t.line);
      have_loop_ = true;
      if (t.is_ident("while"))
        parse_while();
      else
        parse_for();
      return;
    }
    if (t.is_ident("assert") || t.is_ident("__VERIFIER_assert")) {
      if (!have_loop_)
        throw unsupported_construct("assertion before the loop", t.line);
      if (have_assertion_)
        throw unsupported_construct("multiple assertions", t.line);
      have_assertion_ = true;
      parse_assertion();
      return;
    }
    if (t.is_ident("return")) {
      get();
      if (!peek().is(";"))
        parse_expr();
      expect(";", "after return");
      return;
    }
    if (t.kind == token_kind::identifier || t.is("++") || t.is("--")) {
      require_prologue_phase(t, "statement");
      prog_.prologue.push_back(parse_simple_statement());
      return;
    }
    throw parse_error(t.line, "unexpected token '" + t.text + "'");
  }

  void require_prologue_phase(const token& t, const char* what) {
    if (have_loop_)
      throw unsupported_construct(std::string(what) + " after the loop",
                                  t.line);
  }

  void parse_declaration() {
    int line = peek().line;
    ctype ty = parse_type();
    for (;;) {
      if (peek().is("*"))
        throw unsupported_construct("pointer declaration", peek().line);
      var_decl d;
      d.type = ty;
      d.name = expect_identifier("in declaration");
      if (peek().is("["))
        throw unsupported_construct("array declaration", peek().line);
      if (accept("=")) {
        if (peek().kind == token_kind::identifier &&
            is_nondet_call_name(peek().text) && peek(1).is("(")) {
          get();
          skip_balanced("(", ")");
          d.kind = var_decl::init_kind::nondet;
        } else {
          d.init = parse_expr();
          d.kind = std::holds_alternative<expr::literal>(d.init->node)
                       ? var_decl::init_kind::constant
                       : var_decl::init_kind::expression;
        }
      } else {
        // Uninitialized: value comes from the environment, like a nondet.
        d.kind = var_decl::init_kind::nondet;
      }
      stmt st;
      st.k = stmt::kind::declare;
      st.decl = std::move(d);
      st.line = line;
      prog_.prologue.push_back(std::move(st));
      if (accept(","))
        continue;
      expect(";", "after declaration");
      break;
    }
  }

  stmt parse_simple_statement() {
    stmt st;
    st.line = peek().line;
    if (peek().is("++") || peek().is("--")) {
      bool inc = get().is("++");
      st.k = stmt::kind::compound_assign;
      st.op = inc ? binary_op::add : binary_op::sub;
      st.target = expect_identifier("after prefix operator");
      st.value = mk_literal(1);
      expect(";", "after statement");
      return st;
    }
    std::string name = expect_identifier("to start a statement");
    if (peek().is("(")) {
      throw unsupported_construct("call to '" + name + "'", st.line);
    }
    if (accept("=")) {
      if (peek().kind == token_kind::identifier &&
          is_nondet_call_name(peek().text) && peek(1).is("(")) {
        throw unsupported_construct(
            "__VERIFIER_nondet_* outside an initializer", st.line);
      }
      st.k = stmt::kind::assign;
      st.target = std::move(name);
      st.value = parse_expr();
    } else if (peek().is("+=") || peek().is("-=") || peek().is("*=")) {
      const token& op = get();
      st.k = stmt::kind::compound_assign;
      st.op = op.is("+=") ? binary_op::add
                          : (op.is("-=") ? binary_op::sub : binary_op::mul);
      st.target = std::move(name);
      st.value = parse_expr();
    } else if (accept("++")) {
      st.k = stmt::kind::compound_assign;
      st.op = binary_op::add;
      st.target = std::move(name);
      st.value = mk_literal(1);
    } else if (accept("--")) {
      st.k = stmt::kind::compound_assign;
      st.op = binary_op::sub;
      st.target = std::move(name);
      st.value = mk_literal(1);
    } else {
      throw parse_error(peek().line,
                        "unexpected token '" + peek().text + "' in statement");
    }
    expect(";", "after statement");
    return st;
  }

  void parse_guard() {
    stmt st;
    st.k = stmt::kind::guard_return;
    st.line = peek().line;
    get();  // if
    expect("(", "after 'if'");
    if (!accept("!"))
      throw unsupported_construct("general if statement", st.line);
    expect("(", "after '!' in guard");
    st.value = parse_expr();
    expect(")", "to close the guard condition");
    expect(")", "to close the if condition");
    bool braced = accept("{");
    if (!accept_ident("return"))
      throw unsupported_construct("general if statement", st.line);
    if (!peek().is(";"))
      parse_expr();  // return value is irrelevant to the guard
    expect(";", "after return");
    if (braced)
      expect("}", "to close the guard block");
    prog_.prologue.push_back(std::move(st));
  }

  void parse_while() {
    const token& kw = get();
    prog_.task_loop.header_line = kw.line;
    prog_.task_loop.annotation_site = source_pos{kw.line, kw.column};
    expect("(", "after 'while'");
    prog_.task_loop.condition = parse_expr();
    expect(")", "to close the loop condition");
    prog_.task_loop.body = parse_loop_body();
  }

  void parse_for() {
    const token& kw = get();
    prog_.task_loop.header_line = kw.line;
    prog_.task_loop.annotation_site = source_pos{kw.line, kw.column};
    expect("(", "after 'for'");
    if (!peek().is(";")) {
      if (is_type_keyword(peek()))
        parse_declaration_into_prologue_single();
      else
        prog_.prologue.push_back(parse_for_init_assignment());
    }
    expect(";", "after for-initializer");
    if (peek().is(";"))
      throw unsupported_construct("for loop without a condition", kw.line);
    prog_.task_loop.condition = parse_expr();
    expect(";", "after for-condition");
    std::optional<stmt> step;
    if (!peek().is(")"))
      step = parse_for_step();
    expect(")", "to close the for header");
    prog_.task_loop.body = parse_loop_body();
    if (step)
      prog_.task_loop.body.push_back(std::move(*step));
  }

  void parse_declaration_into_prologue_single() {
    int line = peek().line;
    ctype ty = parse_type();
    var_decl d;
    d.type = ty;
    d.name = expect_identifier("in for-initializer");
    expect("=", "in for-initializer");
    d.init = parse_expr();
    d.kind = std::holds_alternative<expr::literal>(d.init->node)
                 ? var_decl::init_kind::constant
                 : var_decl::init_kind::expression;
    stmt st;
    st.k = stmt::kind::declare;
    st.decl = std::move(d);
    st.line = line;
    prog_.prologue.push_back(std::move(st));
  }

  stmt parse_for_init_assignment() {
    stmt st;
    st.line = peek().line;
    st.k = stmt::kind::assign;
    st.target = expect_identifier("in for-initializer");
    expect("=", "in for-initializer");
    st.value = parse_expr();
    return st;
  }

  stmt parse_for_step() {
    stmt st;
    st.line = peek().line;
    if (accept("++") || accept("--")) {
      bool inc = toks_[pos_ - 1].is("++");
      st.k = stmt::kind::compound_assign;
      st.op = inc ? binary_op::add : binary_op::sub;
      st.target = expect_identifier("after prefix operator");
      st.value = mk_literal(1);
      return st;
    }
    std::string name = expect_identifier("in for-step");
    if (accept("++") || accept("--")) {
      bool inc = toks_[pos_ - 1].is("++");
      st.k = stmt::kind::compound_assign;
      st.op = inc ? binary_op::add : binary_op::sub;
      st.target = std::move(name);
      st.value = mk_literal(1);
      return st;
    }
    if (accept("=")) {
      st.k = stmt::kind::assign;
      st.target = std::move(name);
      st.value = parse_expr();
      return st;
    }
    if (accept("+=") || accept("-=") || accept("*=")) {
      const token& op = toks_[pos_ - 1];
      st.k = stmt::kind::compound_assign;
      st.op = op.is("+=") ? binary_op::add
                          : (op.is("-=") ? binary_op::sub : binary_op::mul);
      st.target = std::move(name);
      st.value = parse_expr();
      return st;
    }
    throw parse_error(st.line, "unsupported for-step form");
  }

  std::vector<stmt> parse_loop_body() {
    std::vector<stmt> body;
    auto check_body_token = [&](const token& t) {
      if (t.is_ident("while") || t.is_ident("for"))
        throw unsupported_construct("nested loop", t.line);
      if (t.is_ident("if"))
        throw unsupported_construct("conditional in the loop body", t.line);
      if (is_type_keyword(t))
        throw unsupported_construct("declaration in the loop body", t.line);
      if (t.is_ident("assert") || t.is_ident("__VERIFIER_assert"))
        throw unsupported_construct("assertion inside the loop", t.line);
      if (t.is_ident("return"))
        throw unsupported_construct("return inside the loop", t.line);
    };
    if (accept("{")) {
      while (!peek().is("}")) {
        if (peek().kind == token_kind::end)
          throw parse_error(peek().line, "unterminated loop body");
        if (accept(";"))
          continue;
        check_body_token(peek());
        body.push_back(parse_simple_statement());
      }
      expect("}", "to close the loop body");
    } else {
      check_body_token(peek());
      body.push_back(parse_simple_statement());
    }
    return body;
  }

  void parse_assertion() {
    const token& kw = get();
    prog_.assertion_line = kw.line;
    expect("(", "after assert");
    prog_.post_assertion = parse_expr();
    expect(")", "to close the assertion");
    expect(";", "after assertion");
  }

  void finalize() {
    if (!have_loop_)
      throw unsupported_construct("program without a loop", 1);
    if (!have_assertion_)
      throw unsupported_construct("missing post-loop assertion", 1);

    std::set<std::string> declared;
    auto declare = [&](const std::string& name, int line) {
      if (!declared.insert(name).second)
        throw parse_error(line, "redeclaration of '" + name + "'");
    };
    auto check_vars = [&](const expr_ptr& e, int line) {
      if (!e)
        return;
      std::set<std::string> vars;
      collect_vars(*e, vars);
      for (const auto& v : vars)
        if (!declared.count(v))
          throw parse_error(line, "use of undeclared identifier '" + v + "'");
    };
    auto check_target = [&](const std::string& name, int line) {
      if (!declared.count(name))
        throw parse_error(line, "use of undeclared identifier '" + name + "'");
    };

    for (const auto& p : prog_.params)
      declare(p.name, 1);
    for (const auto& st : prog_.prologue) {
      switch (st.k) {
        case stmt::kind::declare:
          check_vars(st.decl.init, st.line);
          declare(st.decl.name, st.line);
          break;
        case stmt::kind::assign:
        case stmt::kind::compound_assign:
          check_target(st.target, st.line);
          check_vars(st.value, st.line);
          break;
        case stmt::kind::guard_return:
          check_vars(st.value, st.line);
          break;
      }
    }
    check_vars(prog_.task_loop.condition, prog_.task_loop.header_line);
    for (const auto& st : prog_.task_loop.body) {
      check_target(st.target, st.line);
      check_vars(st.value, st.line);
    }
    check_vars(prog_.post_assertion, prog_.assertion_line);
  }

  static void collect_vars(const expr& e, std::set<std::string>& out) {
    if (const auto* id = std::get_if<expr::identifier>(&e.node)) {
      out.insert(id->name);
      return;
    }
    if (const auto* u = std::get_if<expr::unary>(&e.node)) {
      collect_vars(*u->operand, out);
      return;
    }
    if (const auto* b = std::get_if<expr::binary>(&e.node)) {
      collect_vars(*b->lhs, out);
      collect_vars(*b->rhs, out);
    }
  }
};

}  // namespace

// ---------------------------------------------------------------------
// program queries
// ---------------------------------------------------------------------

std::vector<var_decl> program::scope() const {
  std::vector<var_decl> out = params;
  for (const auto& st : prologue)
    if (st.k == stmt::kind::declare)
      out.push_back(st.decl);
  return out;
}

std::optional<ctype> program::type_of(const std::string& name) const {
  for (const auto& v : scope())
    if (v.name == name)
      return v.type;
  return std::nullopt;
}

bool program::declares(const std::string& name) const {
  return type_of(name).has_value();
}

std::vector<var_decl> program::nondet_variables() const {
  std::vector<var_decl> out;
  for (const auto& v : scope())
    if (v.kind == var_decl::init_kind::nondet)
      out.push_back(v);
  return out;
}

program parse_task(std::string_view source, std::string name,
                   std::string subcategory) {
  return task_parser(source).parse(std::move(name), std::move(subcategory));
}

// ---------------------------------------------------------------------
// Printing
// ---------------------------------------------------------------------

std::string print_program(const program& p) {
  std::ostringstream out;
  out << "void func(";
  for (std::size_t i = 0; i < p.params.size(); ++i) {
    if (i)
      out << ", ";
    out << ctype_name(p.params[i].type) << " " << p.params[i].name;
  }
  out << ")\n{\n";
  for (const auto& st : p.prologue)
    out << "  " << print_stmt(st) << "\n";
  out << "  while (" << print_expr(p.task_loop.condition) << ") {\n";
  for (const auto& st : p.task_loop.body)
    out << "    " << print_stmt(st) << "\n";
  out << "  }\n";
  out << "  assert(" << print_expr(p.post_assertion) << ");\n";
  out << "}\n";
  return out.str();
}

namespace {

bool decl_equal(const var_decl& a, const var_decl& b) {
  if (a.name != b.name || a.type != b.type || a.kind != b.kind)
    return false;
  if (a.kind == var_decl::init_kind::nondet)
    return true;
  return structurally_equal(a.init, b.init);
}

bool stmt_equal(const stmt& a, const stmt& b) {
  if (a.k != b.k)
    return false;
  switch (a.k) {
    case stmt::kind::declare:
      return decl_equal(a.decl, b.decl);
    case stmt::kind::assign:
      return a.target == b.target && structurally_equal(a.value, b.value);
    case stmt::kind::compound_assign:
      return a.target == b.target && a.op == b.op &&
             structurally_equal(a.value, b.value);
    case stmt::kind::guard_return:
      return structurally_equal(a.value, b.value);
  }
  return false;
}

}  // namespace

bool structurally_equal(const program& a, const program& b) {
  if (a.params.size() != b.params.size() ||
      a.prologue.size() != b.prologue.size() ||
      a.task_loop.body.size() != b.task_loop.body.size())
    return false;
  for (std::size_t i = 0; i < a.params.size(); ++i)
    if (!decl_equal(a.params[i], b.params[i]))
      return false;
  for (std::size_t i = 0; i < a.prologue.size(); ++i)
    if (!stmt_equal(a.prologue[i], b.prologue[i]))
      return false;
  if (!invforge::structurally_equal(a.task_loop.condition,
                                    b.task_loop.condition))
    return false;
  for (std::size_t i = 0; i < a.task_loop.body.size(); ++i)
    if (!stmt_equal(a.task_loop.body[i], b.task_loop.body[i]))
      return false;
  return invforge::structurally_equal(a.post_assertion, b.post_assertion);
}

// ---------------------------------------------------------------------
// Concrete execution
// ---------------------------------------------------------------------

namespace {

// Applies an assign or compound_assign to env; returns a fault reason or "".
std::string apply_assignment(const stmt& st, state& env) {
  auto target = env.find(st.target);
  if (target == env.end())
    return "unbound variable '" + st.target + "'";
  mresult rv = eval_machine(*st.value, env);
  if (const auto* f = std::get_if<mfault>(&rv))
    return f->reason;
  machine_value rhs = std::get<machine_value>(rv);
  if (st.k == stmt::kind::assign) {
    target->second = machine_value{rhs.bits, target->second.type};
    return "";
  }
  machine_value lhs = target->second;
  machine_value result;
  switch (st.op) {
    case binary_op::add:
      result = machine_value{lhs.bits + rhs.bits, lhs.type};
      break;
    case binary_op::sub:
      result = machine_value{lhs.bits - rhs.bits, lhs.type};
      break;
    case binary_op::mul:
      result = machine_value{lhs.bits * rhs.bits, lhs.type};
      break;
    default:
      return "unsupported compound assignment";
  }
  target->second = result;
  return "";
}

}  // namespace

prologue_result run_prologue(const program& p,
                             const std::map<std::string, bigint>& inputs) {
  state env;
  auto nondet_value = [&](const var_decl& d) -> std::optional<machine_value> {
    auto it = inputs.find(d.name);
    if (it == inputs.end())
      return std::nullopt;
    return truncate_to(d.type, it->second);
  };

  for (const auto& param : p.params) {
    auto v = nondet_value(param);
    if (!v)
      return prologue_fault{"no input for parameter '" + param.name + "'"};
    env[param.name] = *v;
  }

  for (const auto& st : p.prologue) {
    switch (st.k) {
      case stmt::kind::declare: {
        const var_decl& d = st.decl;
        if (d.kind == var_decl::init_kind::nondet) {
          auto v = nondet_value(d);
          if (!v)
            return prologue_fault{"no input for nondet variable '" + d.name +
                                  "'"};
          env[d.name] = *v;
        } else {
          mresult rv = eval_machine(*d.init, env);
          if (const auto* f = std::get_if<mfault>(&rv))
            return prologue_fault{f->reason};
          env[d.name] =
              machine_value{std::get<machine_value>(rv).bits, d.type};
        }
        break;
      }
      case stmt::kind::assign:
      case stmt::kind::compound_assign: {
        std::string fault = apply_assignment(st, env);
        if (!fault.empty())
          return prologue_fault{fault};
        break;
      }
      case stmt::kind::guard_return: {
        mresult cv = eval_machine(*st.value, env);
        if (const auto* f = std::get_if<mfault>(&cv))
          return prologue_fault{f->reason};
        if (std::get<machine_value>(cv).bits == 0)
          return prologue_returned_early{};
        break;
      }
    }
  }
  return prologue_reached{std::move(env)};
}

step_result step_body(const program& p, const state& s) {
  state env = s;
  for (const auto& st : p.task_loop.body) {
    std::string fault = apply_assignment(st, env);
    if (!fault.empty())
      return step_fault{fault, print_stmt(st)};
  }
  return step_ok{std::move(env)};
}

cond_value eval_condition(const expr& e, const state& s) {
  mresult r = eval_machine(e, s);
  if (const auto* f = std::get_if<mfault>(&r))
    return cond_value{false, false, f->reason};
  return cond_value{true, std::get<machine_value>(r).bits != 0, ""};
}

}  // namespace invforge::cminus
