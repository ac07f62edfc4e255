#ifndef INVFORGE_ACSL_HPP
#define INVFORGE_ACSL_HPP

#include "invforge/errors.hpp"
#include "invforge/expr.hpp"
#include "invforge/machine.hpp"

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace invforge::acsl {

/// Why a candidate failed to parse. `unsupported` marks symbols the grammar
/// recognizes but the subset excludes (function calls like pow, \forall);
/// the feedback loop reports those by name to the generator.
struct parse_failure {
  bool unsupported = false;
  std::string symbol;
  std::string message;
  int line = 1;
};

struct parse_result {
  expr_ptr ast;  // null on failure
  std::optional<parse_failure> failure;
  bool ok() const { return ast != nullptr; }
};

/// Parses one invariant expression in the supported ACSL subset.
/// Chained comparisons desugar into conjunctions.
parse_result parse_invariant(std::string_view raw);

/// Canonical fully parenthesized form; parse_invariant(print_invariant(e))
/// is structurally equal to e. This is the bit-exact spelling used in
/// annotated output files.
std::string print_invariant(const expr& e);
inline std::string print_invariant(const expr_ptr& e) {
  return print_invariant(*e);
}

/// Right-nested conjunction preserving input order; a singleton list returns
/// its element unchanged. Precondition: es nonempty.
expr_ptr conjoin(const std::vector<expr_ptr>& es);

std::set<std::string> free_vars(const expr& e);
inline std::set<std::string> free_vars(const expr_ptr& e) {
  return free_vars(*e);
}

struct unbound_variable : error {
  explicit unbound_variable(std::string name_)
      : error("unbound variable '" + name_ + "'"), name(std::move(name_)) {}
  std::string name;
};

enum class truth { yes, no, undefined };

struct eval_result {
  truth value = truth::undefined;
  std::string reason;  // populated when undefined

  bool is_true() const { return value == truth::yes; }
  bool is_false() const { return value == truth::no; }
  bool is_undefined() const { return value == truth::undefined; }
};

/// Evaluates e over mathematical integers: machine values from s are lifted
/// per their ctype before any arithmetic, so no wraparound occurs here.
/// Nonzero results are true (C truthiness); && || ==> short-circuit.
/// Undefined arises from division/modulo by zero, shift by a negative
/// amount, or a shift amount beyond the evaluator's width guard.
/// Throws unbound_variable when e mentions a variable outside s.
eval_result eval(const expr& e, const state& s);
inline eval_result eval(const expr_ptr& e, const state& s) {
  return eval(*e, s);
}

/// A raw candidate string plus its parse, kept together because unparsable
/// candidates still flow through the feedback loop.
struct invariant_text {
  std::string raw;
  expr_ptr parsed;  // null iff raw does not parse in the subset
  std::optional<parse_failure> failure;

  bool parsed_ok() const { return parsed != nullptr; }
};

invariant_text make_invariant_text(std::string raw);

}  // namespace invforge::acsl

#endif
