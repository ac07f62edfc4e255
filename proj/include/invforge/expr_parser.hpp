#ifndef INVFORGE_EXPR_PARSER_HPP
#define INVFORGE_EXPR_PARSER_HPP

#include "invforge/expr.hpp"
#include "invforge/lexer.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace invforge {

/// The two dialects share one grammar; acsl additionally accepts ==> and
/// reports \keywords and function calls as unsupported symbols, while the
/// c dialect treats them as plain parse errors (the frontend whitelists
/// intrinsic calls before expressions are parsed).
enum class expr_dialect { acsl, c };

/// Raised for both malformed input and recognizable-but-unsupported symbols;
/// `unsupported` distinguishes the two so the feedback loop can name the
/// offending symbol.
struct expr_parse_error {
  bool unsupported = false;
  std::string symbol;
  std::string message;
  int line = 1;
};

/// Parses one expression starting at tokens[pos], advancing pos past it.
/// Throws expr_parse_error. Chained comparisons (a <= b <= c) desugar to
/// left-folded conjunctions; chains may not mix directions and != does not
/// chain.
expr_ptr parse_expression(const std::vector<token>& tokens, std::size_t& pos,
                          expr_dialect dialect);

}  // namespace invforge

#endif
