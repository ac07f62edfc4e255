#ifndef INVFORGE_LEXER_HPP
#define INVFORGE_LEXER_HPP

#include <string>
#include <string_view>
#include <vector>

namespace invforge {

enum class token_kind { identifier, number, string_lit, punct, end };

struct token {
  token_kind kind = token_kind::end;
  std::string text;
  int line = 1;
  int column = 1;

  bool is(std::string_view t) const {
    return kind == token_kind::punct && text == t;
  }
  bool is_ident(std::string_view t) const {
    return kind == token_kind::identifier && text == t;
  }
};

/// Tokenizes a source fragment. Comments (// and /* */), whitespace and
/// preprocessor lines (leading #) are trivia. The final token is always
/// token_kind::end. ACSL keyword identifiers such as \forall are lexed as a
/// single identifier including the backslash, so the parser can name them in
/// unsupported-symbol errors. Throws parse_error on stray characters.
std::vector<token> lex(std::string_view source);

}  // namespace invforge

#endif
