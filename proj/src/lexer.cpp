#include "invforge/lexer.hpp"

#include "invforge/errors.hpp"

#include <array>
#include <cctype>

namespace invforge {

namespace {

bool ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

// Multi-character operators, longest first (maximal munch).
constexpr std::array<std::string_view, 15> multi_punct = {
    "==>", "<<", ">>", "<=", ">=", "==", "!=", "&&",
    "||",  "++", "--", "+=", "-=", "*=", "->",
};

constexpr std::string_view single_punct = "+-*/%<>=!()[]{};,&|^~?:.";

}  // namespace

std::vector<token> lex(std::string_view src) {
  std::vector<token> out;
  int line = 1;
  int col = 1;
  std::size_t i = 0;
  const std::size_t n = src.size();

  auto advance = [&](std::size_t count) {
    for (std::size_t k = 0; k < count && i < n; ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };

  while (i < n) {
    char c = src[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      advance(1);
      continue;
    }
    // Preprocessor lines are trivia (no macro expansion in the subset).
    if (c == '#') {
      while (i < n && src[i] != '\n')
        advance(1);
      continue;
    }
    if (c == '/' && i + 1 < n && src[i + 1] == '/') {
      while (i < n && src[i] != '\n')
        advance(1);
      continue;
    }
    if (c == '/' && i + 1 < n && src[i + 1] == '*') {
      int start_line = line;
      advance(2);
      while (i + 1 < n && !(src[i] == '*' && src[i + 1] == '/'))
        advance(1);
      if (i + 1 >= n)
        throw parse_error(start_line, "unterminated block comment");
      advance(2);
      continue;
    }

    token t;
    t.line = line;
    t.column = col;

    if (ident_start(c)) {
      std::size_t j = i;
      while (j < n && ident_char(src[j]))
        ++j;
      t.kind = token_kind::identifier;
      t.text = std::string(src.substr(i, j - i));
      advance(j - i);
      out.push_back(std::move(t));
      continue;
    }
    if (c == '\\') {
      // ACSL keyword form: backslash + name, kept whole for error reporting.
      std::size_t j = i + 1;
      while (j < n && ident_char(src[j]))
        ++j;
      t.kind = token_kind::identifier;
      t.text = std::string(src.substr(i, j - i));
      advance(j - i);
      out.push_back(std::move(t));
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      if (c == '0' && j + 1 < n && (src[j + 1] == 'x' || src[j + 1] == 'X')) {
        j += 2;
        while (j < n && std::isxdigit(static_cast<unsigned char>(src[j])))
          ++j;
      } else {
        while (j < n && std::isdigit(static_cast<unsigned char>(src[j])))
          ++j;
      }
      // Integer suffixes are lexed into the token and handled by the parser.
      while (j < n && (src[j] == 'u' || src[j] == 'U' || src[j] == 'l' ||
                       src[j] == 'L'))
        ++j;
      if (j < n && (src[j] == '.' || src[j] == 'e' || src[j] == 'E' ||
                    src[j] == 'f' || src[j] == 'F'))
        throw parse_error(line, "floating point literals are not supported");
      t.kind = token_kind::number;
      t.text = std::string(src.substr(i, j - i));
      advance(j - i);
      out.push_back(std::move(t));
      continue;
    }
    if (c == '"') {
      std::size_t j = i + 1;
      while (j < n && src[j] != '"') {
        if (src[j] == '\\' && j + 1 < n)
          ++j;
        ++j;
      }
      if (j >= n)
        throw parse_error(line, "unterminated string literal");
      t.kind = token_kind::string_lit;
      t.text = std::string(src.substr(i + 1, j - i - 1));
      advance(j - i + 1);
      out.push_back(std::move(t));
      continue;
    }
    if (c == '\'') {
      std::size_t j = i + 1;
      while (j < n && src[j] != '\'') {
        if (src[j] == '\\' && j + 1 < n)
          ++j;
        ++j;
      }
      if (j >= n)
        throw parse_error(line, "unterminated character literal");
      t.kind = token_kind::string_lit;
      t.text = std::string(src.substr(i + 1, j - i - 1));
      advance(j - i + 1);
      out.push_back(std::move(t));
      continue;
    }

    bool matched = false;
    for (std::string_view p : multi_punct) {
      if (src.substr(i, p.size()) == p) {
        t.kind = token_kind::punct;
        t.text = std::string(p);
        advance(p.size());
        out.push_back(std::move(t));
        matched = true;
        break;
      }
    }
    if (matched)
      continue;

    if (single_punct.find(c) != std::string_view::npos) {
      t.kind = token_kind::punct;
      t.text = std::string(1, c);
      advance(1);
      out.push_back(std::move(t));
      continue;
    }

    throw parse_error(line, std::string("unexpected character '") + c + "'");
  }

  token eof;
  eof.kind = token_kind::end;
  eof.line = line;
  eof.column = col;
  out.push_back(std::move(eof));
  return out;
}

}  // namespace invforge
