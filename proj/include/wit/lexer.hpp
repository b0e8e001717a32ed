#ifndef WIT_LEXER_HPP
#define WIT_LEXER_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace wit {

enum class Tok {
  eof,
  bad,           // unknown character; text holds it
  unsupported,   // recognized C token outside the subset (++, +=, [, keywords...)
  int_lit,
  ident,
  // keywords of the C subset
  kw_int,
  kw_void,
  kw_if,
  kw_else,
  kw_while,
  kw_for,
  kw_return,
  kw_extern,
  kw_assert,
  // ACSL keywords (backslash-prefixed)
  acsl_old,
  acsl_at,
  acsl_result,
  // punctuation
  lparen,
  rparen,
  lbrace,
  rbrace,
  semicolon,
  comma,
  assign,
  question,
  colon,
  // operators
  plus,
  minus,
  star,
  slash,
  percent,
  shl,
  shr,
  lt,
  le,
  gt,
  ge,
  eq_eq,
  ne,
  amp,
  caret,
  pipe,
  amp_amp,
  pipe_pipe,
  bang,
  tilde,
};

struct Token {
  Tok kind = Tok::eof;
  std::string text;     // ident name, literal spelling, or offending text
  std::int64_t value = 0;
  int line = 1;         // 1-based
  int column = 1;       // 1-based, bytes
  std::size_t offset = 0;
};

/// Tokenizes the whole input. Lines starting with '#' (after whitespace) are
/// skipped, as are // and /* */ comments. Always ends with an eof token.
/// Unknown characters become Tok::bad; C tokens outside the subset become
/// Tok::unsupported so the parser can report a positioned message.
std::vector<Token> lex(std::string_view src);

const char *token_kind_name(Tok kind);

} // namespace wit

#endif
