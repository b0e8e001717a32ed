#include "wit/lexer.hpp"

#include <cctype>
#include <map>

namespace wit {

namespace {

bool ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

const std::map<std::string, Tok, std::less<>> &keyword_map() {
  static const std::map<std::string, Tok, std::less<>> kw = {
      {"int", Tok::kw_int},       {"void", Tok::kw_void},
      {"if", Tok::kw_if},         {"else", Tok::kw_else},
      {"while", Tok::kw_while},   {"for", Tok::kw_for},
      {"return", Tok::kw_return}, {"extern", Tok::kw_extern},
      {"assert", Tok::kw_assert},
  };
  return kw;
}

// C keywords the subset rejects; lexed as Tok::unsupported so the parser can
// point at them.
bool unsupported_keyword(std::string_view s) {
  static const char *const words[] = {
      "auto",   "break",    "case",   "char",   "const",    "continue",
      "default", "do",      "double", "enum",   "float",    "goto",
      "long",   "register", "short",  "signed", "sizeof",   "static",
      "struct", "switch",   "typedef", "union", "unsigned", "volatile",
  };
  for (const char *w : words)
    if (s == w)
      return true;
  return false;
}

} // namespace

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  std::size_t i = 0;
  int line = 1;
  int column = 1;
  bool at_line_start = true;

  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n && i < src.size(); ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
  };

  auto push = [&](Tok kind, std::size_t len, std::string text = {},
                  std::int64_t value = 0) {
    Token t;
    t.kind = kind;
    t.text = std::move(text);
    t.value = value;
    t.line = line;
    t.column = column;
    t.offset = i;
    out.push_back(std::move(t));
    advance(len);
  };

  while (i < src.size()) {
    char c = src[i];
    if (c == '\n') {
      advance(1);
      at_line_start = true;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '#' && at_line_start) {
      while (i < src.size() && src[i] != '\n')
        advance(1);
      continue;
    }
    at_line_start = false;
    if (c == '/' && i + 1 < src.size() && src[i + 1] == '/') {
      while (i < src.size() && src[i] != '\n')
        advance(1);
      continue;
    }
    if (c == '/' && i + 1 < src.size() && src[i + 1] == '*') {
      advance(2);
      while (i + 1 < src.size() && !(src[i] == '*' && src[i + 1] == '/'))
        advance(1);
      advance(2);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      std::int64_t value = 0;
      bool overflow = false;
      if (c == '0' && j + 1 < src.size() &&
          (src[j + 1] == 'x' || src[j + 1] == 'X')) {
        j += 2;
        while (j < src.size() &&
               std::isxdigit(static_cast<unsigned char>(src[j]))) {
          int digit = std::isdigit(static_cast<unsigned char>(src[j]))
                          ? src[j] - '0'
                          : (std::tolower(src[j]) - 'a' + 10);
          if (value > (INT64_MAX - digit) / 16)
            overflow = true;
          else
            value = value * 16 + digit;
          ++j;
        }
      } else {
        while (j < src.size() &&
               std::isdigit(static_cast<unsigned char>(src[j]))) {
          int digit = src[j] - '0';
          if (value > (INT64_MAX - digit) / 10)
            overflow = true;
          else
            value = value * 10 + digit;
          ++j;
        }
      }
      std::string text(src.substr(i, j - i));
      if (overflow || (j < src.size() && ident_start(src[j]))) {
        push(Tok::unsupported, j - i,
             overflow ? "integer literal out of range: " + text
                      : "literal suffix: " + text);
        continue;
      }
      push(Tok::int_lit, j - i, text, value);
      continue;
    }
    if (ident_start(c)) {
      std::size_t j = i;
      while (j < src.size() && ident_char(src[j]))
        ++j;
      std::string text(src.substr(i, j - i));
      auto it = keyword_map().find(text);
      if (it != keyword_map().end()) {
        push(it->second, j - i, text);
      } else if (unsupported_keyword(text)) {
        push(Tok::unsupported, j - i, "keyword: " + text);
      } else {
        push(Tok::ident, j - i, text);
      }
      continue;
    }
    if (c == '\\') {
      std::size_t j = i + 1;
      while (j < src.size() && ident_char(src[j]))
        ++j;
      std::string word(src.substr(i + 1, j - i - 1));
      if (word == "old")
        push(Tok::acsl_old, j - i, "\\old");
      else if (word == "at")
        push(Tok::acsl_at, j - i, "\\at");
      else if (word == "result")
        push(Tok::acsl_result, j - i, "\\result");
      else
        push(Tok::bad, j - i, "\\" + word);
      continue;
    }

    auto two = src.substr(i, 2);
    if (two == "<<")
      push(Tok::shl, 2, "<<");
    else if (two == ">>")
      push(Tok::shr, 2, ">>");
    else if (two == "<=")
      push(Tok::le, 2, "<=");
    else if (two == ">=")
      push(Tok::ge, 2, ">=");
    else if (two == "==")
      push(Tok::eq_eq, 2, "==");
    else if (two == "!=")
      push(Tok::ne, 2, "!=");
    else if (two == "&&")
      push(Tok::amp_amp, 2, "&&");
    else if (two == "||")
      push(Tok::pipe_pipe, 2, "||");
    else if (two == "++" || two == "--" || two == "+=" || two == "-=" ||
             two == "*=" || two == "/=" || two == "%=" || two == "&=" ||
             two == "|=" || two == "^=" || two == "->")
      push(Tok::unsupported, 2, std::string(two));
    else {
      switch (c) {
      case '(': push(Tok::lparen, 1, "("); break;
      case ')': push(Tok::rparen, 1, ")"); break;
      case '{': push(Tok::lbrace, 1, "{"); break;
      case '}': push(Tok::rbrace, 1, "}"); break;
      case ';': push(Tok::semicolon, 1, ";"); break;
      case ',': push(Tok::comma, 1, ","); break;
      case '=': push(Tok::assign, 1, "="); break;
      case '?': push(Tok::question, 1, "?"); break;
      case ':': push(Tok::colon, 1, ":"); break;
      case '+': push(Tok::plus, 1, "+"); break;
      case '-': push(Tok::minus, 1, "-"); break;
      case '*': push(Tok::star, 1, "*"); break;
      case '/': push(Tok::slash, 1, "/"); break;
      case '%': push(Tok::percent, 1, "%"); break;
      case '<': push(Tok::lt, 1, "<"); break;
      case '>': push(Tok::gt, 1, ">"); break;
      case '&': push(Tok::amp, 1, "&"); break;
      case '^': push(Tok::caret, 1, "^"); break;
      case '|': push(Tok::pipe, 1, "|"); break;
      case '!': push(Tok::bang, 1, "!"); break;
      case '~': push(Tok::tilde, 1, "~"); break;
      case '[': case ']': case '.':
        push(Tok::unsupported, 1, std::string(1, c));
        break;
      default:
        push(Tok::bad, 1, std::string(1, c));
        break;
      }
    }
  }

  Token eof;
  eof.kind = Tok::eof;
  eof.line = line;
  eof.column = column;
  eof.offset = src.size();
  out.push_back(eof);
  return out;
}

const char *token_kind_name(Tok kind) {
  switch (kind) {
  case Tok::eof: return "end of input";
  case Tok::bad: return "invalid character";
  case Tok::unsupported: return "unsupported token";
  case Tok::int_lit: return "integer literal";
  case Tok::ident: return "identifier";
  case Tok::kw_int: return "'int'";
  case Tok::kw_void: return "'void'";
  case Tok::kw_if: return "'if'";
  case Tok::kw_else: return "'else'";
  case Tok::kw_while: return "'while'";
  case Tok::kw_for: return "'for'";
  case Tok::kw_return: return "'return'";
  case Tok::kw_extern: return "'extern'";
  case Tok::kw_assert: return "'assert'";
  case Tok::acsl_old: return "'\\old'";
  case Tok::acsl_at: return "'\\at'";
  case Tok::acsl_result: return "'\\result'";
  case Tok::lparen: return "'('";
  case Tok::rparen: return "')'";
  case Tok::lbrace: return "'{'";
  case Tok::rbrace: return "'}'";
  case Tok::semicolon: return "';'";
  case Tok::comma: return "','";
  case Tok::assign: return "'='";
  case Tok::question: return "'?'";
  case Tok::colon: return "':'";
  case Tok::plus: return "'+'";
  case Tok::minus: return "'-'";
  case Tok::star: return "'*'";
  case Tok::slash: return "'/'";
  case Tok::percent: return "'%'";
  case Tok::shl: return "'<<'";
  case Tok::shr: return "'>>'";
  case Tok::lt: return "'<'";
  case Tok::le: return "'<='";
  case Tok::gt: return "'>'";
  case Tok::ge: return "'>='";
  case Tok::eq_eq: return "'=='";
  case Tok::ne: return "'!='";
  case Tok::amp: return "'&'";
  case Tok::caret: return "'^'";
  case Tok::pipe: return "'|'";
  case Tok::amp_amp: return "'&&'";
  case Tok::pipe_pipe: return "'||'";
  case Tok::bang: return "'!'";
  case Tok::tilde: return "'~'";
  }
  return "token";
}

} // namespace wit
