#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace tcg {

enum class TokenKind { Identifier, String, Char, Number, Punct };

// Keywords are lexed as identifiers; is_java_keyword() tells them apart.
// Punctuation is always a single character, so `>>` arrives as two `>`
// tokens and generic brackets balance without context.
struct Token {
  TokenKind kind;
  std::size_t begin;  // byte offset into the lexed text
  std::size_t end;
  int line;           // 1-based
  int doc = -1;       // index into LexResult::docs of a /** */ comment directly before this token
  char ch = 0;        // the character, for Punct tokens

  bool is(char punct) const noexcept { return kind == TokenKind::Punct && ch == punct; }
  bool is_ident() const noexcept { return kind == TokenKind::Identifier; }
};

struct LexResult {
  std::vector<Token> tokens;
  std::vector<std::string> docs;  // cleaned javadoc text
  std::string_view text;

  std::string_view text_of(const Token& t) const { return text.substr(t.begin, t.end - t.begin); }
  std::string_view text_of(std::size_t i) const { return text_of(tokens[i]); }
};

// Total on arbitrary input: unterminated comments run to end of text,
// unterminated string literals stop at end of line. `base_line` is the line
// number of text[0].
LexResult lex(std::string_view text, int base_line = 1);

bool is_java_keyword(std::string_view word) noexcept;
bool is_valid_utf8(std::string_view bytes) noexcept;

// Decodes the escapes of a Java string literal token (quotes included),
// including text blocks.
std::string unescape_java_string(std::string_view literal);

}  // namespace tcg
