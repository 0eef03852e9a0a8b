#include "tcg/lexer.hpp"

#include <algorithm>
#include <iterator>
#include <cstdint>

namespace tcg {

namespace {

bool ident_start(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_' || c == '$' || c >= 0x80;
}

bool ident_part(unsigned char c) { return ident_start(c) || (c >= '0' && c <= '9'); }

bool is_digit(unsigned char c) { return c >= '0' && c <= '9'; }

std::string clean_doc(std::string_view raw) {
  // raw is the full "/** ... */" comment
  std::string_view inner = raw.substr(3);
  if (inner.size() >= 2 && inner.substr(inner.size() - 2) == "*/") inner.remove_suffix(2);
  std::string out;
  std::size_t pos = 0;
  while (pos <= inner.size()) {
    std::size_t nl = inner.find('\n', pos);
    std::string_view line = inner.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    std::size_t s = line.find_first_not_of(" \t\r");
    line = s == std::string_view::npos ? std::string_view{} : line.substr(s);
    while (!line.empty() && line.front() == '*') line.remove_prefix(1);
    if (!line.empty() && line.front() == ' ') line.remove_prefix(1);
    while (!line.empty() && (line.back() == ' ' || line.back() == '\t' || line.back() == '\r')) line.remove_suffix(1);
    if (!line.empty()) {
      if (!out.empty()) out += '\n';
      out.append(line);
    }
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
  return out;
}

void append_utf8(std::string& out, std::uint32_t cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

LexResult lex(std::string_view text, int base_line) {
  LexResult out;
  out.text = text;
  const std::size_t n = text.size();
  std::size_t i = 0;
  int line = base_line;
  int pending_doc = -1;

  auto advance_to = [&](std::size_t stop) {
    for (; i < stop && i < n; ++i)
      if (text[i] == '\n') ++line;
  };
  auto emit = [&](TokenKind kind, std::size_t begin, int start_line) {
    Token t{kind, begin, i, start_line};
    t.doc = pending_doc;
    if (kind == TokenKind::Punct) t.ch = text[begin];
    pending_doc = -1;
    out.tokens.push_back(t);
  };

  while (i < n) {
    const auto c = static_cast<unsigned char>(text[i]);
    if (c == '\n' || c == ' ' || c == '\t' || c == '\r' || c == '\f' || c == '\v') {
      advance_to(i + 1);
      continue;
    }
    if (c == '/' && i + 1 < n && text[i + 1] == '/') {
      std::size_t nl = text.find('\n', i);
      advance_to(nl == std::string_view::npos ? n : nl);
      continue;
    }
    if (c == '/' && i + 1 < n && text[i + 1] == '*') {
      const std::size_t begin = i;
      std::size_t close = text.find("*/", i + 2);
      std::size_t stop = close == std::string_view::npos ? n : close + 2;
      bool is_doc = i + 2 < n && text[i + 2] == '*' && !(i + 3 < n && text[i + 3] == '/');
      advance_to(stop);
      if (is_doc) {
        out.docs.push_back(clean_doc(text.substr(begin, stop - begin)));
        pending_doc = static_cast<int>(out.docs.size()) - 1;
      }
      continue;
    }
    const std::size_t begin = i;
    const int start_line = line;
    if (c == '"') {
      if (text.substr(i, 3) == "\"\"\"") {
        std::size_t j = i + 3;
        while (j < n) {
          if (text[j] == '\\') {
            j += 2;
            continue;
          }
          if (text.substr(j, 3) == "\"\"\"") {
            j += 3;
            break;
          }
          ++j;
        }
        advance_to(std::min(j, n));
      } else {
        std::size_t j = i + 1;
        while (j < n && text[j] != '"' && text[j] != '\n') j += text[j] == '\\' ? 2 : 1;
        if (j < n && text[j] == '"') ++j;
        advance_to(std::min(j, n));
      }
      emit(TokenKind::String, begin, start_line);
      continue;
    }
    if (c == '\'') {
      std::size_t j = i + 1;
      while (j < n && text[j] != '\'' && text[j] != '\n') j += text[j] == '\\' ? 2 : 1;
      if (j < n && text[j] == '\'') ++j;
      advance_to(std::min(j, n));
      emit(TokenKind::Char, begin, start_line);
      continue;
    }
    if (is_digit(c) || (c == '.' && i + 1 < n && is_digit(static_cast<unsigned char>(text[i + 1])))) {
      std::size_t j = i + 1;
      while (j < n) {
        auto d = static_cast<unsigned char>(text[j]);
        if (ident_part(d) && d < 0x80) {
          ++j;
        } else if (d == '.' && j + 1 < n && is_digit(static_cast<unsigned char>(text[j + 1]))) {
          ++j;
        } else if ((d == '+' || d == '-') && (text[j - 1] == 'e' || text[j - 1] == 'E' || text[j - 1] == 'p' ||
                                              text[j - 1] == 'P') &&
                   text.substr(begin, 2) != "0x" && text.substr(begin, 2) != "0X") {
          ++j;
        } else {
          break;
        }
      }
      advance_to(j);
      emit(TokenKind::Number, begin, start_line);
      continue;
    }
    if (ident_start(c)) {
      std::size_t j = i + 1;
      while (j < n && ident_part(static_cast<unsigned char>(text[j]))) ++j;
      advance_to(j);
      emit(TokenKind::Identifier, begin, start_line);
      continue;
    }
    advance_to(i + 1);
    emit(TokenKind::Punct, begin, start_line);
  }
  return out;
}

bool is_java_keyword(std::string_view word) noexcept {
  static constexpr std::string_view kKeywords[] = {
      "abstract", "assert",     "boolean",   "break",     "byte",      "case",         "catch",
      "char",     "class",      "const",     "continue",  "default",   "do",           "double",
      "else",     "enum",       "extends",   "false",     "final",     "finally",      "float",
      "for",      "goto",       "if",        "implements", "import",   "instanceof",   "int",
      "interface", "long",      "native",    "new",       "null",      "package",      "private",
      "protected", "public",    "return",    "short",     "static",    "strictfp",     "super",
      "switch",   "synchronized", "this",    "throw",     "throws",    "transient",    "true",
      "try",      "void",       "volatile",  "while"};
  return std::find(std::begin(kKeywords), std::end(kKeywords), word) != std::end(kKeywords);
}

bool is_valid_utf8(std::string_view bytes) noexcept {
  std::size_t i = 0;
  const std::size_t n = bytes.size();
  while (i < n) {
    const auto c = static_cast<unsigned char>(bytes[i]);
    int extra;
    std::uint32_t min;
    if (c < 0x80) {
      ++i;
      continue;
    } else if ((c & 0xE0) == 0xC0) {
      extra = 1;
      min = 0x80;
    } else if ((c & 0xF0) == 0xE0) {
      extra = 2;
      min = 0x800;
    } else if ((c & 0xF8) == 0xF0) {
      extra = 3;
      min = 0x10000;
    } else {
      return false;
    }
    if (i + static_cast<std::size_t>(extra) >= n) return false;
    std::uint32_t cp = c & (0x3F >> extra);
    for (int k = 1; k <= extra; ++k) {
      const auto cc = static_cast<unsigned char>(bytes[i + k]);
      if ((cc & 0xC0) != 0x80) return false;
      cp = (cp << 6) | (cc & 0x3F);
    }
    if (cp < min || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) return false;
    i += extra + 1;
  }
  return true;
}

namespace {

// Text block rule: drop the common leading whitespace of the non-blank lines
// (and of the closing-delimiter line) and all trailing whitespace.
std::string strip_incidental_whitespace(std::string_view content) {
  std::vector<std::string_view> lines;
  for (std::size_t start = 0;;) {
    const std::size_t nl = content.find('\n', start);
    lines.push_back(content.substr(start, nl == std::string_view::npos ? std::string_view::npos : nl - start));
    if (nl == std::string_view::npos) break;
    start = nl + 1;
  }
  auto blank = [](std::string_view l) { return l.find_first_not_of(" \t\r") == std::string_view::npos; };
  std::size_t indent = std::string_view::npos;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const bool closing_line = i + 1 == lines.size();
    if (blank(lines[i]) && !closing_line) continue;
    const std::size_t lead = blank(lines[i]) ? lines[i].size() : lines[i].find_first_not_of(" \t");
    indent = std::min(indent, lead);
  }
  if (indent == std::string_view::npos) indent = 0;
  std::string out;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::string_view l = lines[i];
    l.remove_prefix(std::min(indent, l.size()));
    const std::size_t last = l.find_last_not_of(" \t\r");
    l = last == std::string_view::npos ? std::string_view{} : l.substr(0, last + 1);
    if (i > 0) out += '\n';
    out += l;
  }
  return out;
}

}  // namespace

std::string unescape_java_string(std::string_view literal) {
  std::string_view body = literal;
  std::string stripped;
  if (body.substr(0, 3) == "\"\"\"") {
    body.remove_prefix(3);
    // a text block's content begins after the line terminator following the opening quotes
    std::size_t nl = body.find('\n');
    body = nl == std::string_view::npos ? std::string_view{} : body.substr(nl + 1);
    if (body.size() >= 3 && body.substr(body.size() - 3) == "\"\"\"") body.remove_suffix(3);
    stripped = strip_incidental_whitespace(body);
    body = stripped;
  } else {
    if (!body.empty() && body.front() == '"') body.remove_prefix(1);
    if (!body.empty() && body.back() == '"') body.remove_suffix(1);
  }
  std::string out;
  out.reserve(body.size());
  for (std::size_t i = 0; i < body.size(); ++i) {
    char c = body[i];
    if (c != '\\' || i + 1 >= body.size()) {
      out += c;
      continue;
    }
    char e = body[++i];
    switch (e) {
      case 'n': out += '\n'; break;
      case 't': out += '\t'; break;
      case 'b': out += '\b'; break;
      case 'r': out += '\r'; break;
      case 'f': out += '\f'; break;
      case 's': out += ' '; break;
      case '"': out += '"'; break;
      case '\'': out += '\''; break;
      case '\\': out += '\\'; break;
      case '\n': break;  // line continuation in text blocks
      case 'u': {
        std::size_t j = i;
        while (j < body.size() && body[j] == 'u') ++j;
        std::uint32_t cp = 0;
        bool ok = j + 4 <= body.size();
        for (std::size_t k = 0; ok && k < 4; ++k) {
          int h = hex_value(body[j + k]);
          if (h < 0) ok = false;
          cp = cp * 16 + static_cast<std::uint32_t>(h);
        }
        if (!ok) {
          out += '\\';
          out += 'u';
          break;
        }
        append_utf8(out, cp);
        i = j + 3;
        break;
      }
      default:
        if (e >= '0' && e <= '7') {
          int value = e - '0';
          int digits = 1;
          int max_digits = e <= '3' ? 3 : 2;
          while (digits < max_digits && i + 1 < body.size() && body[i + 1] >= '0' && body[i + 1] <= '7') {
            value = value * 8 + (body[++i] - '0');
            ++digits;
          }
          append_utf8(out, static_cast<std::uint32_t>(value));
        } else {
          out += '\\';
          out += e;
        }
    }
  }
  return out;
}

}  // namespace tcg
