#include "tcg/corpus.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <future>
#include <set>
#include <sstream>
#include <thread>

#include "tcg/errors.hpp"
#include "tcg/lexer.hpp"

namespace tcg {

namespace fs = std::filesystem;

std::string_view to_string(TypeKind kind) noexcept {
  switch (kind) {
    case TypeKind::Class: return "class";
    case TypeKind::Interface: return "interface";
    case TypeKind::Enum: return "enum";
  }
  return "class";
}

TypeKind type_kind_from_string(std::string_view s) {
  if (s == "class") return TypeKind::Class;
  if (s == "interface") return TypeKind::Interface;
  if (s == "enum") return TypeKind::Enum;
  throw FormatError("unknown type kind '" + std::string(s) + "'");
}

bool MethodSig::has_modifier(std::string_view m) const {
  return std::find(modifiers.begin(), modifiers.end(), m) != modifiers.end();
}

std::string MethodSig::render() const {
  std::string out;
  if (has_modifier("static")) out += "static ";
  if (!is_constructor && !return_type.empty()) {
    out += return_type;
    out += ' ';
  }
  out += name;
  out += '(';
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (i) out += ", ";
    out += params[i].type;
    out += ' ';
    out += params[i].name;
  }
  out += ')';
  return out;
}

std::string MethodSig::key() const {
  std::string out = owner + "#" + name + "(";
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (i) out += ',';
    out += params[i].type;
  }
  out += ')';
  return out;
}

std::string ClassDecl::simple_name() const {
  auto dot = fully_qualified_name.rfind('.');
  return dot == std::string::npos ? fully_qualified_name : fully_qualified_name.substr(dot + 1);
}

namespace {

bool is_modifier(std::string_view w) {
  static const std::set<std::string_view> kMods = {"public",       "protected", "private",  "static",
                                                   "final",        "abstract",  "native",   "synchronized",
                                                   "transient",    "volatile",  "strictfp", "default",
                                                   "sealed"};
  return kMods.count(w) > 0;
}

bool is_primitive_or_void(std::string_view w) {
  static const std::set<std::string_view> kPrims = {"boolean", "byte",  "char",   "short", "int",
                                                    "long",    "float", "double", "void"};
  return kPrims.count(w) > 0;
}

bool word_like(const Token& t) {
  return t.kind == TokenKind::Identifier || t.kind == TokenKind::Number;
}

// Index just past the bracket matching tokens[i]; tokens.size() if unmatched.
std::size_t skip_balanced(const std::vector<Token>& t, std::size_t i, char open, char close) {
  int depth = 0;
  for (; i < t.size(); ++i) {
    if (t[i].is(open)) {
      ++depth;
    } else if (t[i].is(close)) {
      if (--depth == 0) return i + 1;
    }
  }
  return t.size();
}

// Index of the bracket matching tokens[i] (a closing bracket), scanning back.
std::size_t match_back(const std::vector<Token>& t, std::size_t i, char open, char close) {
  int depth = 0;
  for (std::size_t j = i + 1; j-- > 0;) {
    if (t[j].is(close)) {
      ++depth;
    } else if (t[j].is(open)) {
      if (--depth == 0) return j;
    }
  }
  return 0;
}

std::size_t skip_annotation(const LexResult& lx, std::size_t i) {
  const auto& t = lx.tokens;
  ++i;  // '@'
  if (i < t.size() && t[i].is_ident()) ++i;
  while (i + 1 < t.size() && t[i].is('.') && t[i + 1].is_ident()) i += 2;
  if (i < t.size() && t[i].is('(')) i = skip_balanced(t, i, '(', ')');
  return i;
}

// Joins tokens into a type string: "Map<String, List<Integer>>", "String...".
std::string render_type(const LexResult& lx, std::size_t begin, std::size_t end) {
  const auto& t = lx.tokens;
  std::string out;
  const Token* prev = nullptr;
  for (std::size_t i = begin; i < end; ++i) {
    if (t[i].is('@')) {
      i = skip_annotation(lx, i) - 1;
      continue;
    }
    if (prev) {
      bool space = (word_like(*prev) && word_like(t[i])) || prev->is(',') ||
                   ((prev->is('?') || prev->is('>')) && word_like(t[i])) || t[i].is('&') || prev->is('&');
      if (space) out += ' ';
    }
    out += lx.text_of(t[i]);
    prev = &t[i];
  }
  return out;
}

int line_at(std::string_view text, std::size_t offset) {
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
}

void check_braces(const LexResult& lx, const std::string& path) {
  std::vector<int> open_lines;
  for (const auto& tok : lx.tokens) {
    if (tok.is('{')) {
      open_lines.push_back(tok.line);
    } else if (tok.is('}')) {
      if (open_lines.empty()) throw ParseError(path, tok.line, "unbalanced '}'");
      open_lines.pop_back();
    }
  }
  if (!open_lines.empty()) throw ParseError(path, open_lines.back(), "unclosed '{'");
}

class StructureParser {
 public:
  StructureParser(const LexResult& lx, SourceFile& file) : lx_(lx), t_(lx.tokens), f_(file), n_(t_.size()) {}

  void run() {
    std::size_t i = 0;
    while (i < n_) {
      if (ident(i, "package")) {
        auto [name, next] = qualified_name(i + 1);
        f_.package_name = name;
        i = next;
      } else if (ident(i, "import")) {
        i = parse_import(i + 1);
      } else if (t_[i].is(';')) {
        ++i;
      } else {
        std::size_t next = parse_member(i, kNoClass);
        i = next > i ? next : i + 1;
      }
    }
  }

 private:
  static constexpr std::size_t kNoClass = static_cast<std::size_t>(-1);

  bool ident(std::size_t i, std::string_view w) const {
    return i < n_ && t_[i].is_ident() && lx_.text_of(i) == w;
  }
  bool punct(std::size_t i, char c) const { return i < n_ && t_[i].is(c); }

  std::pair<std::string, std::size_t> qualified_name(std::size_t i) const {
    std::string name;
    for (; i < n_ && !t_[i].is(';'); ++i) {
      if (t_[i].is_ident() || t_[i].is('.') || t_[i].is('*')) name += lx_.text_of(i);
      if (t_[i].is('{') || t_[i].is('}')) return {name, i};
    }
    return {name, std::min(i + 1, n_)};
  }

  std::size_t parse_import(std::size_t i) {
    ImportDecl decl;
    if (ident(i, "static")) {
      decl.is_static = true;
      ++i;
    }
    auto [name, next] = qualified_name(i);
    if (name.size() >= 2 && name.substr(name.size() - 2) == ".*") {
      decl.is_wildcard = true;
      name.resize(name.size() - 2);
    }
    decl.qualified_name = name;
    if (!decl.qualified_name.empty()) f_.imports.push_back(std::move(decl));
    return next;
  }

  // Returns the TypeKind if a type declaration starts at i, advancing i past
  // the keyword.
  std::optional<TypeKind> type_keyword(std::size_t& i) const {
    if (ident(i, "class")) {
      ++i;
      return TypeKind::Class;
    }
    if (ident(i, "interface")) {
      ++i;
      return TypeKind::Interface;
    }
    if (ident(i, "enum")) {
      ++i;
      return TypeKind::Enum;
    }
    if (punct(i, '@') && ident(i + 1, "interface")) {
      i += 2;
      return TypeKind::Interface;
    }
    if (ident(i, "record") && i + 1 < n_ && t_[i + 1].is_ident() && (punct(i + 2, '(') || punct(i + 2, '<'))) {
      ++i;
      return TypeKind::Class;
    }
    return std::nullopt;
  }

  std::size_t parse_member(std::size_t i, std::size_t class_index) {
    const std::size_t start = i;
    std::vector<std::string> modifiers;
    while (i < n_) {
      if (punct(i, '@') && !ident(i + 1, "interface")) {
        i = skip_annotation(lx_, i);
      } else if (t_[i].is_ident() && is_modifier(lx_.text_of(i))) {
        modifiers.emplace_back(lx_.text_of(i));
        ++i;
      } else {
        break;
      }
    }
    if (i >= n_) return i;
    std::optional<std::string> doc;
    if (t_[start].doc >= 0) doc = lx_.docs[static_cast<std::size_t>(t_[start].doc)];

    if (auto kind = type_keyword(i)) return parse_type(i, *kind, class_index, std::move(doc), t_[start].line);
    if (class_index == kNoClass) return i > start ? i : start + 1;

    if (punct(i, '{')) return skip_balanced(t_, i, '{', '}');  // initializer block
    if (punct(i, '}')) return i;
    if (punct(i, '<')) i = skip_balanced(t_, i, '<', '>');  // method type parameters

    const std::size_t type_begin = i;
    std::size_t j = i;
    while (j < n_) {
      if (t_[j].is('(')) {
        if (j > type_begin && t_[j - 1].is_ident() && !is_java_keyword(lx_.text_of(j - 1)))
          return parse_method(type_begin, j, class_index, std::move(modifiers), std::move(doc));
        j = skip_balanced(t_, j, '(', ')');
        continue;
      }
      if (t_[j].is('=') || t_[j].is(';')) return skip_statement(j);
      if (t_[j].is('{')) return skip_balanced(t_, j, '{', '}');
      if (t_[j].is('}')) return j;
      if (t_[j].is('<')) {
        j = skip_balanced(t_, j, '<', '>');
        continue;
      }
      if (t_[j].is('@')) {
        j = skip_annotation(lx_, j);
        continue;
      }
      ++j;
    }
    return j;
  }

  // Skips a field declaration through its ';', stepping over initializer
  // braces (array literals, anonymous classes, lambdas).
  std::size_t skip_statement(std::size_t j) const {
    while (j < n_) {
      if (t_[j].is(';')) return j + 1;
      if (t_[j].is('{')) {
        j = skip_balanced(t_, j, '{', '}');
        continue;
      }
      if (t_[j].is('(')) {
        j = skip_balanced(t_, j, '(', ')');
        continue;
      }
      if (t_[j].is('}')) return j;
      ++j;
    }
    return j;
  }

  std::size_t parse_type(std::size_t i, TypeKind kind, std::size_t outer, std::optional<std::string> doc, int line) {
    if (i >= n_ || !t_[i].is_ident()) return i;
    const std::string name(lx_.text_of(i));
    std::string fqn;
    if (outer != kNoClass) {
      fqn = f_.classes[outer].fully_qualified_name + "." + name;
    } else {
      fqn = f_.package_name.empty() ? name : f_.package_name + "." + name;
    }
    std::size_t j = i + 1;
    while (j < n_ && !t_[j].is('{')) {
      if (t_[j].is(';') || t_[j].is('}')) return j;
      if (t_[j].is('(')) {
        j = skip_balanced(t_, j, '(', ')');
        continue;
      }
      if (t_[j].is('@')) {
        j = skip_annotation(lx_, j);
        continue;
      }
      ++j;
    }
    if (j >= n_) return j;

    ClassDecl decl;
    decl.fully_qualified_name = fqn;
    decl.kind = kind;
    decl.doc = std::move(doc);
    decl.path = f_.path;
    decl.line = line;
    f_.classes.push_back(std::move(decl));
    return parse_body(j + 1, f_.classes.size() - 1);
  }

  std::size_t parse_body(std::size_t i, std::size_t class_index) {
    if (f_.classes[class_index].kind == TypeKind::Enum) {
      while (i < n_) {
        if (t_[i].is(';')) {
          ++i;
          break;
        }
        if (t_[i].is('}')) return i + 1;
        if (t_[i].is('(')) {
          i = skip_balanced(t_, i, '(', ')');
        } else if (t_[i].is('{')) {
          i = skip_balanced(t_, i, '{', '}');
        } else {
          ++i;
        }
      }
    }
    while (i < n_) {
      if (t_[i].is('}')) return i + 1;
      if (t_[i].is(';')) {
        ++i;
        continue;
      }
      std::size_t next = parse_member(i, class_index);
      i = next > i ? next : i + 1;
    }
    return i;
  }

  std::size_t parse_method(std::size_t type_begin, std::size_t open, std::size_t class_index,
                           std::vector<std::string> modifiers, std::optional<std::string> doc) {
    ClassDecl& cls = f_.classes[class_index];
    MethodSig m;
    m.name = std::string(lx_.text_of(open - 1));
    m.return_type = render_type(lx_, type_begin, open - 1);
    m.is_constructor = m.return_type.empty();
    m.modifiers = std::move(modifiers);
    m.owner = cls.fully_qualified_name;
    m.doc = std::move(doc);
    m.line = t_[open - 1].line;

    const std::size_t after = skip_balanced(t_, open, '(', ')');
    const std::size_t close = after - 1;
    m.params = parse_params(open + 1, close);

    std::size_t k = after;
    while (k + 1 < n_ && t_[k].is('[') && t_[k + 1].is(']')) {
      m.return_type += "[]";
      k += 2;
    }
    while (k < n_ && !t_[k].is('{') && !t_[k].is(';') && !t_[k].is('}')) {
      if (t_[k].is('(')) {
        k = skip_balanced(t_, k, '(', ')');
        continue;
      }
      ++k;  // throws clause, annotation default value
    }
    cls.methods.push_back(std::move(m));
    if (k < n_ && t_[k].is('{')) {
      std::size_t end = skip_balanced(t_, k, '{', '}');
      std::size_t end_offset = end > 0 ? t_[end - 1].end : t_[k].end;
      f_.bodies.push_back(MethodBody{class_index, cls.methods.size() - 1, t_[k].begin, end_offset});
      return end;
    }
    if (k < n_ && t_[k].is(';')) return k + 1;
    return k;
  }

  std::vector<Param> parse_params(std::size_t begin, std::size_t end) const {
    std::vector<Param> params;
    std::size_t seg = begin;
    int angle = 0;
    int paren = 0;
    for (std::size_t i = begin; i <= end && i <= n_; ++i) {
      if (i < end) {
        if (t_[i].is('<')) ++angle;
        else if (t_[i].is('>')) --angle;
        else if (t_[i].is('(')) ++paren;
        else if (t_[i].is(')')) --paren;
        if (!(t_[i].is(',') && angle == 0 && paren == 0)) continue;
      }
      if (i > seg) {
        if (auto p = parse_param(seg, i)) params.push_back(std::move(*p));
      }
      seg = i + 1;
    }
    return params;
  }

  std::optional<Param> parse_param(std::size_t begin, std::size_t end) const {
    // drop leading annotations and `final`
    while (begin < end) {
      if (t_[begin].is('@')) {
        begin = skip_annotation(lx_, begin);
      } else if (ident(begin, "final")) {
        ++begin;
      } else {
        break;
      }
    }
    std::size_t name_idx = end;
    for (std::size_t i = end; i-- > begin;) {
      if (t_[i].is_ident()) {
        name_idx = i;
        break;
      }
    }
    if (name_idx == end || name_idx == begin) return std::nullopt;
    Param p;
    p.name = std::string(lx_.text_of(name_idx));
    p.type = render_type(lx_, begin, name_idx);
    for (std::size_t i = name_idx + 1; i < end; ++i) p.type += lx_.text_of(i);  // C-style `args[]`
    return p;
  }

  const LexResult& lx_;
  const std::vector<Token>& t_;
  SourceFile& f_;
  std::size_t n_;
};

bool is_call(const LexResult& lx, std::size_t k, std::string_view name) {
  const auto& t = lx.tokens;
  return k + 1 < t.size() && t[k].is_ident() && t[k + 1].is('(') && lx.text_of(k) == name;
}

// First token of the receiver chain that ends at tokens[end].
std::size_t receiver_start(const LexResult& lx, std::size_t end) {
  const auto& t = lx.tokens;
  std::size_t j = end;
  while (true) {
    if (t[j].is(')')) {
      j = match_back(t, j, '(', ')');
      if (j > 0 && t[j - 1].is('>')) {
        std::size_t lt = match_back(t, j - 1, '<', '>');
        if (lt > 0 && t[lt - 1].is_ident()) j = lt - 1;
      } else if (j > 0 && t[j - 1].is_ident()) {
        --j;
      }
      if (j > 0 && t[j - 1].is_ident() && lx.text_of(j - 1) == "new") --j;  // `new Foo().bar()`
    } else if (t[j].is(']')) {
      std::size_t open = match_back(t, j, '[', ']');
      if (open == 0) return j;
      j = open - 1;
      continue;
    } else if (!(t[j].is_ident() || t[j].kind == TokenKind::String || t[j].kind == TokenKind::Number ||
                 t[j].kind == TokenKind::Char)) {
      return j + 1;
    }
    if (j >= 2 && t[j - 1].is('.')) {
      j -= 2;
      continue;
    }
    return j;
  }
}

std::string join_tokens(const LexResult& lx, std::size_t begin, std::size_t end) {
  std::string out;
  for (std::size_t i = begin; i <= end; ++i) {
    if (i > begin && word_like(lx.tokens[i - 1]) && word_like(lx.tokens[i])) out += ' ';
    out += lx.text_of(i);
  }
  return out;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw NotFoundError("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

SourceFile parse_source(std::string_view text, std::string path) {
  SourceFile file;
  file.path = std::move(path);
  file.raw_text = std::string(text);
  const LexResult lx = lex(file.raw_text);
  check_braces(lx, file.path);
  StructureParser(lx, file).run();
  return file;
}

std::vector<InvocationRef> extract_invocations(std::string_view text, const InvocationOptions& options) {
  const LexResult lx = lex(text);
  const auto& t = lx.tokens;
  const std::size_t n = t.size();

  // constructor names after `new` and annotation names are never calls
  std::vector<bool> masked(n, false);
  std::vector<bool> constructed(n, false);
  for (std::size_t k = 0; k < n; ++k) {
    if (t[k].is_ident() && lx.text_of(k) == "new") {
      std::size_t j = k + 1;
      while (j < n) {
        if (t[j].is_ident()) {
          masked[j] = true;
          if (j + 1 < n && t[j + 1].is('.')) {
            j += 2;
          } else {
            constructed[j] = true;
            break;
          }
        } else if (t[j].is('@')) {
          // type annotation: skip its (possibly dotted) name
          masked[j++] = true;
          while (j < n && t[j].is_ident()) {
            masked[j++] = true;
            if (j + 1 < n && t[j].is('.') && t[j + 1].is_ident()) {
              ++j;
            } else {
              break;
            }
          }
        } else {
          break;
        }
      }
    } else if (t[k].is('@') && k + 1 < n && t[k + 1].is_ident()) {
      std::size_t j = k + 1;
      while (j < n && t[j].is_ident()) {
        masked[j] = true;
        if (j + 2 < n && t[j + 1].is('.') && t[j + 2].is_ident()) {
          j += 2;
        } else {
          break;
        }
      }
    }
  }

  std::vector<InvocationRef> out;
  std::set<std::pair<std::string, std::string>> seen;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (options.constructors && constructed[k]) {
      std::size_t open = k + 1;
      if (t[open].is('<')) {
        int depth = 0;
        for (; open < n; ++open) {
          if (t[open].is('<')) ++depth;
          if (t[open].is('>') && --depth == 0) break;
        }
        ++open;
      }
      if (open < n && t[open].is('(')) {
        InvocationRef ref;
        ref.simple_name = std::string(lx.text_of(k));
        if (seen.emplace(ref.simple_name, "new").second) out.push_back(std::move(ref));
      }
      continue;
    }
    if (!t[k].is_ident() || !t[k + 1].is('(') || masked[k]) continue;
    const std::string_view name = lx.text_of(k);
    if (is_java_keyword(name)) continue;
    if (std::find(options.excluded.begin(), options.excluded.end(), name) != options.excluded.end()) continue;
    if (k > 0) {
      const Token& prev = t[k - 1];
      // `Type name(` is a declaration, not a call
      if (prev.is(']')) continue;
      if (prev.is_ident()) {
        const std::string_view pw = lx.text_of(k - 1);
        if (pw != "yield" && (!is_java_keyword(pw) || is_primitive_or_void(pw))) continue;
      }
    }
    InvocationRef ref;
    ref.simple_name = std::string(name);
    std::size_t dot = std::string::npos;
    if (k >= 2 && t[k - 1].is('.')) {
      dot = k - 1;
    } else if (k >= 2 && t[k - 1].is('>')) {
      std::size_t lt = match_back(t, k - 1, '<', '>');
      if (lt >= 2 && t[lt - 1].is('.')) dot = lt - 1;
    }
    if (dot != std::string::npos && dot >= 1) {
      std::size_t start = receiver_start(lx, dot - 1);
      if (start <= dot - 1) ref.receiver = join_tokens(lx, start, dot - 1);
    }
    if (seen.emplace(ref.simple_name, ref.receiver).second) out.push_back(std::move(ref));
  }
  return out;
}

std::vector<std::string> invocation_names(std::string_view text, const InvocationOptions& options) {
  std::set<std::string> names;
  for (auto& ref : extract_invocations(text, options)) names.insert(std::move(ref.simple_name));
  return {names.begin(), names.end()};
}

namespace {

// Block text from `begin` to `end`, with the indentation of the TestBegin
// line removed from each following line that carries it.
std::string dedent_continuation(std::string_view text, std::size_t begin, std::size_t end) {
  std::size_t line_start = begin;
  while (line_start > 0 && text[line_start - 1] != '\n') --line_start;
  const std::string_view indent = text.substr(line_start, begin - line_start);
  const std::string_view body = text.substr(begin, end - begin);
  if (indent.empty() || indent.find_first_not_of(" \t") != std::string_view::npos) return std::string(body);
  std::string out;
  out.reserve(body.size());
  std::size_t pos = 0;
  while (pos <= body.size()) {
    const std::size_t nl = body.find('\n', pos);
    std::string_view line = body.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    if (pos > 0 && line.starts_with(indent)) line.remove_prefix(indent.size());
    out += line;
    if (nl == std::string_view::npos) break;
    out += '\n';
    pos = nl + 1;
  }
  return out;
}

}  // namespace

std::vector<TestCodeBlock> extract_test_blocks(const SourceFile& file, const CorpusConventions& conventions,
                                               Diagnostics* diag) {
  std::vector<TestCodeBlock> blocks;
  const std::string& raw = file.raw_text;
  for (const MethodBody& mb : file.bodies) {
    const std::string_view body_text = std::string_view(raw).substr(mb.begin, mb.end - mb.begin);
    if (body_text.find(conventions.begin_marker) == std::string_view::npos) continue;
    const LexResult lx = lex(body_text, line_at(raw, mb.begin));
    const auto& t = lx.tokens;
    const std::size_t n = t.size();
    const MethodSig& method = file.classes[mb.class_index].methods[mb.method_index];

    int depth = 0;
    std::size_t k = 0;
    while (k < n) {
      if (t[k].is('{')) ++depth;
      if (t[k].is('}')) --depth;
      if (!is_call(lx, k, conventions.begin_marker)) {
        ++k;
        continue;
      }
      const std::size_t call_end = skip_balanced(t, k + 1, '(', ')');
      std::optional<std::string> tcbd;
      for (std::size_t a = k + 2; a + 1 < call_end; ++a) {
        if (t[a].kind == TokenKind::String) {
          tcbd = unescape_java_string(lx.text_of(a));
          break;
        }
      }
      if (!tcbd) {
        if (diag) diag->add("malformed_block", file.path, t[k].line, "TestBegin without a string literal description");
        k = call_end;
        continue;
      }
      int d = depth;
      std::size_t found = n;
      std::size_t nested = n;
      for (std::size_t m = call_end; m < n; ++m) {
        if (t[m].is('{')) {
          ++d;
        } else if (t[m].is('}')) {
          if (--d < depth) break;
        } else if (is_call(lx, m, conventions.begin_marker)) {
          nested = m;
          break;
        } else if (d == depth && is_call(lx, m, conventions.end_marker)) {
          found = m;
          break;
        }
      }
      if (found == n) {
        if (diag) {
          diag->add("malformed_block", file.path, t[k].line,
                    nested != n ? "nested " + conventions.begin_marker + " before " + conventions.end_marker
                                : conventions.begin_marker + " without a following " + conventions.end_marker +
                                      " in the same scope");
        }
        k = call_end;
        continue;
      }
      std::size_t last = skip_balanced(t, found + 1, '(', ')');
      if (last < n && t[last].is(';')) ++last;
      const std::size_t begin_off = t[k].begin;
      const std::size_t end_off = t[last - 1].end;

      TestCodeBlock block;
      block.ordinal = static_cast<int>(blocks.size());
      block.path = file.path;
      block.block_id = file.path + "::" + std::to_string(block.ordinal);
      block.tcbd = std::move(*tcbd);
      block.body = dedent_continuation(body_text, begin_off, end_off);
      block.owner_method = method.key();
      block.owner_class = method.owner;
      block.invocations = extract_invocations(block.body, InvocationOptions::from(conventions));
      block.line_count = 1 + static_cast<int>(std::count(block.body.begin(), block.body.end(), '\n'));
      block.line = t[k].line;
      blocks.push_back(std::move(block));
      k = last;
    }
  }
  return blocks;
}

SourceFile analyze_source(std::string_view text, std::string path, const CorpusConventions& conventions,
                          Diagnostics* diag) {
  SourceFile file = parse_source(text, std::move(path));
  const auto options = InvocationOptions::from(conventions);
  for (const MethodBody& mb : file.bodies) {
    file.classes[mb.class_index].methods[mb.method_index].invocations =
        extract_invocations(std::string_view(file.raw_text).substr(mb.begin, mb.end - mb.begin), options);
  }
  file.blocks = extract_test_blocks(file, conventions, diag);
  return file;
}

namespace {

struct PendingFile {
  fs::path disk_path;
  std::string rel_path;
};

std::string root_label(const fs::path& root) {
  fs::path norm = root.lexically_normal();
  if (norm.filename().empty()) norm = norm.parent_path();
  return norm.filename().string();
}

}  // namespace

ScanResult scan_repositories(const std::vector<fs::path>& roots, const CorpusConventions& conventions,
                             Diagnostics* diag) {
  std::vector<PendingFile> pending;
  for (const auto& root : roots) {
    std::error_code ec;
    if (!fs::is_directory(root, ec)) throw NotFoundError("repository root not found: " + root.string());
    const std::string prefix = roots.size() > 1 ? root_label(root) + "/" : "";
    for (auto it = fs::recursive_directory_iterator(root, fs::directory_options::skip_permission_denied, ec);
         it != fs::recursive_directory_iterator(); it.increment(ec)) {
      if (ec) break;
      if (!it->is_regular_file() || it->path().extension() != ".java") continue;
      pending.push_back({it->path(), prefix + fs::relative(it->path(), root).generic_string()});
    }
    if (ec) throw NotFoundError("cannot read repository root " + root.string() + ": " + ec.message());
  }
  std::sort(pending.begin(), pending.end(), [](const auto& a, const auto& b) { return a.rel_path < b.rel_path; });

  struct Outcome {
    std::optional<SourceFile> file;
    std::string skip_reason;
    std::vector<Diagnostic> diags;
  };
  std::vector<Outcome> outcomes(pending.size());
  auto work = [&](std::size_t idx) {
    Outcome& o = outcomes[idx];
    try {
      std::string bytes = read_file(pending[idx].disk_path);
      if (!is_valid_utf8(bytes)) {
        o.skip_reason = "not valid UTF-8";
        return;
      }
      Diagnostics local;
      o.file = analyze_source(bytes, pending[idx].rel_path, conventions, &local);
      o.diags = local.entries();
    } catch (const ParseError& e) {
      o.skip_reason = e.what();
    } catch (const Error& e) {
      o.skip_reason = e.what();
    }
  };

  const std::size_t workers = std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, 8);
  if (workers <= 1 || pending.size() < 4) {
    for (std::size_t i = 0; i < pending.size(); ++i) work(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < pending.size(); i = next++) work(i);
      });
    }
    for (auto& th : pool) th.join();
  }

  ScanResult result;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    auto& o = outcomes[i];
    if (diag)
      for (auto& d : o.diags) diag->add(std::move(d));
    if (o.file) {
      result.files.push_back(std::move(*o.file));
    } else {
      if (diag) diag->add("skip", pending[i].rel_path, 0, o.skip_reason);
      result.skipped.push_back({pending[i].rel_path, o.skip_reason});
    }
  }
  return result;
}

ScanResult scan_repository(const fs::path& root, const CorpusConventions& conventions, Diagnostics* diag) {
  return scan_repositories({root}, conventions, diag);
}

}  // namespace tcg
