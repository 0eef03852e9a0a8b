#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tcg/diagnostics.hpp"

namespace tcg {

class CodeGraph;

// Names of the two framing calls that delimit a test code block.
struct CorpusConventions {
  std::string begin_marker = "TestBegin";
  std::string end_marker = "TestEnd";

  bool operator==(const CorpusConventions&) const = default;
};

struct ImportDecl {
  std::string qualified_name;  // without a trailing ".*"
  bool is_static = false;
  bool is_wildcard = false;

  bool operator==(const ImportDecl&) const = default;
};

enum class TypeKind { Class, Interface, Enum };

std::string_view to_string(TypeKind kind) noexcept;
TypeKind type_kind_from_string(std::string_view s);

struct Param {
  std::string type;
  std::string name;

  bool operator==(const Param&) const = default;
};

struct InvocationRef {
  std::string simple_name;
  std::string receiver;      // empty when the call has no receiver
  std::string resolved_fqn;  // "pkg.Class#method", empty when unresolved

  bool operator==(const InvocationRef&) const = default;
};

struct MethodSig {
  std::string name;
  std::string return_type;  // empty for constructors
  std::vector<Param> params;
  std::vector<std::string> modifiers;  // source order
  std::string owner;                   // fully-qualified class name
  std::optional<std::string> doc;
  bool is_constructor = false;
  int line = 0;
  // Calls made anywhere in the body, framing calls excluded.
  std::vector<InvocationRef> invocations;

  bool has_modifier(std::string_view m) const;
  // "[static] ReturnType name(ParamType p, ...)"
  std::string render() const;
  // "owner#name(T1,T2)"; overloads get distinct keys.
  std::string key() const;

  bool operator==(const MethodSig&) const = default;
};

struct ClassDecl {
  std::string fully_qualified_name;
  TypeKind kind = TypeKind::Class;
  std::vector<MethodSig> methods;
  std::optional<std::string> doc;
  std::string path;  // declaring file
  int line = 0;

  std::string simple_name() const;

  bool operator==(const ClassDecl&) const = default;
};

struct TestCodeBlock {
  std::string block_id;  // "<path>::<ordinal>"
  std::string tcbd;
  // TestBegin statement through TestEnd(); inclusive. Later lines lose the
  // TestBegin line's indentation, so the body reads from column 0.
  std::string body;
  std::string owner_method;  // MethodSig::key() of the containing method
  std::string owner_class;
  std::vector<InvocationRef> invocations;
  int line_count = 0;
  std::string path;
  int ordinal = 0;
  int line = 0;

  bool operator==(const TestCodeBlock&) const = default;
};

// Byte range of a method body ("{" through "}") inside SourceFile::raw_text.
struct MethodBody {
  std::size_t class_index;
  std::size_t method_index;
  std::size_t begin;
  std::size_t end;
};

struct SourceFile {
  std::string path;
  std::string package_name;
  std::vector<ImportDecl> imports;
  std::vector<ClassDecl> classes;  // nested types follow their outer type
  std::string raw_text;
  std::vector<MethodBody> bodies;
  std::vector<TestCodeBlock> blocks;  // filled by analyze_source / scan_repository
};

struct SkippedFile {
  std::string path;
  std::string reason;
};

struct ScanResult {
  std::vector<SourceFile> files;
  std::vector<SkippedFile> skipped;
};

struct InvocationOptions {
  // Call names never reported (the block framing calls).
  std::vector<std::string> excluded = {"TestBegin", "TestEnd"};
  // Report `new X(...)` as a call to X. Off by default.
  bool constructors = false;

  static InvocationOptions from(const CorpusConventions& c) { return {{c.begin_marker, c.end_marker}}; }
};

// Structural parse: package, imports, types, and method signatures.
// Throws ParseError when braces do not balance once comments and literals
// are set aside.
SourceFile parse_source(std::string_view text, std::string path);

// Blocks in source order. Blocks without a closing TestEnd in the same
// scope, or with a nested TestBegin, are reported to `diag` and left out.
std::vector<TestCodeBlock> extract_test_blocks(const SourceFile& file, const CorpusConventions& conventions = {},
                                               Diagnostics* diag = nullptr);

// Every call site in `text` in first-appearance order, one entry per
// distinct (name, receiver) pair. Total on arbitrary text.
std::vector<InvocationRef> extract_invocations(std::string_view text, const InvocationOptions& options = {});

// Distinct simple names of extract_invocations(), sorted.
std::vector<std::string> invocation_names(std::string_view text, const InvocationOptions& options = {});

// parse_source + extract_test_blocks + per-method invocation lists.
SourceFile analyze_source(std::string_view text, std::string path, const CorpusConventions& conventions = {},
                          Diagnostics* diag = nullptr);

// One SourceFile per .java file under each root, in lexicographic path
// order. When several roots are given, paths are prefixed with the root's
// directory name. Throws NotFoundError for a missing root.
ScanResult scan_repository(const std::filesystem::path& root, const CorpusConventions& conventions = {},
                           Diagnostics* diag = nullptr);
ScanResult scan_repositories(const std::vector<std::filesystem::path>& roots, const CorpusConventions& conventions = {},
                             Diagnostics* diag = nullptr);

// Three tiers, first hit wins: containing class, static receiver naming an
// imported class, unique public method among imported classes. Ambiguity
// at a tier leaves the ref unresolved and is logged to `diag`.
InvocationRef resolve_invocation(const InvocationRef& ref, std::string_view file_path, std::string_view owner_class,
                                 const CodeGraph& graph, Diagnostics* diag = nullptr);

}  // namespace tcg
