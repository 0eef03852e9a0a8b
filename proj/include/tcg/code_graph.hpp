#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "tcg/corpus.hpp"

namespace tcg {

enum class NodeKind { Class, Method, TestBlock };
enum class EdgeKind { Owns, Invokes };

std::string_view to_string(NodeKind kind) noexcept;
std::string_view to_string(EdgeKind kind) noexcept;

// Node keys: class -> FQN, method -> MethodSig::key(), block -> block_id.
struct GraphNode {
  std::string node_id;
  NodeKind kind;
  std::variant<ClassDecl, MethodSig, TestCodeBlock> payload;

  bool operator==(const GraphNode&) const = default;
};

struct GraphEdge {
  std::string from;
  std::string to;
  EdgeKind kind;

  auto operator<=>(const GraphEdge&) const = default;
  bool operator==(const GraphEdge&) const = default;
};

struct FileSummary {
  std::string path;
  std::string package_name;
  std::vector<ImportDecl> imports;
  std::vector<std::string> classes;

  bool operator==(const FileSummary&) const = default;
};

struct ScopeEntry {
  std::string class_fqn;
  std::vector<MethodSig> methods;

  bool operator==(const ScopeEntry&) const = default;
};

// Classes, methods and test blocks with ownership and invocation edges.
// Immutable once built; safe to share between reader threads.
class CodeGraph {
 public:
  using NodeMap = std::map<std::string, GraphNode, std::less<>>;

  const NodeMap& nodes() const noexcept { return nodes_; }
  const std::vector<GraphEdge>& edges() const noexcept { return edges_; }  // sorted, unique
  const std::map<std::string, FileSummary, std::less<>>& files() const noexcept { return files_; }

  const GraphNode* find(std::string_view node_id) const;
  const ClassDecl* find_class(std::string_view fqn) const;
  const MethodSig* find_method(std::string_view key) const;
  const TestCodeBlock* find_block(std::string_view block_id) const;
  const FileSummary* find_file(std::string_view path) const;

  // All test blocks, ordered by block_id.
  std::vector<const TestCodeBlock*> blocks() const;
  std::size_t count(NodeKind kind) const;
  std::size_t count(EdgeKind kind) const;

  // Graph-known classes named by the file's imports, in import order,
  // without duplicates. Wildcards expand to the package's classes sorted
  // by FQN; static imports contribute their declaring class.
  std::vector<const ClassDecl*> imported_classes(std::string_view path) const;

  bool operator==(const CodeGraph&) const = default;

 private:
  friend CodeGraph build_graph(const std::vector<SourceFile>&, Diagnostics*);
  friend CodeGraph deserialize_graph(std::string_view);

  NodeMap nodes_;
  std::vector<GraphEdge> edges_;
  std::map<std::string, FileSummary, std::less<>> files_;
};

// Whether another class may call `m` ("public" surface). Interface members
// without an access modifier are public.
bool is_public_surface(const MethodSig& m, TypeKind owner_kind);

// Throws DuplicateClassError when two files declare the same FQN.
CodeGraph build_graph(const std::vector<SourceFile>& files, Diagnostics* diag = nullptr);

// Containing class with all its methods, then each imported graph class
// with its public methods. Throws NotFoundError for an unknown block.
std::vector<ScopeEntry> methods_in_scope(std::string_view block_id, const CodeGraph& graph);

// Same scoping for code that does not exist yet: the named file's imports
// and `owner_class` (the file's first top-level class when empty).
std::vector<ScopeEntry> methods_in_scope_for_file(std::string_view path, const CodeGraph& graph,
                                                  std::string_view owner_class = {});

inline constexpr int kGraphSchemaMajor = 1;
inline constexpr int kGraphSchemaMinor = 0;

std::string serialize_graph(const CodeGraph& graph);
// Throws FormatError on malformed input, VersionError on a newer major.
CodeGraph deserialize_graph(std::string_view text);

void save_graph(const CodeGraph& graph, const std::filesystem::path& path);
CodeGraph load_graph(const std::filesystem::path& path);

}  // namespace tcg
