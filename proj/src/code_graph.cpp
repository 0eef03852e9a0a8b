#include "tcg/code_graph.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "tcg/errors.hpp"

namespace tcg {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

std::string_view to_string(NodeKind kind) noexcept {
  switch (kind) {
    case NodeKind::Class: return "class";
    case NodeKind::Method: return "method";
    case NodeKind::TestBlock: return "test_block";
  }
  return "class";
}

std::string_view to_string(EdgeKind kind) noexcept { return kind == EdgeKind::Owns ? "owns" : "invokes"; }

bool is_public_surface(const MethodSig& m, TypeKind owner_kind) {
  if (m.has_modifier("public")) return true;
  if (owner_kind == TypeKind::Interface) return !m.has_modifier("private") && !m.has_modifier("protected");
  return false;
}

const GraphNode* CodeGraph::find(std::string_view node_id) const {
  auto it = nodes_.find(node_id);
  return it == nodes_.end() ? nullptr : &it->second;
}

const ClassDecl* CodeGraph::find_class(std::string_view fqn) const {
  const GraphNode* n = find(fqn);
  return n && n->kind == NodeKind::Class ? &std::get<ClassDecl>(n->payload) : nullptr;
}

const MethodSig* CodeGraph::find_method(std::string_view key) const {
  const GraphNode* n = find(key);
  return n && n->kind == NodeKind::Method ? &std::get<MethodSig>(n->payload) : nullptr;
}

const TestCodeBlock* CodeGraph::find_block(std::string_view block_id) const {
  const GraphNode* n = find(block_id);
  return n && n->kind == NodeKind::TestBlock ? &std::get<TestCodeBlock>(n->payload) : nullptr;
}

const FileSummary* CodeGraph::find_file(std::string_view path) const {
  auto it = files_.find(path);
  return it == files_.end() ? nullptr : &it->second;
}

std::vector<const TestCodeBlock*> CodeGraph::blocks() const {
  std::vector<const TestCodeBlock*> out;
  for (const auto& [id, node] : nodes_)
    if (node.kind == NodeKind::TestBlock) out.push_back(&std::get<TestCodeBlock>(node.payload));
  return out;
}

std::size_t CodeGraph::count(NodeKind kind) const {
  return static_cast<std::size_t>(
      std::count_if(nodes_.begin(), nodes_.end(), [&](const auto& kv) { return kv.second.kind == kind; }));
}

std::size_t CodeGraph::count(EdgeKind kind) const {
  return static_cast<std::size_t>(
      std::count_if(edges_.begin(), edges_.end(), [&](const GraphEdge& e) { return e.kind == kind; }));
}

std::vector<const ClassDecl*> CodeGraph::imported_classes(std::string_view path) const {
  std::vector<const ClassDecl*> out;
  const FileSummary* file = find_file(path);
  if (!file) return out;
  std::set<std::string_view> seen;
  auto add = [&](const ClassDecl* c) {
    if (c && seen.insert(c->fully_qualified_name).second) out.push_back(c);
  };
  for (const ImportDecl& imp : file->imports) {
    if (imp.is_static) {
      if (imp.is_wildcard) {
        add(find_class(imp.qualified_name));
      } else {
        auto dot = imp.qualified_name.rfind('.');
        if (dot != std::string::npos) add(find_class(std::string_view(imp.qualified_name).substr(0, dot)));
      }
    } else if (imp.is_wildcard) {
      const std::string prefix = imp.qualified_name + ".";
      for (auto it = nodes_.lower_bound(prefix); it != nodes_.end(); ++it) {
        if (it->first.compare(0, prefix.size(), prefix) != 0) break;
        if (it->second.kind != NodeKind::Class) continue;
        if (it->first.find('.', prefix.size()) != std::string::npos) continue;
        add(&std::get<ClassDecl>(it->second.payload));
      }
    } else {
      add(find_class(imp.qualified_name));
    }
  }
  return out;
}

InvocationRef resolve_invocation(const InvocationRef& ref, std::string_view file_path, std::string_view owner_class,
                                 const CodeGraph& graph, Diagnostics* diag) {
  InvocationRef out = ref;
  out.resolved_fqn.clear();
  const std::string& name = ref.simple_name;
  auto declares = [&](const ClassDecl& c, bool public_only) {
    return std::any_of(c.methods.begin(), c.methods.end(), [&](const MethodSig& m) {
      return m.name == name && !m.is_constructor && (!public_only || is_public_surface(m, c.kind));
    });
  };
  auto report = [&](const std::vector<const ClassDecl*>& candidates) {
    if (!diag) return;
    std::string msg = "call '" + name + "' is ambiguous between";
    for (const auto* c : candidates) msg += " " + c->fully_qualified_name + "#" + name;
    diag->add("ambiguous", std::string(file_path), 0, msg);
  };

  const ClassDecl* own = graph.find_class(owner_class);
  const std::string& recv = ref.receiver;
  if (own && (recv.empty() || recv == "this" || recv == own->simple_name() || recv == own->fully_qualified_name) &&
      declares(*own, false)) {
    out.resolved_fqn = own->fully_qualified_name + "#" + name;
    return out;
  }

  std::vector<const ClassDecl*> imported = graph.imported_classes(file_path);
  std::erase(imported, own);

  if (!recv.empty() && recv.find('(') == std::string::npos) {
    std::vector<const ClassDecl*> hits;
    for (const auto* c : imported)
      if ((recv == c->simple_name() || recv == c->fully_qualified_name) && declares(*c, true)) hits.push_back(c);
    if (hits.size() == 1) {
      out.resolved_fqn = hits[0]->fully_qualified_name + "#" + name;
      return out;
    }
    if (hits.size() > 1) {
      report(hits);
      return out;
    }
  }

  std::vector<const ClassDecl*> hits;
  for (const auto* c : imported)
    if (declares(*c, true)) hits.push_back(c);
  if (hits.size() == 1) {
    out.resolved_fqn = hits[0]->fully_qualified_name + "#" + name;
  } else if (hits.size() > 1) {
    report(hits);
  }
  return out;
}

namespace {

void add_invokes_edges(const CodeGraph& g, const std::string& from, const std::vector<InvocationRef>& refs,
                       std::vector<GraphEdge>& edges) {
  for (const auto& ref : refs) {
    if (ref.resolved_fqn.empty()) continue;
    auto hash = ref.resolved_fqn.find('#');
    const ClassDecl* cls = g.find_class(std::string_view(ref.resolved_fqn).substr(0, hash));
    if (!cls) continue;
    for (const MethodSig& m : cls->methods) {
      if (m.name != ref.simple_name || m.is_constructor) continue;
      std::string to = m.key();
      if (to != from && g.find_method(to)) edges.push_back({from, std::move(to), EdgeKind::Invokes});
    }
  }
}

}  // namespace

CodeGraph build_graph(const std::vector<SourceFile>& files, Diagnostics* diag) {
  CodeGraph g;
  for (const SourceFile& f : files) {
    if (g.files_.count(f.path)) throw DuplicateClassError("file listed twice: " + f.path);
    FileSummary summary{f.path, f.package_name, f.imports, {}};
    for (const ClassDecl& c : f.classes) {
      if (const ClassDecl* prior = g.find_class(c.fully_qualified_name)) {
        throw DuplicateClassError("duplicate class " + c.fully_qualified_name + " declared in " + prior->path +
                                  " and " + f.path);
      }
      summary.classes.push_back(c.fully_qualified_name);
      ClassDecl copy = c;
      std::set<std::string> keys;
      std::erase_if(copy.methods, [&](const MethodSig& m) {
        if (keys.insert(m.key()).second) return false;
        if (diag) diag->add("duplicate_method", c.path, m.line, "method " + m.key() + " declared twice; keeping the first");
        return true;
      });
      g.nodes_.emplace(c.fully_qualified_name, GraphNode{c.fully_qualified_name, NodeKind::Class, std::move(copy)});
    }
    g.files_.emplace(f.path, std::move(summary));
  }

  for (auto& [id, node] : g.nodes_) {
    auto& cls = std::get<ClassDecl>(node.payload);
    for (MethodSig& m : cls.methods)
      for (InvocationRef& ref : m.invocations) ref = resolve_invocation(ref, cls.path, cls.fully_qualified_name, g, diag);
  }

  std::vector<TestCodeBlock> blocks;
  for (const SourceFile& f : files) {
    for (TestCodeBlock b : f.blocks) {
      // Block calls are a subset of the owning method's, already reported.
      for (InvocationRef& ref : b.invocations) ref = resolve_invocation(ref, b.path, b.owner_class, g, nullptr);
      blocks.push_back(std::move(b));
    }
  }

  std::vector<GraphEdge> edges;
  std::vector<std::string> class_ids;
  for (const auto& [id, node] : g.nodes_) class_ids.push_back(id);
  for (const std::string& cid : class_ids) {
    const auto& cls = std::get<ClassDecl>(g.nodes_.at(cid).payload);
    for (const MethodSig& m : cls.methods) {
      std::string key = m.key();
      g.nodes_.emplace(key, GraphNode{key, NodeKind::Method, m});
      edges.push_back({cid, key, EdgeKind::Owns});
    }
  }
  for (TestCodeBlock& b : blocks) {
    if (!g.find_method(b.owner_method)) {
      if (diag) diag->add("orphan_block", b.path, b.line, "containing method " + b.owner_method + " not in graph");
      continue;
    }
    edges.push_back({b.owner_method, b.block_id, EdgeKind::Owns});
    std::string id = b.block_id;
    g.nodes_.emplace(id, GraphNode{id, NodeKind::TestBlock, std::move(b)});
  }

  for (const auto& [id, node] : g.nodes_) {
    if (node.kind == NodeKind::TestBlock) {
      add_invokes_edges(g, id, std::get<TestCodeBlock>(node.payload).invocations, edges);
    } else if (node.kind == NodeKind::Method) {
      add_invokes_edges(g, id, std::get<MethodSig>(node.payload).invocations, edges);
    }
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  g.edges_ = std::move(edges);
  return g;
}

namespace {

std::vector<ScopeEntry> scope_from(const ClassDecl& own, const FileSummary& file, const CodeGraph& graph) {
  std::vector<ScopeEntry> scope;
  scope.push_back({own.fully_qualified_name, own.methods});
  for (const ClassDecl* c : graph.imported_classes(file.path)) {
    if (c == &own) continue;
    ScopeEntry entry{c->fully_qualified_name, {}};
    for (const MethodSig& m : c->methods)
      if (is_public_surface(m, c->kind)) entry.methods.push_back(m);
    scope.push_back(std::move(entry));
  }
  return scope;
}

}  // namespace

std::vector<ScopeEntry> methods_in_scope(std::string_view block_id, const CodeGraph& graph) {
  const TestCodeBlock* block = graph.find_block(block_id);
  if (!block) throw NotFoundError("unknown block id: " + std::string(block_id));
  const ClassDecl* own = graph.find_class(block->owner_class);
  const FileSummary* file = graph.find_file(block->path);
  if (!own || !file) throw NotFoundError("containing class of " + std::string(block_id) + " not in graph");
  return scope_from(*own, *file, graph);
}

std::vector<ScopeEntry> methods_in_scope_for_file(std::string_view path, const CodeGraph& graph,
                                                  std::string_view owner_class) {
  const FileSummary* file = graph.find_file(path);
  if (!file) throw NotFoundError("file not in graph: " + std::string(path));
  std::string_view owner = owner_class;
  if (owner.empty()) {
    if (file->classes.empty()) throw NotFoundError("file declares no class: " + std::string(path));
    owner = file->classes.front();
  }
  const ClassDecl* own = graph.find_class(owner);
  if (!own || own->path != file->path) throw NotFoundError("class " + std::string(owner) + " not declared in " + std::string(path));
  return scope_from(*own, *file, graph);
}

// ---------------------------------------------------------------------------
// serialization

namespace {

ojson opt_string(const std::optional<std::string>& s) { return s ? ojson(*s) : ojson(nullptr); }

std::optional<std::string> read_opt_string(const ojson& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<std::string>();
}

ojson invocations_to_json(const std::vector<InvocationRef>& refs) {
  ojson arr = ojson::array();
  for (const auto& r : refs) arr.push_back({{"name", r.simple_name}, {"receiver", r.receiver}, {"resolved", r.resolved_fqn}});
  return arr;
}

std::vector<InvocationRef> invocations_from_json(const ojson& arr) {
  std::vector<InvocationRef> out;
  for (const auto& j : arr)
    out.push_back({j.at("name").get<std::string>(), j.at("receiver").get<std::string>(), j.at("resolved").get<std::string>()});
  return out;
}

ojson method_to_json(const MethodSig& m) {
  ojson params = ojson::array();
  for (const auto& p : m.params) params.push_back({{"type", p.type}, {"name", p.name}});
  return ojson{{"name", m.name},
               {"return_type", m.return_type},
               {"params", params},
               {"modifiers", m.modifiers},
               {"owner", m.owner},
               {"doc", opt_string(m.doc)},
               {"constructor", m.is_constructor},
               {"line", m.line},
               {"invocations", invocations_to_json(m.invocations)}};
}

MethodSig method_from_json(const ojson& j) {
  MethodSig m;
  m.name = j.at("name").get<std::string>();
  m.return_type = j.at("return_type").get<std::string>();
  for (const auto& p : j.at("params")) m.params.push_back({p.at("type").get<std::string>(), p.at("name").get<std::string>()});
  m.modifiers = j.at("modifiers").get<std::vector<std::string>>();
  m.owner = j.at("owner").get<std::string>();
  m.doc = read_opt_string(j.at("doc"));
  m.is_constructor = j.at("constructor").get<bool>();
  m.line = j.at("line").get<int>();
  m.invocations = invocations_from_json(j.at("invocations"));
  return m;
}

ojson block_to_json(const TestCodeBlock& b) {
  return ojson{{"block_id", b.block_id},       {"tcbd", b.tcbd},
               {"body", b.body},               {"owner_method", b.owner_method},
               {"owner_class", b.owner_class}, {"invocations", invocations_to_json(b.invocations)},
               {"line_count", b.line_count},   {"path", b.path},
               {"ordinal", b.ordinal},         {"line", b.line}};
}

TestCodeBlock block_from_json(const ojson& j) {
  TestCodeBlock b;
  b.block_id = j.at("block_id").get<std::string>();
  b.tcbd = j.at("tcbd").get<std::string>();
  b.body = j.at("body").get<std::string>();
  b.owner_method = j.at("owner_method").get<std::string>();
  b.owner_class = j.at("owner_class").get<std::string>();
  b.invocations = invocations_from_json(j.at("invocations"));
  b.line_count = j.at("line_count").get<int>();
  b.path = j.at("path").get<std::string>();
  b.ordinal = j.at("ordinal").get<int>();
  b.line = j.at("line").get<int>();
  return b;
}

}  // namespace

std::string serialize_graph(const CodeGraph& graph) {
  ojson doc;
  doc["schema_version"] = std::to_string(kGraphSchemaMajor) + "." + std::to_string(kGraphSchemaMinor);
  ojson nodes = ojson::array();
  for (const auto& [id, node] : graph.nodes()) {
    ojson jn{{"id", id}, {"kind", to_string(node.kind)}};
    switch (node.kind) {
      case NodeKind::Class: {
        const auto& c = std::get<ClassDecl>(node.payload);
        ojson keys = ojson::array();
        for (const auto& m : c.methods) keys.push_back(m.key());
        jn["payload"] = {{"fqn", c.fully_qualified_name}, {"type_kind", to_string(c.kind)}, {"doc", opt_string(c.doc)},
                         {"path", c.path},                {"line", c.line},                  {"methods", keys}};
        break;
      }
      case NodeKind::Method: jn["payload"] = method_to_json(std::get<MethodSig>(node.payload)); break;
      case NodeKind::TestBlock: jn["payload"] = block_to_json(std::get<TestCodeBlock>(node.payload)); break;
    }
    nodes.push_back(std::move(jn));
  }
  doc["nodes"] = std::move(nodes);
  ojson edges = ojson::array();
  for (const auto& e : graph.edges()) edges.push_back({{"from", e.from}, {"to", e.to}, {"kind", to_string(e.kind)}});
  doc["edges"] = std::move(edges);
  ojson files = ojson::array();
  for (const auto& [path, f] : graph.files()) {
    ojson imports = ojson::array();
    for (const auto& i : f.imports)
      imports.push_back({{"name", i.qualified_name}, {"static", i.is_static}, {"wildcard", i.is_wildcard}});
    files.push_back({{"path", f.path}, {"package", f.package_name}, {"imports", imports}, {"classes", f.classes}});
  }
  doc["files"] = std::move(files);
  return doc.dump(1, '\t', false, nlohmann::json::error_handler_t::replace) + "\n";
}

CodeGraph deserialize_graph(std::string_view text) {
  ojson doc;
  try {
    doc = ojson::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("corrupt graph file: ") + e.what());
  }
  CodeGraph g;
  try {
    const std::string version = doc.at("schema_version").get<std::string>();
    int major = 0;
    try {
      major = std::stoi(version.substr(0, version.find('.')));
    } catch (const std::exception&) {
      throw FormatError("unreadable schema_version '" + version + "'");
    }
    if (major != kGraphSchemaMajor)
      throw VersionError("graph schema " + version + " not supported (expected major " + std::to_string(kGraphSchemaMajor) + ")");

    std::map<std::string, std::vector<std::string>> class_methods;
    for (const auto& jn : doc.at("nodes")) {
      const std::string id = jn.at("id").get<std::string>();
      const std::string kind = jn.at("kind").get<std::string>();
      const ojson& p = jn.at("payload");
      if (kind == "class") {
        ClassDecl c;
        c.fully_qualified_name = p.at("fqn").get<std::string>();
        c.kind = type_kind_from_string(p.at("type_kind").get<std::string>());
        c.doc = read_opt_string(p.at("doc"));
        c.path = p.at("path").get<std::string>();
        c.line = p.at("line").get<int>();
        class_methods[id] = p.at("methods").get<std::vector<std::string>>();
        g.nodes_.emplace(id, GraphNode{id, NodeKind::Class, std::move(c)});
      } else if (kind == "method") {
        g.nodes_.emplace(id, GraphNode{id, NodeKind::Method, method_from_json(p)});
      } else if (kind == "test_block") {
        g.nodes_.emplace(id, GraphNode{id, NodeKind::TestBlock, block_from_json(p)});
      } else {
        throw FormatError("unknown node kind '" + kind + "'");
      }
    }
    for (auto& [cid, keys] : class_methods) {
      auto& c = std::get<ClassDecl>(g.nodes_.at(cid).payload);
      for (const auto& key : keys) {
        const MethodSig* m = g.find_method(key);
        if (!m) throw FormatError("class " + cid + " lists missing method " + key);
        c.methods.push_back(*m);
      }
    }
    for (const auto& je : doc.at("edges")) {
      GraphEdge e{je.at("from").get<std::string>(), je.at("to").get<std::string>(),
                  je.at("kind").get<std::string>() == "owns" ? EdgeKind::Owns : EdgeKind::Invokes};
      if (!g.find(e.from) || !g.find(e.to)) throw FormatError("edge endpoint missing: " + e.from + " -> " + e.to);
      g.edges_.push_back(std::move(e));
    }
    for (const auto& jf : doc.at("files")) {
      FileSummary f;
      f.path = jf.at("path").get<std::string>();
      f.package_name = jf.at("package").get<std::string>();
      for (const auto& ji : jf.at("imports"))
        f.imports.push_back({ji.at("name").get<std::string>(), ji.at("static").get<bool>(), ji.at("wildcard").get<bool>()});
      f.classes = jf.at("classes").get<std::vector<std::string>>();
      g.files_.emplace(f.path, std::move(f));
    }
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("corrupt graph file: ") + e.what());
  }
  return g;
}

void save_graph(const CodeGraph& graph, const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << serialize_graph(graph);
  if (!out) throw Error("write failed: " + path.string());
}

CodeGraph load_graph(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw NotFoundError("graph file not found: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return deserialize_graph(ss.str());
}

}  // namespace tcg
