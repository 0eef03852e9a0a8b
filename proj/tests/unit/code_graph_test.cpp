#include <gtest/gtest.h>

#include <chrono>

#include "tcg/code_graph.hpp"
#include "tcg/errors.hpp"
#include "test_support.hpp"

using namespace tcg;
using namespace tcg::testing;

namespace {

const char* kLib =
    "package lib;\n"
    "public class Radio {\n"
    "  public void enablePower() {}\n"
    "  public static Radio open(String id) { return null; }\n"
    "  void internal() {}\n"
    "}\n";

const char* kOther =
    "package lib;\n"
    "public class Line {\n"
    "  public void enablePower() {}\n"
    "  public void enableLine() {}\n"
    "}\n";

const char* kTest =
    "package app;\n"
    "import lib.Radio;\n"
    "import lib.Line;\n"
    "public class RadioTest {\n"
    "  void helper() {}\n"
    "  void test() {\n"
    "    TestBegin(\"power\");\n"
    "    Radio r = Radio.open(\"x\");\n"
    "    r.enablePower();\n"
    "    enableLine();\n"
    "    helper();\n"
    "    internal();\n"
    "    TestEnd();\n"
    "  }\n"
    "}\n";

CodeGraph small_graph(Diagnostics* diag = nullptr) {
  return build_graph({analyze_source(kLib, "lib/Radio.java"), analyze_source(kOther, "lib/Line.java"),
                      analyze_source(kTest, "app/RadioTest.java")},
                     diag);
}

std::string resolved(const TestCodeBlock& b, const std::string& name) {
  for (const auto& ref : b.invocations)
    if (ref.simple_name == name) return ref.resolved_fqn;
  return "<missing>";
}

}  // namespace

TEST(CodeGraph, NodesAndOwnership) {
  const auto g = small_graph();
  EXPECT_EQ(g.count(NodeKind::Class), 3u);
  EXPECT_EQ(g.count(NodeKind::TestBlock), 1u);
  ASSERT_NE(g.find_class("lib.Radio"), nullptr);
  ASSERT_NE(g.find_method("app.RadioTest#test()"), nullptr);
  const auto* block = g.find_block("app/RadioTest.java::0");
  ASSERT_NE(block, nullptr);
  EXPECT_EQ(block->owner_class, "app.RadioTest");
  const auto& e = g.edges();
  EXPECT_TRUE(std::is_sorted(e.begin(), e.end()));
  EXPECT_TRUE(std::adjacent_find(e.begin(), e.end()) == e.end());
  EXPECT_TRUE(std::binary_search(e.begin(), e.end(), GraphEdge{"app.RadioTest", "app.RadioTest#test()", EdgeKind::Owns}));
  EXPECT_TRUE(
      std::binary_search(e.begin(), e.end(), GraphEdge{"app.RadioTest#test()", "app/RadioTest.java::0", EdgeKind::Owns}));
}

TEST(CodeGraph, ResolutionTiers) {
  Diagnostics diag;
  const auto g = small_graph(&diag);
  const auto& b = *g.find_block("app/RadioTest.java::0");
  EXPECT_EQ(resolved(b, "helper"), "app.RadioTest#helper");   // containing class
  EXPECT_EQ(resolved(b, "open"), "lib.Radio#open");           // static receiver
  EXPECT_EQ(resolved(b, "enableLine"), "lib.Line#enableLine");  // unique public among imports
  EXPECT_EQ(resolved(b, "enablePower"), "");                  // declared by both imports
  EXPECT_EQ(resolved(b, "internal"), "");                     // package-private, not in scope
  // ambiguity is logged once, from the owning method
  EXPECT_EQ(diag.of_kind("ambiguous").size(), 1u);
}

TEST(CodeGraph, InvokesEdgesPointAtResolvedMethods) {
  const auto g = small_graph();
  const auto& e = g.edges();
  EXPECT_TRUE(std::binary_search(e.begin(), e.end(),
                                 GraphEdge{"app/RadioTest.java::0", "lib.Radio#open(String)", EdgeKind::Invokes}));
  EXPECT_TRUE(
      std::binary_search(e.begin(), e.end(), GraphEdge{"app.RadioTest#test()", "lib.Line#enableLine()", EdgeKind::Invokes}));
}

TEST(CodeGraph, ImportedClassesAndScope) {
  const auto g = small_graph();
  const auto imported = g.imported_classes("app/RadioTest.java");
  ASSERT_EQ(imported.size(), 2u);
  EXPECT_EQ(imported[0]->fully_qualified_name, "lib.Radio");
  EXPECT_EQ(imported[1]->fully_qualified_name, "lib.Line");

  const auto scope = methods_in_scope("app/RadioTest.java::0", g);
  ASSERT_EQ(scope.size(), 3u);
  EXPECT_EQ(scope[0].class_fqn, "app.RadioTest");
  EXPECT_EQ(scope[0].methods.size(), 2u);
  EXPECT_EQ(scope[1].class_fqn, "lib.Radio");
  EXPECT_EQ(scope[1].methods.size(), 2u);  // internal() is not public
  EXPECT_THROW(methods_in_scope("nope::0", g), NotFoundError);

  const auto for_file = methods_in_scope_for_file("app/RadioTest.java", g);
  EXPECT_EQ(for_file, scope);
}

TEST(CodeGraph, WildcardAndStaticImports) {
  const char* user =
      "package app;\nimport lib.*;\nimport static lib.Radio.open;\nclass U { void f() { open(\"a\"); } }\n";
  const auto g = build_graph({analyze_source(kLib, "lib/Radio.java"), analyze_source(kOther, "lib/Line.java"),
                              analyze_source(user, "app/U.java")});
  const auto imported = g.imported_classes("app/U.java");
  ASSERT_EQ(imported.size(), 2u);
  EXPECT_EQ(imported[0]->fully_qualified_name, "lib.Line");
  EXPECT_EQ(imported[1]->fully_qualified_name, "lib.Radio");
}

TEST(CodeGraph, InterfaceMembersArePublic) {
  MethodSig m;
  m.name = "probe";
  EXPECT_TRUE(is_public_surface(m, TypeKind::Interface));
  EXPECT_FALSE(is_public_surface(m, TypeKind::Class));
  m.modifiers = {"public"};
  EXPECT_TRUE(is_public_surface(m, TypeKind::Class));
}

TEST(CodeGraph, DuplicateClassIsAnError) {
  EXPECT_THROW(build_graph({analyze_source(kLib, "a/Radio.java"), analyze_source(kLib, "b/Radio.java")}),
               DuplicateClassError);
}

TEST(CodeGraph, SerializationRoundTrip) {
  const auto g = small_graph();
  const std::string text = serialize_graph(g);
  const auto back = deserialize_graph(text);
  EXPECT_EQ(back, g);
  EXPECT_EQ(serialize_graph(back), text);
}

TEST(CodeGraph, FixtureCorpusRoundTripsThroughFile) {
  const auto scan = scan_repository(corpus_dir());
  const auto g = build_graph(scan.files);
  TempDir tmp;
  save_graph(g, tmp / "g.json");
  EXPECT_EQ(load_graph(tmp / "g.json"), g);
  EXPECT_EQ(g.count(NodeKind::TestBlock), 76u);
}

TEST(CodeGraph, VersionAndFormatErrors) {
  auto doc = nlohmann::json::parse(serialize_graph(small_graph()));
  doc["schema_version"] = "2.0";
  EXPECT_THROW(deserialize_graph(doc.dump()), VersionError);
  doc["schema_version"] = "1.7";  // newer minor is readable
  EXPECT_NO_THROW(deserialize_graph(doc.dump()));
  doc["schema_version"] = "one";
  EXPECT_THROW(deserialize_graph(doc.dump()), FormatError);
  EXPECT_THROW(deserialize_graph("{not json"), FormatError);
  EXPECT_THROW(deserialize_graph("[]"), FormatError);
  EXPECT_THROW(load_graph("/nonexistent/graph.json"), Error);
}

TEST(CodeGraph, TenThousandNodesUnderFiveSeconds) {
  std::vector<SourceFile> files;
  for (int f = 0; f < 100; ++f) {
    std::string src = "package big;\npublic class C" + std::to_string(f) + " {\n";
    for (int m = 0; m < 98; ++m) src += "  public void m" + std::to_string(m) + "() { m" + std::to_string((m + 1) % 98) + "(); }\n";
    src += "  void t() { TestBegin(\"b\"); m1(); TestEnd(); }\n}\n";
    files.push_back(analyze_source(src, "big/C" + std::to_string(f) + ".java"));
  }
  const auto start = std::chrono::steady_clock::now();
  const auto g = build_graph(files);
  const auto back = deserialize_graph(serialize_graph(g));
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  EXPECT_GE(g.nodes().size(), 10000u);
  EXPECT_EQ(back.nodes().size(), g.nodes().size());
  EXPECT_LT(secs, 5.0);
}
