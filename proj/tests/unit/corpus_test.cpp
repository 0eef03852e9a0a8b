#include <gtest/gtest.h>

#include <random>

#include "manifest_check.hpp"
#include "oracles.hpp"
#include "tcg/corpus.hpp"
#include "tcg/errors.hpp"
#include "test_support.hpp"

using namespace tcg;
using namespace tcg::testing;

namespace {

std::vector<std::string> names(std::string_view text) { return invocation_names(text); }

}  // namespace

TEST(Corpus, FixtureCorpusMatchesAnnotations) {
  Diagnostics diag;
  const auto scan = scan_repository(corpus_dir(), {}, &diag);
  const auto manifest = read_json(fixture_dir() / "manifest.json");
  const auto check = check_against_manifest(scan, diag, manifest);
  for (const auto& m : check.mismatches) ADD_FAILURE() << m;
  EXPECT_EQ(check.files_matching, check.files_checked);
  EXPECT_GE(check.files_checked, 30u);
  EXPECT_GE(check.blocks_checked, 60u);
  EXPECT_TRUE(scan.skipped.empty());
}

TEST(Corpus, ScanOrderIsLexicographic) {
  const auto scan = scan_repository(corpus_dir());
  for (std::size_t i = 1; i < scan.files.size(); ++i) EXPECT_LT(scan.files[i - 1].path, scan.files[i].path);
}

TEST(Corpus, MissingRootIsNotFound) {
  EXPECT_THROW(scan_repository(fixture_dir() / "no-such-dir"), NotFoundError);
}

TEST(Corpus, BadFilesAreSkippedAndOthersKept) {
  Diagnostics diag;
  const auto scan = scan_repository(fixture_dir() / "bad_corpus", {}, &diag);
  ASSERT_EQ(scan.files.size(), 1u);
  EXPECT_EQ(scan.files[0].path, "Good.java");
  ASSERT_EQ(scan.skipped.size(), 2u);
  EXPECT_EQ(scan.skipped[0].path, "Latin1.java");
  EXPECT_NE(scan.skipped[0].reason.find("UTF-8"), std::string::npos);
  EXPECT_EQ(scan.skipped[1].path, "Unbalanced.java");
  EXPECT_EQ(diag.of_kind("skip").size(), 2u);
}

TEST(Corpus, MultipleRootsArePrefixed) {
  const auto scan = scan_repositories({fixture_dir() / "dup_corpus" / "a", fixture_dir() / "dup_corpus" / "b"});
  ASSERT_EQ(scan.files.size(), 2u);
  EXPECT_EQ(scan.files[0].path, "a/com/dup/Twice.java");
  EXPECT_EQ(scan.files[1].path, "b/com/dup/Twice.java");
}

TEST(Corpus, UnbalancedBracesThrowParseError) {
  EXPECT_THROW(parse_source("class A { void f() { }", "A.java"), ParseError);
  EXPECT_THROW(parse_source("class A { } }", "A.java"), ParseError);
}

TEST(Corpus, BracesInsideLiteralsAndCommentsAreIgnored) {
  const auto f = parse_source("class A { String s = \"}\"; // }\n char c = '{'; /* { */ void g() {} }", "A.java");
  ASSERT_EQ(f.classes.size(), 1u);
  ASSERT_EQ(f.classes[0].methods.size(), 1u);
  EXPECT_EQ(f.classes[0].methods[0].render(), "void g()");
}

TEST(Corpus, SignatureRendering) {
  const auto f = parse_source(
      "package p;\n"
      "public class A<K> {\n"
      "  /** Builds. */\n"
      "  public A(int x) {}\n"
      "  @Deprecated public static <T extends Comparable<T>> java.util.Map<String, List<T>> group(final T[] xs, int... "
      "ys) throws Exception { return null; }\n"
      "  abstract void none();\n"
      "}\n",
      "p/A.java");
  ASSERT_EQ(f.classes.size(), 1u);
  const auto& ms = f.classes[0].methods;
  ASSERT_EQ(ms.size(), 3u);
  EXPECT_TRUE(ms[0].is_constructor);
  EXPECT_EQ(ms[0].render(), "A(int x)");
  EXPECT_EQ(ms[0].doc.value_or(""), "Builds.");
  EXPECT_EQ(ms[1].render(), "static java.util.Map<String, List<T>> group(T[] xs, int... ys)");
  EXPECT_EQ(ms[1].key(), "p.A#group(T[],int...)");
  EXPECT_TRUE(ms[1].has_modifier("public"));
  EXPECT_EQ(ms[2].render(), "void none()");
}

TEST(Corpus, NestedTypesFollowOuter) {
  const auto f = parse_source(
      "package p; class Out { interface I { int f(); } enum E { A, B; void g() {} } class In { In() {} } void h() {} }",
      "p/Out.java");
  ASSERT_EQ(f.classes.size(), 4u);
  EXPECT_EQ(f.classes[0].fully_qualified_name, "p.Out");
  EXPECT_EQ(f.classes[1].fully_qualified_name, "p.Out.I");
  EXPECT_EQ(f.classes[1].kind, TypeKind::Interface);
  EXPECT_EQ(f.classes[2].kind, TypeKind::Enum);
  EXPECT_EQ(f.classes[3].simple_name(), "In");
  EXPECT_EQ(f.classes[0].methods.size(), 1u);
}

TEST(Corpus, TypeKindStrings) {
  for (auto k : {TypeKind::Class, TypeKind::Interface, TypeKind::Enum})
    EXPECT_EQ(type_kind_from_string(to_string(k)), k);
  EXPECT_ANY_THROW(type_kind_from_string("struct"));
}

TEST(Corpus, SequentialBlocksGetOrdinals) {
  const auto f = analyze_source(
      "class T { void t() {\n"
      "  TestBegin(\"one\");\n  a();\n  TestEnd();\n"
      "  TestBegin(\"two\");\n  b(); c();\n  TestEnd();\n"
      "} }",
      "T.java");
  ASSERT_EQ(f.blocks.size(), 2u);
  EXPECT_EQ(f.blocks[0].block_id, "T.java::0");
  EXPECT_EQ(f.blocks[1].block_id, "T.java::1");
  EXPECT_EQ(f.blocks[1].tcbd, "two");
  EXPECT_EQ(f.blocks[1].body, "TestBegin(\"two\");\nb(); c();\nTestEnd();");
  EXPECT_EQ(f.blocks[1].line_count, 3);
  EXPECT_EQ(f.blocks[1].line, 5);
  EXPECT_EQ(f.blocks[0].owner_method, "T#t()");
}

TEST(Corpus, MalformedBlocksAreReported) {
  Diagnostics diag;
  const auto f = analyze_source(
      "class T {\n"
      " void a() { TestBegin(\"no end\"); x(); }\n"
      " void b() { TestBegin(\"outer\"); TestBegin(\"inner\"); y(); TestEnd(); TestEnd(); }\n"
      " void c() { TestBegin(\"branch\"); if (q()) { TestEnd(); } }\n"
      " void d() { TestBegin(descr); TestEnd(); }\n"
      " void e() { TestBegin(\"fine\"); z(); TestEnd(); }\n"
      "}",
      "T.java", {}, &diag);
  ASSERT_EQ(f.blocks.size(), 2u);
  EXPECT_EQ(f.blocks[0].tcbd, "inner");
  EXPECT_EQ(f.blocks[0].ordinal, 0);
  EXPECT_EQ(f.blocks[1].tcbd, "fine");
  EXPECT_EQ(f.blocks[1].ordinal, 1);
  EXPECT_EQ(diag.of_kind("malformed_block").size(), 4u);
}

TEST(Corpus, CustomDelimiters) {
  CorpusConventions conv{"StepBegin", "StepEnd"};
  const auto f = analyze_source("class T { void t() { StepBegin(\"s\"); go(); StepEnd(); TestBegin(\"x\"); } }", "T.java",
                                conv);
  ASSERT_EQ(f.blocks.size(), 1u);
  ASSERT_EQ(f.blocks[0].invocations.size(), 1u);
  EXPECT_EQ(f.blocks[0].invocations[0].simple_name, "go");
}

TEST(Corpus, InvocationEdgeCases) {
  EXPECT_EQ(names("a.b().c(d(e()));"), (std::vector<std::string>{"b", "c", "d", "e"}));
  EXPECT_EQ(names("// fake()\n/* other() */ String s = \"str()\"; real();"), (std::vector<std::string>{"real"}));
  EXPECT_EQ(names("new Foo(1).bar(); new a.b.Baz();"), (std::vector<std::string>{"bar"}));
  EXPECT_EQ(names("if (x()) { while (y()) {} } return z();"), (std::vector<std::string>{"x", "y", "z"}));
  EXPECT_EQ(names("int f(int a) { return g(a); }"), (std::vector<std::string>{"g"}));
  EXPECT_EQ(names("@Check(1) void m() {} list.forEach(x -> h(x)); Stream.<String>of();"),
            (std::vector<std::string>{"forEach", "h", "of"}));
  EXPECT_EQ(names("TestBegin(\"a\"); TestEnd();"), std::vector<std::string>{});
  EXPECT_EQ(names(""), std::vector<std::string>{});
}

TEST(Corpus, ConstructorSwitch) {
  InvocationOptions with;
  with.constructors = true;
  const std::string src = "new Foo(1).bar(); new a.b.Baz(); new java.util.ArrayList<String>(); int[] xs = new int[3]; new @A Qux();";
  EXPECT_EQ(invocation_names(src, with), (std::vector<std::string>{"ArrayList", "Baz", "Foo", "Qux", "bar"}));
  EXPECT_EQ(invocation_names(src), (std::vector<std::string>{"bar"}));
}

TEST(Corpus, InvocationReceivers) {
  const auto refs = extract_invocations("dev.reset(); Registry.getInstance().lookup(id); reset();");
  ASSERT_EQ(refs.size(), 4u);
  EXPECT_EQ(refs[0].simple_name, "reset");
  EXPECT_EQ(refs[0].receiver, "dev");
  EXPECT_EQ(refs[1].receiver, "Registry");
  EXPECT_EQ(refs[3].simple_name, "reset");
  EXPECT_EQ(refs[3].receiver, "");
}

TEST(Corpus, InvocationsAgreeWithOracleOnFixtureBodies) {
  const auto scan = scan_repository(corpus_dir());
  std::size_t compared = 0;
  for (const auto& f : scan.files) {
    for (const auto& mb : f.bodies) {
      const auto body = std::string_view(f.raw_text).substr(mb.begin, mb.end - mb.begin);
      EXPECT_EQ(invocation_names(body), oracle_invocation_names(body)) << f.path << " @" << mb.begin;
      ++compared;
    }
    for (const auto& b : f.blocks) EXPECT_EQ(invocation_names(b.body), oracle_invocation_names(b.body)) << b.block_id;
  }
  EXPECT_GT(compared, 100u);
}

TEST(Corpus, InvocationsAgreeWithOracleOnRandomStatements) {
  const std::vector<std::string> pieces = {
      "a.", "foo(", "bar(", ")", "(", "new ", "Baz(", "int ", "x ", "= ", "; ", "\"q(\" ", "'(' ", "// c()\n",
      "/* d() */ ", "return ", "if ", "{ ", "} ", "y.", "get(", ", ", "this.", "z -> ", "@Ann(", "String ", "[] ",
      "1 ", "void ", "\n"};
  std::mt19937 rng(1234);
  for (int round = 0; round < 2000; ++round) {
    std::string s;
    const int len = 1 + static_cast<int>(rng() % 25);
    for (int i = 0; i < len; ++i) s += pieces[rng() % pieces.size()];
    ASSERT_EQ(invocation_names(s), oracle_invocation_names(s)) << s;
  }
}

TEST(Corpus, ImportsParsed) {
  const auto f = parse_source("package a.b; import x.Y; import static x.Z.q; import x.w.*; import static x.V.*; class C {}",
                              "a/b/C.java");
  ASSERT_EQ(f.imports.size(), 4u);
  EXPECT_EQ(f.imports[0], (ImportDecl{"x.Y", false, false}));
  EXPECT_EQ(f.imports[1], (ImportDecl{"x.Z.q", true, false}));
  EXPECT_EQ(f.imports[2], (ImportDecl{"x.w", false, true}));
  EXPECT_EQ(f.imports[3], (ImportDecl{"x.V", true, true}));
}
