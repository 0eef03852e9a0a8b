#include <gtest/gtest.h>

#include <cstdlib>

#include "oracles.hpp"
#include "tcg/errors.hpp"
#include "tcg/prompt.hpp"
#include "test_support.hpp"

using namespace tcg;
using namespace tcg::testing;

namespace {

struct Corpus {
  CodeGraph graph;
  VectorIndex index;
};

Corpus load(const std::filesystem::path& root) {
  Corpus c;
  c.graph = build_graph(scan_repository(root).files);
  c.index = build_lexical_index(c.graph.blocks());
  return c;
}

const Corpus& fixture() {
  static const Corpus c = load(corpus_dir());
  return c;
}

// Set TCG_UPDATE_GOLDEN=1 to rewrite a golden file instead of comparing.
void expect_golden(const std::string& name, const std::string& actual) {
  const auto path = fixture_dir() / "golden" / name;
  if (std::getenv("TCG_UPDATE_GOLDEN")) {
    write_file(path, actual);
    GTEST_SKIP() << "rewrote " << path;
  }
  EXPECT_EQ(actual, read_file(path)) << "golden mismatch: " << path;
}

}  // namespace

TEST(Prompt, TokenEstimators) {
  EXPECT_EQ(estimate_tokens(""), 0u);
  EXPECT_EQ(estimate_tokens("abcd"), 1u);
  EXPECT_EQ(estimate_tokens("abcde"), 2u);
  EXPECT_EQ(estimate_tokens("\xc2\xb5\xc2\xb5\xc2\xb5\xc2\xb5"), 1u);  // code points, not bytes
  EXPECT_EQ(estimate_tokens("two  words\nthree", "words"), 3u);
  EXPECT_THROW(token_estimator("bpe"), ConfigError);
}

TEST(Prompt, MethodsSectionLayout) {
  std::vector<ScopeEntry> scope(2);
  scope[0].class_fqn = "a.Owner";
  MethodSig m1;
  m1.name = "run";
  m1.return_type = "void";
  MethodSig m2;
  m2.name = "count";
  m2.return_type = "int";
  m2.params = {{"String", "id"}};
  scope[0].methods = {m1, m2};
  scope[1].class_fqn = "b.Empty";
  EXPECT_EQ(render_methods_section(scope),
            "<methods>\n"
            "Class Name: \ta.Owner\n"
            "Method Names:\tvoid run()\n"
            "\tint count(String id)\n"
            "Class Name: \tb.Empty\n"
            "Method Names:\n"
            "</methods>");
}

TEST(Prompt, RenderNumbersExemplarsFromTwo) {
  const std::vector<Exemplar> ex = {{"x::0", "first", "TestBegin(\"first\");\nTestEnd();", 0.9},
                                    {"y::0", "second", "TestBegin(\"second\");\nTestEnd();", 0.5}};
  const auto text = render_prompt("Do it", "<methods>\n</methods>", ex, "target");
  EXPECT_EQ(text,
            "[INST] Do it\n"
            "<methods>\n</methods>\n"
            "<test_description_2>\n\"first\"\n</test_description_2>\n"
            "<code_block_2>\nTestBegin(\"first\");\nTestEnd();\n</code_block_2>\n"
            "<test_description_3>\n\"second\"\n</test_description_3>\n"
            "<code_block_3>\nTestBegin(\"second\");\nTestEnd();\n</code_block_3>\n"
            "Write code for the below test description.\n"
            "<test_description_1>\n\"target\"\n</test_description_1>\n"
            "[/INST]");
  EXPECT_FALSE(scan_prompt_tags(text).has_value());
}

TEST(Prompt, GoldenPromptForFixtureBlock) {
  const auto& c = fixture();
  const auto bundle =
      build_prompt(PromptRequest::for_block("com/acme/tests/cell/CellSetupTest.java::0"), c.graph, c.index, nullptr);
  EXPECT_EQ(bundle.exemplars.size(), 2u);
  EXPECT_FALSE(bundle.truncation.truncated());
  EXPECT_EQ(bundle.token_estimate, estimate_tokens(bundle.rendered));
  ASSERT_TRUE(bundle.reference_body.has_value());
  EXPECT_EQ(bundle.rendered.find(*bundle.reference_body), std::string::npos);
  expect_golden("prompt_CellSetupTest_0.txt", bundle.rendered);
}

TEST(Prompt, EveryFixturePromptConforms) {
  const auto& c = fixture();
  for (const auto* b : c.graph.blocks()) {
    const auto bundle = build_prompt(PromptRequest::for_block(b->block_id), c.graph, c.index, nullptr);
    const auto problem = scan_prompt_tags(bundle.rendered);
    EXPECT_FALSE(problem.has_value()) << b->block_id << ": " << problem.value_or("");
    EXPECT_LE(bundle.token_estimate, 10000u);
    EXPECT_EQ(bundle.exemplars.size(), 2u) << b->block_id;
    const auto excluded = leakage_exclusions(c.index, b->block_id);
    for (const auto& e : bundle.exemplars) {
      EXPECT_FALSE(excluded.contains(e.block_id)) << b->block_id;
      EXPECT_NE(e.tcbd, b->tcbd);
    }
    EXPECT_NE(bundle.rendered.find("Class Name: \t" + b->owner_class + "\n"), std::string::npos);
    EXPECT_NE(bundle.rendered.find("<test_description_1>\n\"" + b->tcbd + "\"\n"), std::string::npos);
  }
}

TEST(Prompt, OversizeFixtureTruncatesImportsFirst) {
  const auto c = load(fixture_dir() / "oversize");
  const auto bundle = build_prompt(PromptRequest::for_block("com/big/tests/OversizeTest.java::0"), c.graph, c.index, nullptr);
  EXPECT_TRUE(bundle.truncation.truncated());
  EXPECT_GT(bundle.truncation.dropped_stanzas, 0u);
  EXPECT_EQ(bundle.truncation.dropped_exemplars, 0u);
  EXPECT_LE(bundle.token_estimate, 10000u);
  EXPECT_NE(bundle.methods_section.find("Class Name: \tcom.big.tests.OversizeTest\n"), std::string::npos);
  EXPECT_NE(bundle.rendered.find("\"Call the first huge operation\""), std::string::npos);
  EXPECT_FALSE(scan_prompt_tags(bundle.rendered).has_value());
  // stanzas go from the end of import order
  EXPECT_EQ(bundle.methods_section.find("com.big.Other5"), std::string::npos);
}

TEST(Prompt, ExemplarsDropAfterStanzas) {
  const auto c = load(fixture_dir() / "oversize");
  PromptOptions opt;
  const auto full = build_prompt(PromptRequest::for_block("com/big/tests/OversizeTest.java::2"), c.graph, c.index, nullptr,
                                 PromptOptions{opt.instruction, 2, {1'000'000, "chars/4"}});
  ASSERT_FALSE(full.truncation.truncated());
  // Budget that fits the owner and target only.
  const std::size_t owner_only = estimate_tokens(render_prompt(
      opt.instruction, render_methods_section({methods_in_scope("com/big/tests/OversizeTest.java::2", c.graph)[0]}), {},
      full.target_tcbd));
  const auto tight = build_prompt(PromptRequest::for_block("com/big/tests/OversizeTest.java::2"), c.graph, c.index,
                                  nullptr, PromptOptions{opt.instruction, 2, {owner_only, "chars/4"}});
  EXPECT_EQ(tight.truncation.dropped_exemplars, 2u);
  EXPECT_EQ(tight.truncation.dropped_stanzas, 6u);
  EXPECT_TRUE(tight.no_exemplars());
  EXPECT_EQ(tight.token_estimate, owner_only);
  EXPECT_THROW(build_prompt(PromptRequest::for_block("com/big/tests/OversizeTest.java::2"), c.graph, c.index, nullptr,
                            PromptOptions{opt.instruction, 2, {owner_only - 1, "chars/4"}}),
               BudgetError);
}

TEST(Prompt, ZeroBudgetIsAnError) {
  const auto& c = fixture();
  PromptOptions opt;
  opt.budget.max_tokens = 0;
  EXPECT_THROW(build_prompt(PromptRequest::for_block("com/acme/tests/cell/CellSetupTest.java::0"), c.graph, c.index,
                            nullptr, opt),
               BudgetError);
}

TEST(Prompt, SingleBlockCorpusHasNoExemplars) {
  TempDir tmp;
  write_file(tmp / "p/OnlyTest.java",
             "package p;\npublic class OnlyTest {\n  void t() {\n    TestBegin(\"lonely\");\n    go();\n    TestEnd();\n  "
             "}\n  void go() {}\n}\n");
  const auto c = load(tmp.path());
  const auto bundle = build_prompt(PromptRequest::for_block("p/OnlyTest.java::0"), c.graph, c.index, nullptr);
  EXPECT_TRUE(bundle.no_exemplars());
  EXPECT_FALSE(scan_prompt_tags(bundle.rendered).has_value());
  EXPECT_EQ(bundle.rendered.find("<code_block_"), std::string::npos);
}

TEST(Prompt, NewTestStepUsesFileScope) {
  const auto& c = fixture();
  auto embedder = c.index.query_embedder();
  const auto bundle = build_prompt(PromptRequest::for_step("Check that we reset the device", "com/acme/tests/cell/CellSetupTest.java"),
                                   c.graph, c.index, embedder.get());
  EXPECT_TRUE(bundle.block_id.empty());
  EXPECT_FALSE(bundle.reference_body.has_value());
  EXPECT_EQ(bundle.owner_class, "com.acme.tests.cell.CellSetupTest");
  EXPECT_EQ(bundle.exemplars.size(), 2u);
  EXPECT_FALSE(scan_prompt_tags(bundle.rendered).has_value());
  EXPECT_THROW(build_prompt(PromptRequest::for_step("x", "no/Such.java"), c.graph, c.index, embedder.get()), NotFoundError);
  EXPECT_THROW(build_prompt(PromptRequest::for_block("no::0"), c.graph, c.index, nullptr), NotFoundError);
}

TEST(Prompt, JsonFormOmitsReference) {
  const auto& c = fixture();
  const auto bundle =
      build_prompt(PromptRequest::for_block("com/acme/tests/cell/CellSetupTest.java::0"), c.graph, c.index, nullptr);
  const auto j = to_json(bundle);
  EXPECT_FALSE(j.contains("reference_body"));
  EXPECT_EQ(j.at("rendered"), bundle.rendered);
  EXPECT_EQ(j.at("exemplars").size(), 2u);
}

TEST(PromptScanner, RejectsBrokenLayouts) {
  const std::string good = render_prompt("I", "<methods>\n</methods>", {}, "t");
  EXPECT_FALSE(scan_prompt_tags(good).has_value());
  std::string swapped = good;
  swapped.replace(swapped.find("<methods>"), 9, "<method>");
  EXPECT_TRUE(scan_prompt_tags(swapped).has_value());
  EXPECT_TRUE(scan_prompt_tags(good.substr(0, good.size() - 1)).has_value());
  const auto with_ex = render_prompt("I", "<methods>\n</methods>", {{"a", "d", "b", 0}}, "t");
  std::string misnumbered = with_ex;
  misnumbered.replace(misnumbered.find("<code_block_2>"), 14, "<code_block_3>");
  EXPECT_TRUE(scan_prompt_tags(misnumbered).has_value());
}
