#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "tcg/code_graph.hpp"
#include "tcg/embedding.hpp"

namespace tcg {

inline constexpr std::string_view kDefaultInstruction =
    "You are an expert 5G network trace and test engineer and you are a Java programming expert. "
    "You are given a list of methods and example code blocks. "
    "Your task is to write a Java code block for a given test description";

inline constexpr std::string_view kTargetLead = "Write code for the below test description.";

using TokenEstimator = std::function<std::size_t(std::string_view)>;

// "chars/4" (default): ceil(code points / 4). "words": whitespace-separated runs.
TokenEstimator token_estimator(std::string_view estimator_id);
std::size_t estimate_tokens(std::string_view text, std::string_view estimator_id = "chars/4");

struct PromptBudget {
  std::size_t max_tokens = 10000;
  std::string estimator_id = "chars/4";
};

struct Exemplar {
  std::string block_id;
  std::string tcbd;
  std::string body;
  double score = 0.0;

  bool operator==(const Exemplar&) const = default;
};

struct TruncationRecord {
  std::size_t dropped_stanzas = 0;   // imported classes removed, from the end of import order
  std::size_t dropped_exemplars = 0;

  bool truncated() const noexcept { return dropped_stanzas + dropped_exemplars > 0; }
  bool operator==(const TruncationRecord&) const = default;
};

struct PromptBundle {
  std::string instruction;
  std::string methods_section;  // "<methods>" ... "</methods>"
  std::vector<Exemplar> exemplars;
  std::string target_tcbd;
  std::string rendered;  // "[INST] ... [/INST]"
  std::size_t token_estimate = 0;
  TruncationRecord truncation;

  std::string block_id;   // empty for a new test step
  std::string file_path;
  std::string owner_class;
  // Ground truth when the target is an existing block. Never rendered; only
  // the mock backends read it.
  std::optional<std::string> reference_body;

  bool no_exemplars() const noexcept { return exemplars.empty(); }
};

struct PromptOptions {
  std::string instruction = std::string(kDefaultInstruction);
  std::size_t exemplar_count = 2;
  PromptBudget budget;
};

// One "Class Name:" / "Method Names:" stanza per scope entry; the first
// signature sits on the "Method Names:" line, the rest follow one per line.
std::string render_methods_section(const std::vector<ScopeEntry>& scope);

// Assembles the template. Exemplars are numbered from 2, the target is 1.
std::string render_prompt(std::string_view instruction, std::string_view methods_section,
                          const std::vector<Exemplar>& exemplars, std::string_view target_tcbd);

struct PromptRequest {
  // Existing block: scope, query vector and leakage exclusion come from it.
  std::string block_id;
  // New test step: description plus the file the code will live in.
  std::string tcbd;
  std::string file_path;
  std::string owner_class;  // optional; defaults to the file's first class

  static PromptRequest for_block(std::string id) { return {std::move(id), {}, {}, {}}; }
  static PromptRequest for_step(std::string tcbd, std::string file, std::string owner = {}) {
    return {{}, std::move(tcbd), std::move(file), std::move(owner)};
  }
};

// Retrieval + scoping + rendering under the budget. Over budget, imported
// stanzas are dropped from the end first, then exemplar 3, then exemplar 2;
// the owning class and target are never cut (BudgetError instead).
// `query_embedder` is needed only for new test steps.
PromptBundle build_prompt(const PromptRequest& request, const CodeGraph& graph, const VectorIndex& index,
                          Embedder* query_embedder, const PromptOptions& options = {});

// Inspection form; reference_body is left out.
nlohmann::json to_json(const PromptBundle& bundle);

}  // namespace tcg
