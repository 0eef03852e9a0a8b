#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "tcg/code_graph.hpp"
#include "tcg/embedding.hpp"
#include "tcg/llm_gateway.hpp"
#include "tcg/prompt.hpp"

namespace tcg {

enum class MatchingMode { SimpleName, Qualified };

std::string to_string(MatchingMode mode);
MatchingMode matching_mode_from_string(std::string_view s);

struct EvalResult {
  std::string block_id;
  std::size_t tp = 0, fp = 0, fn = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::vector<std::string> ground_truth;  // sorted method sets
  std::vector<std::string> generated;
};

// Set metrics. An empty side counts as perfect only when the other side is
// empty too: precision = 1 when nothing was generated and nothing missed.
EvalResult compare_method_sets(std::string block_id, const std::set<std::string>& ground_truth,
                               const std::set<std::string>& generated);

// Where qualified names are resolved: the target block's file and class.
struct ResolutionContext {
  const CodeGraph* graph = nullptr;
  std::string path;
  std::string owner_class;
};

// Invoked-method set of a code body. Qualified mode resolves each call
// through `context` and keys it "FQN.name"; unresolved calls keep their
// simple name.
std::set<std::string> method_set(std::string_view body, MatchingMode mode, const ResolutionContext& context = {},
                                 const InvocationOptions& options = {});

EvalResult compute_block_f1(std::string block_id, std::string_view ground_truth_body, std::string_view generated_body,
                            MatchingMode mode = MatchingMode::SimpleName, const ResolutionContext& context = {},
                            const InvocationOptions& options = {});

inline constexpr std::size_t kHistogramBins = 10;

// [0.0,0.1), ..., [0.9,1.0]
std::size_t histogram_bin(double f1);

struct CorpusReport {
  std::string label;  // "Approach" column
  std::vector<EvalResult> per_block;
  double mean_f1 = 0.0;
  double sd_f1 = 0.0;  // population SD
  std::array<std::size_t, kHistogramBins> histogram{};
  bool partial = false;
  std::string error;
};

// Empty input gives a report with no blocks and zero statistics.
CorpusReport aggregate(std::vector<EvalResult> results, std::string label = {});

// "| Approach | F1 (Mean) | F1 (SD) |" rows with a footer naming the SD kind.
std::string render_table(const std::vector<CorpusReport>& reports);
// bin_low,bin_high,count
std::string render_histogram_csv(const CorpusReport& report);

enum class Split { Train, Validation, Test, All };

std::string to_string(Split split);
Split split_from_string(std::string_view s);

// FNV-1a 64-bit.
std::uint64_t fnv1a64(std::string_view bytes) noexcept;

// Bucket = fnv1a64(seed + ":" + block_id) % 100: <80 train, <90 validation,
// else test. Depends only on seed and id, so adding blocks never moves
// existing ones.
Split assign_split(std::string_view block_id, std::uint64_t seed);
std::vector<const TestCodeBlock*> select_split(const CodeGraph& graph, Split split, std::uint64_t seed);

struct EvaluationOptions {
  Split split = Split::Test;
  std::uint64_t seed = 0;
  MatchingMode mode = MatchingMode::SimpleName;
  PromptOptions prompt;
  std::string label = "Retrieval + code graph";
  CorpusConventions conventions;
  bool count_constructors = false;
};

struct BlockOutcome {
  EvalResult result;
  PromptBundle prompt;
  GenerationResult generation;
};

struct EvaluationRun {
  CorpusReport report;
  std::vector<BlockOutcome> outcomes;  // by block_id
  std::size_t requested = 0;
  // Blocks whose prompt could not be built (block_id, reason).
  std::vector<std::pair<std::string, std::string>> skipped;
  EvaluationOptions options;
};

// Prompts, generates and scores every block of the split with at most
// config.max_in_flight concurrent requests. A fatal gateway error stops new
// requests; finished blocks are kept and the report is marked partial.
EvaluationRun evaluate_corpus(const CodeGraph& graph, const VectorIndex& index, Embedder* query_embedder,
                              const LlmEndpointConfig& config, LlmBackend& backend, const EvaluationOptions& options,
                              const Sleeper& sleeper = real_sleeper());

// report.json, generations.jsonl, table.md, histogram.csv. Returns the paths.
std::vector<std::filesystem::path> write_report_files(const EvaluationRun& run, const std::filesystem::path& dir);

}  // namespace tcg
