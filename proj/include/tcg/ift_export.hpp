#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "tcg/code_graph.hpp"
#include "tcg/embedding.hpp"
#include "tcg/evaluator.hpp"
#include "tcg/prompt.hpp"

namespace tcg {

struct IftRecord {
  std::string block_id;
  std::string prompt;      // "<s>" + rendered prompt
  std::string completion;  // ground-truth body
  std::string full_text;   // prompt + "\n" + completion + "\n</s>"
  std::size_t token_estimate = 0;
};

std::string render_full_text(std::string_view prompt, std::string_view completion);
IftRecord make_ift_record(const PromptBundle& bundle, std::string_view estimator_id = "chars/4");
nlohmann::json to_json(const IftRecord& record);

struct IftTrainConfig {
  std::string task_type = "CAUSAL_LM";
  int r = 256;
  double lora_alpha = 512;
  double lora_dropout = 0.1;
  std::string bias = "none";
  int context_length = 10000;
  std::string base_model = "mistralai/Mixtral-8x7B-Instruct-v0.1";

  // Throws ConfigError on out-of-range values.
  void validate() const;
  nlohmann::json to_json() const;
  // Defaults overridden by the keys present; unknown keys are an error.
  static IftTrainConfig from_json(const nlohmann::json& overrides);
};

struct ExportSummary {
  std::size_t written = 0;
  std::size_t skipped_over_length = 0;
  std::vector<std::string> skipped_ids;
};

// One JSONL record per block of `split` (train or validation only; the test
// split is refused). Records longer than context_length are skipped and
// counted, never cut.
ExportSummary export_dataset(const CodeGraph& graph, const VectorIndex& index, Split split, std::uint64_t seed,
                             const PromptOptions& prompt_options, std::size_t context_length,
                             const std::filesystem::path& out_path);

void write_train_config(const IftTrainConfig& config, const std::filesystem::path& out_path);

}  // namespace tcg
