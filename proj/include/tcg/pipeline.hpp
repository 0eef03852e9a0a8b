#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tcg/corpus.hpp"
#include "tcg/embedding.hpp"
#include "tcg/evaluator.hpp"
#include "tcg/ift_export.hpp"
#include "tcg/llm_gateway.hpp"
#include "tcg/prompt.hpp"

namespace tcg {

enum class EmbedderKind { Lexical, External };

struct PipelineConfig {
  std::vector<std::filesystem::path> repo_roots;
  CorpusConventions delimiters;
  std::filesystem::path graph_path = "out/graph.json";
  std::filesystem::path index_path = "out/index.json";
  std::filesystem::path report_dir = "out/reports";
  std::filesystem::path dataset_dir = "out/dataset";
  PromptOptions prompt;  // budget, retrieval k, instruction
  LlmEndpointConfig llm;
  EmbedderKind embedder = EmbedderKind::Lexical;
  EmbeddingServiceConfig embedding_service;
  bool embed_code = true;
  std::uint64_t split_seed = 0;
  MatchingMode matching_mode = MatchingMode::SimpleName;
  bool count_constructors = false;
  nlohmann::json train_overrides;  // merged onto the LoRA defaults
};

// Relative paths resolve against `base_dir` (the config file's directory).
// Secrets are refused: any "api_key" field is a ConfigError.
PipelineConfig parse_config(const nlohmann::json& doc, const std::filesystem::path& base_dir);
PipelineConfig load_config(const std::filesystem::path& path);

enum ExitCode : int { kExitOk = 0, kExitUserError = 1, kExitPartial = 2 };

// Output streams and test hooks shared by the commands.
struct CommandContext {
  std::ostream& out;
  std::ostream& err;
  bool verbose = false;
  std::shared_ptr<HttpTransport> transport;  // null: httplib
  Sleeper sleeper = real_sleeper();
};

struct GenerateArgs {
  std::optional<std::string> block_id;
  std::optional<std::string> tcbd;
  std::optional<std::string> file;
  std::optional<std::string> owner_class;
  bool show_prompt = false;
};

struct EvaluateArgs {
  Split split = Split::Test;
  std::optional<std::string> label;
};

struct ExportArgs {
  Split split = Split::Train;
};

// Each command returns an ExitCode and reports errors on ctx.err.
int cmd_analyze(const PipelineConfig& config, CommandContext& ctx);
int cmd_index(const PipelineConfig& config, CommandContext& ctx);
int cmd_generate(const PipelineConfig& config, const GenerateArgs& args, CommandContext& ctx);
int cmd_evaluate(const PipelineConfig& config, const EvaluateArgs& args, CommandContext& ctx);
int cmd_export_ift(const PipelineConfig& config, const ExportArgs& args, CommandContext& ctx);

// Dataset and train-config file names under dataset_dir.
std::filesystem::path dataset_file(const PipelineConfig& config, Split split);
std::filesystem::path train_config_file(const PipelineConfig& config);

}  // namespace tcg
