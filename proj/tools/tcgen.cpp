// tcgen: code-graph RAG test-code generation pipeline.

#include <iostream>

#include <CLI11.hpp>

#include "tcg/errors.hpp"
#include "tcg/pipeline.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Generate test code blocks from test descriptions using a code graph and retrieved exemplars"};
  app.require_subcommand(1);

  std::string config_path = "tcgen.json";
  bool verbose = false;
  app.add_option("--config", config_path, "Pipeline config file (JSON)");
  app.add_flag("--verbose", verbose, "Print diagnostics and retry logs to stderr");

  auto* analyze = app.add_subcommand("analyze", "Scan the repositories and write the code graph");
  auto* index = app.add_subcommand("index", "Embed every test description and write the vector index");

  auto* generate = app.add_subcommand("generate", "Generate code for one block or a new test description");
  tcg::GenerateArgs gen;
  std::string block_id, tcbd, file, owner;
  auto* opt_block = generate->add_option("--block-id", block_id, "Existing block (path::ordinal)");
  auto* opt_tcbd = generate->add_option("--tcbd", tcbd, "Test description of a new step");
  auto* opt_file = generate->add_option("--file", file, "Corpus-relative file the new step belongs to");
  auto* opt_owner = generate->add_option("--class", owner, "Owning class (default: the file's first class)");
  generate->add_flag("--show-prompt", gen.show_prompt, "Print the prompt before the code");
  opt_block->excludes(opt_tcbd)->excludes(opt_file);
  opt_tcbd->needs(opt_file);
  opt_file->needs(opt_tcbd);
  opt_owner->needs(opt_file);

  auto* evaluate = app.add_subcommand("evaluate", "Generate and score a split; writes report files");
  std::string eval_split = "test", label, base_url, mode;
  evaluate->add_option("--split", eval_split, "train, validation, test or all")->capture_default_str();
  auto* opt_label = evaluate->add_option("--label", label, "Approach name in the table");
  auto* opt_url = evaluate->add_option("--base-url", base_url, "Override llm.base_url");
  auto* opt_mode = evaluate->add_option("--matching-mode", mode, "simple_name or qualified");

  auto* export_ift = app.add_subcommand("export-ift", "Write the fine-tuning dataset and train config");
  std::string export_split = "train";
  export_ift->add_option("--split", export_split, "train or validation")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  tcg::CommandContext ctx{std::cout, std::cerr, verbose};
  tcg::PipelineConfig config;
  try {
    config = tcg::load_config(config_path);
    if (*opt_url) config.llm.base_url = base_url;
    if (*opt_mode) config.matching_mode = tcg::matching_mode_from_string(mode);
  } catch (const tcg::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return tcg::kExitUserError;
  }

  try {
    if (analyze->parsed()) return tcg::cmd_analyze(config, ctx);
    if (index->parsed()) return tcg::cmd_index(config, ctx);
    if (generate->parsed()) {
      if (*opt_block) gen.block_id = block_id;
      if (*opt_tcbd) gen.tcbd = tcbd;
      if (*opt_file) gen.file = file;
      if (*opt_owner) gen.owner_class = owner;
      return tcg::cmd_generate(config, gen, ctx);
    }
    if (evaluate->parsed()) {
      tcg::EvaluateArgs args;
      args.split = tcg::split_from_string(eval_split);
      if (*opt_label) args.label = label;
      return tcg::cmd_evaluate(config, args, ctx);
    }
    if (export_ift->parsed()) {
      tcg::ExportArgs args;
      args.split = tcg::split_from_string(export_split);
      return tcg::cmd_export_ift(config, args, ctx);
    }
  } catch (const tcg::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return tcg::kExitUserError;
  }
  return tcg::kExitUserError;
}
