#include "tcg/ift_export.hpp"

#include <fstream>

#include "tcg/errors.hpp"

namespace tcg {

using nlohmann::json;

std::string render_full_text(std::string_view prompt, std::string_view completion) {
  std::string out(prompt);
  out += '\n';
  out += completion;
  out += "\n</s>";
  return out;
}

IftRecord make_ift_record(const PromptBundle& bundle, std::string_view estimator_id) {
  if (!bundle.reference_body) throw ConfigError("training records need an existing block as the target");
  IftRecord rec;
  rec.block_id = bundle.block_id;
  rec.prompt = "<s>" + bundle.rendered;
  rec.completion = *bundle.reference_body;
  rec.full_text = render_full_text(rec.prompt, rec.completion);
  rec.token_estimate = estimate_tokens(rec.full_text, estimator_id);
  return rec;
}

json to_json(const IftRecord& record) {
  return json{{"block_id", record.block_id},
              {"prompt", record.prompt},
              {"completion", record.completion},
              {"text", record.full_text},
              {"token_estimate", record.token_estimate}};
}

void IftTrainConfig::validate() const {
  if (task_type.empty()) throw ConfigError("task_type must not be empty");
  if (r <= 0) throw ConfigError("r must be positive");
  if (!(lora_alpha > 0)) throw ConfigError("lora_alpha must be positive");
  if (!(lora_dropout >= 0 && lora_dropout < 1)) throw ConfigError("lora_dropout must be in [0, 1)");
  if (bias != "none" && bias != "all" && bias != "lora_only")
    throw ConfigError("bias must be none, all or lora_only");
  if (context_length <= 0) throw ConfigError("context_length must be positive");
  if (base_model.empty()) throw ConfigError("base_model must not be empty");
}

json IftTrainConfig::to_json() const {
  return json{{"task_type", task_type}, {"r", r},       {"lora_alpha", lora_alpha},        {"lora_dropout", lora_dropout},
              {"bias", bias},           {"context_length", context_length}, {"base_model", base_model}};
}

IftTrainConfig IftTrainConfig::from_json(const json& overrides) {
  IftTrainConfig c;
  if (overrides.is_null()) return c;
  if (!overrides.is_object()) throw ConfigError("train config overrides must be an object");
  try {
    for (const auto& [key, value] : overrides.items()) {
      if (key == "task_type") c.task_type = value.get<std::string>();
      else if (key == "r") c.r = value.get<int>();
      else if (key == "lora_alpha") c.lora_alpha = value.get<double>();
      else if (key == "lora_dropout") c.lora_dropout = value.get<double>();
      else if (key == "bias") c.bias = value.get<std::string>();
      else if (key == "context_length") c.context_length = value.get<int>();
      else if (key == "base_model") c.base_model = value.get<std::string>();
      else throw ConfigError("unknown train config key '" + key + "'");
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad train config value: ") + e.what());
  }
  c.validate();
  return c;
}

ExportSummary export_dataset(const CodeGraph& graph, const VectorIndex& index, Split split, std::uint64_t seed,
                             const PromptOptions& prompt_options, std::size_t context_length,
                             const std::filesystem::path& out_path) {
  if (split == Split::Test) throw ConfigError("refusing to export the test split for training");
  if (split == Split::All) throw ConfigError("export needs the train or validation split, not all blocks");
  if (out_path.has_parent_path()) std::filesystem::create_directories(out_path.parent_path());
  std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write " + out_path.string());

  ExportSummary summary;
  for (const TestCodeBlock* b : select_split(graph, split, seed)) {
    IftRecord rec;
    try {
      rec = make_ift_record(build_prompt(PromptRequest::for_block(b->block_id), graph, index, nullptr, prompt_options),
                            prompt_options.budget.estimator_id);
    } catch (const BudgetError&) {
      ++summary.skipped_over_length;
      summary.skipped_ids.push_back(b->block_id);
      continue;
    }
    if (rec.token_estimate > context_length) {
      ++summary.skipped_over_length;
      summary.skipped_ids.push_back(b->block_id);
      continue;
    }
    out << to_json(rec).dump() << '\n';
    ++summary.written;
  }
  return summary;
}

void write_train_config(const IftTrainConfig& config, const std::filesystem::path& out_path) {
  config.validate();
  if (out_path.has_parent_path()) std::filesystem::create_directories(out_path.parent_path());
  std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write " + out_path.string());
  out << config.to_json().dump(2) << '\n';
}

}  // namespace tcg
