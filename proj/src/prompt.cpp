#include "tcg/prompt.hpp"

#include <cctype>

#include "tcg/errors.hpp"

namespace tcg {

namespace {

std::size_t code_points(std::string_view text) {
  std::size_t n = 0;
  for (unsigned char c : text)
    if ((c & 0xC0) != 0x80) ++n;
  return n;
}

std::size_t whitespace_words(std::string_view text) {
  std::size_t n = 0;
  bool in_word = false;
  for (unsigned char c : text) {
    const bool space = std::isspace(c) != 0;
    if (!space && !in_word) ++n;
    in_word = !space;
  }
  return n;
}

}  // namespace

TokenEstimator token_estimator(std::string_view estimator_id) {
  if (estimator_id == "chars/4") return [](std::string_view t) { return (code_points(t) + 3) / 4; };
  if (estimator_id == "words") return [](std::string_view t) { return whitespace_words(t); };
  throw ConfigError("unknown token estimator '" + std::string(estimator_id) + "'");
}

std::size_t estimate_tokens(std::string_view text, std::string_view estimator_id) {
  return token_estimator(estimator_id)(text);
}

std::string render_methods_section(const std::vector<ScopeEntry>& scope) {
  std::string out = "<methods>\n";
  for (const auto& entry : scope) {
    out += "Class Name: \t" + entry.class_fqn + "\n";
    out += "Method Names:";
    for (const auto& m : entry.methods) out += "\t" + m.render() + "\n";
    if (entry.methods.empty()) out += "\n";
  }
  out += "</methods>";
  return out;
}

std::string render_prompt(std::string_view instruction, std::string_view methods_section,
                          const std::vector<Exemplar>& exemplars, std::string_view target_tcbd) {
  std::string out = "[INST] ";
  out += instruction;
  out += '\n';
  out += methods_section;
  out += '\n';
  for (std::size_t i = 0; i < exemplars.size(); ++i) {
    const std::string n = std::to_string(i + 2);
    out += "<test_description_" + n + ">\n\"" + exemplars[i].tcbd + "\"\n</test_description_" + n + ">\n";
    out += "<code_block_" + n + ">\n" + exemplars[i].body + "\n</code_block_" + n + ">\n";
  }
  out += kTargetLead;
  out += "\n<test_description_1>\n\"";
  out += target_tcbd;
  out += "\"\n</test_description_1>\n[/INST]";
  return out;
}

PromptBundle build_prompt(const PromptRequest& request, const CodeGraph& graph, const VectorIndex& index,
                          Embedder* query_embedder, const PromptOptions& options) {
  if (options.budget.max_tokens == 0) throw BudgetError("token budget must be positive");
  const TokenEstimator estimate = token_estimator(options.budget.estimator_id);

  PromptBundle bundle;
  bundle.instruction = options.instruction;
  std::vector<ScopeEntry> scope;
  EmbeddingVector query;
  std::set<std::string, std::less<>> exclude;

  if (!request.block_id.empty()) {
    const TestCodeBlock* block = graph.find_block(request.block_id);
    if (!block) throw NotFoundError("unknown block id: " + request.block_id);
    scope = methods_in_scope(request.block_id, graph);
    bundle.block_id = block->block_id;
    bundle.file_path = block->path;
    bundle.owner_class = block->owner_class;
    bundle.target_tcbd = block->tcbd;
    bundle.reference_body = block->body;
    exclude = leakage_exclusions(index, block->block_id);
    if (const IndexEntry* entry = index.find(block->block_id)) {
      query = entry->vector;
    } else if (query_embedder) {
      query = query_embedder->embed({block->tcbd}).at(0);
    } else {
      throw NotFoundError("block " + request.block_id + " is not in the index");
    }
  } else {
    scope = methods_in_scope_for_file(request.file_path, graph, request.owner_class);
    bundle.file_path = request.file_path;
    bundle.owner_class = scope.front().class_fqn;
    bundle.target_tcbd = request.tcbd;
    if (!query_embedder) throw ConfigError("an embedder is required to retrieve exemplars for a new test step");
    if (!index.entries.empty()) query = query_embedder->embed({request.tcbd}).at(0);
  }

  if (!index.entries.empty()) {
    for (const auto& hit : top_k(index, query, options.exemplar_count, exclude)) {
      const TestCodeBlock* b = graph.find_block(hit.block_id);
      if (!b) throw NotFoundError("index entry " + hit.block_id + " is not in the graph");
      bundle.exemplars.push_back({b->block_id, b->tcbd, b->body, hit.score});
    }
  }

  auto render = [&] {
    bundle.methods_section = render_methods_section(scope);
    bundle.rendered = render_prompt(bundle.instruction, bundle.methods_section, bundle.exemplars, bundle.target_tcbd);
    bundle.token_estimate = estimate(bundle.rendered);
  };
  render();
  while (bundle.token_estimate > options.budget.max_tokens && scope.size() > 1) {
    scope.pop_back();
    ++bundle.truncation.dropped_stanzas;
    render();
  }
  while (bundle.token_estimate > options.budget.max_tokens && !bundle.exemplars.empty()) {
    bundle.exemplars.pop_back();
    ++bundle.truncation.dropped_exemplars;
    render();
  }
  if (bundle.token_estimate > options.budget.max_tokens) {
    throw BudgetError("prompt for '" + bundle.target_tcbd + "' needs " + std::to_string(bundle.token_estimate) +
                      " tokens with only the owning class and target; budget is " +
                      std::to_string(options.budget.max_tokens));
  }
  return bundle;
}

nlohmann::json to_json(const PromptBundle& bundle) {
  nlohmann::json ex = nlohmann::json::array();
  for (const auto& e : bundle.exemplars)
    ex.push_back({{"block_id", e.block_id}, {"tcbd", e.tcbd}, {"body", e.body}, {"score", e.score}});
  return {{"block_id", bundle.block_id},
          {"file_path", bundle.file_path},
          {"owner_class", bundle.owner_class},
          {"instruction", bundle.instruction},
          {"methods_section", bundle.methods_section},
          {"exemplars", ex},
          {"target_tcbd", bundle.target_tcbd},
          {"rendered", bundle.rendered},
          {"token_estimate", bundle.token_estimate},
          {"truncation",
           {{"dropped_stanzas", bundle.truncation.dropped_stanzas},
            {"dropped_exemplars", bundle.truncation.dropped_exemplars}}}};
}

}  // namespace tcg
