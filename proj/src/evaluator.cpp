#include "tcg/evaluator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "tcg/errors.hpp"

namespace tcg {

using nlohmann::json;

std::string to_string(MatchingMode mode) { return mode == MatchingMode::SimpleName ? "simple_name" : "qualified"; }

MatchingMode matching_mode_from_string(std::string_view s) {
  if (s == "simple_name") return MatchingMode::SimpleName;
  if (s == "qualified") return MatchingMode::Qualified;
  throw ConfigError("matching mode must be 'simple_name' or 'qualified', got '" + std::string(s) + "'");
}

EvalResult compare_method_sets(std::string block_id, const std::set<std::string>& ground_truth,
                               const std::set<std::string>& generated) {
  EvalResult r;
  r.block_id = std::move(block_id);
  for (const auto& m : generated) (ground_truth.contains(m) ? r.tp : r.fp)++;
  r.fn = ground_truth.size() - r.tp;
  r.precision = r.tp + r.fp == 0 ? (r.fn == 0 ? 1.0 : 0.0) : static_cast<double>(r.tp) / static_cast<double>(r.tp + r.fp);
  r.recall = r.tp + r.fn == 0 ? (r.fp == 0 ? 1.0 : 0.0) : static_cast<double>(r.tp) / static_cast<double>(r.tp + r.fn);
  r.f1 = r.precision + r.recall == 0.0 ? 0.0 : 2.0 * r.precision * r.recall / (r.precision + r.recall);
  r.ground_truth.assign(ground_truth.begin(), ground_truth.end());
  r.generated.assign(generated.begin(), generated.end());
  return r;
}

std::set<std::string> method_set(std::string_view body, MatchingMode mode, const ResolutionContext& context,
                                 const InvocationOptions& options) {
  std::set<std::string> out;
  if (mode == MatchingMode::SimpleName) {
    for (auto& n : invocation_names(body, options)) out.insert(std::move(n));
    return out;
  }
  if (!context.graph) throw ConfigError("qualified matching needs a code graph");
  for (const auto& ref : extract_invocations(body, options)) {
    const InvocationRef r = resolve_invocation(ref, context.path, context.owner_class, *context.graph);
    if (r.resolved_fqn.empty()) {
      out.insert(r.simple_name);
    } else {
      out.insert(r.resolved_fqn.substr(0, r.resolved_fqn.find('#')) + "." + r.simple_name);
    }
  }
  return out;
}

EvalResult compute_block_f1(std::string block_id, std::string_view ground_truth_body, std::string_view generated_body,
                            MatchingMode mode, const ResolutionContext& context, const InvocationOptions& options) {
  return compare_method_sets(std::move(block_id), method_set(ground_truth_body, mode, context, options),
                             method_set(generated_body, mode, context, options));
}

std::size_t histogram_bin(double f1) {
  if (!(f1 > 0.0)) return 0;
  const auto bin = static_cast<std::size_t>(std::floor(f1 * 10.0 + 1e-9));
  return std::min(bin, kHistogramBins - 1);
}

CorpusReport aggregate(std::vector<EvalResult> results, std::string label) {
  CorpusReport r;
  r.label = std::move(label);
  std::sort(results.begin(), results.end(), [](const auto& a, const auto& b) { return a.block_id < b.block_id; });
  r.per_block = std::move(results);
  if (r.per_block.empty()) return r;
  const double n = static_cast<double>(r.per_block.size());
  double sum = 0.0;
  for (const auto& e : r.per_block) {
    sum += e.f1;
    ++r.histogram[histogram_bin(e.f1)];
  }
  r.mean_f1 = sum / n;
  double sq = 0.0;
  for (const auto& e : r.per_block) sq += (e.f1 - r.mean_f1) * (e.f1 - r.mean_f1);
  r.sd_f1 = std::sqrt(sq / n);
  return r;
}

namespace {

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

}  // namespace

std::string render_table(const std::vector<CorpusReport>& reports) {
  std::string out = "| Approach | F1 (Mean) | F1 (SD) |\n|---|---|---|\n";
  for (const auto& r : reports) {
    out += "| " + r.label + (r.partial ? " (partial)" : "") + " | " + fixed(r.mean_f1, 2) + " | " + fixed(r.sd_f1, 2) +
           " |\n";
  }
  out += "\nF1 (SD) is the population standard deviation over";
  for (std::size_t i = 0; i < reports.size(); ++i)
    out += (i ? ", " : " ") + std::to_string(reports[i].per_block.size());
  out += reports.size() == 1 ? " blocks.\n" : " blocks respectively.\n";
  return out;
}

std::string render_histogram_csv(const CorpusReport& report) {
  std::string out = "bin_low,bin_high,count\n";
  for (std::size_t i = 0; i < kHistogramBins; ++i) {
    out += fixed(static_cast<double>(i) / 10.0, 1) + "," + fixed(static_cast<double>(i + 1) / 10.0, 1) + "," +
           std::to_string(report.histogram[i]) + "\n";
  }
  return out;
}

std::string to_string(Split split) {
  switch (split) {
    case Split::Train: return "train";
    case Split::Validation: return "validation";
    case Split::Test: return "test";
    case Split::All: return "all";
  }
  return "all";
}

Split split_from_string(std::string_view s) {
  if (s == "train") return Split::Train;
  if (s == "validation") return Split::Validation;
  if (s == "test") return Split::Test;
  if (s == "all") return Split::All;
  throw ConfigError("split must be train, validation, test or all, got '" + std::string(s) + "'");
}

std::uint64_t fnv1a64(std::string_view bytes) noexcept {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

Split assign_split(std::string_view block_id, std::uint64_t seed) {
  std::string key = std::to_string(seed);
  key += ':';
  key += block_id;
  const auto bucket = fnv1a64(key) % 100;
  if (bucket < 80) return Split::Train;
  if (bucket < 90) return Split::Validation;
  return Split::Test;
}

std::vector<const TestCodeBlock*> select_split(const CodeGraph& graph, Split split, std::uint64_t seed) {
  std::vector<const TestCodeBlock*> out;
  for (const TestCodeBlock* b : graph.blocks())
    if (split == Split::All || assign_split(b->block_id, seed) == split) out.push_back(b);
  return out;
}

EvaluationRun evaluate_corpus(const CodeGraph& graph, const VectorIndex& index, Embedder* query_embedder,
                              const LlmEndpointConfig& config, LlmBackend& backend, const EvaluationOptions& options,
                              const Sleeper& sleeper) {
  EvaluationRun run;
  run.options = options;
  const auto blocks = select_split(graph, options.split, options.seed);
  run.requested = blocks.size();
  InvocationOptions inv = InvocationOptions::from(options.conventions);
  inv.constructors = options.count_constructors;

  std::vector<std::optional<BlockOutcome>> slots(blocks.size());
  std::vector<std::optional<std::string>> skipped(blocks.size());
  std::atomic<std::size_t> next{0};
  std::atomic<bool> abort{false};
  std::mutex error_mu;
  std::string first_error;

  auto worker = [&] {
    while (!abort.load()) {
      const std::size_t i = next.fetch_add(1);
      if (i >= blocks.size()) return;
      const TestCodeBlock& block = *blocks[i];
      BlockOutcome outcome;
      try {
        outcome.prompt = build_prompt(PromptRequest::for_block(block.block_id), graph, index, query_embedder,
                                      options.prompt);
      } catch (const BudgetError& e) {
        skipped[i] = e.what();
        continue;
      }
      try {
        outcome.generation = generate(outcome.prompt, config, backend, sleeper);
      } catch (const std::exception& e) {
        std::lock_guard lock(error_mu);
        if (first_error.empty()) first_error = "block " + block.block_id + ": " + e.what();
        abort.store(true);
        return;
      }
      const ResolutionContext ctx{&graph, block.path, block.owner_class};
      outcome.result = compute_block_f1(block.block_id, block.body, outcome.generation.extracted_code, options.mode,
                                        ctx, inv);
      slots[i] = std::move(outcome);
    }
  };

  const std::size_t workers = std::max<std::size_t>(1, std::min(config.max_in_flight, blocks.size()));
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  }

  std::vector<EvalResult> results;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    if (slots[i]) {
      results.push_back(slots[i]->result);
      run.outcomes.push_back(std::move(*slots[i]));
    } else if (skipped[i]) {
      run.skipped.emplace_back(blocks[i]->block_id, *skipped[i]);
    }
  }
  run.report = aggregate(std::move(results), options.label);
  run.report.partial = abort.load();
  run.report.error = first_error;
  return run;
}

namespace {

json result_json(const EvalResult& r) {
  return json{{"block_id", r.block_id}, {"tp", r.tp},         {"fp", r.fp},
              {"fn", r.fn},             {"precision", r.precision}, {"recall", r.recall},
              {"f1", r.f1},             {"ground_truth", r.ground_truth}, {"generated", r.generated}};
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << text;
}

}  // namespace

std::vector<std::filesystem::path> write_report_files(const EvaluationRun& run, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const CorpusReport& rep = run.report;

  json blocks = json::array();
  for (const auto& o : run.outcomes) {
    json b = result_json(o.result);
    b["attempts"] = o.generation.attempts;
    b["latency_ms"] = o.generation.latency.count();
    b["prompt_tokens_estimate"] = o.prompt.token_estimate;
    b["truncated"] = o.prompt.truncation.truncated();
    json ex = json::array();
    for (const auto& e : o.prompt.exemplars) ex.push_back(e.block_id);
    b["exemplars"] = ex;
    blocks.push_back(std::move(b));
  }
  json skipped = json::array();
  for (const auto& [id, why] : run.skipped) skipped.push_back(json{{"block_id", id}, {"reason", why}});

  json report = {{"label", rep.label},
                 {"partial", rep.partial},
                 {"error", rep.error},
                 {"matching_mode", to_string(run.options.mode)},
                 {"count_constructors", run.options.count_constructors},
                 {"split", to_string(run.options.split)},
                 {"seed", run.options.seed},
                 {"requested", run.requested},
                 {"evaluated", rep.per_block.size()},
                 {"mean_f1", rep.mean_f1},
                 {"sd_f1", rep.sd_f1},
                 {"sd_kind", "population"},
                 {"histogram", rep.histogram},
                 {"blocks", blocks},
                 {"skipped", skipped}};

  std::string gens;
  for (const auto& o : run.outcomes) {
    json g = {{"block_id", o.result.block_id},
              {"prompt", o.prompt.rendered},
              {"raw_text", o.generation.raw_text},
              {"extracted_code", o.generation.extracted_code},
              {"attempts", o.generation.attempts},
              {"retry_log", o.generation.retry_log}};
    if (o.generation.usage)
      g["usage"] = {{"prompt_tokens", o.generation.usage->prompt_tokens},
                    {"completion_tokens", o.generation.usage->completion_tokens}};
    gens += g.dump() + "\n";
  }

  std::vector<std::filesystem::path> paths = {dir / "report.json", dir / "generations.jsonl", dir / "table.md",
                                              dir / "histogram.csv"};
  write_text(paths[0], report.dump(2) + "\n");
  write_text(paths[1], gens);
  write_text(paths[2], render_table({rep}));
  write_text(paths[3], render_histogram_csv(rep));
  return paths;
}

}  // namespace tcg
