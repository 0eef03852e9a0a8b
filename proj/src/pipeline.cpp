#include "tcg/pipeline.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <ostream>
#include <set>

#include "tcg/code_graph.hpp"
#include "tcg/diagnostics.hpp"
#include "tcg/errors.hpp"

namespace tcg {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

void refuse_secrets(const json& node, const std::string& where) {
  if (node.is_object()) {
    for (const auto& [key, value] : node.items()) {
      const std::string k = lower(key);
      if (k == "api_key" || k == "apikey" || k == "authorization" || k == "bearer_token")
        throw ConfigError("config field '" + where + key +
                          "' is not allowed; credentials come only from the environment variable named by api_key_env");
      refuse_secrets(value, where + key + ".");
    }
  } else if (node.is_array()) {
    for (const auto& v : node) refuse_secrets(v, where);
  }
}

void check_keys(const json& obj, std::initializer_list<std::string_view> allowed, const std::string& where) {
  if (!obj.is_object()) throw ConfigError("config section '" + where + "' must be an object");
  for (const auto& [key, _] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      throw ConfigError("unknown config key '" + (where.empty() ? key : where + "." + key) + "'");
  }
}

fs::path resolve(const fs::path& base, const std::string& p) {
  fs::path path(p);
  return path.is_absolute() ? path : (base / path).lexically_normal();
}

void parse_llm(const json& j, LlmEndpointConfig& c) {
  check_keys(j,
             {"base_url", "model", "temperature", "max_tokens", "timeout_ms", "max_attempts", "backoff_ms",
              "backoff_multiplier", "mode", "max_in_flight", "api_key_env"},
             "llm");
  c.base_url = j.value("base_url", c.base_url);
  c.model_name = j.value("model", c.model_name);
  c.temperature = j.value("temperature", c.temperature);
  c.max_output_tokens = j.value("max_tokens", c.max_output_tokens);
  c.timeout = std::chrono::milliseconds(j.value("timeout_ms", static_cast<long long>(c.timeout.count())));
  c.retry.max_attempts = j.value("max_attempts", c.retry.max_attempts);
  c.retry.backoff_base =
      std::chrono::milliseconds(j.value("backoff_ms", static_cast<long long>(c.retry.backoff_base.count())));
  c.retry.backoff_multiplier = j.value("backoff_multiplier", c.retry.backoff_multiplier);
  if (j.contains("mode")) c.mode = wire_mode_from_string(j.at("mode").get<std::string>());
  c.max_in_flight = j.value("max_in_flight", c.max_in_flight);
  c.api_key_env = j.value("api_key_env", c.api_key_env);
  if (c.max_in_flight == 0) throw ConfigError("llm.max_in_flight must be at least 1");
  if (c.retry.max_attempts < 1) throw ConfigError("llm.max_attempts must be at least 1");
  if (c.max_output_tokens <= 0) throw ConfigError("llm.max_tokens must be positive");
}

void parse_embedder(const json& j, PipelineConfig& c) {
  check_keys(j, {"kind", "base_url", "model", "timeout_ms", "batch_size", "max_attempts", "backoff_ms", "api_key_env"},
             "embedder");
  const std::string kind = j.value("kind", std::string("lexical"));
  if (kind == "lexical") {
    c.embedder = EmbedderKind::Lexical;
  } else if (kind == "external") {
    c.embedder = EmbedderKind::External;
  } else {
    throw ConfigError("embedder.kind must be 'lexical' or 'external', got '" + kind + "'");
  }
  auto& s = c.embedding_service;
  s.base_url = j.value("base_url", s.base_url);
  s.model = j.value("model", s.model);
  s.timeout = std::chrono::milliseconds(j.value("timeout_ms", static_cast<long long>(s.timeout.count())));
  s.batch_size = j.value("batch_size", s.batch_size);
  s.retry.max_attempts = j.value("max_attempts", s.retry.max_attempts);
  s.retry.backoff_base =
      std::chrono::milliseconds(j.value("backoff_ms", static_cast<long long>(s.retry.backoff_base.count())));
  s.api_key_env = j.value("api_key_env", s.api_key_env);
  if (c.embedder == EmbedderKind::External && s.base_url.empty())
    throw ConfigError("embedder.base_url is required for the external embedder");
}

}  // namespace

PipelineConfig parse_config(const json& doc, const fs::path& base_dir) {
  refuse_secrets(doc, "");
  check_keys(doc,
             {"repo_roots", "delimiters", "graph_path", "index_path", "report_dir", "dataset_dir", "budget",
              "retrieval_k", "instruction", "llm", "embedder", "embed_code", "split_seed", "matching_mode", "count_constructors",
              "train_config"},
             "");
  PipelineConfig c;
  try {
    if (doc.contains("repo_roots")) {
      if (!doc.at("repo_roots").is_array()) throw ConfigError("repo_roots must be an array of paths");
      for (const auto& r : doc.at("repo_roots")) c.repo_roots.push_back(resolve(base_dir, r.get<std::string>()));
    }
    if (doc.contains("delimiters")) {
      const json& d = doc.at("delimiters");
      check_keys(d, {"begin", "end"}, "delimiters");
      c.delimiters.begin_marker = d.value("begin", c.delimiters.begin_marker);
      c.delimiters.end_marker = d.value("end", c.delimiters.end_marker);
      if (c.delimiters.begin_marker.empty() || c.delimiters.end_marker.empty())
        throw ConfigError("delimiter names must not be empty");
    }
    c.graph_path = resolve(base_dir, doc.value("graph_path", c.graph_path.string()));
    c.index_path = resolve(base_dir, doc.value("index_path", c.index_path.string()));
    c.report_dir = resolve(base_dir, doc.value("report_dir", c.report_dir.string()));
    c.dataset_dir = resolve(base_dir, doc.value("dataset_dir", c.dataset_dir.string()));
    if (doc.contains("budget")) {
      const json& b = doc.at("budget");
      check_keys(b, {"max_tokens", "estimator"}, "budget");
      c.prompt.budget.max_tokens = b.value("max_tokens", c.prompt.budget.max_tokens);
      c.prompt.budget.estimator_id = b.value("estimator", c.prompt.budget.estimator_id);
      token_estimator(c.prompt.budget.estimator_id);
      if (c.prompt.budget.max_tokens == 0) throw ConfigError("budget.max_tokens must be positive");
    }
    if (doc.contains("retrieval_k")) {
      const long long k = doc.at("retrieval_k").get<long long>();
      if (k < 0) throw ConfigError("retrieval_k must be >= 0");
      c.prompt.exemplar_count = static_cast<std::size_t>(k);
    }
    c.prompt.instruction = doc.value("instruction", c.prompt.instruction);
    if (doc.contains("llm")) parse_llm(doc.at("llm"), c.llm);
    if (c.llm.base_url.starts_with("mock://script:")) {
      const std::string script = c.llm.base_url.substr(std::string_view("mock://script:").size());
      c.llm.base_url = "mock://script:" + resolve(base_dir, script).string();
    }
    if (doc.contains("embedder")) parse_embedder(doc.at("embedder"), c);
    c.embed_code = doc.value("embed_code", c.embed_code);
    c.count_constructors = doc.value("count_constructors", c.count_constructors);
    c.split_seed = doc.value("split_seed", c.split_seed);
    if (doc.contains("matching_mode")) c.matching_mode = matching_mode_from_string(doc.at("matching_mode").get<std::string>());
    if (doc.contains("train_config")) {
      c.train_overrides = doc.at("train_config");
      IftTrainConfig::from_json(c.train_overrides);
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad config value: ") + e.what());
  }
  return c;
}

PipelineConfig load_config(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("config file " + path.string() + " is not valid JSON: " + e.what());
  }
  return parse_config(doc, fs::absolute(path).parent_path());
}

fs::path dataset_file(const PipelineConfig& config, Split split) {
  return config.dataset_dir / ("ift_" + to_string(split) + ".jsonl");
}

fs::path train_config_file(const PipelineConfig& config) { return config.dataset_dir / "train_config.json"; }

namespace {

// Runs `body`, mapping library errors to exit codes.
template <typename Fn>
int guarded(CommandContext& ctx, Fn&& body) {
  try {
    return body();
  } catch (const TransportError& e) {
    ctx.err << "error: " << e.what() << "\n";
    return kExitPartial;
  } catch (const Error& e) {
    ctx.err << "error: " << e.what() << "\n";
    return kExitUserError;
  } catch (const fs::filesystem_error& e) {
    ctx.err << "error: " << e.what() << "\n";
    return kExitUserError;
  }
}

void write_diagnostics(const Diagnostics& diag, const fs::path& path) {
  auto entries = diag.entries();
  std::sort(entries.begin(), entries.end(), [](const Diagnostic& a, const Diagnostic& b) {
    return std::tie(a.path, a.line, a.kind, a.message) < std::tie(b.path, b.line, b.kind, b.message);
  });
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write " + path.string());
  for (const auto& d : entries) out << to_json_line(d) << "\n";
}

std::unique_ptr<Embedder> query_embedder_for(const PipelineConfig& config, const VectorIndex& index,
                                             CommandContext& ctx) {
  std::optional<EmbeddingServiceConfig> service;
  if (config.embedder == EmbedderKind::External) service = config.embedding_service;
  return index.query_embedder(service, ctx.transport);
}

}  // namespace

int cmd_analyze(const PipelineConfig& config, CommandContext& ctx) {
  return guarded(ctx, [&] {
    if (config.repo_roots.empty()) throw ConfigError("no repo_roots configured");
    Diagnostics diag;
    ScanResult scan = scan_repositories(config.repo_roots, config.delimiters, &diag);
    const CodeGraph graph = build_graph(scan.files, &diag);
    if (config.graph_path.has_parent_path()) fs::create_directories(config.graph_path.parent_path());
    save_graph(graph, config.graph_path);
    fs::path diag_path = config.graph_path;
    diag_path.replace_extension(".diagnostics.jsonl");
    write_diagnostics(diag, diag_path);

    if (scan.files.empty() && scan.skipped.empty())
      ctx.err << "warning: no Java files found under the configured roots\n";
    ctx.out << "files: " << scan.files.size() << "\n"
            << "classes: " << graph.count(NodeKind::Class) << "\n"
            << "methods: " << graph.count(NodeKind::Method) << "\n"
            << "blocks: " << graph.count(NodeKind::TestBlock) << "\n"
            << "owns edges: " << graph.count(EdgeKind::Owns) << "\n"
            << "invokes edges: " << graph.count(EdgeKind::Invokes) << "\n"
            << "skipped files: " << scan.skipped.size() << "\n";
    for (const auto& s : scan.skipped) ctx.out << "  skipped " << s.path << ": " << s.reason << "\n";
    if (ctx.verbose) diag.write_lines(ctx.err);
    ctx.out << "graph written to " << config.graph_path.string() << "\n";
    return static_cast<int>(kExitOk);
  });
}

int cmd_index(const PipelineConfig& config, CommandContext& ctx) {
  return guarded(ctx, [&] {
    const CodeGraph graph = load_graph(config.graph_path);
    const auto blocks = graph.blocks();
    VectorIndex index;
    if (config.embedder == EmbedderKind::Lexical) {
      index = build_lexical_index(blocks, config.embed_code);
    } else {
      ExternalEmbedder embedder(config.embedding_service, ctx.transport, ctx.sleeper);
      index = build_index(blocks, embedder, config.embed_code ? &embedder : nullptr);
      if (ctx.verbose)
        for (const auto& line : embedder.last_log().lines) ctx.err << line << "\n";
    }
    if (config.index_path.has_parent_path()) fs::create_directories(config.index_path.parent_path());
    save_index(index, config.index_path);
    ctx.out << "entries: " << index.entries.size() << "\n"
            << "dimension: " << index.dim << "\n"
            << "embedder: " << index.embedder_id << "\n"
            << "index written to " << config.index_path.string() << "\n";
    return static_cast<int>(kExitOk);
  });
}

int cmd_generate(const PipelineConfig& config, const GenerateArgs& args, CommandContext& ctx) {
  return guarded(ctx, [&] {
    PromptRequest request;
    if (args.block_id) {
      if (args.tcbd || args.file) throw ConfigError("use either --block-id or --tcbd with --file, not both");
      request = PromptRequest::for_block(*args.block_id);
    } else {
      if (!args.tcbd || !args.file) throw ConfigError("generate needs --block-id, or --tcbd together with --file");
      request = PromptRequest::for_step(*args.tcbd, *args.file, args.owner_class.value_or(""));
    }
    const CodeGraph graph = load_graph(config.graph_path);
    const VectorIndex index = load_index(config.index_path);
    auto embedder = query_embedder_for(config, index, ctx);
    const PromptBundle bundle = build_prompt(request, graph, index, embedder.get(), config.prompt);
    if (bundle.truncation.truncated())
      ctx.err << "note: prompt truncated (" << bundle.truncation.dropped_stanzas << " class stanzas, "
              << bundle.truncation.dropped_exemplars << " exemplars dropped)\n";
    if (args.show_prompt) ctx.out << bundle.rendered << "\n\n";

    auto backend = make_backend(config.llm, ctx.transport);
    const GenerationResult result = generate(bundle, config.llm, *backend, ctx.sleeper);
    if (ctx.verbose)
      for (const auto& line : result.retry_log) ctx.err << line << "\n";
    ctx.out << result.extracted_code << "\n";
    return static_cast<int>(kExitOk);
  });
}

int cmd_evaluate(const PipelineConfig& config, const EvaluateArgs& args, CommandContext& ctx) {
  return guarded(ctx, [&] {
    const CodeGraph graph = load_graph(config.graph_path);
    const VectorIndex index = load_index(config.index_path);
    auto embedder = query_embedder_for(config, index, ctx);
    auto backend = make_backend(config.llm, ctx.transport);

    EvaluationOptions options;
    options.split = args.split;
    options.seed = config.split_seed;
    options.mode = config.matching_mode;
    options.count_constructors = config.count_constructors;
    options.prompt = config.prompt;
    options.conventions = config.delimiters;
    if (args.label) {
      options.label = *args.label;
    } else if (!config.llm.model_name.empty()) {
      options.label = config.llm.model_name;
    }

    const EvaluationRun run =
        evaluate_corpus(graph, index, embedder.get(), config.llm, *backend, options, ctx.sleeper);
    const auto paths = write_report_files(run, config.report_dir);

    ctx.out << render_table({run.report});
    ctx.out << "evaluated " << run.report.per_block.size() << " of " << run.requested << " blocks";
    if (!run.skipped.empty()) ctx.out << " (" << run.skipped.size() << " skipped: prompt over budget)";
    ctx.out << "\n";
    for (const auto& p : paths) ctx.out << "wrote " << p.string() << "\n";
    if (run.report.partial) {
      ctx.err << "error: evaluation stopped early, report is partial: " << run.report.error << "\n";
      return static_cast<int>(kExitPartial);
    }
    return static_cast<int>(kExitOk);
  });
}

int cmd_export_ift(const PipelineConfig& config, const ExportArgs& args, CommandContext& ctx) {
  return guarded(ctx, [&] {
    const IftTrainConfig train = IftTrainConfig::from_json(config.train_overrides);
    const CodeGraph graph = load_graph(config.graph_path);
    const VectorIndex index = load_index(config.index_path);
    fs::create_directories(config.dataset_dir);
    const fs::path data = dataset_file(config, args.split);
    const ExportSummary summary = export_dataset(graph, index, args.split, config.split_seed, config.prompt,
                                                 static_cast<std::size_t>(train.context_length), data);
    write_train_config(train, train_config_file(config));
    ctx.out << "records: " << summary.written << "\n"
            << "skipped over context length: " << summary.skipped_over_length << "\n";
    if (ctx.verbose)
      for (const auto& id : summary.skipped_ids) ctx.err << "skipped " << id << "\n";
    ctx.out << "wrote " << data.string() << "\n"
            << "wrote " << train_config_file(config).string() << "\n";
    return static_cast<int>(kExitOk);
  });
}

}  // namespace tcg
