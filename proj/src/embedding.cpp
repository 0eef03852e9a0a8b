#include "tcg/embedding.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include <nlohmann/json.hpp>

#include "tcg/errors.hpp"
#include "tcg/kernels.hpp"

namespace tcg {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

EmbeddingVector normalize(std::vector<double> raw) {
  EmbeddingVector v;
  const double sq = kernels::dot(raw, raw);
  if (sq <= 0.0 || !std::isfinite(sq)) {
    std::fill(raw.begin(), raw.end(), 0.0);
    v.values = std::move(raw);
    v.zero = true;
    return v;
  }
  const double inv = 1.0 / std::sqrt(sq);
  for (double& x : raw) x *= inv;
  v.values = std::move(raw);
  return v;
}

CosineResult cosine(const EmbeddingVector& a, const EmbeddingVector& b) {
  if (a.dim() != b.dim())
    throw DimensionError("cosine of vectors with dims " + std::to_string(a.dim()) + " and " + std::to_string(b.dim()));
  const double na = kernels::dot(a.values, a.values);
  const double nb = kernels::dot(b.values, b.values);
  if (na <= 0.0 || nb <= 0.0) return {0.0, true};
  const double c = kernels::dot(a.values, b.values) / (std::sqrt(na) * std::sqrt(nb));
  return {std::clamp(c, -1.0, 1.0), false};
}

std::vector<std::string> tokenize_terms(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  auto flush = [&] {
    if (!cur.empty()) out.push_back(std::move(cur));
    cur.clear();
  };
  auto lower = [](char c) { return std::islower(static_cast<unsigned char>(c)) != 0; };
  auto upper = [](char c) { return std::isupper(static_cast<unsigned char>(c)) != 0; };
  auto digit = [](char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; };
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (!std::isalnum(static_cast<unsigned char>(c))) {
      flush();
      continue;
    }
    if (upper(c) && i > 0) {
      const char p = text[i - 1];
      const bool next_lower = i + 1 < text.size() && lower(text[i + 1]);
      if (lower(p) || digit(p) || (upper(p) && next_lower)) flush();
    }
    cur += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  flush();
  return out;
}

Vocabulary Vocabulary::build(const std::vector<std::string>& documents) {
  std::map<std::string, int> df;
  for (const auto& doc : documents) {
    auto terms = tokenize_terms(doc);
    std::sort(terms.begin(), terms.end());
    terms.erase(std::unique(terms.begin(), terms.end()), terms.end());
    for (auto& t : terms) ++df[t];
  }
  return from_terms(documents.size(), std::move(df));
}

Vocabulary Vocabulary::from_terms(std::size_t documents, std::map<std::string, int> document_frequency) {
  Vocabulary v;
  v.documents_ = documents;
  int index = 0;
  for (auto& [term, df] : document_frequency) v.terms_.emplace(term, std::make_pair(index++, df));
  return v;
}

int Vocabulary::index_of(std::string_view term) const {
  auto it = terms_.find(term);
  return it == terms_.end() ? -1 : it->second.first;
}

double Vocabulary::idf(std::string_view term) const {
  auto it = terms_.find(term);
  const double df = it == terms_.end() ? 0.0 : it->second.second;
  return std::log((1.0 + static_cast<double>(documents_)) / (1.0 + df)) + 1.0;
}

EmbeddingVector embed_lexical(std::string_view text, const Vocabulary& vocab) {
  std::vector<double> raw(vocab.size(), 0.0);
  for (const auto& term : tokenize_terms(text)) {
    const int idx = vocab.index_of(term);
    if (idx >= 0) raw[static_cast<std::size_t>(idx)] += 1.0;
  }
  for (const auto& [term, entry] : vocab.terms()) {
    auto& x = raw[static_cast<std::size_t>(entry.first)];
    if (x != 0.0) x *= vocab.idf(term);
  }
  return normalize(std::move(raw));
}

std::vector<EmbeddingVector> LexicalEmbedder::embed(const std::vector<std::string>& texts) {
  std::vector<EmbeddingVector> out;
  out.reserve(texts.size());
  for (const auto& t : texts) out.push_back(embed_lexical(t, vocab_));
  return out;
}

ExternalEmbedder::ExternalEmbedder(EmbeddingServiceConfig config, std::shared_ptr<HttpTransport> transport, Sleeper sleeper)
    : config_(std::move(config)), transport_(std::move(transport)), sleeper_(std::move(sleeper)) {
  if (!transport_) transport_ = std::make_shared<HttplibTransport>();
  if (config_.batch_size == 0) config_.batch_size = 1;
}

std::string ExternalEmbedder::id() const { return "external/v1;model=" + config_.model; }

std::vector<EmbeddingVector> ExternalEmbedder::embed(const std::vector<std::string>& texts) {
  log_ = {};
  std::vector<EmbeddingVector> out;
  out.reserve(texts.size());
  std::string base = config_.base_url;
  while (!base.empty() && base.back() == '/') base.pop_back();

  for (std::size_t start = 0; start < texts.size(); start += config_.batch_size) {
    const std::size_t stop = std::min(texts.size(), start + config_.batch_size);
    ojson req{{"model", config_.model}, {"input", std::vector<std::string>(texts.begin() + static_cast<std::ptrdiff_t>(start),
                                                                           texts.begin() + static_cast<std::ptrdiff_t>(stop))}};
    HttpRequest request;
    request.url = base + "/embeddings";
    request.body = req.dump();
    request.timeout = config_.timeout;
    request.headers.emplace_back("Content-Type", "application/json");
    if (auto key = env_secret(config_.api_key_env)) request.headers.emplace_back("Authorization", "Bearer " + *key);

    RetryLog log;
    HttpResponse res;
    try {
      res = with_retry(config_.retry, sleeper_, log, [&] { return transport_->post(request); });
    } catch (const TransportError& e) {
      log_.attempts += log.attempts;
      for (auto& l : log.lines) log_.lines.push_back(std::move(l));
      throw TransportError("embedding batch starting at index " + std::to_string(start) + " failed: " + e.what(),
                           e.last_status(), e.attempts());
    }
    log_.attempts += log.attempts;
    for (auto& l : log.lines) log_.lines.push_back(std::move(l));

    ojson doc;
    try {
      doc = ojson::parse(res.body);
      const auto& data = doc.at("data");
      if (!data.is_array() || data.size() != stop - start)
        throw TransportError("embedding response for batch at index " + std::to_string(start) + " has " +
                                 std::to_string(data.size()) + " vectors, expected " + std::to_string(stop - start),
                             res.status, log.attempts);
      for (std::size_t i = 0; i < data.size(); ++i) {
        auto raw = data[i].at("embedding").get<std::vector<double>>();
        if (!out.empty() && raw.size() != out.front().dim())
          throw DimensionError("embedding at index " + std::to_string(start + i) + " has dim " + std::to_string(raw.size()) +
                               ", expected " + std::to_string(out.front().dim()));
        out.push_back(normalize(std::move(raw)));
      }
    } catch (const nlohmann::json::exception& e) {
      throw TransportError("malformed embedding response for batch at index " + std::to_string(start) + ": " + e.what(),
                           res.status, log.attempts);
    }
  }
  return out;
}

const IndexEntry* VectorIndex::find(std::string_view block_id) const {
  auto it = std::lower_bound(entries.begin(), entries.end(), block_id,
                             [](const IndexEntry& e, std::string_view id) { return e.block_id < id; });
  return it != entries.end() && it->block_id == block_id ? &*it : nullptr;
}

std::unique_ptr<Embedder> VectorIndex::query_embedder(const std::optional<EmbeddingServiceConfig>& service,
                                                      std::shared_ptr<HttpTransport> transport) const {
  if (embedder_id == kLexicalEmbedderId) {
    if (!vocabulary) throw FormatError("lexical index without a vocabulary");
    return std::make_unique<LexicalEmbedder>(*vocabulary);
  }
  if (!service) throw ConfigError("index was built with '" + embedder_id + "'; an embedding service config is required");
  auto emb = std::make_unique<ExternalEmbedder>(*service, std::move(transport));
  if (emb->id() != embedder_id)
    throw ConfigError("index embedder '" + embedder_id + "' does not match configured '" + emb->id() + "'");
  return emb;
}

VectorIndex build_index(const std::vector<const TestCodeBlock*>& blocks, Embedder& embedder, Embedder* code_embedder) {
  std::vector<const TestCodeBlock*> sorted = blocks;
  std::sort(sorted.begin(), sorted.end(), [](auto* a, auto* b) { return a->block_id < b->block_id; });
  for (std::size_t i = 1; i < sorted.size(); ++i)
    if (sorted[i]->block_id == sorted[i - 1]->block_id) throw Error("duplicate block id " + sorted[i]->block_id);

  std::vector<std::string> tcbds;
  std::vector<std::string> bodies;
  for (const auto* b : sorted) {
    tcbds.push_back(b->tcbd);
    bodies.push_back(b->body);
  }
  VectorIndex index;
  index.embedder_id = embedder.id();
  auto vectors = embedder.embed(tcbds);
  if (vectors.size() != sorted.size()) throw Error("embedder returned " + std::to_string(vectors.size()) + " vectors");
  std::vector<EmbeddingVector> code_vectors;
  if (code_embedder) code_vectors = code_embedder->embed(bodies);

  index.dim = vectors.empty() ? 0 : vectors.front().dim();
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (vectors[i].dim() != index.dim)
      throw DimensionError("vector for " + sorted[i]->block_id + " has dim " + std::to_string(vectors[i].dim()));
    IndexEntry e{sorted[i]->block_id, std::move(vectors[i]), sorted[i]->tcbd, std::nullopt};
    if (code_embedder) e.code_vector = std::move(code_vectors.at(i));
    index.entries.push_back(std::move(e));
  }
  return index;
}

VectorIndex build_lexical_index(const std::vector<const TestCodeBlock*>& blocks, bool embed_code) {
  std::vector<std::string> tcbds;
  std::vector<std::string> bodies;
  for (const auto* b : blocks) {
    tcbds.push_back(b->tcbd);
    bodies.push_back(b->body);
  }
  LexicalEmbedder tcbd_embedder(Vocabulary::build(tcbds));
  std::optional<LexicalEmbedder> code_embedder;
  if (embed_code) code_embedder.emplace(Vocabulary::build(bodies));
  VectorIndex index = build_index(blocks, tcbd_embedder, code_embedder ? &*code_embedder : nullptr);
  index.dim = tcbd_embedder.vocabulary().size();
  index.vocabulary = tcbd_embedder.vocabulary();
  if (code_embedder) index.code_vocabulary = code_embedder->vocabulary();
  return index;
}

std::vector<ScoredBlock> top_k(const VectorIndex& index, const EmbeddingVector& query, std::size_t k,
                               const std::set<std::string, std::less<>>& exclude) {
  if (k == 0 || index.entries.empty()) return {};
  if (query.dim() != index.dim)
    throw DimensionError("query dim " + std::to_string(query.dim()) + " does not match index dim " + std::to_string(index.dim));
  std::vector<ScoredBlock> scored;
  scored.reserve(index.entries.size());
  for (const auto& e : index.entries) {
    if (exclude.count(e.block_id)) continue;
    scored.push_back({e.block_id, kernels::dot(e.vector.values, query.values)});
  }
  auto better = [](const ScoredBlock& a, const ScoredBlock& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.block_id < b.block_id;
  };
  const std::size_t keep = std::min(k, scored.size());
  std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(keep), scored.end(), better);
  scored.resize(keep);
  return scored;
}

std::set<std::string, std::less<>> leakage_exclusions(const VectorIndex& index, std::string_view block_id) {
  std::set<std::string, std::less<>> out{std::string(block_id)};
  const IndexEntry* self = index.find(block_id);
  if (!self) return out;
  for (const auto& e : index.entries)
    if (e.tcbd == self->tcbd) out.insert(e.block_id);
  return out;
}

// ---------------------------------------------------------------------------
// serialization

namespace {

ojson vector_to_json(const EmbeddingVector& v) {
  ojson nz = ojson::array();
  for (std::size_t i = 0; i < v.values.size(); ++i)
    if (v.values[i] != 0.0) nz.push_back(ojson::array({i, v.values[i]}));
  return ojson{{"dim", v.dim()}, {"zero", v.zero}, {"nz", nz}};
}

EmbeddingVector vector_from_json(const ojson& j) {
  EmbeddingVector v;
  v.values.assign(j.at("dim").get<std::size_t>(), 0.0);
  v.zero = j.at("zero").get<bool>();
  for (const auto& pair : j.at("nz")) {
    const auto i = pair.at(0).get<std::size_t>();
    if (i >= v.values.size()) throw FormatError("vector component index out of range");
    v.values[i] = pair.at(1).get<double>();
  }
  return v;
}

ojson vocab_to_json(const Vocabulary& v) {
  ojson terms = ojson::object();
  for (const auto& [term, entry] : v.terms()) terms[term] = entry.second;
  return ojson{{"documents", v.document_count()}, {"df", terms}};
}

Vocabulary vocab_from_json(const ojson& j) {
  std::map<std::string, int> df;
  for (const auto& [term, count] : j.at("df").items()) df[term] = count.get<int>();
  return Vocabulary::from_terms(j.at("documents").get<std::size_t>(), std::move(df));
}

}  // namespace

std::string serialize_index(const VectorIndex& index) {
  ojson doc;
  doc["schema_version"] = std::to_string(kIndexSchemaMajor) + ".0";
  doc["embedder_id"] = index.embedder_id;
  doc["dim"] = index.dim;
  doc["vocabulary"] = index.vocabulary ? vocab_to_json(*index.vocabulary) : ojson(nullptr);
  doc["code_vocabulary"] = index.code_vocabulary ? vocab_to_json(*index.code_vocabulary) : ojson(nullptr);
  ojson entries = ojson::array();
  for (const auto& e : index.entries) {
    entries.push_back({{"block_id", e.block_id},
                       {"tcbd", e.tcbd},
                       {"vector", vector_to_json(e.vector)},
                       {"code_vector", e.code_vector ? vector_to_json(*e.code_vector) : ojson(nullptr)}});
  }
  doc["entries"] = std::move(entries);
  return doc.dump(1, '\t', false, nlohmann::json::error_handler_t::replace) + "\n";
}

VectorIndex deserialize_index(std::string_view text) {
  VectorIndex index;
  try {
    const ojson doc = ojson::parse(text);
    const std::string version = doc.at("schema_version").get<std::string>();
    if (version.substr(0, version.find('.')) != std::to_string(kIndexSchemaMajor))
      throw VersionError("index schema " + version + " not supported");
    index.embedder_id = doc.at("embedder_id").get<std::string>();
    index.dim = doc.at("dim").get<std::size_t>();
    if (!doc.at("vocabulary").is_null()) index.vocabulary = vocab_from_json(doc.at("vocabulary"));
    if (!doc.at("code_vocabulary").is_null()) index.code_vocabulary = vocab_from_json(doc.at("code_vocabulary"));
    for (const auto& je : doc.at("entries")) {
      IndexEntry e;
      e.block_id = je.at("block_id").get<std::string>();
      e.tcbd = je.at("tcbd").get<std::string>();
      e.vector = vector_from_json(je.at("vector"));
      if (e.vector.dim() != index.dim) throw FormatError("entry " + e.block_id + " has the wrong dimension");
      if (!je.at("code_vector").is_null()) e.code_vector = vector_from_json(je.at("code_vector"));
      index.entries.push_back(std::move(e));
    }
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("corrupt index file: ") + e.what());
  }
  if (!std::is_sorted(index.entries.begin(), index.entries.end(),
                      [](const auto& a, const auto& b) { return a.block_id < b.block_id; }))
    throw FormatError("index entries are not sorted by block_id");
  return index;
}

void save_index(const VectorIndex& index, const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << serialize_index(index);
}

VectorIndex load_index(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw NotFoundError("index file not found: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return deserialize_index(ss.str());
}

}  // namespace tcg
