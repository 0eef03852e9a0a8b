#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "tcg/corpus.hpp"
#include "tcg/http.hpp"

namespace tcg {

struct EmbeddingVector {
  std::vector<double> values;
  bool zero = false;  // set when normalization met an all-zero vector

  std::size_t dim() const noexcept { return values.size(); }
  bool operator==(const EmbeddingVector&) const = default;
};

// L2-normalizes `raw`. All-zero input stays zero and is flagged.
EmbeddingVector normalize(std::vector<double> raw);

struct CosineResult {
  double value = 0.0;
  bool degenerate = false;  // one side was a zero vector
};

// Throws DimensionError when dims differ.
CosineResult cosine(const EmbeddingVector& a, const EmbeddingVector& b);

// Splits on non-alphanumerics and camelCase/PascalCase boundaries, then
// lowercases: "getHTTPResponse2x" -> {"get", "http", "response2x"}.
std::vector<std::string> tokenize_terms(std::string_view text);

// Document frequencies over a corpus of short texts (the TCBDs).
class Vocabulary {
 public:
  Vocabulary() = default;
  static Vocabulary build(const std::vector<std::string>& documents);

  std::size_t size() const noexcept { return terms_.size(); }
  std::size_t document_count() const noexcept { return documents_; }
  // -1 when unknown
  int index_of(std::string_view term) const;
  // ln((1 + N) / (1 + df)) + 1
  double idf(std::string_view term) const;
  const std::map<std::string, std::pair<int, int>, std::less<>>& terms() const noexcept { return terms_; }

  static Vocabulary from_terms(std::size_t documents, std::map<std::string, int> document_frequency);

  bool operator==(const Vocabulary&) const = default;

 private:
  std::size_t documents_ = 0;
  std::map<std::string, std::pair<int, int>, std::less<>> terms_;  // term -> (index, df)
};

// TF-IDF (raw term count times smoothed idf), L2-normalized; unknown terms
// contribute nothing. Empty after tokenization -> zero vector, flagged.
EmbeddingVector embed_lexical(std::string_view text, const Vocabulary& vocab);

class Embedder {
 public:
  virtual ~Embedder() = default;
  // Names the embedder and its parameters; stored in the index.
  virtual std::string id() const = 0;
  virtual std::vector<EmbeddingVector> embed(const std::vector<std::string>& texts) = 0;
};

inline constexpr std::string_view kLexicalEmbedderId = "lexical-tfidf/v1;tf=raw;idf=ln((1+N)/(1+df))+1;norm=l2";

class LexicalEmbedder final : public Embedder {
 public:
  explicit LexicalEmbedder(Vocabulary vocab) : vocab_(std::move(vocab)) {}
  std::string id() const override { return std::string(kLexicalEmbedderId); }
  std::vector<EmbeddingVector> embed(const std::vector<std::string>& texts) override;
  const Vocabulary& vocabulary() const noexcept { return vocab_; }

 private:
  Vocabulary vocab_;
};

struct EmbeddingServiceConfig {
  std::string base_url;  // POSTs to <base_url>/embeddings
  std::string model;
  std::string api_key_env = "LLM_API_KEY";
  std::chrono::milliseconds timeout{60000};
  RetryPolicy retry;
  std::size_t batch_size = 64;
};

// Client for an embeddings endpoint: request {model, input: [...]},
// response {data: [{embedding: [...]}, ...]}.
class ExternalEmbedder final : public Embedder {
 public:
  ExternalEmbedder(EmbeddingServiceConfig config, std::shared_ptr<HttpTransport> transport, Sleeper sleeper = real_sleeper());

  std::string id() const override;
  // Throws TransportError naming the first index of the failing batch, or
  // DimensionError when a vector's length disagrees with the first one.
  std::vector<EmbeddingVector> embed(const std::vector<std::string>& texts) override;

  const RetryLog& last_log() const noexcept { return log_; }

 private:
  EmbeddingServiceConfig config_;
  std::shared_ptr<HttpTransport> transport_;
  Sleeper sleeper_;
  RetryLog log_;
};

struct IndexEntry {
  std::string block_id;
  EmbeddingVector vector;  // TCBD embedding, the retrieval key
  std::string tcbd;
  std::optional<EmbeddingVector> code_vector;

  bool operator==(const IndexEntry&) const = default;
};

struct ScoredBlock {
  std::string block_id;
  double score;

  bool operator==(const ScoredBlock&) const = default;
};

class VectorIndex {
 public:
  std::string embedder_id;
  std::size_t dim = 0;
  std::vector<IndexEntry> entries;       // sorted by block_id
  std::optional<Vocabulary> vocabulary;  // lexical embedder state for embedding queries
  std::optional<Vocabulary> code_vocabulary;

  const IndexEntry* find(std::string_view block_id) const;

  // Embedder matching embedder_id for query texts. Lexical indexes carry
  // their own vocabulary; external indexes need the service config.
  std::unique_ptr<Embedder> query_embedder(const std::optional<EmbeddingServiceConfig>& service = std::nullopt,
                                           std::shared_ptr<HttpTransport> transport = nullptr) const;

  bool operator==(const VectorIndex&) const = default;
};

// Embeds every block's TCBD (and body, when `code_embedder` is given).
// Throws DimensionError when vectors disagree in length.
VectorIndex build_index(const std::vector<const TestCodeBlock*>& blocks, Embedder& embedder,
                        Embedder* code_embedder = nullptr);

// Lexical index: vocabularies are built from the blocks themselves.
VectorIndex build_lexical_index(const std::vector<const TestCodeBlock*>& blocks, bool embed_code = true);

// Highest cosine first, ties by ascending block_id; `exclude` never returned.
std::vector<ScoredBlock> top_k(const VectorIndex& index, const EmbeddingVector& query, std::size_t k,
                               const std::set<std::string, std::less<>>& exclude = {});

// {block_id} plus every block whose TCBD is byte-identical to its TCBD.
std::set<std::string, std::less<>> leakage_exclusions(const VectorIndex& index, std::string_view block_id);

inline constexpr int kIndexSchemaMajor = 1;

std::string serialize_index(const VectorIndex& index);
VectorIndex deserialize_index(std::string_view text);
void save_index(const VectorIndex& index, const std::filesystem::path& path);
VectorIndex load_index(const std::filesystem::path& path);

}  // namespace tcg
