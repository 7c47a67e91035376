#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

namespace kgr::retrieval {

// Character-trigram Jaccard similarity in [0, 1]. Inputs are lowercased and
// relation separators ('.', '_') become single spaces before trigrams are
// taken over the whole normalized string, spaces included. Strings shorter
// than one trigram contribute their whole normalized form as a single gram.
double lexical_similarity(const std::string& a, const std::string& b);

// Deterministic text embedder: same text, same vector, fixed dimensionality.
class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;
  virtual int dim() const = 0;
  virtual std::vector<double> embed(const std::string& text) const = 0;
};

double cosine(const std::vector<double>& a, const std::vector<double>& b);

// Pairwise text similarity used by the retriever. The default is the lexical
// scorer; a vector provider swaps in cosine over embeddings.
class SimilarityProvider {
 public:
  virtual ~SimilarityProvider() = default;
  virtual double similarity(const std::string& a, const std::string& b) const = 0;
};

class LexicalSimilarity final : public SimilarityProvider {
 public:
  double similarity(const std::string& a, const std::string& b) const override {
    return lexical_similarity(a, b);
  }
};

class VectorSimilarity final : public SimilarityProvider {
 public:
  explicit VectorSimilarity(std::shared_ptr<const EmbeddingProvider> provider)
      : provider_(std::move(provider)) {}
  double similarity(const std::string& a, const std::string& b) const override {
    return cosine(provider_->embed(a), provider_->embed(b));
  }

 private:
  std::shared_ptr<const EmbeddingProvider> provider_;
};

// Embeddings scripted in a JSON fixture: {"dim": N, "vectors": {text: [..]}}.
// Unknown text embeds to the zero vector (cosine 0 with everything).
class FixtureEmbeddingProvider final : public EmbeddingProvider {
 public:
  static FixtureEmbeddingProvider load_file(const std::string& path);
  FixtureEmbeddingProvider(int dim,
                           std::map<std::string, std::vector<double>> vectors);

  int dim() const override { return dim_; }
  std::vector<double> embed(const std::string& text) const override;

 private:
  int dim_ = 0;
  std::map<std::string, std::vector<double>> vectors_;
};

// Embedding endpoint client, same wire style as the model gateway:
//   POST <path>  {"input": "..."}  ->  {"embedding": [..]}
// Retries with full-jitter backoff, then TransportError.
struct HttpEmbeddingConfig {
  std::string host;
  int port = 80;
  std::string path = "/v1/embeddings";
  std::string api_key;
  int dim = 0;  // 0: accept whatever the first response reports
  int retries = 2;
  int backoff_base_ms = 50;
  int timeout_sec = 30;
};

class HttpEmbeddingProvider final : public EmbeddingProvider {
 public:
  explicit HttpEmbeddingProvider(HttpEmbeddingConfig config);

  int dim() const override;
  std::vector<double> embed(const std::string& text) const override;

 private:
  HttpEmbeddingConfig config_;
  mutable int seen_dim_ = 0;
};

}  // namespace kgr::retrieval
