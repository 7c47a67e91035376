#include "kgr/retrieval/similarity.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <set>

#include <json.hpp>

#include "kgr/error.hpp"

namespace kgr::retrieval {

namespace {

std::string normalize(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  bool pending_space = false;
  for (unsigned char c : s) {
    char mapped = static_cast<char>(std::tolower(c));
    if (mapped == '.' || mapped == '_' || std::isspace(c)) {
      if (!out.empty()) pending_space = true;
      continue;
    }
    if (pending_space) {
      out += ' ';
      pending_space = false;
    }
    out += mapped;
  }
  return out;
}

std::set<std::string> trigrams(const std::string& raw) {
  const std::string n = normalize(raw);
  std::set<std::string> grams;
  if (n.empty()) return grams;
  if (n.size() < 3) {
    grams.insert(n);
    return grams;
  }
  for (std::size_t i = 0; i + 3 <= n.size(); ++i) grams.insert(n.substr(i, 3));
  return grams;
}

}  // namespace

double lexical_similarity(const std::string& a, const std::string& b) {
  const auto ga = trigrams(a);
  const auto gb = trigrams(b);
  if (ga.empty() && gb.empty()) return 1.0;
  std::size_t inter = 0;
  for (const auto& g : ga) inter += gb.count(g);
  const std::size_t uni = ga.size() + gb.size() - inter;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

double cosine(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) {
    throw DomainError("cosine: dimensionality mismatch");
  }
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

FixtureEmbeddingProvider FixtureEmbeddingProvider::load_file(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open embedding fixture: " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw DataError("embedding fixture " + path + ": " + e.what());
  }
  if (!doc.contains("dim") || !doc.contains("vectors")) {
    throw DataError("embedding fixture " + path +
                    ": expected keys 'dim' and 'vectors'");
  }
  std::map<std::string, std::vector<double>> vectors;
  for (const auto& [text, vec] : doc["vectors"].items()) {
    vectors[text] = vec.get<std::vector<double>>();
  }
  return FixtureEmbeddingProvider(doc["dim"].get<int>(), std::move(vectors));
}

FixtureEmbeddingProvider::FixtureEmbeddingProvider(
    int dim, std::map<std::string, std::vector<double>> vectors)
    : dim_(dim), vectors_(std::move(vectors)) {
  if (dim_ <= 0) throw DataError("embedding fixture: dim must be positive");
  for (const auto& [text, v] : vectors_) {
    if (static_cast<int>(v.size()) != dim_) {
      throw DataError("embedding fixture: vector for '" + text +
                      "' has wrong dimensionality");
    }
  }
}

std::vector<double> FixtureEmbeddingProvider::embed(
    const std::string& text) const {
  auto it = vectors_.find(text);
  if (it != vectors_.end()) return it->second;
  return std::vector<double>(static_cast<std::size_t>(dim_), 0.0);
}

}  // namespace kgr::retrieval
