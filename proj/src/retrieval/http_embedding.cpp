#include <chrono>
#include <random>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "kgr/error.hpp"
#include "kgr/retrieval/similarity.hpp"

namespace kgr::retrieval {

namespace {

int jitter_ms(int base_ms, int attempt) {
  thread_local std::mt19937 rng{std::random_device{}()};
  const int cap = base_ms * (1 << attempt);
  if (cap <= 0) return 0;
  return std::uniform_int_distribution<int>(0, cap)(rng);
}

}  // namespace

HttpEmbeddingProvider::HttpEmbeddingProvider(HttpEmbeddingConfig config)
    : config_(std::move(config)) {
  if (config_.host.empty()) throw ConfigError("embedding endpoint host is empty");
  seen_dim_ = config_.dim;
}

int HttpEmbeddingProvider::dim() const { return seen_dim_; }

std::vector<double> HttpEmbeddingProvider::embed(const std::string& text) const {
  for (int attempt = 0;; ++attempt) {
    try {
      httplib::Client client(config_.host, config_.port);
      client.set_connection_timeout(config_.timeout_sec);
      client.set_read_timeout(config_.timeout_sec);
      httplib::Headers headers;
      if (!config_.api_key.empty()) {
        headers.emplace("Authorization", "Bearer " + config_.api_key);
      }
      nlohmann::json body{{"input", text}};
      auto res =
          client.Post(config_.path, headers, body.dump(), "application/json");
      if (!res) {
        throw TransportError("embedding endpoint unreachable: " +
                             httplib::to_string(res.error()));
      }
      if (res->status != 200) {
        throw TransportError("embedding endpoint returned status " +
                             std::to_string(res->status));
      }
      std::vector<double> vec;
      try {
        vec = nlohmann::json::parse(res->body)
                  .at("embedding")
                  .get<std::vector<double>>();
      } catch (const nlohmann::json::exception& e) {
        throw TransportError(std::string("malformed embedding response: ") +
                             e.what());
      }
      if (seen_dim_ == 0) seen_dim_ = static_cast<int>(vec.size());
      if (static_cast<int>(vec.size()) != seen_dim_) {
        throw TransportError("embedding dimensionality changed mid-run");
      }
      return vec;
    } catch (const TransportError&) {
      if (attempt >= config_.retries) throw;
      std::this_thread::sleep_for(
          std::chrono::milliseconds(jitter_ms(config_.backoff_base_ms, attempt)));
    }
  }
}

}  // namespace kgr::retrieval
