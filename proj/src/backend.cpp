#include "mc2/backend.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <random>
#include <sstream>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

using nlohmann::json;

namespace mc2 {

const char* call_purpose_name(CallPurpose p) {
    switch (p) {
        case CallPurpose::Reasoner: return "reasoner";
        case CallPurpose::Monitor: return "monitor";
        case CallPurpose::Controller: return "controller";
        case CallPurpose::Composer: return "composer";
        case CallPurpose::Distiller: return "distiller";
        case CallPurpose::Consolidator: return "consolidator";
        case CallPurpose::Other: return "other";
    }
    return "?";
}

GenerationResult Backend::generate(const GenerationRequest& request) {
    if (request.prompt.empty()) throw ConfigError("generate: empty prompt");
    {
        std::lock_guard<std::mutex> lock(mutex_);
        log_.push_back({request.purpose, request.instance_id, request.prompt});
    }
    return do_generate(request);
}

EmbeddingVector Backend::embed(const std::string& text) {
    if (text.empty()) throw ConfigError("embed: empty text");
    {
        std::lock_guard<std::mutex> lock(mutex_);
        auto it = embedding_cache_.find(text);
        if (it != embedding_cache_.end()) return it->second;
    }
    EmbeddingVector v = do_embed(text);
    if (v.dims() == 0) throw ProtocolError("embed: zero-dimensional vector");
    for (double x : v.values)
        if (!std::isfinite(x)) throw ProtocolError("embed: non-finite component");
    std::lock_guard<std::mutex> lock(mutex_);
    if (embedding_dims_ && *embedding_dims_ != v.dims())
        throw ProtocolError("embed: dimension changed within run (" +
                            std::to_string(*embedding_dims_) + " -> " +
                            std::to_string(v.dims()) + ")");
    embedding_dims_ = v.dims();
    embedding_cache_.emplace(text, v);
    return v;
}

std::vector<CallRecord> Backend::call_log() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return log_;
}

std::size_t Backend::generation_calls() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return log_.size();
}

// ─── ScriptedBackend ─────────────────────────────────────────────────

ScriptedBackend::ScriptedBackend(std::vector<std::string> script,
                                 std::map<std::string, std::vector<double>> embedding_table,
                                 std::uint64_t seed, std::size_t hash_dims, bool loop)
    : script_(std::move(script)),
      table_(std::move(embedding_table)),
      seed_(seed),
      hash_dims_(hash_dims),
      loop_(loop) {
    if (script_.empty()) throw ConfigError("scripted backend: empty script");
}

void ScriptedBackend::fast_forward(std::size_t n) {
    std::lock_guard<std::mutex> lock(script_mutex_);
    if (loop_) {
        next_ = (next_ + n) % script_.size();
    } else {
        if (next_ + n > script_.size())
            throw BackendError("scripted backend: fast-forward past end of script");
        next_ += n;
    }
}

std::size_t ScriptedBackend::remaining() const {
    std::lock_guard<std::mutex> lock(script_mutex_);
    return script_.size() - next_;
}

GenerationResult ScriptedBackend::do_generate(const GenerationRequest&) {
    std::string text;
    {
        std::lock_guard<std::mutex> lock(script_mutex_);
        if (next_ >= script_.size()) {
            if (!loop_) throw BackendError("scripted backend: replay exhausted");
            next_ = 0;
        }
        text = script_[next_++];
    }
    GenerationResult r;
    r.text = text;
    r.model_id = "scripted";
    // Token accounting proxy: whitespace-delimited word count.
    std::istringstream ss(text);
    std::string w;
    while (ss >> w) ++r.completion_tokens;
    return r;
}

EmbeddingVector ScriptedBackend::do_embed(const std::string& text) {
    if (auto it = table_.find(text); it != table_.end()) return EmbeddingVector{it->second};
    return EmbeddingVector{hashed_unit_vector(text, seed_, hash_dims_)};
}

std::vector<double> hashed_unit_vector(const std::string& text, std::uint64_t seed,
                                       std::size_t dims) {
    // FNV-1a, platform-stable, mixed with the run seed.
    std::uint64_t h = 14695981039346656037ull ^ seed;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    std::mt19937_64 rng(h);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<double> v(dims);
    double norm2 = 0.0;
    for (auto& x : v) {
        x = gauss(rng);
        norm2 += x * x;
    }
    double norm = std::sqrt(norm2);
    if (norm > 0)
        for (auto& x : v) x /= norm;
    return v;
}

// ─── HttpBackend ─────────────────────────────────────────────────────

HttpBackend::HttpBackend(BackendConfig config) : config_(std::move(config)) {
    if (config_.endpoint_url.empty()) throw ConfigError("backend: endpoint_url not set");
    const char* key = std::getenv(config_.api_key_env_var.c_str());
    if (!key || !*key)
        throw ConfigError("backend: API key env var '" + config_.api_key_env_var +
                          "' is empty or unset");
    api_key_ = key;

    // Split scheme://host[:port][/base/path]
    auto scheme_end = config_.endpoint_url.find("://");
    if (scheme_end == std::string::npos)
        throw ConfigError("backend: endpoint_url must include a scheme");
    auto path_start = config_.endpoint_url.find('/', scheme_end + 3);
    if (path_start == std::string::npos) {
        host_ = config_.endpoint_url;
        base_path_ = "";
    } else {
        host_ = config_.endpoint_url.substr(0, path_start);
        base_path_ = config_.endpoint_url.substr(path_start);
        while (!base_path_.empty() && base_path_.back() == '/') base_path_.pop_back();
    }
}

std::string HttpBackend::post_json(const std::string& path, const std::string& body) {
    httplib::Client client(host_);
    auto timeout = std::chrono::duration<double>(config_.request_timeout_seconds);
    client.set_connection_timeout(std::chrono::duration_cast<std::chrono::milliseconds>(timeout));
    client.set_read_timeout(std::chrono::duration_cast<std::chrono::milliseconds>(timeout));
    httplib::Headers headers = {{"Authorization", "Bearer " + api_key_}};

    std::string last_error = "no attempt made";
    int backoff_ms = 250;
    for (int attempt = 0; attempt <= config_.max_retries; ++attempt) {
        if (attempt > 0) {
            std::this_thread::sleep_for(std::chrono::milliseconds(backoff_ms));
            backoff_ms *= 2;
        }
        auto res = client.Post(base_path_ + path, headers, body, "application/json");
        if (!res) {
            last_error = "transport error: " + httplib::to_string(res.error());
            continue;  // timeouts and connection failures are transient
        }
        if (res->status >= 200 && res->status < 300) return res->body;
        last_error = "HTTP " + std::to_string(res->status) + ": " + res->body;
        if (res->status >= 400 && res->status < 500)
            throw BackendError("non-retryable " + last_error);
        // 5xx: retry
    }
    throw BackendError("retries exhausted; last: " + last_error);
}

GenerationResult HttpBackend::do_generate(const GenerationRequest& request) {
    json body = {
        {"model", config_.model_id},
        {"messages", json::array({{{"role", "user"}, {"content", request.prompt}}})},
    };
    for (const auto& [k, v] : config_.decoding_overrides) body[k] = v;

    json resp = json::parse(post_json("/chat/completions", body.dump()));
    GenerationResult r;
    try {
        r.text = resp.at("choices").at(0).at("message").at("content").get<std::string>();
        r.model_id = resp.value("model", config_.model_id);
        if (resp.contains("usage"))
            r.completion_tokens = resp["usage"].value("completion_tokens", 0);
    } catch (const json::exception& e) {
        throw BackendError(std::string("malformed chat-completions response: ") + e.what());
    }
    return r;
}

EmbeddingVector HttpBackend::do_embed(const std::string& text) {
    json body = {{"model", config_.embedding_model_id}, {"input", text}};
    json resp = json::parse(post_json("/embeddings", body.dump()));
    EmbeddingVector v;
    try {
        v.values = resp.at("data").at(0).at("embedding").get<std::vector<double>>();
    } catch (const json::exception& e) {
        throw BackendError(std::string("malformed embeddings response: ") + e.what());
    }
    return v;
}

}  // namespace mc2
