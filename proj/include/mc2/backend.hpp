#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "mc2/types.hpp"

namespace mc2 {

struct GenerationResult {
    std::string text;
    std::int64_t completion_tokens = 0;
    std::string model_id;
};

struct EmbeddingVector {
    std::vector<double> values;
    std::size_t dims() const { return values.size(); }
};

/// Call purposes, for the audit log and for test-side call counting.
enum class CallPurpose { Reasoner, Monitor, Controller, Composer, Distiller, Consolidator, Other };

const char* call_purpose_name(CallPurpose p);

struct GenerationRequest {
    std::string prompt;
    CallPurpose purpose = CallPurpose::Other;
    std::string instance_id;  // empty for batch-boundary calls
};

struct CallRecord {
    CallPurpose purpose;
    std::string instance_id;
    std::string prompt;
};

/// Uniform gateway for text generation and embedding. Implementations must
/// accept concurrent in-flight requests. Every generation call is appended
/// to an audit log.
class Backend {
public:
    virtual ~Backend() = default;

    /// Throws ConfigError on an empty prompt, BackendError on failure.
    GenerationResult generate(const GenerationRequest& request);

    /// Throws ConfigError on empty text, ProtocolError if the embedding
    /// dimension changes within a run. Results are cached by exact text.
    EmbeddingVector embed(const std::string& text);

    std::vector<CallRecord> call_log() const;
    std::size_t generation_calls() const;

protected:
    virtual GenerationResult do_generate(const GenerationRequest& request) = 0;
    virtual EmbeddingVector do_embed(const std::string& text) = 0;

private:
    mutable std::mutex mutex_;
    std::vector<CallRecord> log_;
    std::map<std::string, EmbeddingVector> embedding_cache_;
    std::optional<std::size_t> embedding_dims_;
};

// ─── Scripted backend ────────────────────────────────────────────────

/// Deterministic replay backend for tests and desk-scale runs. generate()
/// consumes scripted responses in order; embed() looks up a fixed table and
/// hashes unseen text to a seeded pseudo-random unit vector.
class ScriptedBackend : public Backend {
public:
    ScriptedBackend(std::vector<std::string> script,
                    std::map<std::string, std::vector<double>> embedding_table = {},
                    std::uint64_t seed = 0, std::size_t hash_dims = 8, bool loop = false);

    /// Consumes n scripted responses without recording calls (resume support).
    void fast_forward(std::size_t n);

    std::size_t remaining() const;

private:
    GenerationResult do_generate(const GenerationRequest& request) override;
    EmbeddingVector do_embed(const std::string& text) override;

    mutable std::mutex script_mutex_;
    std::vector<std::string> script_;
    std::size_t next_ = 0;
    std::map<std::string, std::vector<double>> table_;
    std::uint64_t seed_;
    std::size_t hash_dims_;
    bool loop_;
};

/// Deterministic pseudo-random unit vector for unseen embedding text.
std::vector<double> hashed_unit_vector(const std::string& text, std::uint64_t seed,
                                       std::size_t dims);

// ─── HTTP backend ────────────────────────────────────────────────────

/// Chat-completions-compatible gateway. Retries transport timeouts and
/// 5xx statuses with exponential backoff up to max_retries; 4xx statuses
/// are non-retryable. The API key is read from the configured environment
/// variable before any network call.
class HttpBackend : public Backend {
public:
    explicit HttpBackend(BackendConfig config);

private:
    GenerationResult do_generate(const GenerationRequest& request) override;
    EmbeddingVector do_embed(const std::string& text) override;

    std::string post_json(const std::string& path, const std::string& body);

    BackendConfig config_;
    std::string api_key_;
    std::string host_;  // scheme://host[:port]
    std::string base_path_;
};

}  // namespace mc2
