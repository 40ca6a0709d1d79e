#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mc2/backend.hpp"
#include "mc2/lesson_memory.hpp"
#include "mc2/prompts.hpp"
#include "mc2/types.hpp"

namespace mc2 {

// ─── Batching ────────────────────────────────────────────────────────

struct BatchPlan {
    int dataset_size = 0;
    int batch_size = 0;   // min(100, max(10, floor(N/10)))
    int num_batches = 0;  // ceil(N/B)
};

BatchPlan plan_batches(int dataset_size);

// ─── Dataset ─────────────────────────────────────────────────────────

/// Loads line-delimited JSON records {id, question, answer, metadata?},
/// preserving file order. Throws LoadError naming the offending line on a
/// malformed record, a missing field, or a duplicate id.
std::vector<Instance> load_dataset(const std::string& path);

/// Deterministic permutation under a fixed seed.
std::vector<Instance> shuffle_instances(std::vector<Instance> instances, std::uint64_t seed);

// ─── Run report ──────────────────────────────────────────────────────

struct BatchStats {
    int batch_index = 0;
    int size = 0;
    int correct = 0;
    std::vector<std::string> s_plus;
    std::vector<std::string> s_minus;
    double accuracy() const { return size ? static_cast<double>(correct) / size : 0.0; }
};

struct RunReport {
    std::vector<BatchStats> batches;
    std::map<int, int> retrievals_per_batch;           // batch -> retrieve() calls issued
    std::map<int, std::pair<int, int>> per_iteration;  // iterations -> (n, correct)
    double restart_ratio = 0.0;     // Action-3 share of all controller actions
    double mean_tokens = 0.0;       // generation tokens per instance
    std::map<char, std::pair<int, int>> grades;  // 'A'/'B'/'C' -> (n, correct)
    std::optional<double> quality_correctness_rho;
    int total = 0;
    int total_correct = 0;
    int infra_failed = 0;

    double overall_accuracy() const {
        return total ? static_cast<double>(total_correct) / total : 0.0;
    }
    nlohmann::json to_json() const;
};

// ─── Run state (warm start / resume) ─────────────────────────────────

struct RunState {
    int last_batch = 0;  // last completed global batch index
    std::vector<MicroLesson> lessons;
    std::vector<MetaKnowledge> knowledge;  // one per role, when present

    nlohmann::json to_json() const;
    static RunState from_json(const nlohmann::json& j);
};

// ─── Orchestration ───────────────────────────────────────────────────

/// Executes the full pipeline over the given instances: per batch, compile
/// role prompts (cold-start bypass in global batch 1), run inner loops,
/// reflect; at each batch boundary filter, distill per role, consolidate
/// per role; persist traces, lessons, and snapshots under
/// config.output_dir; emit the report. A checkpoint is written at every
/// batch boundary; config.resume continues from it.
RunReport run(const RunConfig& config, const std::vector<Instance>& dataset, Backend& backend,
              const PromptLibrary& prompts, std::optional<int> stop_after_batch = std::nullopt);

}  // namespace mc2
