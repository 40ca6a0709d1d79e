#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace mc2 {

// ─── Errors ──────────────────────────────────────────────────────────

struct ProtocolError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct BackendError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct LoadError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ─── Action protocol ─────────────────────────────────────────────────

enum class Action { Accept = 1, Patch = 2, Restart = 3 };

/// Integer encoding of controller actions (ACCEPT=1, PATCH=2, RESTART=3).
int encode_action(Action a);

/// Inverse of encode_action. Throws ProtocolError for anything outside {1,2,3}.
Action decode_action(int code);

const char* action_name(Action a);

// ─── Roles ───────────────────────────────────────────────────────────

enum class Role { Reasoner, Monitor, Controller };

inline constexpr Role kAllRoles[] = {Role::Reasoner, Role::Monitor, Role::Controller};

const char* role_name(Role r);
Role role_from_name(const std::string& name);

// ─── Instances ───────────────────────────────────────────────────────

struct Instance {
    std::string id;
    std::string question;
    // Visible only to the harness for outcome tagging; never placed in a prompt.
    std::string gold_answer;
    std::map<std::string, std::string> metadata;
};

// ─── Role policy prompts ─────────────────────────────────────────────

struct PromptProvenance {
    bool compiled = false;
    int batch_index = 0;       // meaningful when compiled
    std::string instance_id;   // meaningful when compiled
    std::uint64_t base_version = 0;
};

struct RolePromptSet {
    std::string reasoner;
    std::string monitor;
    std::string controller;
    std::uint64_t version = 0;
    PromptProvenance provenance;

    const std::string& for_role(Role r) const;
    std::string& for_role(Role r);
};

// ─── Per-iteration role outputs ──────────────────────────────────────

struct PolicyUpdateMeta {
    bool attempted = false;
    bool succeeded = false;
    std::string updater_model;
    std::string prompt_before;
    std::string prompt_after;
};

struct ReasonerOutput {
    std::string final_answer;  // empty marker when unparsable
    std::string full_text;
    PolicyUpdateMeta policy_update;
};

struct MonitorReport {
    bool error_found = false;
    std::optional<int> error_step;  // absent means NONE
    std::string error_description;
    std::string explanation;
    std::string full_text;
    PolicyUpdateMeta policy_update;
};

struct ControllerDecision {
    Action action = Action::Restart;
    std::string justification;
    std::string revision_suggestions;  // meaningful when action=RESTART
    std::string corrected_reasoning;   // meaningful when action=PATCH
    std::string final_answer;          // meaningful when action in {ACCEPT, PATCH}
    std::string full_text;
    PolicyUpdateMeta policy_update;
};

struct IterationRecord {
    int index = 1;  // 1-based, contiguous within a trace
    ReasonerOutput reasoner;
    MonitorReport monitor;
    ControllerDecision controller;
};

// ─── Traces ──────────────────────────────────────────────────────────

enum class TerminalStatus { Accepted, Corrected, MaxIteration };

const char* terminal_status_name(TerminalStatus s);
TerminalStatus terminal_status_from_name(const std::string& name);

/// Ordered per-instance record of inner-loop iterations. Construct via
/// make_trace, which enforces the structural invariants.
struct Trace {
    std::string instance_id;
    std::vector<IterationRecord> history;
    TerminalStatus terminal_status = TerminalStatus::Accepted;
    std::string final_prediction;
    std::int64_t token_count = 0;
};

/// Validates and builds a Trace. Requirements:
///   - 1 <= |history| <= max_iterations
///   - indices are 1..K contiguous
///   - every non-final action is RESTART
///   - terminal status matches the final action (RESTART only at the budget)
/// The final prediction and status are derived from the history; on budget
/// exhaustion the prediction is the last iteration's reasoner answer.
/// Throws ProtocolError on any violation.
Trace make_trace(std::string instance_id, std::vector<IterationRecord> history,
                 int max_iterations, std::int64_t token_count);

/// Re-checks the make_trace invariants on an already-built value
/// (used when deserializing). Throws ProtocolError on violation.
void validate_trace(const Trace& trace, int max_iterations);

// ─── Reflections ─────────────────────────────────────────────────────

enum class TaskQuality { A, B, C };
enum class RoleQuality { Good, Ok, Poor };

const char* task_quality_name(TaskQuality q);
const char* role_quality_name(RoleQuality q);

struct MonitorFact {
    bool error_found = false;
    std::optional<int> error_step;
    std::string description;
};

struct ControllerFact {
    Action action = Action::Restart;
    std::string justification;
};

/// Deterministic per-instance quality summary. Fully determined by
/// (Trace, correctness flag); no model calls.
struct Reflection {
    std::string instance_id;
    std::string role = "task";  // task | reasoner | monitor | controller
    bool task_success = false;
    TaskQuality task_quality = TaskQuality::C;
    RoleQuality reasoner_quality = RoleQuality::Ok;
    RoleQuality monitor_quality = RoleQuality::Ok;
    RoleQuality controller_quality = RoleQuality::Ok;
    int iteration_count = 0;
    // Role behavior trajectories, one entry per iteration.
    std::vector<std::string> reasoner_answers;
    std::optional<std::string> excerpt;  // optional pointer into the full text; format unspecified
    std::vector<MonitorFact> monitor_facts;
    std::vector<ControllerFact> controller_facts;
};

// ─── Micro-lessons and meta-knowledge ────────────────────────────────

struct OutcomeMix {
    int successes = 0;
    int failures = 0;
};

struct MicroLesson {
    Role role = Role::Reasoner;
    int batch_index = 0;
    std::string trigger;
    std::string action;  // DO rules
    std::string avoid;   // AVOID rules
    std::vector<std::string> tags;
    OutcomeMix outcome_mix;
    std::vector<std::string> source_instance_ids;
    std::optional<std::vector<double>> embedding;

    /// Retrieval text: main fields concatenated, trigger first then action.
    std::string serialized_text() const;
};

struct MetaKnowledge {
    Role role = Role::Reasoner;
    int batch_index = 0;
    std::string rules;
    std::vector<int> source_window;  // at most w consecutive most-recent batch indices
};

// ─── Run configuration ───────────────────────────────────────────────

struct BackendConfig {
    std::string endpoint_url;
    std::string model_id;
    std::string embedding_model_id;
    std::string api_key_env_var = "MC2_API_KEY";
    double request_timeout_seconds = 60.0;
    int max_retries = 3;
    // Empty unless explicitly set; provider defaults are used otherwise.
    std::map<std::string, double> decoding_overrides;
};

struct RunConfig {
    int max_iterations = 3;
    int window = 3;
    int top_k = 3;
    std::uint64_t seed = 0;
    bool shuffle = false;
    std::optional<int> batch_size_override;
    BackendConfig backend;
    std::optional<std::string> warm_start_snapshot;
    int workers = 1;
    std::string output_dir = "mc2-run";
    bool resume = false;
    std::size_t prompt_context_budget = 8000;  // chars per compiled role prompt
    std::string prompt_dir;                    // optional override templates
};

}  // namespace mc2
