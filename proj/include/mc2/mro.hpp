#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mc2/backend.hpp"
#include "mc2/types.hpp"

namespace mc2 {

/// Result of one inner-loop execution. When the backend fails mid-loop the
/// trace cannot always satisfy its invariants, so the partial iteration
/// records are returned alongside an infrastructure-failure flag instead.
struct LoopOutcome {
    std::optional<Trace> trace;
    std::vector<IterationRecord> partial;  // complete iterations before an infra failure
    bool infra_failed = false;
    std::string failure_reason;

    const std::string& final_prediction() const;
};

ReasonerOutput run_reasoner(const Instance& instance, const std::string& feedback,
                            const std::string& policy_prompt, Backend& backend,
                            std::int64_t* tokens = nullptr);

MonitorReport run_monitor(const Instance& instance, const ReasonerOutput& reasoner,
                          const std::string& policy_prompt, Backend& backend,
                          std::int64_t* tokens = nullptr);

ControllerDecision run_controller(const Instance& instance, const ReasonerOutput& reasoner,
                                  const MonitorReport& monitor,
                                  const std::string& policy_prompt, Backend& backend,
                                  std::int64_t* tokens = nullptr);

/// Runs the Reasoner -> Monitor -> Controller loop: stops at the first
/// ACCEPT/PATCH or after max_iterations. The controller's revision
/// suggestions are threaded verbatim into the next reasoner prompt.
/// initial_tokens seeds the trace token count (e.g. composer-call tokens
/// already spent on this instance).
LoopOutcome run_inner_loop(const Instance& instance, const RolePromptSet& prompts,
                           int max_iterations, Backend& backend,
                           std::int64_t initial_tokens = 0);

}  // namespace mc2
