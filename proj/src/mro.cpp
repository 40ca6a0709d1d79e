#include "mc2/mro.hpp"

#include "mc2/parsing.hpp"

namespace mc2 {

namespace {

// Wire-format contracts paired with the parsers in parsing.cpp.
const char* kReasonerContract =
    "End your response with a line of the form:\n"
    "FINAL_ANSWER: <answer>";

const char* kMonitorContract =
    "End your response with these fields:\n"
    "ERROR_FOUND: YES or NO\n"
    "ERROR_STEP: <first suspicious step number, or NONE>\n"
    "ERROR_DESC: <short actionable description>\n"
    "EXPLANATION: <justification of your judgment>";

const char* kControllerContract =
    "End your response with these fields:\n"
    "ACTION: 1 (accept), 2 (patch), or 3 (restart)\n"
    "JUSTIFICATION: <why>\n"
    "SUGGESTION: <revision plan; required for action 3>\n"
    "CORRECTED_REASONING: <corrected reasoning; for action 2>\n"
    "CORRECTED_ANSWER: <corrected final answer; required for action 2>";

}  // namespace

const std::string& LoopOutcome::final_prediction() const {
    static const std::string empty;
    return trace ? trace->final_prediction : empty;
}

ReasonerOutput run_reasoner(const Instance& instance, const std::string& feedback,
                            const std::string& policy_prompt, Backend& backend,
                            std::int64_t* tokens) {
    std::string prompt = policy_prompt;
    prompt += "\n\n";
    prompt += kReasonerContract;
    prompt += "\n\nProblem:\n" + instance.question;
    if (!feedback.empty())
        prompt += "\n\nController feedback on your previous attempt:\n" + feedback;

    GenerationResult r = backend.generate({prompt, CallPurpose::Reasoner, instance.id});
    if (tokens) *tokens += r.completion_tokens;
    return parsing::parse_reasoner_output(r.text);
}

MonitorReport run_monitor(const Instance& instance, const ReasonerOutput& reasoner,
                          const std::string& policy_prompt, Backend& backend,
                          std::int64_t* tokens) {
    std::string prompt = policy_prompt;
    prompt += "\n\n";
    prompt += kMonitorContract;
    prompt += "\n\nProblem:\n" + instance.question;
    prompt += "\n\nCandidate solution:\n" + reasoner.full_text;

    GenerationResult r = backend.generate({prompt, CallPurpose::Monitor, instance.id});
    if (tokens) *tokens += r.completion_tokens;
    return parsing::parse_monitor_report(r.text);
}

ControllerDecision run_controller(const Instance& instance, const ReasonerOutput& reasoner,
                                  const MonitorReport& monitor,
                                  const std::string& policy_prompt, Backend& backend,
                                  std::int64_t* tokens) {
    std::string prompt = policy_prompt;
    prompt += "\n\n";
    prompt += kControllerContract;
    prompt += "\n\nProblem:\n" + instance.question;
    prompt += "\n\nCandidate answer: " + reasoner.final_answer;
    prompt += "\n\nCandidate solution:\n" + reasoner.full_text;
    prompt += "\n\nMonitor report:\n" + monitor.full_text;

    GenerationResult r = backend.generate({prompt, CallPurpose::Controller, instance.id});
    if (tokens) *tokens += r.completion_tokens;

    auto decision = parsing::parse_controller_decision(r.text, reasoner.final_answer);
    if (decision) return *decision;

    // Unparsable decision: keep the loop total by restarting with an
    // explicit-structure request. On the final iteration this terminal
    // RESTART is budget exhaustion.
    ControllerDecision fallback;
    fallback.action = Action::Restart;
    fallback.revision_suggestions = "decision unparsable; retry with explicit structure";
    fallback.full_text = r.text;
    return fallback;
}

LoopOutcome run_inner_loop(const Instance& instance, const RolePromptSet& prompts,
                           int max_iterations, Backend& backend,
                           std::int64_t initial_tokens) {
    if (max_iterations < 1) throw ConfigError("max_iterations must be >= 1");

    LoopOutcome out;
    std::vector<IterationRecord> history;
    std::string feedback;  // empty exactly on iteration 1 (u^{-1} = empty)
    std::int64_t tokens = initial_tokens;

    for (int k = 1; k <= max_iterations; ++k) {
        IterationRecord rec;
        rec.index = k;
        try {
            rec.reasoner = run_reasoner(instance, feedback, prompts.reasoner, backend, &tokens);
            rec.monitor = run_monitor(instance, rec.reasoner, prompts.monitor, backend, &tokens);
            rec.controller = run_controller(instance, rec.reasoner, rec.monitor,
                                            prompts.controller, backend, &tokens);
        } catch (const BackendError& e) {
            out.partial = std::move(history);
            out.infra_failed = true;
            out.failure_reason = e.what();
            return out;
        }
        history.push_back(std::move(rec));
        if (history.back().controller.action != Action::Restart) break;
        feedback = history.back().controller.revision_suggestions;
    }

    out.trace = make_trace(instance.id, std::move(history), max_iterations, tokens);
    return out;
}

}  // namespace mc2
