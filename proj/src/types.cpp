#include "mc2/types.hpp"

namespace mc2 {

int encode_action(Action a) { return static_cast<int>(a); }

Action decode_action(int code) {
    switch (code) {
        case 1: return Action::Accept;
        case 2: return Action::Patch;
        case 3: return Action::Restart;
        default:
            throw ProtocolError("unknown action code " + std::to_string(code));
    }
}

const char* action_name(Action a) {
    switch (a) {
        case Action::Accept: return "ACCEPT";
        case Action::Patch: return "PATCH";
        case Action::Restart: return "RESTART";
    }
    return "?";
}

const char* role_name(Role r) {
    switch (r) {
        case Role::Reasoner: return "reasoner";
        case Role::Monitor: return "monitor";
        case Role::Controller: return "controller";
    }
    return "?";
}

Role role_from_name(const std::string& name) {
    if (name == "reasoner") return Role::Reasoner;
    if (name == "monitor") return Role::Monitor;
    if (name == "controller") return Role::Controller;
    throw ProtocolError("unknown role: " + name);
}

const std::string& RolePromptSet::for_role(Role r) const {
    switch (r) {
        case Role::Reasoner: return reasoner;
        case Role::Monitor: return monitor;
        case Role::Controller: return controller;
    }
    throw ProtocolError("bad role");
}

std::string& RolePromptSet::for_role(Role r) {
    switch (r) {
        case Role::Reasoner: return reasoner;
        case Role::Monitor: return monitor;
        case Role::Controller: return controller;
    }
    throw ProtocolError("bad role");
}

const char* terminal_status_name(TerminalStatus s) {
    switch (s) {
        case TerminalStatus::Accepted: return "accepted";
        case TerminalStatus::Corrected: return "corrected";
        case TerminalStatus::MaxIteration: return "max_iteration";
    }
    return "?";
}

TerminalStatus terminal_status_from_name(const std::string& name) {
    if (name == "accepted") return TerminalStatus::Accepted;
    if (name == "corrected") return TerminalStatus::Corrected;
    if (name == "max_iteration") return TerminalStatus::MaxIteration;
    throw ProtocolError("unknown terminal status: " + name);
}

Trace make_trace(std::string instance_id, std::vector<IterationRecord> history,
                 int max_iterations, std::int64_t token_count) {
    if (max_iterations < 1) throw ProtocolError("max_iterations must be >= 1");
    if (history.empty()) throw ProtocolError("trace history is empty");
    if (static_cast<int>(history.size()) > max_iterations)
        throw ProtocolError("trace history exceeds iteration budget");
    if (token_count < 0) throw ProtocolError("negative token count");

    for (std::size_t i = 0; i < history.size(); ++i) {
        if (history[i].index != static_cast<int>(i) + 1)
            throw ProtocolError("trace iteration indices must be 1..K contiguous");
        bool final = (i + 1 == history.size());
        if (!final && history[i].controller.action != Action::Restart)
            throw ProtocolError("non-final iteration must end in RESTART");
    }

    const auto& last = history.back().controller;
    Trace t;
    t.instance_id = std::move(instance_id);
    t.token_count = token_count;
    switch (last.action) {
        case Action::Accept:
            t.terminal_status = TerminalStatus::Accepted;
            t.final_prediction = last.final_answer;
            break;
        case Action::Patch:
            t.terminal_status = TerminalStatus::Corrected;
            t.final_prediction = last.final_answer;
            break;
        case Action::Restart:
            if (static_cast<int>(history.size()) != max_iterations)
                throw ProtocolError("RESTART terminal allowed only when the budget is exhausted");
            t.terminal_status = TerminalStatus::MaxIteration;
            // Budget exhausted: the trace defines no other answer, so score the
            // last reasoner attempt.
            t.final_prediction = history.back().reasoner.final_answer;
            break;
    }
    t.history = std::move(history);
    return t;
}

void validate_trace(const Trace& trace, int max_iterations) {
    Trace rebuilt = make_trace(trace.instance_id, trace.history, max_iterations, trace.token_count);
    if (rebuilt.terminal_status != trace.terminal_status)
        throw ProtocolError("terminal status inconsistent with history");
    if (rebuilt.final_prediction != trace.final_prediction)
        throw ProtocolError("final prediction inconsistent with history");
}

const char* task_quality_name(TaskQuality q) {
    switch (q) {
        case TaskQuality::A: return "A";
        case TaskQuality::B: return "B";
        case TaskQuality::C: return "C";
    }
    return "?";
}

const char* role_quality_name(RoleQuality q) {
    switch (q) {
        case RoleQuality::Good: return "good";
        case RoleQuality::Ok: return "ok";
        case RoleQuality::Poor: return "poor";
    }
    return "?";
}

std::string MicroLesson::serialized_text() const {
    // Main fields only, trigger first then action.
    std::string out = trigger;
    if (!out.empty() && !action.empty()) out += "\n";
    out += action;
    return out;
}

}  // namespace mc2
