#include "mc2/reflection.hpp"

#include <sstream>

namespace mc2 {

Reflection reflect(const Trace& trace, bool correct) {
    Reflection r;
    r.instance_id = trace.instance_id;
    r.task_success = correct;

    const int T = static_cast<int>(trace.history.size());
    r.iteration_count = T;

    bool converged = trace.terminal_status == TerminalStatus::Accepted ||
                     trace.terminal_status == TerminalStatus::Corrected;
    bool max_iter = trace.terminal_status == TerminalStatus::MaxIteration;

    int m_yes = 0;  // iterations where the monitor flags an error
    int c_3 = 0;    // iterations where the controller restarts
    for (const auto& it : trace.history) {
        if (it.monitor.error_found) ++m_yes;
        if (it.controller.action == Action::Restart) ++c_3;
    }
    bool last_flagged = trace.history.back().monitor.error_found;

    if (converged && T == 1) r.task_quality = TaskQuality::A;
    else if (converged) r.task_quality = TaskQuality::B;
    else r.task_quality = TaskQuality::C;

    if (converged && T <= 2) r.reasoner_quality = RoleQuality::Good;
    else if (max_iter && 2 * m_yes > T) r.reasoner_quality = RoleQuality::Poor;
    else r.reasoner_quality = RoleQuality::Ok;

    if (converged)
        r.monitor_quality = last_flagged ? RoleQuality::Poor : RoleQuality::Good;
    else
        r.monitor_quality = RoleQuality::Ok;

    if (converged && T <= 3) r.controller_quality = RoleQuality::Good;
    else if (max_iter && 2 * c_3 > T) r.controller_quality = RoleQuality::Poor;
    else r.controller_quality = RoleQuality::Ok;

    for (const auto& it : trace.history) {
        r.reasoner_answers.push_back(it.reasoner.final_answer);
        r.monitor_facts.push_back(
            {it.monitor.error_found, it.monitor.error_step, it.monitor.error_description});
        r.controller_facts.push_back({it.controller.action, it.controller.justification});
    }
    return r;
}

BatchFilter filter_batch(const std::vector<Trace>& traces, int max_iterations) {
    BatchFilter f;
    for (const auto& t : traces) {
        const int k = static_cast<int>(t.history.size());
        if (k == 1 && t.history.front().controller.action == Action::Accept)
            f.s_plus.push_back(t.instance_id);
        else if (k == max_iterations && t.history.back().controller.action == Action::Restart)
            f.s_minus.push_back(t.instance_id);
    }
    return f;
}

std::string render_reflection(const Reflection& r, Role role) {
    std::ostringstream out;
    out << "instance: " << r.instance_id << "\n";
    out << "outcome: " << (r.task_success ? "success" : "failure") << "\n";
    out << "task_quality: " << task_quality_name(r.task_quality) << "\n";
    out << "iterations: " << r.iteration_count << "\n";
    switch (role) {
        case Role::Reasoner:
            out << "reasoner_quality: " << role_quality_name(r.reasoner_quality) << "\n";
            out << "answers per iteration:";
            for (const auto& a : r.reasoner_answers) out << " [" << a << "]";
            out << "\n";
            break;
        case Role::Monitor:
            out << "monitor_quality: " << role_quality_name(r.monitor_quality) << "\n";
            for (std::size_t i = 0; i < r.monitor_facts.size(); ++i) {
                const auto& m = r.monitor_facts[i];
                out << "iter " << (i + 1) << ": error_found="
                    << (m.error_found ? "YES" : "NO") << " step=";
                if (m.error_step) out << *m.error_step;
                else out << "NONE";
                if (!m.description.empty()) out << " desc=" << m.description;
                out << "\n";
            }
            break;
        case Role::Controller:
            out << "controller_quality: " << role_quality_name(r.controller_quality) << "\n";
            for (std::size_t i = 0; i < r.controller_facts.size(); ++i) {
                const auto& c = r.controller_facts[i];
                out << "iter " << (i + 1) << ": action=" << action_name(c.action);
                if (!c.justification.empty()) out << " because=" << c.justification;
                out << "\n";
            }
            break;
    }
    return out.str();
}

}  // namespace mc2
