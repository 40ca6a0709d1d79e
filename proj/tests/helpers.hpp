#pragma once

#include <random>
#include <string>
#include <vector>

#include "mc2/types.hpp"

// Shared builders for scripted responses and synthetic traces.
namespace testutil {

inline std::string reasoner_resp(const std::string& answer) {
    return "Step 1: work through it.\nStep 2: conclude.\nFINAL_ANSWER: " + answer;
}

inline std::string monitor_no() {
    return "ERROR_FOUND: NO\nERROR_STEP: NONE\nERROR_DESC: none\nEXPLANATION: checks out";
}

inline std::string monitor_yes(int step) {
    return "ERROR_FOUND: YES\nERROR_STEP: " + std::to_string(step) +
           "\nERROR_DESC: arithmetic slip\nEXPLANATION: step looks wrong";
}

inline std::string controller_accept() {
    return "JUSTIFICATION: solution is clean\nACTION: 1";
}

inline std::string controller_restart(const std::string& suggestion) {
    return "ACTION: 3\nJUSTIFICATION: monitor flagged a problem\nSUGGESTION: " + suggestion;
}

inline std::string controller_patch(const std::string& corrected) {
    return "ACTION: 2\nJUSTIFICATION: small slip only\nCORRECTED_REASONING: adjust the last "
           "step\nCORRECTED_ANSWER: " +
           corrected;
}

inline std::string composer_resp(mc2::Role role, const std::string& body) {
    const char* tag = role == mc2::Role::Reasoner ? "P_R"
                      : role == mc2::Role::Monitor ? "P_M"
                                                   : "P_C";
    return std::string("Here is the rewritten prompt.\n") + tag + ": " + body;
}

inline std::string distiller_resp(const std::string& salt = "") {
    return "TRIGGER: multi-step arithmetic" + salt +
           "\nDO: verify each numbered step\nAVOID: skipping the final check\nTAGS: math, care";
}

inline std::string consolidator_resp() {
    return "RULES:\n1. Number every step.\n2. Verify before accepting.";
}

// ─── Synthetic traces ────────────────────────────────────────────────

inline mc2::IterationRecord make_iter(int index, mc2::Action action, bool monitor_yes_flag,
                                      const std::string& answer,
                                      const std::string& corrected = "") {
    mc2::IterationRecord it;
    it.index = index;
    it.reasoner.final_answer = answer;
    it.reasoner.full_text = "FINAL_ANSWER: " + answer;
    it.monitor.error_found = monitor_yes_flag;
    if (monitor_yes_flag) it.monitor.error_step = 1;
    it.monitor.full_text = monitor_yes_flag ? monitor_yes(1) : monitor_no();
    it.controller.action = action;
    switch (action) {
        case mc2::Action::Accept: it.controller.final_answer = answer; break;
        case mc2::Action::Patch:
            it.controller.final_answer = corrected.empty() ? answer + "'" : corrected;
            break;
        case mc2::Action::Restart:
            it.controller.revision_suggestions = "try again differently";
            break;
    }
    it.controller.full_text = "ACTION: " + std::to_string(mc2::encode_action(action));
    return it;
}

/// Random printable-ish string including newlines, quotes, and UTF-8.
inline std::string random_string(std::mt19937_64& rng, std::size_t max_len = 40) {
    static const std::string pool =
        "abcdefghijklmnopqrstuvwxyz ABC0123456789 {}[]\"'\\\n\t:;,.!?$%&*()<>=+-/";
    std::uniform_int_distribution<std::size_t> len(0, max_len);
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    std::uniform_int_distribution<int> utf8(0, 9);
    std::string s;
    std::size_t n = len(rng);
    for (std::size_t i = 0; i < n; ++i) s += pool[pick(rng)];
    if (utf8(rng) == 0) s += "π≈3.14159 – σ";
    return s;
}

inline mc2::PolicyUpdateMeta random_policy_meta(std::mt19937_64& rng) {
    mc2::PolicyUpdateMeta m;
    std::uniform_int_distribution<int> coin(0, 1);
    m.attempted = coin(rng) == 1;
    m.succeeded = m.attempted && coin(rng) == 1;
    m.prompt_before = random_string(rng);
    m.prompt_after = m.succeeded ? random_string(rng) : m.prompt_before;
    if (m.attempted) m.updater_model = "model-" + std::to_string(coin(rng));
    return m;
}

/// Random valid trace against budget max_iterations.
inline mc2::Trace random_trace(std::mt19937_64& rng, int max_iterations,
                               const std::string& instance_id) {
    std::uniform_int_distribution<int> pick_k(1, max_iterations);
    std::uniform_int_distribution<int> coin(0, 1);
    const int k = pick_k(rng);

    std::vector<mc2::IterationRecord> history;
    for (int i = 1; i <= k; ++i) {
        bool final = i == k;
        mc2::Action a = mc2::Action::Restart;
        if (final) {
            std::uniform_int_distribution<int> pick_a(1, k == max_iterations ? 3 : 2);
            a = mc2::decode_action(pick_a(rng));
        }
        mc2::IterationRecord it;
        it.index = i;
        it.reasoner.final_answer = random_string(rng, 12);
        it.reasoner.full_text = random_string(rng);
        it.reasoner.policy_update = random_policy_meta(rng);
        it.monitor.error_found = coin(rng) == 1;
        if (it.monitor.error_found && coin(rng) == 1) {
            std::uniform_int_distribution<int> step(1, 9);
            it.monitor.error_step = step(rng);
        }
        it.monitor.error_description = random_string(rng);
        it.monitor.explanation = random_string(rng);
        it.monitor.full_text = random_string(rng);
        it.monitor.policy_update = random_policy_meta(rng);
        it.controller.action = a;
        it.controller.justification = random_string(rng);
        if (a == mc2::Action::Restart) it.controller.revision_suggestions = random_string(rng);
        if (a == mc2::Action::Patch) it.controller.corrected_reasoning = random_string(rng);
        if (a != mc2::Action::Restart) it.controller.final_answer = random_string(rng, 12);
        it.controller.full_text = random_string(rng);
        it.controller.policy_update = random_policy_meta(rng);
        history.push_back(std::move(it));
    }
    std::uniform_int_distribution<int> toks(0, 5000);
    return mc2::make_trace(instance_id, std::move(history), max_iterations, toks(rng));
}

}  // namespace testutil
