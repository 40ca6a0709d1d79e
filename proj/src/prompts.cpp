#include "mc2/prompts.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

namespace mc2 {

namespace {

const char* kKinds[] = {"cold_start", "guided", "composer", "distiller", "consolidator"};

std::string default_text(Role role, const std::string& kind) {
    std::string who = role_name(role);
    if (kind == "cold_start") {
        switch (role) {
            case Role::Reasoner:
                return "You are the Reasoner. Solve the problem step by step, numbering "
                       "each step (Step 1, Step 2, ...). Be explicit about every "
                       "transformation so an auditor can check each step.";
            case Role::Monitor:
                return "You are the Monitor. Audit the candidate solution step by step "
                       "and report whether any error could affect the final answer. "
                       "Point to the first suspicious numbered step.";
            case Role::Controller:
                return "You are the Controller. Given the candidate solution and the "
                       "monitor's report, decide whether to accept the answer, patch it "
                       "with a corrected answer, or restart with revision suggestions.";
        }
    }
    if (kind == "guided") {
        return "You are the " + who + ". Apply the accumulated guidance below.\n\n"
               "Global rules:\n{meta_knowledge}\n\nRelevant lessons:\n{lessons}";
    }
    if (kind == "composer") {
        return "You coach the " + who + " agent. Rewrite its role prompt for the "
               "specific problem below, weaving in whichever of the global rules and "
               "lessons apply. Keep it concise and actionable.\n\n"
               "Current role prompt:\n{base_prompt}\n\n"
               "Global rules:\n{meta_knowledge}\n\n"
               "Retrieved lessons:\n{lessons}\n\n"
               "Problem:\n{question}\n\n"
               "Respond with the rewritten prompt in a single block starting with the "
               "tag '" + std::string(role == Role::Reasoner ? "P_R" :
                                      role == Role::Monitor ? "P_M" : "P_C") + ":'.";
    }
    if (kind == "distiller") {
        return "You distill experience for the " + who + " agent. Below are structured "
               "reflections from the best and worst instances of the latest batch. "
               "Identify recurring patterns and produce one concise reusable lesson.\n\n"
               "Reflections:\n{reflections}\n\n"
               "Respond with exactly these fields:\n"
               "TRIGGER: <when this lesson applies>\n"
               "DO: <positive rules>\n"
               "AVOID: <negative rules>\n"
               "TAGS: <comma-separated tags>";
    }
    if (kind == "consolidator") {
        return "You maintain the long-term rulebook for the " + who + " agent. Merge the "
               "recent lessons below into the previous rules: keep rules that stay "
               "supported, drop stale or contradicted ones, and rewrite the result as a "
               "short list the agent can execute directly.\n\n"
               "Previous rules:\n{previous_rules}\n\n"
               "Recent lessons:\n{lessons}\n\n"
               "Respond with a single block starting with the tag 'RULES:'.";
    }
    return "";
}

}  // namespace

std::string substitute(const std::string& tmpl,
                       const std::map<std::string, std::string>& values) {
    std::string out = tmpl;
    for (const auto& [key, value] : values) {
        std::string needle = "{" + key + "}";
        std::size_t pos = 0;
        while ((pos = out.find(needle, pos)) != std::string::npos) {
            out.replace(pos, needle.size(), value);
            pos += value.size();
        }
    }
    return out;
}

PromptLibrary PromptLibrary::defaults() {
    PromptLibrary lib;
    for (Role r : kAllRoles)
        for (const char* kind : kKinds)
            lib.texts_[std::string(role_name(r)) + "_" + kind] = default_text(r, kind);
    return lib;
}

PromptLibrary PromptLibrary::load(const std::string& dir) {
    PromptLibrary lib = defaults();
    if (dir.empty()) return lib;
    for (auto& [key, text] : lib.texts_) {
        std::filesystem::path p = std::filesystem::path(dir) / (key + ".txt");
        if (std::filesystem::exists(p)) {
            std::ifstream in(p);
            std::stringstream ss;
            ss << in.rdbuf();
            text = ss.str();
        }
    }
    return lib;
}

const std::string& PromptLibrary::cold_start(Role r) const {
    return texts_.at(std::string(role_name(r)) + "_cold_start");
}
const std::string& PromptLibrary::guided(Role r) const {
    return texts_.at(std::string(role_name(r)) + "_guided");
}
const std::string& PromptLibrary::composer(Role r) const {
    return texts_.at(std::string(role_name(r)) + "_composer");
}
const std::string& PromptLibrary::distiller(Role r) const {
    return texts_.at(std::string(role_name(r)) + "_distiller");
}
const std::string& PromptLibrary::consolidator(Role r) const {
    return texts_.at(std::string(role_name(r)) + "_consolidator");
}

RolePromptSet PromptLibrary::base_prompts() const {
    RolePromptSet p;
    p.reasoner = cold_start(Role::Reasoner);
    p.monitor = cold_start(Role::Monitor);
    p.controller = cold_start(Role::Controller);
    p.version = 0;
    p.provenance.compiled = false;
    return p;
}

}  // namespace mc2
