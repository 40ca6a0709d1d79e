#pragma once

#include <map>
#include <string>

#include "mc2/types.hpp"

namespace mc2 {

/// Replaces every "{key}" occurrence with the mapped value.
std::string substitute(const std::string& tmpl,
                       const std::map<std::string, std::string>& values);

/// Base prompt templates, one per role per kind. Defaults are built in;
/// a prompt directory may override any of them with files named
/// <role>_<kind>.txt (kinds: cold_start, guided, composer, distiller,
/// consolidator).
class PromptLibrary {
public:
    static PromptLibrary defaults();

    /// Loads overrides from dir; missing files keep the default text.
    /// An empty dir string yields the defaults.
    static PromptLibrary load(const std::string& dir);

    const std::string& cold_start(Role r) const;
    const std::string& guided(Role r) const;      // {meta_knowledge} {lessons} placeholders
    const std::string& composer(Role r) const;    // {base_prompt} {meta_knowledge} {lessons} {question}
    const std::string& distiller(Role r) const;   // {reflections}
    const std::string& consolidator(Role r) const;  // {previous_rules} {lessons}

    /// Base role policy set (cold-start policies, version 0).
    RolePromptSet base_prompts() const;

private:
    std::map<std::string, std::string> texts_;  // key "<role>_<kind>"
};

}  // namespace mc2
