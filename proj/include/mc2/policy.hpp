#pragma once

#include <string>
#include <vector>

#include "mc2/backend.hpp"
#include "mc2/prompts.hpp"
#include "mc2/types.hpp"

namespace mc2 {

struct CompiledPrompt {
    std::string text;
    PolicyUpdateMeta meta;
};

/// One composer call rewriting a role's policy prompt for a specific
/// instance, conditioned on global meta-knowledge and retrieved lessons.
/// Validity checks on the output: the role's tag block is present and
/// parseable, and the compiled prompt fits the context budget. One
/// regeneration on failure; a second failure falls back to base_prompt
/// unchanged with meta.succeeded=false.
CompiledPrompt compile_prompt(Role role, const std::string& base_prompt,
                              const MetaKnowledge& knowledge,
                              const std::vector<MicroLesson>& retrieved,
                              const Instance& instance, Backend& backend,
                              const PromptLibrary& prompts,
                              std::size_t context_budget = 8000,
                              std::int64_t* tokens = nullptr);

/// Removes every verbatim occurrence of the question from a compiled
/// prompt, leaving guidance-only text.
std::string strip_question(const std::string& compiled_prompt, const std::string& question);

}  // namespace mc2
