#include "mc2/policy.hpp"

#include <sstream>

#include "mc2/parsing.hpp"

namespace mc2 {

CompiledPrompt compile_prompt(Role role, const std::string& base_prompt,
                              const MetaKnowledge& knowledge,
                              const std::vector<MicroLesson>& retrieved,
                              const Instance& instance, Backend& backend,
                              const PromptLibrary& prompts, std::size_t context_budget,
                              std::int64_t* tokens) {
    std::ostringstream lessons;
    if (retrieved.empty()) lessons << "(none)";
    for (const auto& l : retrieved) {
        lessons << "- trigger: " << l.trigger << "\n  do: " << l.action;
        if (!l.avoid.empty()) lessons << "\n  avoid: " << l.avoid;
        lessons << "\n";
    }

    std::string composer_prompt = substitute(
        prompts.composer(role),
        {{"base_prompt", base_prompt},
         {"meta_knowledge", knowledge.rules.empty() ? "(none)" : knowledge.rules},
         {"lessons", lessons.str()},
         {"question", instance.question}});

    CompiledPrompt out;
    out.meta.attempted = true;
    out.meta.prompt_before = base_prompt;

    for (int attempt = 0; attempt < 2; ++attempt) {
        GenerationResult g;
        try {
            g = backend.generate({composer_prompt, CallPurpose::Composer, instance.id});
        } catch (const BackendError&) {
            break;  // fall back to base prompt
        }
        if (tokens) *tokens += g.completion_tokens;
        out.meta.updater_model = g.model_id;
        auto compiled = parsing::parse_composer_output(g.text, role);
        if (compiled && compiled->size() <= context_budget) {
            out.text = *compiled;
            out.meta.succeeded = true;
            out.meta.prompt_after = *compiled;
            return out;
        }
    }

    // Fallback: no update is applied for this step.
    out.text = base_prompt;
    out.meta.succeeded = false;
    out.meta.prompt_after = base_prompt;
    return out;
}

std::string strip_question(const std::string& compiled_prompt, const std::string& question) {
    if (question.empty()) return compiled_prompt;
    std::string out = compiled_prompt;
    std::size_t pos = 0;
    while ((pos = out.find(question, pos)) != std::string::npos)
        out.erase(pos, question.size());
    return out;
}

}  // namespace mc2
