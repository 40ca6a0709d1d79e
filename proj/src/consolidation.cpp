#include "mc2/consolidation.hpp"

#include <algorithm>
#include <sstream>

#include "mc2/parsing.hpp"
#include "mc2/reflection.hpp"

namespace mc2 {

std::optional<MicroLesson> distill(Role role, const std::vector<Reflection>& selected,
                                   int batch_index, Backend& backend,
                                   const PromptLibrary& prompts) {
    if (selected.empty()) return std::nullopt;  // vacuous batch: no distiller call

    std::ostringstream reflections;
    for (const auto& r : selected) reflections << render_reflection(r, role) << "\n";

    std::string prompt =
        substitute(prompts.distiller(role), {{"reflections", reflections.str()}});

    std::optional<parsing::LessonFields> fields;
    for (int attempt = 0; attempt < 2 && !fields; ++attempt) {
        GenerationResult g;
        try {
            g = backend.generate({prompt, CallPurpose::Distiller, ""});
        } catch (const BackendError&) {
            return std::nullopt;  // backend down: skip the lesson, keep the run alive
        }
        fields = parsing::parse_lesson(g.text);
    }
    if (!fields) return std::nullopt;  // skip lesson this batch, buffer unchanged

    MicroLesson lesson;
    lesson.role = role;
    lesson.batch_index = batch_index;
    lesson.trigger = fields->trigger;
    lesson.action = fields->action;
    lesson.avoid = fields->avoid;
    lesson.tags = fields->tags;
    for (const auto& r : selected) {
        lesson.source_instance_ids.push_back(r.instance_id);
        if (r.task_success) ++lesson.outcome_mix.successes;
        else ++lesson.outcome_mix.failures;
    }
    // Embedded once at creation, from the serialized retrieval text.
    try {
        lesson.embedding = backend.embed(lesson.serialized_text()).values;
    } catch (const std::exception&) {
        lesson.embedding = std::nullopt;
    }
    return lesson;
}

MetaKnowledge consolidate(Role role, const MetaKnowledge& previous,
                          const std::vector<MicroLesson>& windowed_lessons,
                          int batch_index, Backend& backend,
                          const PromptLibrary& prompts) {
    std::ostringstream lessons;
    for (const auto& l : windowed_lessons) {
        lessons << "batch " << l.batch_index << ":\n";
        if (!l.trigger.empty()) lessons << "trigger: " << l.trigger << "\n";
        if (!l.action.empty()) lessons << "do: " << l.action << "\n";
        if (!l.avoid.empty()) lessons << "avoid: " << l.avoid << "\n";
        lessons << "\n";
    }

    std::string prompt = substitute(
        prompts.consolidator(role),
        {{"previous_rules", previous.rules.empty() ? "(none yet)" : previous.rules},
         {"lessons", lessons.str()}});

    MetaKnowledge k;
    k.role = role;
    k.batch_index = batch_index;
    for (const auto& l : windowed_lessons)
        if (std::find(k.source_window.begin(), k.source_window.end(), l.batch_index) ==
            k.source_window.end())
            k.source_window.push_back(l.batch_index);

    std::optional<std::string> rules;
    for (int attempt = 0; attempt < 2 && !rules; ++attempt) {
        GenerationResult g;
        try {
            g = backend.generate({prompt, CallPurpose::Consolidator, ""});
        } catch (const BackendError&) {
            break;  // backend down: identity update below
        }
        rules = parsing::parse_rules(g.text);
    }
    // Identity update on repeated parse failure: stable rules persist.
    k.rules = rules ? *rules : previous.rules;
    return k;
}

}  // namespace mc2
