#pragma once

#include <optional>
#include <vector>

#include "mc2/backend.hpp"
#include "mc2/prompts.hpp"
#include "mc2/types.hpp"

namespace mc2 {

/// One backend call distilling the selected reflections into a role
/// micro-lesson; the lesson is embedded from its serialized text at
/// creation. One regeneration on unparsable output; a second failure skips
/// the lesson for this batch (nullopt). Returns nullopt without a call for
/// an empty selection.
std::optional<MicroLesson> distill(Role role, const std::vector<Reflection>& selected,
                                   int batch_index, Backend& backend,
                                   const PromptLibrary& prompts);

/// One backend call merging the windowed lessons into the previous
/// meta-knowledge. One regeneration on unparsable output; a second failure
/// is the identity update (previous rules carried forward).
MetaKnowledge consolidate(Role role, const MetaKnowledge& previous,
                          const std::vector<MicroLesson>& windowed_lessons,
                          int batch_index, Backend& backend,
                          const PromptLibrary& prompts);

}  // namespace mc2
