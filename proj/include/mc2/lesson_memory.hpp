#pragma once

#include <vector>

#include "mc2/backend.hpp"
#include "mc2/types.hpp"

namespace mc2 {

/// uᵀv / (‖u‖‖v‖); 0 when either norm is zero. Throws ProtocolError on a
/// dimension mismatch.
double cosine(const std::vector<double>& u, const std::vector<double>& v);

/// Per-role micro-lesson store with sliding-window reads. Unbounded on
/// disk/memory; nothing outside the window is ever served.
class LessonBuffer {
public:
    explicit LessonBuffer(int window) : window_(window) {
        if (window < 1) throw ConfigError("window must be >= 1");
    }

    /// Appends a lesson; batch indices must be nondecreasing per role.
    void add(const MicroLesson& lesson);

    /// Lessons for `role` with batch_index in (up_to_batch - w, up_to_batch],
    /// in insertion order.
    std::vector<MicroLesson> window(Role role, int up_to_batch) const;

    const std::vector<MicroLesson>& all(Role role) const;
    int window_size() const { return window_; }

private:
    int window_;
    std::vector<MicroLesson> lessons_[3];
};

/// Top-k cosine retrieval against a query embedding over
/// window(role, up_to_batch). Returns min(k, available) lessons in
/// nonincreasing similarity order; ties broken by earlier buffer position
/// (stable). Lessons without an embedding score 0.
std::vector<MicroLesson> retrieve(const EmbeddingVector& query, const LessonBuffer& buffer,
                                  Role role, int up_to_batch, int top_k);

/// Convenience wrapper: embeds the instance's raw question text via the
/// backend and retrieves from window(buffer, batch_index - 1). Requires
/// batch_index >= 2 (no retrieval in batch 1). On embedding failure returns
/// an empty list (prompts are compiled from meta-knowledge only).
std::vector<MicroLesson> retrieve_for_instance(const Instance& instance, Backend& backend,
                                               const LessonBuffer& buffer, Role role,
                                               int batch_index, int top_k);

}  // namespace mc2
