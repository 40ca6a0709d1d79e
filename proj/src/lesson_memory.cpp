#include "mc2/lesson_memory.hpp"

#include <algorithm>
#include <cmath>

namespace mc2 {

double cosine(const std::vector<double>& u, const std::vector<double>& v) {
    if (u.size() != v.size())
        throw ProtocolError("cosine: dimension mismatch (" + std::to_string(u.size()) +
                            " vs " + std::to_string(v.size()) + ")");
    double dot = 0, nu = 0, nv = 0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        dot += u[i] * v[i];
        nu += u[i] * u[i];
        nv += v[i] * v[i];
    }
    if (nu == 0.0 || nv == 0.0) return 0.0;
    return dot / (std::sqrt(nu) * std::sqrt(nv));
}

void LessonBuffer::add(const MicroLesson& lesson) {
    auto& list = lessons_[static_cast<int>(lesson.role)];
    if (!list.empty() && lesson.batch_index < list.back().batch_index)
        throw ProtocolError("lesson batch indices must be nondecreasing");
    list.push_back(lesson);
}

std::vector<MicroLesson> LessonBuffer::window(Role role, int up_to_batch) const {
    std::vector<MicroLesson> out;
    if (up_to_batch < 1) return out;
    int lo = up_to_batch - window_;  // exclusive
    for (const auto& l : lessons_[static_cast<int>(role)])
        if (l.batch_index > lo && l.batch_index <= up_to_batch) out.push_back(l);
    return out;
}

const std::vector<MicroLesson>& LessonBuffer::all(Role role) const {
    return lessons_[static_cast<int>(role)];
}

std::vector<MicroLesson> retrieve(const EmbeddingVector& query, const LessonBuffer& buffer,
                                  Role role, int up_to_batch, int top_k) {
    if (top_k < 1) throw ConfigError("top_k must be >= 1");
    auto candidates = buffer.window(role, up_to_batch);

    std::vector<std::pair<double, std::size_t>> scored;
    scored.reserve(candidates.size());
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        double s = 0.0;
        if (candidates[i].embedding) s = cosine(query.values, *candidates[i].embedding);
        scored.emplace_back(s, i);
    }
    // Stable on buffer position: equal similarities keep insertion order.
    std::stable_sort(scored.begin(), scored.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });

    std::vector<MicroLesson> out;
    for (std::size_t i = 0; i < scored.size() && i < static_cast<std::size_t>(top_k); ++i)
        out.push_back(candidates[scored[i].second]);
    return out;
}

std::vector<MicroLesson> retrieve_for_instance(const Instance& instance, Backend& backend,
                                               const LessonBuffer& buffer, Role role,
                                               int batch_index, int top_k) {
    if (batch_index < 2) throw ProtocolError("no retrieval in batch 1");
    EmbeddingVector query;
    try {
        query = backend.embed(instance.question);
    } catch (const std::exception&) {
        return {};  // compile from meta-knowledge only
    }
    return retrieve(query, buffer, role, batch_index - 1, top_k);
}

}  // namespace mc2
