#pragma once

#include <string>
#include <vector>

#include "mc2/types.hpp"

namespace mc2 {

/// Deterministic reflection extractor: pure function of (trace, correctness).
/// No model calls.
Reflection reflect(const Trace& trace, bool correct);

struct BatchFilter {
    std::vector<std::string> s_plus;   // succeed immediately: K=1 and first action ACCEPT
    std::vector<std::string> s_minus;  // exhaust the budget: K=N and last action RESTART
};

/// Eq.-9 style filter over one batch of traces. The two sets are disjoint
/// by construction (the membership predicates disagree on the final action,
/// except when N=1, where they disagree on the first).
BatchFilter filter_batch(const std::vector<Trace>& traces, int max_iterations);

/// Renders the role-relevant view of a reflection as distiller input text.
/// Contains only trace-derived fields plus the success/failure tag; never
/// the gold answer.
std::string render_reflection(const Reflection& r, Role role);

}  // namespace mc2
