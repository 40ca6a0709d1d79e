#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mc2/types.hpp"

namespace mc2 {

/// Answer normalization: trim, strip \boxed{...} / $...$ / quotes wrappers,
/// case-fold. Returns the normalized text.
std::string normalize_answer(const std::string& text);

/// Correct iff normalized forms match, or both parse as numbers (integers,
/// decimals, or simple fractions like "14/3") equal within 1e-6. Empty
/// predictions score incorrect.
bool normalize_and_score(const std::string& prediction, const std::string& gold);

/// Parses an integer, decimal, or a/b fraction. nullopt when non-numeric.
std::optional<double> parse_numeric(const std::string& text);

/// Spearman rank correlation with average-rank tie handling between task
/// quality grades (A > B > C) and correctness flags. nullopt for fewer than
/// 2 pairs or when either side is constant.
std::optional<double> rank_correlation(const std::vector<TaskQuality>& grades,
                                       const std::vector<bool>& correct);

}  // namespace mc2
