#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mc2/types.hpp"

namespace mc2::parsing {

// Tagged-tail protocol shared by every role response. Tags are matched
// case-insensitively at line starts, with '_' and ' ' interchangeable
// ("FINAL_ANSWER:" and "Final Answer:" are the same tag), tolerant of
// surrounding prose and leading bullets. The last occurrence of a tag wins.

struct TagValue {
    std::string value;
};

/// Scans text for the given tags. Single-line tags capture the rest of the
/// line; block tags capture until the next recognized tag or end of text.
std::map<std::string, std::string> scan_tags(const std::string& text,
                                             const std::vector<std::string>& single_line,
                                             const std::vector<std::string>& block);

std::string trim(const std::string& s);

/// Extracts the final-answer field; empty string when absent.
ReasonerOutput parse_reasoner_output(const std::string& full_text);

/// Parses the monitor's structured tail. Unparsable reports degrade to
/// (YES, NONE, "unparsable monitor report") so scrutiny is routed onward.
MonitorReport parse_monitor_report(const std::string& full_text);

/// Parses the controller decision. Returns nullopt when the decision is
/// unparsable (no ACTION tag, bad action code, or PATCH without a corrected
/// answer); the loop applies the RESTART fallback.
std::optional<ControllerDecision> parse_controller_decision(const std::string& full_text,
                                                            const std::string& reasoner_answer);

/// Extracts the compiled prompt for one role from composer output
/// (the P_R / P_M / P_C block). nullopt when the field is missing or empty.
std::optional<std::string> parse_composer_output(const std::string& text, Role role);

struct LessonFields {
    std::string trigger;
    std::string action;
    std::string avoid;
    std::vector<std::string> tags;
};

/// Parses distiller output. Requires TRIGGER and DO to be present.
std::optional<LessonFields> parse_lesson(const std::string& text);

/// Parses consolidator output: the RULES block. nullopt when missing.
std::optional<std::string> parse_rules(const std::string& text);

}  // namespace mc2::parsing
