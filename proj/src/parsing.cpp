#include "mc2/parsing.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace mc2::parsing {

namespace {

char fold(char c) {
    if (c == ' ') return '_';
    return static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
}

// Matches `tag` at position i of line (tag given in canonical UPPER_SNAKE
// form). Returns the position just past the ':' on success.
std::optional<std::size_t> match_tag(const std::string& line, std::size_t i,
                                     const std::string& tag) {
    std::size_t j = 0;
    while (j < tag.size()) {
        if (i >= line.size()) return std::nullopt;
        if (fold(line[i]) != fold(tag[j])) return std::nullopt;
        ++i;
        ++j;
    }
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    if (i >= line.size() || line[i] != ':') return std::nullopt;
    return i + 1;
}

std::size_t skip_bullets(const std::string& line) {
    std::size_t i = 0;
    while (i < line.size() &&
           (line[i] == ' ' || line[i] == '\t' || line[i] == '-' || line[i] == '*' ||
            line[i] == '#' || line[i] == '>'))
        ++i;
    return i;
}

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::string cur;
    for (char c : text) {
        if (c == '\n') {
            lines.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    lines.push_back(cur);
    return lines;
}

}  // namespace

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::map<std::string, std::string> scan_tags(const std::string& text,
                                             const std::vector<std::string>& single_line,
                                             const std::vector<std::string>& block) {
    std::vector<std::string> all = single_line;
    all.insert(all.end(), block.begin(), block.end());

    auto lines = split_lines(text);
    std::map<std::string, std::string> out;

    for (std::size_t li = 0; li < lines.size(); ++li) {
        std::size_t start = skip_bullets(lines[li]);
        for (const auto& tag : all) {
            auto after = match_tag(lines[li], start, tag);
            if (!after) continue;
            std::string value = lines[li].substr(*after);
            bool is_block = std::find(block.begin(), block.end(), tag) != block.end();
            if (is_block) {
                // Capture following lines until the next recognized tag.
                std::size_t lj = li + 1;
                for (; lj < lines.size(); ++lj) {
                    std::size_t s2 = skip_bullets(lines[lj]);
                    bool is_tag = false;
                    for (const auto& t2 : all) {
                        if (match_tag(lines[lj], s2, t2)) {
                            is_tag = true;
                            break;
                        }
                    }
                    if (is_tag) break;
                    value += "\n" + lines[lj];
                }
            }
            out[tag] = trim(value);  // last occurrence wins
            break;
        }
    }
    return out;
}

ReasonerOutput parse_reasoner_output(const std::string& full_text) {
    ReasonerOutput out;
    out.full_text = full_text;
    auto tags = scan_tags(full_text, {"FINAL_ANSWER"}, {});
    auto it = tags.find("FINAL_ANSWER");
    if (it != tags.end()) out.final_answer = it->second;
    return out;
}

MonitorReport parse_monitor_report(const std::string& full_text) {
    MonitorReport rep;
    rep.full_text = full_text;
    auto tags = scan_tags(full_text, {"ERROR_FOUND", "ERROR_STEP"},
                          {"ERROR_DESC", "EXPLANATION"});

    auto found = tags.find("ERROR_FOUND");
    std::string verdict;
    if (found != tags.end()) {
        std::string v = found->second;
        std::transform(v.begin(), v.end(), v.begin(),
                       [](unsigned char c) { return std::toupper(c); });
        if (v.rfind("YES", 0) == 0) verdict = "YES";
        else if (v.rfind("NO", 0) == 0) verdict = "NO";
    }
    if (verdict.empty()) {
        // Conservative fallback: route scrutiny to the controller.
        rep.error_found = true;
        rep.error_step = std::nullopt;
        rep.error_description = "unparsable monitor report";
        return rep;
    }

    rep.error_found = (verdict == "YES");
    if (rep.error_found) {
        auto step = tags.find("ERROR_STEP");
        if (step != tags.end()) {
            try {
                std::size_t pos = 0;
                int v = std::stoi(step->second, &pos);
                if (v >= 1) rep.error_step = v;
            } catch (...) {
                // NONE or non-numeric: leave absent
            }
        }
    }
    if (auto it = tags.find("ERROR_DESC"); it != tags.end()) rep.error_description = it->second;
    if (auto it = tags.find("EXPLANATION"); it != tags.end()) rep.explanation = it->second;
    return rep;
}

std::optional<ControllerDecision> parse_controller_decision(const std::string& full_text,
                                                            const std::string& reasoner_answer) {
    auto tags = scan_tags(full_text, {"ACTION", "CORRECTED_ANSWER"},
                          {"JUSTIFICATION", "SUGGESTION", "CORRECTED_REASONING"});
    auto it = tags.find("ACTION");
    if (it == tags.end()) return std::nullopt;

    std::string v = it->second;
    std::transform(v.begin(), v.end(), v.begin(),
                   [](unsigned char c) { return std::toupper(c); });
    std::optional<Action> action;
    if (v.rfind("1", 0) == 0 || v.rfind("ACCEPT", 0) == 0) action = Action::Accept;
    else if (v.rfind("2", 0) == 0 || v.rfind("PATCH", 0) == 0) action = Action::Patch;
    else if (v.rfind("3", 0) == 0 || v.rfind("RESTART", 0) == 0) action = Action::Restart;
    if (!action) return std::nullopt;

    ControllerDecision d;
    d.full_text = full_text;
    d.action = *action;
    if (auto j = tags.find("JUSTIFICATION"); j != tags.end()) d.justification = j->second;

    switch (*action) {
        case Action::Accept:
            d.final_answer = reasoner_answer;
            break;
        case Action::Patch: {
            auto ca = tags.find("CORRECTED_ANSWER");
            if (ca == tags.end() || ca->second.empty()) return std::nullopt;
            d.final_answer = ca->second;
            if (auto cr = tags.find("CORRECTED_REASONING"); cr != tags.end())
                d.corrected_reasoning = cr->second;
            break;
        }
        case Action::Restart:
            if (auto s = tags.find("SUGGESTION"); s != tags.end())
                d.revision_suggestions = s->second;
            break;
    }
    return d;
}

std::optional<std::string> parse_composer_output(const std::string& text, Role role) {
    const char* tag = nullptr;
    switch (role) {
        case Role::Reasoner: tag = "P_R"; break;
        case Role::Monitor: tag = "P_M"; break;
        case Role::Controller: tag = "P_C"; break;
    }
    auto tags = scan_tags(text, {}, {"P_R", "P_M", "P_C"});
    auto it = tags.find(tag);
    if (it == tags.end() || it->second.empty()) return std::nullopt;
    return it->second;
}

std::optional<LessonFields> parse_lesson(const std::string& text) {
    auto tags = scan_tags(text, {"TAGS"}, {"TRIGGER", "DO", "AVOID"});
    auto trig = tags.find("TRIGGER");
    auto doit = tags.find("DO");
    if (trig == tags.end() || doit == tags.end() || trig->second.empty() || doit->second.empty())
        return std::nullopt;

    LessonFields f;
    f.trigger = trig->second;
    f.action = doit->second;
    if (auto a = tags.find("AVOID"); a != tags.end()) f.avoid = a->second;
    if (auto t = tags.find("TAGS"); t != tags.end()) {
        std::stringstream ss(t->second);
        std::string item;
        while (std::getline(ss, item, ',')) {
            item = trim(item);
            if (!item.empty()) f.tags.push_back(item);
        }
    }
    return f;
}

std::optional<std::string> parse_rules(const std::string& text) {
    auto tags = scan_tags(text, {}, {"RULES"});
    auto it = tags.find("RULES");
    if (it == tags.end() || it->second.empty()) return std::nullopt;
    return it->second;
}

}  // namespace mc2::parsing
