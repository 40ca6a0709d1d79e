#include "mc2/scoring.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>

#include "mc2/parsing.hpp"

namespace mc2 {

namespace {

bool strip_wrapper(std::string& s, const std::string& open, const std::string& close) {
    if (s.size() >= open.size() + close.size() && s.rfind(open, 0) == 0 &&
        s.compare(s.size() - close.size(), close.size(), close) == 0) {
        s = s.substr(open.size(), s.size() - open.size() - close.size());
        return true;
    }
    return false;
}

}  // namespace

std::string normalize_answer(const std::string& text) {
    std::string s = parsing::trim(text);
    bool changed = true;
    while (changed) {
        changed = false;
        changed |= strip_wrapper(s, "\\boxed{", "}");
        changed |= strip_wrapper(s, "$", "$");
        changed |= strip_wrapper(s, "\"", "\"");
        changed |= strip_wrapper(s, "\\(", "\\)");
        std::string t = parsing::trim(s);
        if (t != s) {
            s = t;
            changed = true;
        }
    }
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return s;
}

std::optional<double> parse_numeric(const std::string& text) {
    std::string s = parsing::trim(text);
    if (s.empty()) return std::nullopt;
    // a/b fraction
    auto slash = s.find('/');
    if (slash != std::string::npos && slash > 0 && slash + 1 < s.size()) {
        auto num = parse_numeric(s.substr(0, slash));
        auto den = parse_numeric(s.substr(slash + 1));
        if (num && den && *den != 0.0) return *num / *den;
        return std::nullopt;
    }
    try {
        std::size_t pos = 0;
        double v = std::stod(s, &pos);
        if (pos == s.size()) return v;
    } catch (...) {
    }
    return std::nullopt;
}

bool normalize_and_score(const std::string& prediction, const std::string& gold) {
    if (parsing::trim(prediction).empty()) return false;
    std::string p = normalize_answer(prediction);
    std::string g = normalize_answer(gold);
    if (p == g) return true;
    auto pn = parse_numeric(p);
    auto gn = parse_numeric(g);
    if (pn && gn) return std::fabs(*pn - *gn) <= 1e-6;
    return false;
}

std::optional<double> rank_correlation(const std::vector<TaskQuality>& grades,
                                       const std::vector<bool>& correct) {
    if (grades.size() != correct.size()) throw ProtocolError("rank_correlation: length mismatch");
    const std::size_t n = grades.size();
    if (n < 2) return std::nullopt;

    // Encode A > B > C, correct > incorrect; average ranks within ties.
    auto avg_ranks = [n](const std::vector<double>& values) {
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
        std::vector<double> ranks(n);
        std::size_t i = 0;
        while (i < n) {
            std::size_t j = i;
            while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
            double r = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
            for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
            i = j + 1;
        }
        return ranks;
    };

    std::vector<double> x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
        switch (grades[i]) {
            case TaskQuality::A: x[i] = 3; break;
            case TaskQuality::B: x[i] = 2; break;
            case TaskQuality::C: x[i] = 1; break;
        }
        y[i] = correct[i] ? 1.0 : 0.0;
    }
    auto rx = avg_ranks(x);
    auto ry = avg_ranks(y);

    double mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += rx[i];
        my += ry[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);

    double cov = 0, vx = 0, vy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        cov += (rx[i] - mx) * (ry[i] - my);
        vx += (rx[i] - mx) * (rx[i] - mx);
        vy += (ry[i] - my) * (ry[i] - my);
    }
    if (vx == 0.0 || vy == 0.0) return std::nullopt;  // constant side: undefined
    return cov / std::sqrt(vx * vy);
}

}  // namespace mc2
