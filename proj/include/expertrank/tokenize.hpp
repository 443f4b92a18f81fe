#pragma once

#include <cctype>
#include <string>
#include <vector>

namespace expertrank {

// Lowercase, split on any non-alphanumeric byte, drop empty tokens.
// No stemming, no stopword removal. Queries and documents must go through
// the same function.
inline std::vector<std::string> tokenize(const std::string& text) {
    std::vector<std::string> terms;
    std::string cur;
    for (unsigned char c : text) {
        if (std::isalnum(c)) {
            cur.push_back(static_cast<char>(std::tolower(c)));
        } else if (!cur.empty()) {
            terms.push_back(std::move(cur));
            cur.clear();
        }
    }
    if (!cur.empty()) terms.push_back(std::move(cur));
    return terms;
}

inline std::string join_terms(const std::vector<std::string>& terms) {
    std::string out;
    for (const auto& t : terms) {
        if (!out.empty()) out.push_back(' ');
        out += t;
    }
    return out;
}

}  // namespace expertrank
