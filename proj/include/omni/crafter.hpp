#pragma once

// Crafter-style task vocabulary: the 15-skill tech tree, its numeric repeats,
// pairwise compounds and verb synonyms.

#include <algorithm>
#include <array>
#include <cctype>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace omni::crafter {

struct Skill {
    std::string verb;    // collect | place | make
    std::string object;  // "wood", "wood pickaxe", ...
    std::vector<std::string> prereqs;

    std::string name() const { return verb + " " + object; }
};

inline const std::vector<Skill>& skills() {
    static const std::vector<Skill> s = {
        {"collect", "drink", {}},
        {"collect", "wood", {}},
        {"place", "table", {"collect wood"}},
        {"make", "wood pickaxe", {"place table"}},
        {"make", "wood sword", {"place table"}},
        {"collect", "stone", {"make wood pickaxe"}},
        {"place", "stone", {"collect stone"}},
        {"make", "stone pickaxe", {"collect stone"}},
        {"make", "stone sword", {"collect stone"}},
        {"place", "furnace", {"collect stone"}},
        {"collect", "coal", {"make wood pickaxe"}},
        {"collect", "iron", {"make stone pickaxe"}},
        {"make", "iron pickaxe", {"collect iron", "collect coal", "place furnace"}},
        {"make", "iron sword", {"collect iron", "collect coal", "place furnace"}},
        {"collect", "diamond", {"make iron pickaxe"}},
    };
    return s;
}

inline std::vector<std::string> interesting_names() {
    std::vector<std::string> out;
    for (const auto& s : skills()) out.push_back(s.name());
    return out;
}

inline int max_repeat(const std::string& verb) { return verb == "collect" ? 10 : 5; }

inline std::string repeat_name(const std::string& verb, int n, const std::string& object) {
    return verb + " " + std::to_string(n) + " " + object;
}

inline std::string compound_name(const std::string& a, const std::string& b) { return a + " and " + b; }

inline const std::map<std::string, std::vector<std::string>>& synonyms() {
    static const std::map<std::string, std::vector<std::string>> m = {
        {"collect", {"gather", "harvest", "procure", "acquire", "amass"}},
        {"make", {"craft", "acquire", "build", "construct", "create"}},
        {"place", {"put", "deploy", "install", "putdown", "position"}},
    };
    return m;
}

// Every verb form usable with a base verb, base first.
inline std::vector<std::string> verb_forms(const std::string& base) {
    std::vector<std::string> out{base};
    for (const auto& s : synonyms().at(base)) out.push_back(s);
    return out;
}

inline constexpr int kExtremeCount = 1023;

// Names for the out-of-reach distractors; the paper does not list them.
inline std::string extreme_name(int k) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "extreme task %04d", k);
    return buf;
}

inline bool is_extreme(const std::string& t) { return t.rfind("extreme task ", 0) == 0; }

// Parsed shape of a vocabulary task.
struct Parsed {
    std::string verb;  // as written
    std::string base_verb;
    int count = 1;
    std::string object;
};

inline std::optional<Parsed> parse_single(const std::string& t) {
    std::istringstream in(t);
    std::vector<std::string> w;
    for (std::string x; in >> x;) w.push_back(x);
    if (w.size() < 2) return std::nullopt;
    Parsed p;
    p.verb = w[0];
    std::size_t i = 1;
    if (std::all_of(w[1].begin(), w[1].end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
        p.count = std::stoi(w[1]);
        i = 2;
    }
    for (; i < w.size(); ++i) p.object += (p.object.empty() ? "" : " ") + w[i];
    if (p.object.empty()) return std::nullopt;
    // resolve the verb against objects so "acquire" maps per object kind
    for (const auto& s : skills()) {
        if (s.object != p.object) continue;
        for (const auto& f : verb_forms(s.verb))
            if (f == p.verb) {
                p.base_verb = s.verb;
                return p;
            }
    }
    return std::nullopt;
}

inline std::vector<std::string> split_compound(const std::string& t) {
    std::vector<std::string> parts;
    std::size_t b = 0;
    for (;;) {
        auto k = t.find(" and ", b);
        parts.push_back(t.substr(b, k == std::string::npos ? std::string::npos : k - b));
        if (k == std::string::npos) break;
        b = k + 5;
    }
    return parts;
}

}  // namespace omni::crafter
