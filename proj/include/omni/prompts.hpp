#pragma once

#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "omni/error.hpp"
#include "omni/prompt_data.hpp"

namespace omni {

struct Prompt {
    std::string system;
    std::string user;
    bool operator==(const Prompt&) const = default;
};

// Template text with {name} placeholders. A file may hold a "%% system"
// section and a "%% user" section; text before any marker is the user part.
struct PromptTemplate {
    std::string system;
    std::string user;

    static PromptTemplate parse(const std::string& text) {
        PromptTemplate t;
        std::string* cur = &t.user;
        std::istringstream in(text);
        std::string line;
        bool first_in_section = true;
        while (std::getline(in, line)) {
            if (line == "%% system" || line == "%% user") {
                cur = line == "%% system" ? &t.system : &t.user;
                cur->clear();
                first_in_section = true;
                continue;
            }
            if (!first_in_section) *cur += '\n';
            *cur += line;
            first_in_section = false;
        }
        return t;
    }

    static PromptTemplate load(const std::string& path) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw ConfigError("cannot open prompt template " + path);
        std::stringstream ss;
        ss << in.rdbuf();
        return parse(ss.str());
    }

    bool mentions(const std::string& name) const {
        const std::string p = "{" + name + "}";
        return system.find(p) != std::string::npos || user.find(p) != std::string::npos;
    }

    // Replaces each {key}. Unknown {tokens} are left alone so that literal
    // braces in the shipped texts survive.
    Prompt render(const std::map<std::string, std::string>& vars) const {
        return {substitute(system, vars), substitute(user, vars)};
    }

private:
    static std::string substitute(const std::string& s, const std::map<std::string, std::string>& vars) {
        std::string out;
        out.reserve(s.size());
        for (std::size_t i = 0; i < s.size();) {
            if (s[i] == '{') {
                const auto close = s.find('}', i);
                if (close != std::string::npos) {
                    auto it = vars.find(s.substr(i + 1, close - i - 1));
                    if (it != vars.end()) {
                        out += it->second;
                        i = close + 1;
                        continue;
                    }
                }
            }
            out += s[i++];
        }
        return out;
    }
};

inline std::string join(const std::vector<std::string>& xs, const std::string& sep, bool quote = false) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) out += sep;
        out += quote ? "\"" + xs[i] + "\"" : xs[i];
    }
    return out;
}

inline std::string bullet_lines(const std::vector<std::string>& xs) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? "\n- " : "- ") + xs[i];
    return out;
}

inline std::string numbered_lines(const std::vector<std::string>& xs) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? "\n" : "") + std::to_string(i + 1) + ". " + xs[i];
    return out;
}

namespace templates {
inline PromptTemplate crafter() { return PromptTemplate::parse(prompt_data::crafter_moi); }
inline PromptTemplate crafter_synonyms() { return PromptTemplate::parse(prompt_data::crafter_moi_synonyms); }
inline PromptTemplate babyai() { return PromptTemplate::parse(prompt_data::babyai_moi); }
inline PromptTemplate kitchen_propose() { return PromptTemplate::parse(prompt_data::kitchen_propose); }
inline PromptTemplate kitchen_translate() { return PromptTemplate::parse(prompt_data::kitchen_translate); }

inline PromptTemplate by_name(const std::string& name) {
    if (name == "crafter") return crafter();
    if (name == "crafter-synonyms") return crafter_synonyms();
    if (name == "babyai") return babyai();
    throw ConfigError("unknown MoI template " + name);
}
}  // namespace templates

}  // namespace omni
