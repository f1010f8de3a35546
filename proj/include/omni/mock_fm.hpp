#pragma once

// Deterministic stand-ins for a foundation model, wired into ScriptedBackend
// rules. They read the same prompts a real model would and answer in the
// formats the parsers expect.

#include <memory>
#include <set>
#include <string>
#include <vector>

#include "omni/crafter.hpp"
#include "omni/fmclient.hpp"
#include "omni/prompts.hpp"
#include "omni/proposer.hpp"
#include "omni/taskdsl.hpp"
#include "omni/world.hpp"

namespace omni::mock {

namespace detail {
inline std::string after_last(const std::string& text, const std::string& marker) {
    const auto k = text.rfind(marker);
    if (k == std::string::npos) return {};
    const auto b = k + marker.size();
    const auto e = text.find('\n', b);
    std::string line = text.substr(b, e == std::string::npos ? std::string::npos : e - b);
    while (!line.empty() && (line.back() == '.' || line.back() == ' ' || line.back() == '\r')) line.pop_back();
    return line;
}

inline std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::size_t b = 0;
    while (b <= s.size()) {
        auto k = s.find(", ", b);
        std::string x = s.substr(b, k == std::string::npos ? std::string::npos : k - b);
        if (!x.empty()) out.push_back(x);
        if (k == std::string::npos) break;
        b = k + 2;
    }
    return out;
}

// Family key: verb plus object, counts dropped. Without the synonym note the
// verb is folded to its base form.
inline std::optional<std::string> family(const std::string& task, bool literal_verbs) {
    auto p = crafter::parse_single(task);
    if (!p) return std::nullopt;
    return (literal_verbs ? p->verb : p->base_verb) + " " + p->object;
}

inline std::vector<std::string> families_of(const std::string& task, bool literal_verbs) {
    std::vector<std::string> out;
    for (const auto& part : crafter::split_compound(task))
        if (auto f = family(part, literal_verbs)) out.push_back(*f);
    return out;
}
}  // namespace detail

// Crafter-style MoI: a candidate is boring when it repeats a family already
// done well, or when it is not in the task vocabulary at all.
inline std::string crafter_moi_answer(const fm::CompletionRequest& r) {
    const bool literal = r.user_text.find("no prior knowledge of language") != std::string::npos;
    const auto done = detail::split_list(detail::after_last(r.user_text, "tasks well: "));
    const auto cands = detail::split_list(detail::after_last(r.user_text, "Suggest whether the given tasks are interesting: "));
    std::set<std::string> fams;
    for (const auto& d : done)
        for (auto& f : detail::families_of(d, literal)) fams.insert(f);
    std::string out;
    for (const auto& c : cands) {
        const auto parts = crafter::split_compound(c);
        const auto fs = detail::families_of(c, literal);
        bool interesting = !fs.empty() && fs.size() == parts.size();
        for (const auto& f : fs) interesting = interesting && !fams.count(f);
        out += c + (interesting ? ": True\n" : ": False\n");
    }
    return out;
}

inline std::shared_ptr<fm::ScriptedBackend> crafter_backend() {
    auto b = std::make_shared<fm::ScriptedBackend>();
    b->add(fm::Matcher::substring("Suggest whether the given tasks are interesting"), fm::Responder(crafter_moi_answer));
    return b;
}

// ------------------------------------------------------- task proposer

namespace detail {
inline std::vector<dsl::TaskSpec> tasks_between(const std::string& text, const std::string& from, const std::string& to) {
    std::vector<dsl::TaskSpec> out;
    auto b = text.find(from);
    if (b == std::string::npos) return out;
    b += from.size();
    auto e = to.empty() ? std::string::npos : text.find(to, b);
    for (const auto& item : proposer::detail::numbered_items(text.substr(b, e == std::string::npos ? std::string::npos : e - b))) {
        try {
            out.push_back(dsl::parse_task(item));
        } catch (const ParseError&) {
        }
    }
    return out;
}
}  // namespace detail

// Plain-English rendering of a task, one clause per state.
inline std::string describe(const dsl::TaskSpec& t) {
    std::string out;
    for (std::size_t i = 0; i < t.states.size(); ++i) {
        std::vector<std::string> bits;
        for (const auto& o : t.states[i].objects)
            for (const auto& r : o.requirements) {
                const bool* b = std::get_if<bool>(&r.expected);
                if (r.attribute == dsl::Attribute::isPickedUp)
                    bits.push_back(std::string(*b ? "hold the " : "do not hold the ") + o.object);
                else if (r.attribute == dsl::Attribute::visible)
                    bits.push_back(std::string(*b ? "find the " : "keep the ") + o.object + (*b ? "" : " out of sight"));
                else
                    bits.push_back(o.object + " " + std::string(dsl::name_of(r.attribute)) + " " +
                                   dsl::serialize_value(r.expected));
            }
        std::string clause = join(bits, " and ");
        if (!clause.empty()) clause[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(clause[0])));
        out += (i ? " Then, " : "") + clause + ".";
    }
    return out;
}

// Answers translation requests by describing each listed task.
inline std::string translate_answer(const fm::CompletionRequest& r) {
    const auto tasks = detail::tasks_between(r.user_text, "Tasks in code format:", "");
    std::vector<std::string> nl;
    for (const auto& t : tasks) nl.push_back(describe(t));
    return "Tasks in natural language:\n" + numbered_lines(nl) + "\n";
}

// A mentor that knows the ChainCraft recipes: it proposes holding items
// whose ingredients the agent can already obtain, then two-step variants.
class ChainCraftProposer {
public:
    explicit ChainCraftProposer(world::ChainCraftSpec spec, std::size_t per_call = 3)
        : spec_(std::move(spec)), per_call_(per_call) {}

    std::string operator()(const fm::CompletionRequest& r) const {
        const auto done = detail::tasks_between(r.user_text, "Tasks the agent currently does well:",
                                                "Tasks the agent cannot do yet:");
        const auto cannot = detail::tasks_between(r.user_text, "Tasks the agent cannot do yet:", "");
        std::set<std::string> have, listed;
        for (const auto& t : done) {
            listed.insert(dsl::canonicalize(t).str());
            for (const auto& s : t.states)
                for (const auto& o : s.objects)
                    for (const auto& q : o.requirements)
                        if (const bool* b = std::get_if<bool>(&q.expected); b && *b) have.insert(o.object);
        }
        for (const auto& t : cannot) listed.insert(dsl::canonicalize(t).str());

        proposer::Proposal p;
        auto offer = [&](dsl::TaskSpec t, const std::string& why) {
            if (p.code_tasks.size() >= per_call_) return;
            const auto id = dsl::canonicalize(t).str();
            if (listed.count(id)) return;
            listed.insert(id);
            p.nl_tasks.push_back(describe(t));
            p.code_tasks.push_back(std::move(t));
            if (!p.reasoning.empty()) p.reasoning += " ";
            p.reasoning += why;
        };
        for (const auto& item : spec_.items)
            if (!have.count(item) && reachable(item, have))
                offer(world::hold_task(item), item + " only needs things the agent already gets.");
        // two-step tasks: obtain one known item, then hold another
        for (const auto& a : spec_.items)
            for (const auto& b : spec_.items) {
                if (a == b || !have.count(a) || !have.count(b)) continue;
                dsl::TaskSpec t;
                t.states.push_back({{{a, {{dsl::Attribute::visible, true}}}}});
                t.states.push_back({{{b, {{dsl::Attribute::isPickedUp, true}}}}});
                offer(std::move(t), "Chaining " + a + " into " + b + " practises ordering.");
            }
        if (p.reasoning.empty()) p.reasoning = "Nothing new is within reach.";
        return proposer::render_proposal(p);
    }

private:
    world::ChainCraftSpec spec_;
    std::size_t per_call_;

    bool reachable(const std::string& item, const std::set<std::string>& have) const {
        auto all = [&](const std::vector<std::string>& xs) {
            for (const auto& x : xs)
                if (!have.count(x)) return false;
            return true;
        };
        for (const auto& g : spec_.gathers)
            if (g.item == item && all(g.tools)) return true;
        for (const auto& rc : spec_.recipes) {
            if (rc.output != item || !all(rc.tools)) continue;
            bool ok = true;
            for (const auto& [k, n] : rc.inputs) ok = ok && have.count(k);
            if (ok) return true;
        }
        return false;
    }
};

inline std::shared_ptr<fm::ScriptedBackend> chaincraft_backend(const world::ChainCraftSpec& spec) {
    auto b = std::make_shared<fm::ScriptedBackend>();
    b->add(fm::Matcher::substring("Tasks in code format:"), fm::Responder(translate_answer));
    b->add(fm::Matcher::substring("Tasks the agent currently does well:"), fm::Responder(ChainCraftProposer(spec)));
    return b;
}

}  // namespace omni::mock
