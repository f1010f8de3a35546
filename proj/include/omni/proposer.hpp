#pragma once

#include <algorithm>
#include <memory>
#include <set>
#include <string>
#include <unordered_set>
#include <vector>

#include "omni/core.hpp"
#include "omni/error.hpp"
#include "omni/fmclient.hpp"
#include "omni/prompts.hpp"
#include "omni/taskdsl.hpp"

namespace omni::proposer {

struct ArchiveItem {
    dsl::TaskSpec spec;
    TaskId id;
    double success = 0.0;
    std::size_t samples = 0;
};

class TaskArchive {
public:
    explicit TaskArchive(double done_well_threshold = 0.6) : threshold_(done_well_threshold) {
        if (!(threshold_ > 0.0 && threshold_ < 1.0)) throw PreconditionError("threshold must lie in (0,1)");
    }

    double threshold() const { return threshold_; }
    const std::vector<ArchiveItem>& items() const { return items_; }
    std::size_t size() const { return items_.size(); }
    bool empty() const { return items_.empty(); }

    bool contains(const TaskId& id) const { return ids_.count(id) != 0; }

    // Returns false if an equivalent task is already archived.
    bool add(const dsl::TaskSpec& spec) {
        TaskId id = dsl::canonicalize(spec);
        if (!ids_.insert(id).second) return false;
        items_.push_back({spec, std::move(id), 0.0, 0});
        return true;
    }

    ArchiveItem& at(const TaskId& id) {
        for (auto& it : items_)
            if (it.id == id) return it;
        throw PreconditionError("task not archived: " + id.str());
    }

    std::vector<const ArchiveItem*> done_well() const {
        std::vector<const ArchiveItem*> out;
        for (const auto& it : items_)
            if (it.success >= threshold_) out.push_back(&it);
        return out;
    }

    // Tried at least once, still below threshold; the k most-sampled.
    std::vector<const ArchiveItem*> cannot_do(std::size_t k) const {
        std::vector<const ArchiveItem*> out;
        for (const auto& it : items_)
            if (it.samples > 0 && it.success < threshold_) out.push_back(&it);
        std::stable_sort(out.begin(), out.end(), [](const ArchiveItem* a, const ArchiveItem* b) {
            if (a->samples != b->samples) return a->samples > b->samples;
            return a->id < b->id;
        });
        if (out.size() > k) out.resize(k);
        return out;
    }

private:
    double threshold_;
    std::vector<ArchiveItem> items_;
    std::unordered_set<TaskId> ids_;
};

inline Prompt build_proposal_prompt(const std::vector<std::string>& done_well, const std::vector<std::string>& cannot_do,
                                    const PromptTemplate& t = templates::kitchen_propose()) {
    std::set<std::string> a(done_well.begin(), done_well.end());
    for (const auto& c : cannot_do)
        if (a.count(c)) throw PreconditionError("task listed as both done well and not doable: " + c);
    return t.render({{"done_well_lines", bullet_lines(done_well)}, {"cannot_do_lines", bullet_lines(cannot_do)}});
}

struct Proposal {
    std::string reasoning;
    std::vector<std::string> nl_tasks;
    std::vector<dsl::TaskSpec> code_tasks;
};

namespace detail {
inline const std::string kReasoning = "Reasoning:";
inline const std::string kNl = "Next tasks in natural language:";
inline const std::string kCode = "Next tasks as sequence of environment states:";

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    return s.substr(b, s.find_last_not_of(" \t\r\n") - b + 1);
}

// "1. foo" / "1) foo" lines; continuation lines are appended.
inline std::vector<std::string> numbered_items(const std::string& block) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (pos < block.size()) {
        auto nl = block.find('\n', pos);
        std::string line = trim(block.substr(pos, nl == std::string::npos ? std::string::npos : nl - pos));
        pos = nl == std::string::npos ? block.size() : nl + 1;
        if (line.empty()) continue;
        std::size_t d = 0;
        while (d < line.size() && std::isdigit(static_cast<unsigned char>(line[d]))) ++d;
        if (d > 0 && d < line.size() && (line[d] == '.' || line[d] == ')')) {
            out.push_back(trim(line.substr(d + 1)));
        } else if (line.rfind("- ", 0) == 0) {
            out.push_back(trim(line.substr(2)));
        } else if (!out.empty()) {
            out.back() += " " + line;
        }
    }
    return out;
}
}  // namespace detail

inline Proposal parse_proposal(const std::string& text) {
    using K = ProposalError::Kind;
    const auto r = text.find(detail::kReasoning);
    const auto n = text.find(detail::kNl);
    const auto c = text.find(detail::kCode);
    if (r == std::string::npos) throw ProposalError(K::missing_section, "response lacks a Reasoning section");
    if (n == std::string::npos) throw ProposalError(K::missing_section, "response lacks the natural-language task list");
    if (c == std::string::npos) throw ProposalError(K::missing_section, "response lacks the environment-state task list");
    if (!(r < n && n < c)) throw ProposalError(K::missing_section, "response sections out of order");

    Proposal p;
    p.reasoning = detail::trim(text.substr(r + detail::kReasoning.size(), n - r - detail::kReasoning.size()));
    p.nl_tasks = detail::numbered_items(text.substr(n + detail::kNl.size(), c - n - detail::kNl.size()));
    const auto code = detail::numbered_items(text.substr(c + detail::kCode.size()));
    if (p.nl_tasks.size() != code.size())
        throw ProposalError(K::count_mismatch, std::to_string(p.nl_tasks.size()) + " natural-language tasks but " +
                                                   std::to_string(code.size()) + " code tasks");
    for (std::size_t i = 0; i < code.size(); ++i) {
        try {
            auto t = dsl::parse_task(code[i]);
            t.natural_language = p.nl_tasks[i];
            p.code_tasks.push_back(std::move(t));
        } catch (const ParseError& e) {
            throw ProposalError(K::task_parse, "code task " + std::to_string(i + 1) + ": " + e.what());
        }
    }
    return p;
}

inline std::string render_proposal(const Proposal& p) {
    std::vector<std::string> code;
    for (const auto& t : p.code_tasks) code.push_back(dsl::serialize_task(t));
    return "Reasoning: " + p.reasoning + "\n" + detail::kNl + "\n" + numbered_lines(p.nl_tasks) + "\n" +
           detail::kCode + "\n" + numbered_lines(code) + "\n";
}

struct ProposeOptions {
    std::size_t k_cannot = 10;
    int max_attempts = 3;
    std::size_t max_states = dsl::kDefaultMaxStates;
    std::string model = "mock";
    int max_tokens = 2048;
};

struct ProposeResult {
    std::vector<dsl::TaskSpec> accepted;
    std::size_t duplicates = 0;
    std::size_t unachievable = 0;
};

inline ProposeResult propose_tasks(fm::FmClient& client, const TaskArchive& archive, const dsl::AffordanceTable& aff,
                                   const ProposeOptions& opt = {},
                                   const PromptTemplate& tmpl = templates::kitchen_propose()) {
    std::vector<std::string> dw, cd;
    for (const auto* it : archive.done_well()) dw.push_back(dsl::serialize_task(it->spec));
    for (const auto* it : archive.cannot_do(opt.k_cannot)) cd.push_back(dsl::serialize_task(it->spec));
    const Prompt p = build_proposal_prompt(dw, cd, tmpl);
    const fm::CompletionRequest req{p.system, p.user, opt.model, 0.0, opt.max_tokens};

    Proposal prop;
    for (int attempt = 1;; ++attempt) {
        const std::string text = client.complete(req, attempt > 1);
        try {
            prop = parse_proposal(text);
            break;
        } catch (const ProposalError& e) {
            if (attempt >= opt.max_attempts)
                throw ProtocolError(std::string("proposal unusable after retries: ") + e.what());
        }
    }

    ProposeResult out;
    std::unordered_set<TaskId> fresh;
    for (auto& t : prop.code_tasks) {
        const TaskId id = dsl::canonicalize(t);
        if (archive.contains(id) || !fresh.insert(id).second) {
            ++out.duplicates;
            continue;
        }
        if (t.states.size() > opt.max_states || !dsl::achievable(t, aff)) {
            ++out.unachievable;
            continue;
        }
        out.accepted.push_back(std::move(t));
    }
    return out;
}

inline std::vector<std::string> translate_to_nl(fm::FmClient& client, const std::vector<dsl::TaskSpec>& specs,
                                                const PromptTemplate& tmpl = templates::kitchen_translate(),
                                                const std::string& model = "mock") {
    if (specs.empty()) return {};
    std::vector<std::string> code;
    for (const auto& s : specs) code.push_back(dsl::serialize_task(s));
    const Prompt p = tmpl.render({{"tasks_numbered", numbered_lines(code)}});
    const std::string text = client.complete({p.system, p.user, model, 0.0, 2048});
    const std::string head = "Tasks in natural language:";
    const auto h = text.find(head);
    const auto items = detail::numbered_items(h == std::string::npos ? text : text.substr(h + head.size()));
    if (items.size() != specs.size())
        throw ProtocolError("translation returned " + std::to_string(items.size()) + " descriptions for " +
                            std::to_string(specs.size()) + " tasks");
    return items;
}

inline std::vector<dsl::TaskSpec> uniform_task_batch(Rng& rng, const dsl::AffordanceTable& aff, std::size_t n,
                                                     const dsl::RandomTaskOptions& opt = {}) {
    if (n < 1) throw PreconditionError("batch size must be >= 1");
    std::vector<dsl::TaskSpec> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(dsl::random_task(rng, aff, opt));
    return out;
}

}  // namespace omni::proposer
