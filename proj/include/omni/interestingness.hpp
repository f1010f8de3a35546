#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "omni/core.hpp"
#include "omni/crafter.hpp"
#include "omni/curriculum.hpp"
#include "omni/error.hpp"
#include "omni/fmclient.hpp"
#include "omni/prompts.hpp"

namespace omni {

struct MoiQuery {
    std::vector<std::string> done_well;
    std::vector<std::string> candidates;
};

class InterestModel {
public:
    virtual ~InterestModel() = default;
    // One verdict per candidate, in candidate order.
    virtual std::vector<InterestVerdict> predict(const MoiQuery& q) = 0;
};

inline void check_query(const MoiQuery& q) {
    if (q.candidates.empty()) throw PreconditionError("MoI query without candidates");
    std::unordered_set<std::string> dw(q.done_well.begin(), q.done_well.end());
    for (const auto& c : q.candidates)
        if (dw.count(c)) throw PreconditionError("candidate also listed as done well: " + c);
}

// ----------------------------------------------------------------- oracle

class OracleMoi : public InterestModel {
public:
    using Predicate = std::function<bool(const std::string&)>;
    explicit OracleMoi(Predicate p) : pred_(std::move(p)) {}
    explicit OracleMoi(std::set<std::string> interesting)
        : pred_([s = std::move(interesting)](const std::string& t) { return s.count(t) != 0; }) {}

    std::vector<InterestVerdict> predict(const MoiQuery& q) override {
        check_query(q);
        std::vector<InterestVerdict> out;
        out.reserve(q.candidates.size());
        for (const auto& c : q.candidates) out.push_back({TaskId(c), pred_(c), VerdictSource::oracle});
        return out;
    }

    bool interesting(const std::string& t) const { return pred_(t); }

private:
    Predicate pred_;
};

inline std::set<std::string> load_task_list(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open task list " + path);
    std::set<std::string> out;
    for (std::string line; std::getline(in, line);) {
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
        if (!line.empty() && line[0] != '#') out.insert(line);
    }
    return out;
}

namespace oracles {
inline std::set<std::string> crafter_set() {
    auto v = crafter::interesting_names();
    return {v.begin(), v.end()};
}

// Every verb form of the 15 skills.
inline std::set<std::string> crafter_synonym_set() {
    std::set<std::string> out;
    for (const auto& s : crafter::skills())
        for (const auto& v : crafter::verb_forms(s.verb)) out.insert(v + " " + s.object);
    return out;
}

// Single instruction = no sequencing connective.
inline bool babyai_single_instruction(const std::string& t) {
    return t.find(" then ") == std::string::npos && t.find(", then") == std::string::npos &&
           t.find(" after you ") == std::string::npos && t.find(" and ") == std::string::npos;
}

inline std::unique_ptr<OracleMoi> crafter() { return std::make_unique<OracleMoi>(crafter_set()); }
inline std::unique_ptr<OracleMoi> crafter_synonyms() { return std::make_unique<OracleMoi>(crafter_synonym_set()); }
inline std::unique_ptr<OracleMoi> babyai() { return std::make_unique<OracleMoi>(babyai_single_instruction); }
}  // namespace oracles

// -------------------------------------------------------------- partition

struct PartitionResult {
    std::vector<TaskId> interesting;  // in selection order
    std::vector<TaskId> boring;
    std::size_t rounds = 0;

    std::unordered_map<TaskId, bool> as_map() const {
        std::unordered_map<TaskId, bool> m;
        for (const auto& t : interesting) m[t] = true;
        for (const auto& t : boring) m[t] = false;
        return m;
    }
};

// Repeatedly promote the best uncategorized task to interesting and ask the
// MoI to weed boring ones out of the rest. Throws without side effects if the
// MoI fails.
inline PartitionResult partition(const std::vector<std::pair<TaskId, double>>& success, InterestModel& moi) {
    std::vector<std::pair<TaskId, double>> order = success;
    std::sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    for (std::size_t i = 1; i < order.size(); ++i)
        if (order[i].first == order[i - 1].first) throw PreconditionError("duplicate task " + order[i].first.str());

    PartitionResult r;
    std::vector<TaskId> pending;
    for (const auto& [id, _] : order) pending.push_back(id);
    std::vector<std::string> done_well;
    std::size_t head = 0;
    std::vector<char> decided(pending.size(), 0);
    while (true) {
        while (head < pending.size() && decided[head]) ++head;
        if (head == pending.size()) break;
        decided[head] = 1;
        r.interesting.push_back(pending[head]);
        done_well.push_back(pending[head].str());
        ++r.rounds;

        MoiQuery q{done_well, {}};
        std::vector<std::size_t> slots;
        for (std::size_t i = head + 1; i < pending.size(); ++i)
            if (!decided[i]) {
                q.candidates.push_back(pending[i].str());
                slots.push_back(i);
            }
        if (q.candidates.empty()) break;
        const auto verdicts = moi.predict(q);
        if (verdicts.size() != q.candidates.size())
            throw ProtocolError("MoI returned " + std::to_string(verdicts.size()) + " verdicts for " +
                                std::to_string(q.candidates.size()) + " candidates");
        for (std::size_t k = 0; k < verdicts.size(); ++k) {
            if (verdicts[k].task.str() != q.candidates[k]) throw ProtocolError("MoI verdict order mismatch");
            if (!verdicts[k].interesting) {
                decided[slots[k]] = 1;
                r.boring.push_back(pending[slots[k]]);
            }
        }
    }
    return r;
}

inline PartitionResult partition(const std::unordered_map<TaskId, double>& success, InterestModel& moi) {
    return partition(std::vector<std::pair<TaskId, double>>(success.begin(), success.end()), moi);
}

// EMA of raw success used to rank tasks for partitioning.
class SuccessSmoother {
public:
    explicit SuccessSmoother(double beta = 0.1) : beta_(beta) {}

    void observe(const TaskId& id, double raw) {
        auto [it, fresh] = values_.try_emplace(id, raw);
        if (!fresh) it->second = ema_update(it->second, raw, beta_);
    }

    double value(const TaskId& id) const {
        auto it = values_.find(id);
        return it == values_.end() ? 0.0 : it->second;
    }

    std::vector<std::pair<TaskId, double>> snapshot(const std::vector<TaskId>& ids) const {
        std::vector<std::pair<TaskId, double>> out;
        out.reserve(ids.size());
        for (const auto& id : ids) out.emplace_back(id, value(id));
        return out;
    }

private:
    double beta_;
    std::unordered_map<TaskId, double> values_;
};

// ------------------------------------------------------- verdict parsing

struct ParsedVerdicts {
    std::vector<std::pair<std::string, bool>> verdicts;  // candidate order
    std::vector<std::string> unanswered;
};

namespace detail {
inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}
}  // namespace detail

// Accepts "task: True" lines, optionally quoted, bulleted or numbered, and
// the "Predictions:" block layout. Lines naming non-candidates are ignored.
inline ParsedVerdicts parse_verdicts(const std::string& text, const std::vector<std::string>& candidates) {
    std::unordered_map<std::string, bool> found;
    std::size_t parseable = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto nl = text.find('\n', pos);
        std::string line = text.substr(pos, nl == std::string::npos ? std::string::npos : nl - pos);
        pos = nl == std::string::npos ? text.size() + 1 : nl + 1;
        const auto colon = line.rfind(':');
        if (colon == std::string::npos) continue;
        std::string val = detail::trim(line.substr(colon + 1));
        while (!val.empty() && (val.back() == '.' || val.back() == ',')) val.pop_back();
        bool v;
        if (val == "True" || val == "true" || val == "TRUE") v = true;
        else if (val == "False" || val == "false" || val == "FALSE") v = false;
        else continue;
        std::string key = detail::trim(line.substr(0, colon));
        if (key.rfind("- ", 0) == 0) key = detail::trim(key.substr(2));
        std::size_t d = 0;
        while (d < key.size() && std::isdigit(static_cast<unsigned char>(key[d]))) ++d;
        if (d > 0 && d + 1 < key.size() && (key[d] == '.' || key[d] == ')')) key = detail::trim(key.substr(d + 1));
        if (key.size() >= 2 && (key.front() == '"' || key.front() == '\'') && key.back() == key.front())
            key = key.substr(1, key.size() - 2);
        if (key.empty()) continue;
        ++parseable;
        found.try_emplace(key, v);
    }
    if (parseable == 0) throw ParseError("no verdict lines in response", 0);
    ParsedVerdicts r;
    for (const auto& c : candidates) {
        auto it = found.find(c);
        if (it == found.end()) r.unanswered.push_back(c);
        else r.verdicts.emplace_back(c, it->second);
    }
    return r;
}

inline std::string render_verdicts(const std::vector<std::pair<std::string, bool>>& v, bool quoted = false) {
    std::string out;
    for (const auto& [t, b] : v) out += (quoted ? "\"" + t + "\"" : t) + ": " + (b ? "True" : "False") + "\n";
    return out;
}

// ------------------------------------------------------------- FM-backed

inline Prompt build_prompt(const MoiQuery& q, const PromptTemplate& t) {
    const bool dw = t.mentions("done_well") || t.mentions("done_well_quoted");
    const bool cand = t.mentions("candidates") || t.mentions("candidates_quoted");
    if (!dw || !cand) throw TemplateError("template lacks {done_well} or {candidates} placeholder");
    if (q.candidates.empty()) throw TemplateError("no candidates to render");
    return t.render({{"done_well", join(q.done_well, ", ")},
                     {"candidates", join(q.candidates, ", ")},
                     {"done_well_quoted", join(q.done_well, ", ", true)},
                     {"candidates_quoted", join(q.candidates, ", ", true)}});
}

struct FmMoiOptions {
    std::size_t chunk_size = 50;
    int max_attempts = 3;
    std::string model = "mock";
    int max_tokens = 2048;
};

class FmInterestModel : public InterestModel {
public:
    FmInterestModel(std::shared_ptr<fm::FmClient> client, PromptTemplate tmpl, FmMoiOptions opt = {})
        : client_(std::move(client)), tmpl_(std::move(tmpl)), opt_(opt) {
        MoiQuery probe{{"x"}, {"y"}};
        build_prompt(probe, tmpl_);
    }

    std::vector<InterestVerdict> predict(const MoiQuery& q) override {
        check_query(q);
        std::unordered_map<std::string, InterestVerdict> got;
        for (std::size_t b = 0; b < q.candidates.size(); b += opt_.chunk_size) {
            std::vector<std::string> pending(q.candidates.begin() + static_cast<long>(b),
                                             q.candidates.begin() +
                                                 static_cast<long>(std::min(q.candidates.size(), b + opt_.chunk_size)));
            bool regenerate = false;
            for (int attempt = 1; !pending.empty(); ++attempt) {
                if (attempt > opt_.max_attempts)
                    throw ProtocolError("MoI output unusable after " + std::to_string(opt_.max_attempts) + " attempts");
                const Prompt p = build_prompt({q.done_well, pending}, tmpl_);
                fm::CompletionRequest req{p.system, p.user, opt_.model, 0.0, opt_.max_tokens};
                const auto res = client_->complete_detailed(req, regenerate);
                ParsedVerdicts pv;
                try {
                    pv = parse_verdicts(res.text, pending);
                } catch (const ParseError&) {
                    regenerate = true;
                    continue;
                }
                const auto src = res.cached ? VerdictSource::cached : VerdictSource::fm;
                for (const auto& [t, v] : pv.verdicts) got[t] = InterestVerdict{TaskId(t), v, src};
                // the narrower prompt for the leftovers is a new cache key
                regenerate = pv.unanswered.size() == pending.size();
                pending = std::move(pv.unanswered);
            }
        }
        std::vector<InterestVerdict> out;
        out.reserve(q.candidates.size());
        for (const auto& c : q.candidates) out.push_back(got.at(c));
        return out;
    }

private:
    std::shared_ptr<fm::FmClient> client_;
    PromptTemplate tmpl_;
    FmMoiOptions opt_;
};

// -------------------------------------------------------------- embedding

class Embedder {
public:
    virtual ~Embedder() = default;
    virtual std::vector<double> embed(const std::string& text) const = 0;
};

// Bag of hashed character trigrams (FNV-1a), L2-normalized.
class HashedNgramEmbedder : public Embedder {
public:
    explicit HashedNgramEmbedder(std::size_t dim = 256, std::size_t n = 3) : dim_(dim), n_(n) {}

    std::vector<double> embed(const std::string& text) const override {
        std::vector<double> v(dim_, 0.0);
        std::string s = " ";
        for (char c : text) s += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        s += ' ';
        if (s.size() < n_) s.append(n_ - s.size(), ' ');
        for (std::size_t i = 0; i + n_ <= s.size(); ++i) {
            std::uint64_t h = 0xcbf29ce484222325ULL;
            for (std::size_t k = 0; k < n_; ++k) {
                h ^= static_cast<unsigned char>(s[i + k]);
                h *= 0x100000001b3ULL;
            }
            v[h % dim_] += 1.0;
        }
        double norm = 0.0;
        for (double x : v) norm += x * x;
        norm = std::sqrt(norm);
        for (double& x : v) x /= norm;
        return v;
    }

private:
    std::size_t dim_, n_;
};

inline double cosine_distance(const std::vector<double>& a, const std::vector<double>& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d += a[i] * b[i];
    const double dist = 1.0 - d;
    return dist < 1e-12 ? 0.0 : dist;
}

// Density clustering over cosine distance: points with >= min_pts
// neighbours (self included) within eps are cores, clusters grow through
// cores, leftovers become singleton clusters. Labels are 0..k-1 in order of
// first appearance.
inline std::vector<int> cluster_vectors(const std::vector<std::vector<double>>& x, double eps, std::size_t min_pts) {
    const std::size_t n = x.size();
    std::vector<std::vector<std::size_t>> nbr(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (cosine_distance(x[i], x[j]) <= eps) nbr[i].push_back(j);
    std::vector<int> label(n, -1);
    int next = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (label[i] != -1 || nbr[i].size() < min_pts) continue;
        const int c = next++;
        std::vector<std::size_t> stack{i};
        label[i] = c;
        while (!stack.empty()) {
            const auto p = stack.back();
            stack.pop_back();
            if (nbr[p].size() < min_pts) continue;
            for (auto q : nbr[p])
                if (label[q] == -1) {
                    label[q] = c;
                    stack.push_back(q);
                }
        }
    }
    for (auto& l : label)
        if (l == -1) l = next++;
    // relabel by first appearance
    std::map<int, int> remap;
    for (auto& l : label) {
        auto [it, _] = remap.try_emplace(l, static_cast<int>(remap.size()));
        l = it->second;
    }
    return label;
}

inline std::vector<int> embed_and_cluster(const std::vector<std::string>& texts, const Embedder& e, double eps,
                                          std::size_t min_pts) {
    if (texts.empty()) throw PreconditionError("nothing to cluster");
    std::vector<std::vector<double>> x;
    x.reserve(texts.size());
    for (const auto& t : texts) x.push_back(e.embed(t));
    return cluster_vectors(x, eps, min_pts);
}

// Boring iff the candidate shares a cluster with something already done well.
class EmbeddingMoi : public InterestModel {
public:
    EmbeddingMoi(const std::vector<std::string>& universe, std::shared_ptr<Embedder> e, double eps,
                 std::size_t min_pts = 2)
        : embedder_(std::move(e)), eps_(eps), min_pts_(min_pts) {
        rebuild(universe);
    }

    std::vector<InterestVerdict> predict(const MoiQuery& q) override {
        check_query(q);
        std::vector<std::string> missing;
        for (const auto* list : {&q.done_well, &q.candidates})
            for (const auto& t : *list)
                if (!label_.count(t)) missing.push_back(t);
        if (!missing.empty()) {
            auto all = universe_;
            all.insert(all.end(), missing.begin(), missing.end());
            rebuild(all);
        }
        std::set<int> taken;
        for (const auto& t : q.done_well) taken.insert(label_.at(t));
        std::vector<InterestVerdict> out;
        for (const auto& c : q.candidates)
            out.push_back({TaskId(c), taken.count(label_.at(c)) == 0, VerdictSource::embedding});
        return out;
    }

    int label(const std::string& t) const { return label_.at(t); }

private:
    std::shared_ptr<Embedder> embedder_;
    double eps_;
    std::size_t min_pts_;
    std::vector<std::string> universe_;
    std::unordered_map<std::string, int> label_;

    void rebuild(const std::vector<std::string>& u) {
        universe_ = u;
        const auto l = embed_and_cluster(u, *embedder_, eps_, min_pts_);
        label_.clear();
        for (std::size_t i = 0; i < u.size(); ++i) label_[u[i]] = l[i];
    }
};

}  // namespace omni
