#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "omni/core.hpp"
#include "omni/crafter.hpp"
#include "omni/error.hpp"
#include "omni/taskdsl.hpp"

namespace omni::world {

// ============================================================ synthetic

enum class Category { interesting = 0, boring = 1, extreme = 2 };

inline const char* to_string(Category c) {
    switch (c) {
        case Category::interesting: return "interesting";
        case Category::boring: return "boring";
        case Category::extreme: return "extreme";
    }
    return "?";
}

struct SynthSpec {
    std::vector<std::string> tasks;
    std::vector<std::vector<std::size_t>> prereqs;
    std::vector<double> eta;
    std::vector<double> q0;
    std::vector<double> r;
    std::vector<Category> category;
    double rho = 0.5;

    std::size_t size() const { return tasks.size(); }

    std::size_t add(const std::string& name, std::vector<std::size_t> pre, double eta_i, double q0_i, double r_i,
                    Category c) {
        tasks.push_back(name);
        prereqs.push_back(std::move(pre));
        eta.push_back(eta_i);
        q0.push_back(q0_i);
        r.push_back(r_i);
        category.push_back(c);
        return tasks.size() - 1;
    }

    std::size_t index_of(const std::string& name) const {
        for (std::size_t i = 0; i < tasks.size(); ++i)
            if (tasks[i] == name) return i;
        throw PreconditionError("unknown task " + name);
    }

    void validate() const {
        const std::size_t n = tasks.size();
        if (prereqs.size() != n || eta.size() != n || q0.size() != n || r.size() != n || category.size() != n)
            throw ConfigError("synthetic spec: ragged fields");
        if (!(rho >= 0.0 && rho <= 1.0)) throw ConfigError("synthetic spec: rho outside [0,1]");
        std::set<std::string> names(tasks.begin(), tasks.end());
        if (names.size() != n) throw ConfigError("synthetic spec: duplicate task names");
        for (std::size_t i = 0; i < n; ++i) {
            for (double v : {eta[i], q0[i], r[i]})
                if (!(v >= 0.0 && v <= 1.0)) throw ConfigError("synthetic spec: rate outside [0,1] for " + tasks[i]);
            for (auto p : prereqs[i])
                if (p >= n) throw ConfigError("synthetic spec: bad prerequisite index");
        }
        // cycle check, iterative DFS
        std::vector<int> mark(n, 0);
        for (std::size_t s = 0; s < n; ++s) {
            if (mark[s]) continue;
            std::vector<std::pair<std::size_t, std::size_t>> st{{s, 0}};
            mark[s] = 1;
            while (!st.empty()) {
                auto& [v, k] = st.back();
                if (k < prereqs[v].size()) {
                    const auto w = prereqs[v][k++];
                    if (mark[w] == 1) throw ConfigError("synthetic spec: prerequisite cycle at " + tasks[w]);
                    if (mark[w] == 0) {
                        mark[w] = 1;
                        st.push_back({w, 0});
                    }
                } else {
                    mark[v] = 2;
                    st.pop_back();
                }
            }
        }
    }
};

struct SynthState {
    std::vector<double> q;
};

inline SynthState synth_init(const SynthSpec& s) { return {s.q0}; }

// q_i <- 1 - (1 - q_i)(1 - eta_i g_i)^{n_i}, gate g_i read from the
// pre-update state so the result does not depend on task order.
inline SynthState synth_train(const SynthState& st, const std::vector<std::uint32_t>& allocation,
                              const SynthSpec& s) {
    if (allocation.size() != s.size()) throw PreconditionError("allocation size mismatch");
    SynthState out = st;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const auto n = allocation[i];
        if (n == 0) continue;
        double g = 1.0;
        if (!s.prereqs[i].empty()) {
            double m = 1.0;
            for (auto p : s.prereqs[i]) m = std::min(m, st.q[p]);
            g = m >= s.rho ? m : 0.0;
        }
        if (g == 0.0 || s.eta[i] == 0.0) continue;
        const double keep = std::pow(1.0 - s.eta[i] * g, static_cast<double>(n));
        out.q[i] = std::clamp(1.0 - (1.0 - st.q[i]) * keep, st.q[i], 1.0);
    }
    return out;
}

inline SynthState synth_train(const SynthState& st, const std::map<std::string, std::uint32_t>& allocation,
                              const SynthSpec& s) {
    std::vector<std::uint32_t> v(s.size(), 0);
    for (const auto& [name, n] : allocation) v[s.index_of(name)] += n;
    return synth_train(st, v, s);
}

inline std::vector<double> synth_eval(const SynthState& st, const SynthSpec& s) {
    std::vector<double> out(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) out[i] = std::max(st.q[i], s.r[i]);
    return out;
}

// ------------------------------------------------------------- presets

struct SynthParams {
    double eta = 0.05;
    double q0 = 0.01;
    double rho = 0.5;
    std::vector<double> base_random = {0.15, 0.08, 0.02};  // by tech-tree depth 0, 1, >=2
    double repeat_decay = 0.5;                            // r(collect N x) = r(collect x) * decay^(N-1)
};

namespace detail {
inline int skill_depth(const std::string& name) {
    for (const auto& s : crafter::skills())
        if (s.name() == name) {
            int d = 0;
            for (const auto& p : s.prereqs) d = std::max(d, 1 + skill_depth(p));
            return d;
        }
    throw PreconditionError("not a skill: " + name);
}

inline double base_rate(const SynthParams& p, const std::string& skill) {
    const auto d = static_cast<std::size_t>(skill_depth(skill));
    return p.base_random[std::min(d, p.base_random.size() - 1)];
}

// Adds one verb form of the 15 skills plus its numeric repeats.
inline void add_skill_family(SynthSpec& s, const SynthParams& p, const std::string& verb_of_collect,
                             const std::map<std::string, std::string>& verb_for, bool interesting_form) {
    (void)verb_of_collect;
    for (const auto& sk : crafter::skills()) {
        const std::string v = verb_for.at(sk.verb);
        const std::string name = v + " " + sk.object;
        std::vector<std::size_t> pre;
        for (const auto& q : sk.prereqs) pre.push_back(s.index_of(q));
        const double r = base_rate(p, sk.name());
        s.add(name, pre, p.eta, std::max(p.q0, 0.0), r, interesting_form ? Category::interesting : Category::boring);
    }
    for (const auto& sk : crafter::skills()) {
        const std::string v = verb_for.at(sk.verb);
        const std::size_t single = s.index_of(v + " " + sk.object);
        for (int n = 2; n <= crafter::max_repeat(sk.verb); ++n) {
            const double r = base_rate(p, sk.name()) * std::pow(p.repeat_decay, n - 1);
            s.add(crafter::repeat_name(v, n, sk.object), {single}, p.eta, p.q0, r, Category::boring);
        }
    }
}

inline void add_extremes(SynthSpec& s) {
    for (int k = 0; k < crafter::kExtremeCount; ++k)
        s.add(crafter::extreme_name(k), {}, 0.0, 0.0, 0.0, Category::extreme);
}

inline std::map<std::string, std::string> base_verbs() {
    return {{"collect", "collect"}, {"place", "place"}, {"make", "make"}};
}
}  // namespace detail

// 15 interesting, 90 numeric repeats, 1023 extremes.
inline SynthSpec crafter_repeats(const SynthParams& p = {}) {
    SynthSpec s;
    s.rho = p.rho;
    detail::add_skill_family(s, p, "collect", detail::base_verbs(), true);
    detail::add_extremes(s);
    s.validate();
    return s;
}

// Adds every unordered pair of the 15 skills as a compound: 105 more boring tasks.
inline SynthSpec crafter_compounds(const SynthParams& p = {}) {
    SynthSpec s;
    s.rho = p.rho;
    detail::add_skill_family(s, p, "collect", detail::base_verbs(), true);
    const auto names = crafter::interesting_names();
    for (std::size_t i = 0; i < names.size(); ++i)
        for (std::size_t j = i + 1; j < names.size(); ++j) {
            const double r = detail::base_rate(p, names[i]) * detail::base_rate(p, names[j]);
            s.add(crafter::compound_name(names[i], names[j]), {s.index_of(names[i]), s.index_of(names[j])}, p.eta,
                  p.q0, r, Category::boring);
        }
    detail::add_extremes(s);
    s.validate();
    return s;
}

// Six verb forms per skill. Synonym singles count as interesting (the agent
// has no language prior), their repeats as boring: 90 / 540.
inline SynthSpec crafter_synonyms(const SynthParams& p = {}) {
    SynthSpec s;
    s.rho = p.rho;
    detail::add_skill_family(s, p, "collect", detail::base_verbs(), true);
    for (std::size_t k = 1; k <= 5; ++k) {
        std::map<std::string, std::string> vf;
        for (const auto& b : {"collect", "place", "make"}) vf[b] = crafter::synonyms().at(b)[k - 1];
        // a synonym task depends on the same base-verb prerequisites
        for (const auto& sk : crafter::skills()) {
            std::vector<std::size_t> pre;
            for (const auto& q : sk.prereqs) pre.push_back(s.index_of(q));
            s.add(vf.at(sk.verb) + " " + sk.object, pre, p.eta, p.q0, detail::base_rate(p, sk.name()),
                  Category::interesting);
        }
        for (const auto& sk : crafter::skills()) {
            const std::size_t single = s.index_of(vf.at(sk.verb) + " " + sk.object);
            for (int n = 2; n <= crafter::max_repeat(sk.verb); ++n)
                s.add(crafter::repeat_name(vf.at(sk.verb), n, sk.object), {single}, p.eta, p.q0,
                      detail::base_rate(p, sk.name()) * std::pow(p.repeat_decay, n - 1), Category::boring);
        }
    }
    detail::add_extremes(s);
    s.validate();
    return s;
}

struct FloorParams {
    std::size_t roots = 10;
    std::size_t children_per_root = 3;
    std::size_t plain = 20;
    std::size_t extremes = 300;
    double root_random = 0.1;
    double eta = 0.02;
    double q0 = 0.01;
    double rho = 0.5;
};

// Normalization ablation bed: root tasks a random policy already solves 10%
// of the time (the untrained agent starts there too), each gating a few
// children; plain tasks start near zero and compete for samples.
inline SynthSpec random_floor(const FloorParams& p = {}) {
    SynthSpec s;
    s.rho = p.rho;
    std::vector<std::size_t> roots;
    for (std::size_t i = 0; i < p.roots; ++i)
        roots.push_back(s.add("root " + std::to_string(i), {}, p.eta, p.root_random, p.root_random,
                              Category::interesting));
    for (std::size_t i = 0; i < p.roots; ++i)
        for (std::size_t c = 0; c < p.children_per_root; ++c)
            s.add("root " + std::to_string(i) + " child " + std::to_string(c), {roots[i]}, p.eta, p.q0, 0.0,
                  Category::interesting);
    for (std::size_t i = 0; i < p.plain; ++i)
        s.add("plain " + std::to_string(i), {}, p.eta, p.q0, 0.0, Category::interesting);
    for (std::size_t i = 0; i < p.extremes; ++i)
        s.add(crafter::extreme_name(static_cast<int>(i)), {}, 0.0, 0.0, 0.0, Category::extreme);
    s.validate();
    return s;
}

inline SynthSpec synth_preset(const std::string& name, const SynthParams& p = {}) {
    if (name == "crafter-repeats") return crafter_repeats(p);
    if (name == "crafter-compounds") return crafter_compounds(p);
    if (name == "crafter-synonyms") return crafter_synonyms(p);
    if (name == "random-floor") return random_floor();
    throw ConfigError("unknown synthetic preset " + name);
}

struct Census {
    std::size_t interesting = 0, boring = 0, extreme = 0;
};

inline Census census(const SynthSpec& s) {
    Census c;
    for (auto k : s.category) {
        if (k == Category::interesting) ++c.interesting;
        else if (k == Category::boring) ++c.boring;
        else ++c.extreme;
    }
    return c;
}

// ============================================================ ChainCraft

struct Gather {
    std::string item;
    std::vector<std::string> tools;
    double prob = 1.0;
};

struct Recipe {
    std::string output;
    std::map<std::string, int> inputs;  // consumed
    std::vector<std::string> tools;     // required, kept
};

struct ChainCraftSpec {
    std::vector<std::string> items;
    std::vector<Gather> gathers;
    std::vector<Recipe> recipes;
    int horizon_per_state = 50;
    double step_penalty = 0.001;
    double completion_reward = 1.0;

    std::size_t num_actions() const { return gathers.size() + recipes.size(); }

    std::size_t item_index(const std::string& n) const {
        for (std::size_t i = 0; i < items.size(); ++i)
            if (items[i] == n) return i;
        throw ConfigError("unknown item " + n);
    }

    std::string action_name(std::size_t a) const {
        if (a < gathers.size()) return "gather " + gathers[a].item;
        return "craft " + recipes.at(a - gathers.size()).output;
    }

    void validate() const {
        std::set<std::string> names(items.begin(), items.end());
        if (names.size() != items.size()) throw ConfigError("chaincraft: duplicate items");
        if (items.size() > 32) throw ConfigError("chaincraft: at most 32 items");
        for (const auto& g : gathers) {
            item_index(g.item);
            for (const auto& t : g.tools) item_index(t);
            if (!(g.prob >= 0.0 && g.prob <= 1.0)) throw ConfigError("chaincraft: gather probability");
        }
        // acyclic: an item may not be needed (transitively) to make itself
        std::map<std::string, std::set<std::string>> deps;
        for (const auto& r : recipes) {
            item_index(r.output);
            for (const auto& [k, n] : r.inputs) {
                item_index(k);
                if (n < 1) throw ConfigError("chaincraft: recipe input count");
                deps[r.output].insert(k);
            }
            for (const auto& t : r.tools) {
                item_index(t);
                deps[r.output].insert(t);
            }
        }
        std::function<bool(const std::string&, const std::string&, std::set<std::string>&)> reaches =
            [&](const std::string& from, const std::string& target, std::set<std::string>& seen) {
                for (const auto& d : deps[from]) {
                    if (d == target) return true;
                    if (seen.insert(d).second && reaches(d, target, seen)) return true;
                }
                return false;
            };
        for (const auto& r : recipes) {
            std::set<std::string> seen;
            if (reaches(r.output, r.output, seen)) throw ConfigError("chaincraft: recipe cycle at " + r.output);
        }
    }
};

inline ChainCraftSpec chaincraft_default() {
    ChainCraftSpec s;
    s.items = {"Wood",        "Stone",       "Coal",         "Iron",       "Diamond",     "Plank",
               "Stick",       "Table",       "WoodPickaxe",  "WoodSword",  "StonePickaxe", "StoneSword",
               "Furnace",     "Torch",       "IronPickaxe",  "IronSword"};
    s.gathers = {{"Wood", {}, 1.0},
                 {"Stone", {"WoodPickaxe"}, 1.0},
                 {"Coal", {"WoodPickaxe"}, 1.0},
                 {"Iron", {"StonePickaxe"}, 1.0},
                 {"Diamond", {"IronPickaxe"}, 1.0}};
    s.recipes = {{"Plank", {{"Wood", 1}}, {}},
                 {"Stick", {{"Plank", 1}}, {}},
                 {"Table", {{"Plank", 2}}, {}},
                 {"WoodPickaxe", {{"Plank", 1}, {"Stick", 1}}, {"Table"}},
                 {"WoodSword", {{"Plank", 1}, {"Stick", 1}}, {"Table"}},
                 {"StonePickaxe", {{"Stone", 1}, {"Stick", 1}}, {"Table"}},
                 {"StoneSword", {{"Stone", 1}, {"Stick", 1}}, {"Table"}},
                 {"Furnace", {{"Stone", 2}}, {"Table"}},
                 {"Torch", {{"Coal", 1}, {"Stick", 1}}, {}},
                 {"IronPickaxe", {{"Iron", 1}, {"Coal", 1}, {"Stick", 1}}, {"Table", "Furnace"}},
                 {"IronSword", {{"Iron", 1}, {"Coal", 1}, {"Stick", 1}}, {"Table", "Furnace"}}};
    s.validate();
    return s;
}

// Every item can be held, nothing else applies: tasks range over
// "visible" (obtained at some point this episode) and "isPickedUp" (held now).
inline dsl::AffordanceTable chaincraft_affordances(const ChainCraftSpec& s) {
    dsl::AffordanceTable t;
    for (const auto& i : s.items) t.flags[i] = dsl::pickupable;
    return t;
}

struct EnvState {
    std::vector<int> inventory;
    std::uint32_t seen = 0;
    dsl::TaskProgress progress;
    int t = 0;
    int horizon = 0;
};

struct StepResult {
    EnvState state;
    double reward = 0.0;
    bool done = false;
    dsl::WorldSnapshot snapshot;
};

inline dsl::WorldSnapshot make_snapshot(const ChainCraftSpec& s, const EnvState& e) {
    dsl::WorldSnapshot w;
    for (std::size_t i = 0; i < s.items.size(); ++i) {
        w.set(s.items[i], dsl::Attribute::visible, ((e.seen >> i) & 1u) != 0);
        w.set(s.items[i], dsl::Attribute::isPickedUp, e.inventory[i] > 0);
    }
    return w;
}

inline EnvState env_reset(const ChainCraftSpec& s, const dsl::TaskSpec& task) {
    EnvState e;
    e.inventory.assign(s.items.size(), 0);
    e.horizon = s.horizon_per_state * static_cast<int>(task.states.size());
    return e;
}

namespace detail {
inline bool has_tools(const ChainCraftSpec& s, const EnvState& e, const std::vector<std::string>& tools) {
    for (const auto& t : tools)
        if (e.inventory[s.item_index(t)] <= 0) return false;
    return true;
}

// Fast path for the checker: only visible / isPickedUp matter here.
inline bool fast_state_ok(const ChainCraftSpec& s, const EnvState& e, const dsl::EnvStateSpec& st) {
    for (const auto& o : st.objects) {
        const auto i = s.item_index(o.object);
        for (const auto& r : o.requirements) {
            bool actual;
            if (r.attribute == dsl::Attribute::visible) actual = ((e.seen >> i) & 1u) != 0;
            else if (r.attribute == dsl::Attribute::isPickedUp) actual = e.inventory[i] > 0;
            else if (dsl::is_boolean(r.attribute)) actual = false;
            else if (r.attribute == dsl::Attribute::temperature) {
                if (std::get<dsl::Temperature>(r.expected) != dsl::Temperature::RoomTemp) return false;
                continue;
            } else {
                if (!std::get<dsl::ObjectSet>(r.expected).empty()) return false;
                continue;
            }
            if (actual != std::get<bool>(r.expected)) return false;
        }
    }
    return true;
}
}  // namespace detail

// Applies one action. Illegal crafts and tool-less gathers are no-ops. The
// step that completes the task pays the completion reward; every other step
// pays -step_penalty.
inline StepResult env_step(const ChainCraftSpec& s, const dsl::TaskSpec& task, EnvState e, std::size_t action,
                           Rng& rng, bool want_snapshot = true) {
    if (action >= s.num_actions()) throw PreconditionError("illegal action id");
    if (action < s.gathers.size()) {
        const auto& g = s.gathers[action];
        if (detail::has_tools(s, e, g.tools) && (g.prob >= 1.0 || bernoulli(rng, g.prob))) {
            const auto i = s.item_index(g.item);
            ++e.inventory[i];
            e.seen |= 1u << i;
        }
    } else {
        const auto& r = s.recipes[action - s.gathers.size()];
        bool ok = detail::has_tools(s, e, r.tools);
        for (const auto& [k, n] : r.inputs) ok = ok && e.inventory[s.item_index(k)] >= n;
        if (ok) {
            for (const auto& [k, n] : r.inputs) e.inventory[s.item_index(k)] -= n;
            const auto o = s.item_index(r.output);
            ++e.inventory[o];
            e.seen |= 1u << o;
        }
    }
    ++e.t;
    StepResult out;
    if (!e.progress.complete(task) && detail::fast_state_ok(s, e, task.states[e.progress.next_index]))
        ++e.progress.next_index;
    const bool complete = e.progress.complete(task);
    out.reward = complete ? s.completion_reward : -s.step_penalty;
    out.done = complete || e.t >= e.horizon;
    if (want_snapshot) out.snapshot = make_snapshot(s, e);
    out.state = std::move(e);
    return out;
}

// -------------------------------------------------------- tabular learner

struct LearnerConfig {
    double step_size = 0.5;
    double epsilon = 0.1;
    double gamma = 0.95;
    int inventory_cap = 3;

    void validate() const {
        if (!(gamma >= 0.0 && gamma < 1.0)) throw ConfigError("gamma must lie in [0,1)");
        if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw ConfigError("epsilon must lie in [0,1]");
        if (!(step_size > 0.0 && step_size <= 1.0)) throw ConfigError("step_size must lie in (0,1]");
    }
};

// Q table per task over (progress, capped inventory, seen mask).
class TabularLearner {
public:
    explicit TabularLearner(const ChainCraftSpec& spec, LearnerConfig cfg = {}) : spec_(&spec), cfg_(cfg) {
        cfg_.validate();
    }

    const LearnerConfig& config() const { return cfg_; }
    const ChainCraftSpec& spec() const { return *spec_; }

    // Exact for the default spec (52 bits); larger specs wrap, which only
    // risks rare state aliasing.
    std::uint64_t key(const EnvState& e) const {
        std::uint64_t k = e.progress.next_index;
        for (int c : e.inventory)
            k = k * static_cast<std::uint64_t>(cfg_.inventory_cap + 1) +
                static_cast<std::uint64_t>(std::min(c, cfg_.inventory_cap));
        return (k << spec_->items.size()) ^ e.seen;
    }

    std::vector<double>& row(const TaskId& task, std::uint64_t k) {
        auto& t = tables_[task];
        auto it = t.find(k);
        if (it == t.end()) it = t.emplace(k, std::vector<double>(spec_->num_actions(), 0.0)).first;
        return it->second;
    }

    const std::vector<double>* find_row(const TaskId& task, std::uint64_t k) const {
        auto t = tables_.find(task);
        if (t == tables_.end()) return nullptr;
        auto it = t->second.find(k);
        return it == t->second.end() ? nullptr : &it->second;
    }

    // Greedy action, ties broken uniformly at random.
    std::size_t greedy(const TaskId& task, const EnvState& e, Rng& rng) const {
        const auto* q = find_row(task, key(e));
        const std::size_t n = spec_->num_actions();
        if (!q) return uniform_index(rng, n);
        double best = (*q)[0];
        for (double v : *q) best = std::max(best, v);
        std::size_t ties = 0, pick = 0;
        for (std::size_t a = 0; a < n; ++a)
            if ((*q)[a] == best && uniform_index(rng, ++ties) == 0) pick = a;
        return pick;
    }

    std::size_t table_size() const {
        std::size_t n = 0;
        for (const auto& [_, t] : tables_) n += t.size();
        return n;
    }

private:
    const ChainCraftSpec* spec_;
    LearnerConfig cfg_;
    std::unordered_map<TaskId, std::unordered_map<std::uint64_t, std::vector<double>>> tables_;
};

// One epsilon-greedy episode with one-step Q-learning updates. Returns the
// episode return.
inline double train_episode(TabularLearner& L, const dsl::TaskSpec& task, const TaskId& id, Rng& rng,
                            std::optional<double> epsilon = std::nullopt) {
    const auto& s = L.spec();
    const auto& c = L.config();
    const double eps = epsilon.value_or(c.epsilon);
    EnvState e = env_reset(s, task);
    double ret = 0.0;
    for (;;) {
        const std::size_t a = bernoulli(rng, eps) ? uniform_index(rng, s.num_actions()) : L.greedy(id, e, rng);
        const std::uint64_t k = L.key(e);
        StepResult r = env_step(s, task, e, a, rng, false);
        ret += r.reward;
        double target = r.reward;
        // timeouts are treated as terminal too
        if (!r.done) {
            const auto* nq = L.find_row(id, L.key(r.state));
            target += c.gamma * (nq ? *std::max_element(nq->begin(), nq->end()) : 0.0);
        }
        auto& q = L.row(id, k);
        q[a] += c.step_size * (target - q[a]);
        e = std::move(r.state);
        if (r.done) break;
    }
    return ret;
}

inline bool run_episode(const ChainCraftSpec& s, const dsl::TaskSpec& task,
                        const std::function<std::size_t(const EnvState&)>& policy, Rng& rng) {
    EnvState e = env_reset(s, task);
    for (;;) {
        StepResult r = env_step(s, task, e, policy(e), rng, false);
        e = std::move(r.state);
        if (r.done) return e.progress.complete(task);
    }
}

inline double random_policy_rate(const ChainCraftSpec& s, const dsl::TaskSpec& task, int episodes, Rng& rng) {
    int ok = 0;
    for (int i = 0; i < episodes; ++i)
        ok += run_episode(s, task, [&](const EnvState&) { return uniform_index(rng, s.num_actions()); }, rng);
    return static_cast<double>(ok) / episodes;
}

// Greedy Monte-Carlo success frequency per task.
inline std::vector<double> evaluate_policy(const TabularLearner& L,
                                           const std::vector<std::pair<TaskId, const dsl::TaskSpec*>>& tasks,
                                           int episodes, Rng& rng) {
    if (episodes < 1) throw PreconditionError("episodes must be >= 1");
    std::vector<double> out;
    out.reserve(tasks.size());
    for (const auto& [id, spec] : tasks) {
        int ok = 0;
        for (int i = 0; i < episodes; ++i)
            ok += run_episode(L.spec(), *spec, [&](const EnvState& e) { return L.greedy(id, e, rng); }, rng);
        out.push_back(static_cast<double>(ok) / episodes);
    }
    return out;
}

// Builds a task "hold <item>".
inline dsl::TaskSpec hold_task(const std::string& item) {
    dsl::TaskSpec t;
    t.states.push_back({{{item, {{dsl::Attribute::isPickedUp, true}}}}});
    return t;
}

}  // namespace omni::world
