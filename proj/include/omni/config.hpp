#pragma once

// INI experiment files: one section per module. Unknown sections or keys are
// rejected so typos fail loudly.

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "omni/harness.hpp"
#include "omni/http_backend.hpp"
#include "omni/world_io.hpp"

namespace omni::config {

struct RunPlan {
    harness::ExperimentConfig base;
    std::vector<harness::Condition> conditions;
    std::string output_dir = "results";
    std::string backend = "mock";  // mock | http
    std::string cache_path;
};

namespace detail {
namespace pt = boost::property_tree;

inline const std::map<std::string, std::set<std::string>>& allowed() {
    static const std::map<std::string, std::set<std::string>> a = {
        {"experiment",
         {"world", "preset", "conditions", "seeds", "rounds", "batch_size", "strict_threshold", "task_record_stride",
          "threads", "output_dir"}},
        {"curriculum",
         {"ema_beta", "reweight_theta", "boring_multiplier", "eval_every", "eval_episodes", "random_episodes",
          "normalize", "alpha"}},
        {"interestingness", {"template", "chunk_size", "max_attempts", "embed_eps", "embed_min_pts"}},
        {"fmclient", {"backend", "cache_path"}},
        {"proposer",
         {"initial_tasks", "inject_every", "inject_count", "k_cannot", "done_well_threshold", "max_states"}},
        {"world",
         {"eta", "q0", "rho", "base_random", "repeat_decay", "synth_file", "chaincraft_file", "floor_roots",
          "floor_children", "floor_plain", "floor_extremes", "floor_root_random", "floor_eta", "step_size", "epsilon",
          "gamma", "inventory_cap"}},
    };
    return a;
}

template <class T>
T get(const pt::ptree& t, const std::string& section, const std::string& key, T def) {
    auto sec = t.get_child_optional(pt::ptree::path_type(section, '\0'));
    if (!sec) return def;
    auto v = sec->get_optional<std::string>(pt::ptree::path_type(key, '\0'));
    if (!v) return def;
    std::istringstream in(*v);
    T out{};
    if constexpr (std::is_same_v<T, bool>) {
        std::string s;
        in >> s;
        if (s == "true" || s == "1" || s == "yes") return true;
        if (s == "false" || s == "0" || s == "no") return false;
        throw ConfigError(section + "." + key + ": expected a boolean, got '" + *v + "'");
    } else if constexpr (std::is_same_v<T, std::string>) {
        return world::io_detail::trim(*v);
    } else {
        if (!(in >> out) || !(in >> std::ws).eof())
            throw ConfigError(section + "." + key + ": cannot read '" + *v + "'");
        return out;
    }
}
}  // namespace detail

// "0-9", "1,3,5" or a mix like "0-2,7".
inline std::vector<std::uint64_t> parse_seeds(const std::string& s) {
    std::vector<std::uint64_t> out;
    for (const auto& part : world::io_detail::split(s, ',')) {
        const auto dash = part.find('-');
        try {
            if (dash == std::string::npos) {
                out.push_back(std::stoull(part));
            } else {
                const auto a = std::stoull(part.substr(0, dash)), b = std::stoull(part.substr(dash + 1));
                if (b < a) throw ConfigError("descending seed range " + part);
                for (auto k = a; k <= b; ++k) out.push_back(k);
            }
        } catch (const std::logic_error&) {
            throw ConfigError("bad seed list '" + s + "'");
        }
    }
    if (out.empty()) throw ConfigError("empty seed list");
    return out;
}

inline RunPlan parse_plan(const std::string& text, const std::string& base_dir = ".") {
    using detail::get;
    detail::pt::ptree t;
    std::istringstream in(text);
    try {
        detail::pt::read_ini(in, t);
    } catch (const detail::pt::ini_parser_error& e) {
        throw ConfigError(e.what());
    }
    for (const auto& [sec, body] : t) {
        auto it = detail::allowed().find(sec);
        if (it == detail::allowed().end()) throw ConfigError("unknown section [" + sec + "]");
        if (!body.data().empty()) throw ConfigError("stray value in [" + sec + "]");
        for (const auto& [key, _] : body)
            if (!it->second.count(key)) throw ConfigError("unknown key " + sec + "." + key);
    }

    RunPlan p;
    auto& c = p.base;
    auto path_of = [&](const std::string& f) {
        return f.empty() || f[0] == '/' ? f : base_dir + "/" + f;
    };
    c.world = harness::world_from(get<std::string>(t, "experiment", "world", "synthetic"));
    const bool chain = c.world == harness::WorldKind::chaincraft;
    c.preset = get<std::string>(t, "experiment", "preset", chain ? "infinite-kitchen" : "crafter-repeats");
    if (chain && c.preset != "infinite-kitchen") throw ConfigError("chaincraft world uses preset infinite-kitchen");
    for (const auto& s : world::io_detail::split(
             get<std::string>(t, "experiment", "conditions", chain ? "uniform,lp,omni" : "uniform,lp,omni,oracle"), ','))
        p.conditions.push_back(harness::condition_from(s));
    c.seeds = parse_seeds(get<std::string>(t, "experiment", "seeds", "0"));
    c.rounds = get<std::size_t>(t, "experiment", "rounds", c.rounds);
    c.batch_size = get<std::size_t>(t, "experiment", "batch_size", c.batch_size);
    c.strict_threshold = get<bool>(t, "experiment", "strict_threshold", false);
    c.task_record_stride = get<std::size_t>(t, "experiment", "task_record_stride", c.task_record_stride);
    c.threads = get<std::size_t>(t, "experiment", "threads", c.threads);
    p.output_dir = get<std::string>(t, "experiment", "output_dir", p.output_dir);

    auto& cu = c.curriculum;
    cu.ema_beta = get(t, "curriculum", "ema_beta", cu.ema_beta);
    cu.reweight_theta = get(t, "curriculum", "reweight_theta", cu.reweight_theta);
    cu.boring_multiplier = get(t, "curriculum", "boring_multiplier", cu.boring_multiplier);
    cu.eval_frequency_updates = get(t, "curriculum", "eval_every", cu.eval_frequency_updates);
    cu.eval_episodes = get(t, "curriculum", "eval_episodes", cu.eval_episodes);
    cu.random_episodes = get(t, "curriculum", "random_episodes", cu.random_episodes);
    cu.normalize_to_random = get(t, "curriculum", "normalize", cu.normalize_to_random);
    cu.alpha = get(t, "curriculum", "alpha", chain ? 0.6 : cu.alpha);

    auto& m = c.moi;
    m.template_name = get(t, "interestingness", "template", m.template_name);
    m.chunk_size = get(t, "interestingness", "chunk_size", m.chunk_size);
    m.max_attempts = get(t, "interestingness", "max_attempts", m.max_attempts);
    m.embed_eps = get(t, "interestingness", "embed_eps", m.embed_eps);
    m.embed_min_pts = get(t, "interestingness", "embed_min_pts", m.embed_min_pts);

    p.backend = get<std::string>(t, "fmclient", "backend", "mock");
    if (p.backend != "mock" && p.backend != "http") throw ConfigError("fmclient.backend must be mock or http");
    p.cache_path = path_of(get<std::string>(t, "fmclient", "cache_path", ""));

    auto& pr = c.proposer;
    pr.initial_tasks = get(t, "proposer", "initial_tasks", pr.initial_tasks);
    pr.inject_every = get(t, "proposer", "inject_every", pr.inject_every);
    pr.inject_count = get(t, "proposer", "inject_count", pr.inject_count);
    pr.k_cannot = get(t, "proposer", "k_cannot", pr.k_cannot);
    pr.done_well_threshold = get(t, "proposer", "done_well_threshold", pr.done_well_threshold);
    pr.max_states = get(t, "proposer", "max_states", pr.max_states);

    auto& sp = c.synth;
    sp.eta = get(t, "world", "eta", sp.eta);
    sp.q0 = get(t, "world", "q0", sp.q0);
    sp.rho = get(t, "world", "rho", sp.rho);
    if (auto br = get<std::string>(t, "world", "base_random", ""); !br.empty()) {
        sp.base_random.clear();
        for (const auto& x : world::io_detail::split(br, ','))
            sp.base_random.push_back(world::io_detail::number(x, "base_random"));
        if (sp.base_random.empty()) throw ConfigError("world.base_random is empty");
    }
    sp.repeat_decay = get(t, "world", "repeat_decay", sp.repeat_decay);
    auto& fl = c.floor;
    fl.roots = get(t, "world", "floor_roots", fl.roots);
    fl.children_per_root = get(t, "world", "floor_children", fl.children_per_root);
    fl.plain = get(t, "world", "floor_plain", fl.plain);
    fl.extremes = get(t, "world", "floor_extremes", fl.extremes);
    fl.root_random = get(t, "world", "floor_root_random", fl.root_random);
    fl.eta = get(t, "world", "floor_eta", fl.eta);
    auto& le = c.learner;
    le.step_size = get(t, "world", "step_size", le.step_size);
    le.epsilon = get(t, "world", "epsilon", le.epsilon);
    le.gamma = get(t, "world", "gamma", le.gamma);
    le.inventory_cap = get(t, "world", "inventory_cap", le.inventory_cap);
    if (auto f = get<std::string>(t, "world", "synth_file", ""); !f.empty())
        c.synth_spec = world::parse_synth_spec(world::read_file(path_of(f)), sp.rho);
    if (auto f = get<std::string>(t, "world", "chaincraft_file", ""); !f.empty())
        c.chaincraft_spec = world::parse_chaincraft(world::read_file(path_of(f)));

    if (!p.cache_path.empty()) c.cache = std::make_shared<fm::PromptCache>(p.cache_path);
    if (p.backend == "http") {
        const auto h = fm::HttpConfig::from_env();
        c.backend = [h] { return std::make_shared<fm::HttpBackend>(h); };
    }
    for (auto cond : p.conditions) {
        auto probe = c;
        probe.condition = cond;
        try {
            probe.validate();
        } catch (const PreconditionError& e) {
            throw ConfigError(e.what());
        }
    }
    return p;
}

inline RunPlan load_plan(const std::string& path) {
    const auto slash = path.find_last_of('/');
    return parse_plan(world::read_file(path), slash == std::string::npos ? "." : path.substr(0, slash));
}

}  // namespace omni::config
