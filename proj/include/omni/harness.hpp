#pragma once

// Experiment runner: the sample / train / evaluate / reweight loop for every
// condition, plus metric aggregation and CSV/SVG emission.

#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "omni/core.hpp"
#include "omni/curriculum.hpp"
#include "omni/fmclient.hpp"
#include "omni/interestingness.hpp"
#include "omni/mock_fm.hpp"
#include "omni/prompts.hpp"
#include "omni/proposer.hpp"
#include "omni/report.hpp"
#include "omni/stats.hpp"
#include "omni/taskdsl.hpp"
#include "omni/world.hpp"

namespace omni::harness {

enum class Condition { uniform, lp, omni, oracle, omni_embed };

inline const char* to_string(Condition c) {
    switch (c) {
        case Condition::uniform: return "uniform";
        case Condition::lp: return "lp";
        case Condition::omni: return "omni";
        case Condition::oracle: return "oracle";
        case Condition::omni_embed: return "omni_embed";
    }
    return "?";
}

inline Condition condition_from(const std::string& s) {
    for (auto c : {Condition::uniform, Condition::lp, Condition::omni, Condition::oracle, Condition::omni_embed})
        if (s == to_string(c)) return c;
    throw ConfigError("unknown condition " + s);
}

enum class WorldKind { synthetic, chaincraft };

inline WorldKind world_from(const std::string& s) {
    if (s == "synthetic") return WorldKind::synthetic;
    if (s == "chaincraft") return WorldKind::chaincraft;
    throw ConfigError("unknown world " + s);
}

struct ProposerSettings {
    std::size_t initial_tasks = 3;
    std::size_t inject_every = 5;  // evaluation rounds between injections
    std::size_t inject_count = 3;  // tasks per uniform batch
    std::size_t k_cannot = 10;
    double done_well_threshold = 0.6;
    std::size_t max_states = dsl::kDefaultMaxStates;  // uniform generator task length cap
};

struct MoiSettings {
    std::string template_name = "crafter";
    std::size_t chunk_size = 50;
    int max_attempts = 3;
    double embed_eps = 0.25;
    std::size_t embed_min_pts = 2;
};

using BackendFactory = std::function<std::shared_ptr<fm::Backend>()>;

struct ExperimentConfig {
    Condition condition = Condition::lp;
    WorldKind world = WorldKind::synthetic;
    std::string preset = "crafter-repeats";
    std::vector<std::uint64_t> seeds = {0};
    std::size_t rounds = 200;  // evaluation rounds; updates = rounds * N
    std::size_t batch_size = 32;
    CurriculumConfig curriculum;
    bool strict_threshold = false;
    std::size_t task_record_stride = 1;  // 0 disables per-task rows
    std::size_t threads = 1;
    world::SynthParams synth;
    world::FloorParams floor;
    world::LearnerConfig learner;
    ProposerSettings proposer;
    MoiSettings moi;
    std::optional<world::SynthSpec> synth_spec;          // overrides the preset
    std::optional<world::ChainCraftSpec> chaincraft_spec;  // overrides the default recipes
    std::shared_ptr<fm::PromptCache> cache;  // shared across seeds when set
    BackendFactory backend;                  // mocks when empty

    void validate() const {
        curriculum.validate();
        learner.validate();
        if (seeds.empty()) throw ConfigError("at least one seed is required");
        if (rounds < 1 || batch_size < 1) throw ConfigError("rounds and batch size must be positive");
        if (threads < 1) throw ConfigError("threads must be positive");
        if (world == WorldKind::chaincraft) {
            if (condition == Condition::oracle || condition == Condition::omni_embed)
                throw ConfigError(std::string("condition ") + to_string(condition) +
                                  " needs a fixed task set; chaincraft grows its own");
            if (proposer.inject_every < 1 || proposer.inject_count < 1)
                throw ConfigError("proposer cadence and batch must be positive");
            if (!(proposer.done_well_threshold > 0.0 && proposer.done_well_threshold < 1.0))
                throw ConfigError("done_well_threshold must lie in (0,1)");
        } else if (!synth_spec) {
            if (preset == "random-floor") world::random_floor(floor);
            else world::synth_preset(preset, synth);
            if (condition == Condition::omni) templates::by_name(moi.template_name);
        }
    }
};

struct TaskRow {
    std::string condition;
    std::uint64_t seed = 0;
    std::size_t round = 0;
    std::string task;
    double success = 0.0;
    double weight = 0.0;
    std::string category;
};

struct AggRow {
    std::string condition;
    std::uint64_t seed = 0;
    std::size_t round = 0;
    double avg_success = 0.0;
    double avg_success_interesting = 0.0;
    std::size_t learned = 0;
    std::size_t learned_interesting = 0;
    std::size_t num_tasks = 0;
};

struct Failure {
    std::string condition;
    std::uint64_t seed = 0;
    std::string kind;  // "backend" or "error"
    std::string message;
};

struct ExperimentRecord {
    std::vector<TaskRow> tasks;
    std::vector<AggRow> aggregates;
    std::vector<Failure> failures;
    std::size_t backend_calls = 0;

    void append(ExperimentRecord&& o) {
        tasks.insert(tasks.end(), std::make_move_iterator(o.tasks.begin()), std::make_move_iterator(o.tasks.end()));
        aggregates.insert(aggregates.end(), o.aggregates.begin(), o.aggregates.end());
        failures.insert(failures.end(), o.failures.begin(), o.failures.end());
        backend_calls += o.backend_calls;
    }

    // Final-round value of an aggregate metric per seed, in seed order.
    std::vector<double> final_values(const std::string& condition, const std::string& metric) const;
};

inline double metric_of(const AggRow& a, const std::string& m) {
    if (m == "avg_success") return a.avg_success;
    if (m == "avg_success_interesting") return a.avg_success_interesting;
    if (m == "learned_count") return static_cast<double>(a.learned);
    if (m == "learned_interesting") return static_cast<double>(a.learned_interesting);
    if (m == "num_tasks") return static_cast<double>(a.num_tasks);
    throw ConfigError("unknown metric " + m);
}

inline std::vector<double> ExperimentRecord::final_values(const std::string& condition, const std::string& metric) const {
    std::map<std::uint64_t, const AggRow*> last;
    for (const auto& a : aggregates) {
        if (a.condition != condition) continue;
        auto& slot = last[a.seed];
        if (!slot || slot->round < a.round) slot = &a;
    }
    std::vector<double> out;
    for (const auto& [_, a] : last) out.push_back(metric_of(*a, metric));
    return out;
}

namespace detail {

inline AggRow aggregate(const ExperimentConfig& cfg, std::uint64_t seed, std::size_t round,
                        const std::vector<double>& rates, const std::vector<char>& interesting) {
    AggRow a{to_string(cfg.condition), seed, round};
    a.num_tasks = rates.size();
    if (rates.empty()) return a;
    std::vector<double> ri;
    for (std::size_t i = 0; i < rates.size(); ++i)
        if (interesting[i]) ri.push_back(rates[i]);
    a.avg_success = stats::avg_success(rates);
    a.avg_success_interesting = ri.empty() ? 0.0 : stats::avg_success(ri);
    a.learned = stats::count_learned(rates, cfg.curriculum.alpha, cfg.strict_threshold);
    a.learned_interesting = stats::count_learned(ri, cfg.curriculum.alpha, cfg.strict_threshold);
    return a;
}

inline bool record_round(const ExperimentConfig& cfg, std::size_t round) {
    return cfg.task_record_stride > 0 && (round % cfg.task_record_stride == 0 || round == cfg.rounds);
}

inline std::shared_ptr<fm::PromptCache> cache_for(const ExperimentConfig& cfg) {
    return cfg.cache ? cfg.cache : std::make_shared<fm::PromptCache>();
}

// ------------------------------------------------------------ synthetic

inline void run_synthetic_seed(const ExperimentConfig& cfg, std::uint64_t seed, ExperimentRecord& rec) {
    const world::SynthSpec spec = cfg.synth_spec            ? *cfg.synth_spec
                                  : cfg.preset == "random-floor" ? world::random_floor(cfg.floor)
                                                                 : world::synth_preset(cfg.preset, cfg.synth);
    const std::size_t n = spec.size();
    std::vector<TaskId> ids;
    std::vector<char> interesting(n);
    for (std::size_t i = 0; i < n; ++i) {
        ids.emplace_back(spec.tasks[i]);
        interesting[i] = spec.category[i] == world::Category::interesting;
    }

    CurriculumState cs(cfg.curriculum);
    for (std::size_t i = 0; i < n; ++i) cs.add_task(ids[i], spec.r[i]);

    std::unique_ptr<InterestModel> moi;
    std::shared_ptr<fm::FmClient> client;
    switch (cfg.condition) {
        case Condition::omni:
            client = std::make_shared<fm::FmClient>(cfg.backend ? cfg.backend() : mock::crafter_backend(),
                                                    cache_for(cfg));
            moi = std::make_unique<FmInterestModel>(
                client, templates::by_name(cfg.moi.template_name),
                FmMoiOptions{cfg.moi.chunk_size, cfg.moi.max_attempts, "mock", 2048});
            break;
        case Condition::oracle: {
            std::set<std::string> s;
            for (std::size_t i = 0; i < n; ++i)
                if (interesting[i]) s.insert(spec.tasks[i]);
            moi = std::make_unique<OracleMoi>(std::move(s));
            break;
        }
        case Condition::omni_embed:
            moi = std::make_unique<EmbeddingMoi>(spec.tasks, std::make_shared<HashedNgramEmbedder>(),
                                                 cfg.moi.embed_eps, cfg.moi.embed_min_pts);
            break;
        default: break;
    }

    SuccessSmoother smooth(cfg.curriculum.ema_beta);
    SamplingDistribution dist = uniform_distribution(ids);
    Rng rng = make_stream(seed, 1);
    world::SynthState st = world::synth_init(spec);
    const std::string cond = to_string(cfg.condition);

    for (std::size_t round = 1; round <= cfg.rounds; ++round) {
        for (int u = 0; u < cfg.curriculum.eval_frequency_updates; ++u) {
            const CdfSampler draw(dist);
            std::vector<std::uint32_t> alloc(n, 0);
            for (std::size_t b = 0; b < cfg.batch_size; ++b) ++alloc[draw(rng)];
            st = world::synth_train(st, alloc, spec);
        }
        const auto rates = world::synth_eval(st, spec);
        if (cfg.condition != Condition::uniform) {
            std::unordered_map<TaskId, double> ev;
            for (std::size_t i = 0; i < n; ++i) ev.emplace(ids[i], rates[i]);
            cs = record_evaluation(std::move(cs), ev);
            dist = weights_from_lp(cs);
            if (moi) {
                for (std::size_t i = 0; i < n; ++i) smooth.observe(ids[i], rates[i]);
                const auto part = partition(smooth.snapshot(ids), *moi);
                dist = compose_with_interest(dist, part.as_map(), cfg.curriculum.boring_multiplier);
            }
        }
        if (record_round(cfg, round))
            for (std::size_t i = 0; i < n; ++i)
                rec.tasks.push_back({cond, seed, round, spec.tasks[i], rates[i], dist.weights[i],
                                     world::to_string(spec.category[i])});
        rec.aggregates.push_back(aggregate(cfg, seed, round, rates, interesting));
    }
    if (client) rec.backend_calls += client->backend_calls();
}

// ----------------------------------------------------------- chaincraft

inline void run_chaincraft_seed(const ExperimentConfig& cfg, std::uint64_t seed, ExperimentRecord& rec) {
    const world::ChainCraftSpec spec = cfg.chaincraft_spec ? *cfg.chaincraft_spec : world::chaincraft_default();
    const dsl::AffordanceTable aff = world::chaincraft_affordances(spec);
    dsl::RandomTaskOptions gen_opt;
    gen_opt.max_states = cfg.proposer.max_states;

    proposer::TaskArchive archive(cfg.proposer.done_well_threshold);
    std::vector<TaskId> order;  // archive order
    std::unordered_map<TaskId, dsl::TaskSpec> specs;
    CurriculumState cs(cfg.curriculum);
    world::TabularLearner learner(spec, cfg.learner);

    // the task stream is shared by every condition for a given seed
    Rng gen = make_stream(seed, 11), train = make_stream(seed, 12), eval = make_stream(seed, 13),
        rdn = make_stream(seed, 14), samp = make_stream(seed, 15);

    std::shared_ptr<fm::FmClient> client;
    if (cfg.condition == Condition::omni)
        client = std::make_shared<fm::FmClient>(cfg.backend ? cfg.backend() : mock::chaincraft_backend(spec),
                                                cache_for(cfg));

    auto add = [&](const dsl::TaskSpec& t) {
        if (!archive.add(t)) return;
        const TaskId id = dsl::canonicalize(t);
        order.push_back(id);
        specs.emplace(id, t);
    };
    auto distribution = [&] {
        if (cfg.condition == Condition::uniform) return uniform_distribution(order);
        std::vector<double> lp;
        for (const auto& id : order) lp.push_back(cs.contains(id) ? cs.at(id).lp : 0.0);
        return weights_from_lp(order, lp);
    };

    for (std::size_t k = 0; k < cfg.proposer.initial_tasks; ++k) add(dsl::random_task(gen, aff, gen_opt));
    std::vector<TaskId> sampled;
    const std::string cond = to_string(cfg.condition);
    proposer::ProposeOptions popt;
    popt.k_cannot = cfg.proposer.k_cannot;

    for (std::size_t round = 1; round <= cfg.rounds; ++round) {
        if ((round - 1) % cfg.proposer.inject_every == 0) {
            if (client) {
                for (auto& t : proposer::propose_tasks(*client, archive, aff, popt).accepted) add(t);
            } else {
                for (auto& t : proposer::uniform_task_batch(gen, aff, cfg.proposer.inject_count, gen_opt)) add(t);
            }
        }
        if (order.empty()) throw GenerationError("task archive is empty");
        const SamplingDistribution dist = distribution();
        for (int u = 0; u < cfg.curriculum.eval_frequency_updates; ++u) {
            const CdfSampler draw(dist);
            for (std::size_t b = 0; b < cfg.batch_size; ++b) {
                const TaskId& id = order[draw(samp)];
                const dsl::TaskSpec& t = specs.at(id);
                if (!cs.contains(id)) {
                    cs.add_task(id, world::random_policy_rate(spec, t, cfg.curriculum.random_episodes, rdn));
                    sampled.push_back(id);
                }
                ++archive.at(id).samples;
                world::train_episode(learner, t, id, train);
            }
        }
        // only tasks that have been sampled at least once are evaluated
        std::vector<std::pair<TaskId, const dsl::TaskSpec*>> batch;
        for (const auto& id : sampled) batch.emplace_back(id, &specs.at(id));
        const auto rates = world::evaluate_policy(learner, batch, cfg.curriculum.eval_episodes, eval);
        std::unordered_map<TaskId, double> ev;
        for (std::size_t i = 0; i < sampled.size(); ++i) {
            ev.emplace(sampled[i], rates[i]);
            archive.at(sampled[i]).success = rates[i];
        }
        cs = record_evaluation(std::move(cs), ev);
        const SamplingDistribution next = distribution();
        if (record_round(cfg, round))
            for (std::size_t i = 0; i < sampled.size(); ++i)
                rec.tasks.push_back({cond, seed, round, sampled[i].str(), rates[i], next.weight_of(sampled[i]),
                                     "generated"});
        rec.aggregates.push_back(aggregate(cfg, seed, round, rates, std::vector<char>(rates.size(), 1)));
    }
    if (client) rec.backend_calls += client->backend_calls();
}

inline ExperimentRecord run_seed(const ExperimentConfig& cfg, std::uint64_t seed) {
    ExperimentRecord rec;
    try {
        if (cfg.world == WorldKind::synthetic) run_synthetic_seed(cfg, seed, rec);
        else run_chaincraft_seed(cfg, seed, rec);
    } catch (const TransportError& e) {
        rec.failures.push_back({to_string(cfg.condition), seed, "backend", e.what()});
    } catch (const ProtocolError& e) {
        rec.failures.push_back({to_string(cfg.condition), seed, "backend", e.what()});
    } catch (const Error& e) {
        rec.failures.push_back({to_string(cfg.condition), seed, "error", e.what()});
    }
    return rec;
}

}  // namespace detail

// Seeds run on up to cfg.threads workers; results are joined in seed order.
inline ExperimentRecord run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    std::vector<ExperimentRecord> parts(cfg.seeds.size());
    std::size_t next = 0;
    std::mutex mu;
    auto worker = [&] {
        for (;;) {
            std::size_t k;
            {
                std::lock_guard lk(mu);
                if (next >= cfg.seeds.size()) return;
                k = next++;
            }
            parts[k] = detail::run_seed(cfg, cfg.seeds[k]);
        }
    };
    const std::size_t nt = std::min(cfg.threads, cfg.seeds.size());
    if (nt <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t i = 0; i < nt; ++i) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    ExperimentRecord out;
    for (auto& p : parts) out.append(std::move(p));
    return out;
}

// ---------------------------------------------------------------- output

struct SummaryRow {
    std::string condition;
    std::size_t round = 0;
    std::string metric;
    stats::Interval ci;
};

inline const std::vector<std::string>& summary_metrics() {
    static const std::vector<std::string> m = {"avg_success", "avg_success_interesting", "learned_count",
                                               "learned_interesting"};
    return m;
}

// Bootstrap CI across seeds for each (condition, round, metric).
inline std::vector<SummaryRow> summarize(const ExperimentRecord& rec, std::uint64_t seed = 0) {
    std::map<std::pair<std::string, std::size_t>, std::vector<const AggRow*>> groups;
    std::vector<std::string> conds;
    for (const auto& a : rec.aggregates) {
        if (std::find(conds.begin(), conds.end(), a.condition) == conds.end()) conds.push_back(a.condition);
        groups[{a.condition, a.round}].push_back(&a);
    }
    std::vector<SummaryRow> out;
    Rng rng = make_stream(seed, 99);
    for (const auto& c : conds)
        for (const auto& [key, rows] : groups) {
            if (key.first != c) continue;
            for (const auto& m : summary_metrics()) {
                std::vector<double> v;
                for (const auto* a : rows) v.push_back(metric_of(*a, m));
                out.push_back({c, key.second, m, stats::bootstrap_ci(v, rng)});
            }
        }
    return out;
}

inline std::string tasks_csv(const ExperimentRecord& rec) {
    std::string o = report::csv_line({"condition", "seed", "round", "task_id", "success", "weight", "category"});
    for (const auto& r : rec.tasks)
        o += report::csv_line({r.condition, std::to_string(r.seed), std::to_string(r.round), r.task,
                               report::fmt(r.success), report::fmt(r.weight), r.category});
    return o;
}

inline std::string aggregates_csv(const ExperimentRecord& rec) {
    std::string o = report::csv_line({"condition", "seed", "round", "avg_success", "avg_success_interesting",
                                      "learned_count", "learned_interesting", "num_tasks"});
    for (const auto& a : rec.aggregates)
        o += report::csv_line({a.condition, std::to_string(a.seed), std::to_string(a.round), report::fmt(a.avg_success),
                               report::fmt(a.avg_success_interesting), std::to_string(a.learned),
                               std::to_string(a.learned_interesting), std::to_string(a.num_tasks)});
    return o;
}

inline std::string summary_csv(const std::vector<SummaryRow>& rows) {
    std::string o = report::csv_line({"condition", "round", "metric", "median", "ci_low", "ci_high"});
    for (const auto& r : rows)
        o += report::csv_line({r.condition, std::to_string(r.round), r.metric, report::fmt(r.ci.median),
                               report::fmt(r.ci.low), report::fmt(r.ci.high)});
    return o;
}

inline std::vector<AggRow> aggregates_from_csv(const report::Table& t) {
    const auto c = t.column("condition"), s = t.column("seed"), r = t.column("round"), a = t.column("avg_success"),
               ai = t.column("avg_success_interesting"), l = t.column("learned_count"),
               li = t.column("learned_interesting"), n = t.column("num_tasks");
    std::vector<AggRow> out;
    for (const auto& row : t.rows) {
        if (row.size() != t.header.size()) throw ParseError("CSV row has the wrong number of fields", 0);
        out.push_back({row[c], std::stoull(row[s]), std::stoull(row[r]), std::stod(row[a]), std::stod(row[ai]),
                       std::stoull(row[l]), std::stoull(row[li]), std::stoull(row[n])});
    }
    return out;
}

// Median-across-seeds curve of one metric, one series per condition.
inline std::vector<report::Series> median_curves(const std::vector<AggRow>& rows, const std::string& metric) {
    std::vector<std::string> conds;
    std::map<std::pair<std::string, std::size_t>, std::vector<double>> g;
    for (const auto& a : rows) {
        if (std::find(conds.begin(), conds.end(), a.condition) == conds.end()) conds.push_back(a.condition);
        g[{a.condition, a.round}].push_back(metric_of(a, metric));
    }
    std::vector<report::Series> out;
    for (const auto& c : conds) {
        report::Series s{c, {}};
        for (const auto& [k, v] : g)
            if (k.first == c) s.points.emplace_back(static_cast<double>(k.second), stats::median(v));
        out.push_back(std::move(s));
    }
    return out;
}

// Heatmap of per-task values (column "success" or "weight") for one
// condition and seed: rows are tasks in first-seen order, columns rounds.
inline std::string task_heatmap(const report::Table& t, const std::string& condition, std::uint64_t seed,
                                const std::string& value_column) {
    const auto c = t.column("condition"), s = t.column("seed"), r = t.column("round"), id = t.column("task_id"),
               v = t.column(value_column);
    std::vector<std::string> tasks;
    std::map<std::string, std::size_t> trow;
    std::vector<std::size_t> rounds;
    std::map<std::size_t, std::size_t> rcol;
    for (const auto& row : t.rows) {
        if (row[c] != condition || std::stoull(row[s]) != seed) continue;
        if (trow.emplace(row[id], tasks.size()).second) tasks.push_back(row[id]);
        const auto rd = std::stoull(row[r]);
        if (rcol.emplace(rd, 0).second) rounds.push_back(rd);
    }
    std::sort(rounds.begin(), rounds.end());
    for (std::size_t k = 0; k < rounds.size(); ++k) rcol[rounds[k]] = k;
    std::vector<std::vector<double>> m(tasks.size(), std::vector<double>(rounds.size(), 0.0));
    for (const auto& row : t.rows) {
        if (row[c] != condition || std::stoull(row[s]) != seed) continue;
        m[trow[row[id]]][rcol[std::stoull(row[r])]] = std::stod(row[v]);
    }
    // weights are tiny for large task sets; rescale per column for visibility
    if (value_column == "weight")
        for (std::size_t k = 0; k < rounds.size(); ++k) {
            double mx = 0.0;
            for (const auto& row : m) mx = std::max(mx, row[k]);
            if (mx > 0)
                for (auto& row : m) row[k] /= mx;
        }
    return report::heatmap(tasks, m, condition + " seed " + std::to_string(seed) + " " + value_column);
}

// Writes tasks.csv, aggregates.csv, summary.csv and SVG charts into dir.
inline void write_outputs(const ExperimentRecord& rec, const std::string& dir) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    const std::string tcsv = tasks_csv(rec);
    report::write_text((fs::path(dir) / "tasks.csv").string(), tcsv);
    report::write_text((fs::path(dir) / "aggregates.csv").string(), aggregates_csv(rec));
    report::write_text((fs::path(dir) / "summary.csv").string(), summary_csv(summarize(rec)));
    for (const auto& m : {"learned_interesting", "avg_success"})
        report::write_text((fs::path(dir) / (std::string(m) + ".svg")).string(),
                           report::line_chart(median_curves(rec.aggregates, m), std::string("median ") + m,
                                              "evaluation round", m));
    if (rec.tasks.empty()) return;
    const auto table = report::parse_csv(tcsv);
    std::set<std::string> done;
    for (const auto& r : rec.tasks) {
        if (!done.insert(r.condition).second) continue;
        report::write_text((fs::path(dir) / ("heatmap_" + r.condition + "_success.svg")).string(),
                           task_heatmap(table, r.condition, r.seed, "success"));
        report::write_text((fs::path(dir) / ("heatmap_" + r.condition + "_weight.svg")).string(),
                           task_heatmap(table, r.condition, r.seed, "weight"));
    }
}

}  // namespace omni::harness
