// omni: command-line front end.
//
//   omni run <config.ini> [--out DIR] [--threads N]
//   omni partition <tasks.tsv> [--moi oracle|mock|http] [--template crafter|crafter-synonyms|babyai]
//   omni gen-tasks [--mode random|propose] [--world kitchen|chaincraft] [-n N] [--seed S]
//                  [--archive FILE] [--backend mock|http] [--nl]
//   omni stats <aggregates.csv>... [--metric M] [--round R]
//   omni plot <file.csv> --out FILE.svg [--metric M] [--heatmap success|weight --condition C --seed S]
//
// Exit codes: 0 ok, 1 config or input error, 2 backend error, 3 failed check.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>

#include "omni/config.hpp"
#include "omni/harness.hpp"
#include "omni/http_backend.hpp"
#include "omni/interestingness.hpp"
#include "omni/mock_fm.hpp"
#include "omni/proposer.hpp"
#include "omni/report.hpp"
#include "omni/stats.hpp"

using namespace omni;

namespace {

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read " + path);
    return in;
}

// Splits "text<TAB>number" at the last tab.
std::pair<std::string, double> split_scored(const std::string& line, const std::string& path) {
    const auto tab = line.rfind('\t');
    if (tab == std::string::npos) throw ConfigError(path + ": expected <task><TAB><success>: " + line);
    try {
        return {line.substr(0, tab), std::stod(line.substr(tab + 1))};
    } catch (const std::exception&) {
        throw ConfigError(path + ": bad success value: " + line);
    }
}

std::vector<std::string> content_lines(std::istream& in) {
    std::vector<std::string> out;
    for (std::string l; std::getline(in, l);) {
        if (!l.empty() && l.back() == '\r') l.pop_back();
        if (l.empty() || l[0] == '#') continue;
        out.push_back(l);
    }
    return out;
}

int cmd_run(const std::string& path, const std::string& out, std::size_t threads) {
    auto plan = config::load_plan(path);
    const std::string dir = out.empty() ? plan.output_dir : out;
    harness::ExperimentRecord all;
    for (auto c : plan.conditions) {
        auto cfg = plan.base;
        cfg.condition = c;
        if (threads) cfg.threads = threads;
        std::cerr << "running " << harness::to_string(c) << " over " << cfg.seeds.size() << " seed(s)\n";
        auto rec = harness::run_experiment(cfg);
        all.tasks.insert(all.tasks.end(), rec.tasks.begin(), rec.tasks.end());
        all.aggregates.insert(all.aggregates.end(), rec.aggregates.begin(), rec.aggregates.end());
        all.failures.insert(all.failures.end(), rec.failures.begin(), rec.failures.end());
        all.backend_calls += rec.backend_calls;
    }
    harness::write_outputs(all, dir);
    const std::string metric = plan.base.world == harness::WorldKind::chaincraft ? "learned_count" : "learned_interesting";
    for (auto c : plan.conditions) {
        const auto v = all.final_values(harness::to_string(c), metric);
        if (!v.empty()) std::cout << harness::to_string(c) << " median final " << metric << " " << stats::median(v) << "\n";
    }
    std::cout << "wrote " << dir << " (backend calls " << all.backend_calls << ")\n";
    bool backend_failed = false;
    for (const auto& f : all.failures) {
        std::cerr << "seed " << f.seed << " " << f.condition << " failed (" << f.kind << "): " << f.message << "\n";
        backend_failed = backend_failed || f.kind == "backend";
    }
    if (all.failures.empty()) return 0;
    return backend_failed ? 2 : 3;
}

int cmd_partition(const std::string& path, const std::string& moi_kind, const std::string& tmpl) {
    auto in = open_input(path);
    std::vector<std::pair<TaskId, double>> rows;
    for (const auto& l : content_lines(in)) {
        auto [t, s] = split_scored(l, path);
        rows.emplace_back(TaskId(t), s);
    }
    std::unique_ptr<InterestModel> moi;
    if (moi_kind == "oracle") {
        if (tmpl == "crafter") moi = oracles::crafter();
        else if (tmpl == "crafter-synonyms") moi = oracles::crafter_synonyms();
        else moi = oracles::babyai();
    } else {
        std::shared_ptr<fm::Backend> b;
        if (moi_kind == "mock") b = mock::crafter_backend();
        else b = std::make_shared<fm::HttpBackend>();
        auto client = std::make_shared<fm::FmClient>(b);
        FmMoiOptions opt;
        if (moi_kind == "http") opt.model = fm::HttpConfig::from_env().model;
        const auto t = tmpl == "crafter" ? templates::crafter()
                       : tmpl == "crafter-synonyms" ? templates::crafter_synonyms()
                                                    : templates::babyai();
        moi = std::make_unique<FmInterestModel>(client, t, opt);
    }
    const auto r = partition(rows, *moi);
    for (const auto& t : r.interesting) std::cout << "interesting\t" << t.str() << "\n";
    for (const auto& t : r.boring) std::cout << "boring\t" << t.str() << "\n";
    std::cerr << r.rounds << " MoI round(s)\n";
    return 0;
}

int cmd_gen(const std::string& mode, const std::string& world_name, std::size_t n, std::uint64_t seed,
            const std::string& archive_path, const std::string& backend, bool nl) {
    const auto spec = world::chaincraft_default();
    const dsl::AffordanceTable aff =
        world_name == "chaincraft" ? world::chaincraft_affordances(spec) : dsl::kitchen_affordances();
    std::shared_ptr<fm::FmClient> client;
    std::string model = "mock";
    auto get_client = [&] {
        if (client) return client;
        if (backend == "http") {
            const auto h = fm::HttpConfig::from_env();
            model = h.model;
            client = std::make_shared<fm::FmClient>(std::make_shared<fm::HttpBackend>(h));
        } else {
            client = std::make_shared<fm::FmClient>(mock::chaincraft_backend(spec));
        }
        return client;
    };
    std::vector<dsl::TaskSpec> tasks;
    if (mode == "random") {
        Rng rng = make_stream(seed, 0);
        tasks = proposer::uniform_task_batch(rng, aff, n);
    } else {
        proposer::TaskArchive archive;
        if (!archive_path.empty()) {
            auto in = open_input(archive_path);
            for (const auto& l : content_lines(in)) {
                auto [text, s] = split_scored(l, archive_path);
                const auto spec = dsl::parse_task(text);
                if (!archive.add(spec)) continue;
                auto& it = archive.at(dsl::canonicalize(spec));
                it.success = s;
                it.samples = 1;
            }
        }
        get_client();
        proposer::ProposeOptions opt;
        opt.model = model;
        const auto r = proposer::propose_tasks(*client, archive, aff, opt);
        std::cerr << r.accepted.size() << " accepted, " << r.duplicates << " duplicate(s), " << r.unachievable
                  << " unachievable\n";
        tasks = r.accepted;
        if (tasks.size() > n) tasks.resize(n);
    }
    std::vector<std::string> text;
    if (nl && !tasks.empty()) text = proposer::translate_to_nl(*get_client(), tasks, templates::kitchen_translate(), model);
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        std::cout << dsl::serialize_task(tasks[i]);
        if (nl) std::cout << '\t' << text[i];
        std::cout << '\n';
    }
    return 0;
}

std::vector<harness::AggRow> load_aggregates(const std::vector<std::string>& files) {
    std::vector<harness::AggRow> rows;
    for (const auto& f : files) {
        const auto t = report::read_csv(f);
        auto r = harness::aggregates_from_csv(t);
        rows.insert(rows.end(), r.begin(), r.end());
    }
    return rows;
}

int cmd_stats(const std::vector<std::string>& files, const std::string& metric, long round) {
    const auto rows = load_aggregates(files);
    std::map<std::string, std::map<std::uint64_t, std::pair<std::size_t, double>>> last;
    std::vector<std::string> order;
    for (const auto& a : rows) {
        if (round >= 0 && a.round != static_cast<std::size_t>(round)) continue;
        if (!last.count(a.condition)) order.push_back(a.condition);
        auto& slot = last[a.condition][a.seed];
        if (a.round >= slot.first) slot = {a.round, harness::metric_of(a, metric)};
    }
    if (order.empty()) throw ConfigError("no rows matched");
    std::map<std::string, std::vector<double>> vals;
    Rng rng = make_stream(0, 99);
    std::cout << report::csv_line({"condition", "n", "median", "ci_low", "ci_high"});
    for (const auto& c : order) {
        for (const auto& [seed, v] : last[c]) vals[c].push_back(v.second);
        const auto ci = stats::bootstrap_ci(vals[c], rng);
        std::cout << report::csv_line({c, std::to_string(vals[c].size()), report::fmt(ci.median), report::fmt(ci.low),
                                       report::fmt(ci.high)});
    }
    std::cout << report::csv_line({"a", "b", "u", "p", "method"});
    for (std::size_t i = 0; i < order.size(); ++i)
        for (std::size_t j = i + 1; j < order.size(); ++j) {
            const auto m = stats::mann_whitney_u(vals[order[i]], vals[order[j]]);
            std::cout << report::csv_line(
                {order[i], order[j], report::fmt(m.u), report::fmt(m.p), m.exact ? "exact" : "normal"});
        }
    return 0;
}

int cmd_plot(const std::string& file, const std::string& out, const std::string& metric, const std::string& heat,
             const std::string& condition, std::uint64_t seed) {
    std::string svg;
    if (!heat.empty()) {
        if (condition.empty()) throw ConfigError("--heatmap needs --condition");
        svg = harness::task_heatmap(report::read_csv(file), condition, seed, heat);
    } else {
        svg = report::line_chart(harness::median_curves(load_aggregates({file}), metric), "median " + metric,
                                 "evaluation round", metric);
    }
    report::write_text(out, svg);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"OMNI auto-curriculum experiments"};
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "run the experiment described by a config file");
    std::string run_cfg, run_out;
    std::size_t threads = 0;
    run->add_option("config", run_cfg)->required();
    run->add_option("--out", run_out, "output directory (overrides the config)");
    run->add_option("--threads", threads, "worker threads across seeds");

    auto* part = app.add_subcommand("partition", "partition tasks into interesting and boring");
    std::string part_file, moi_kind = "oracle", tmpl = "crafter";
    part->add_option("file", part_file, "lines of <task><TAB><success>")->required();
    part->add_option("--moi", moi_kind)->check(CLI::IsMember({"oracle", "mock", "http"}));
    part->add_option("--template", tmpl)->check(CLI::IsMember({"crafter", "crafter-synonyms", "babyai"}));

    auto* gen = app.add_subcommand("gen-tasks", "print a batch of kitchen tasks");
    std::string mode = "random", gen_world = "kitchen", archive, backend = "mock";
    std::size_t n = 5;
    std::uint64_t seed = 0;
    bool nl = false;
    gen->add_option("--mode", mode)->check(CLI::IsMember({"random", "propose"}));
    gen->add_option("--world", gen_world, "affordance table for generation and filtering")
        ->check(CLI::IsMember({"kitchen", "chaincraft"}));
    gen->add_option("-n", n)->check(CLI::PositiveNumber);
    gen->add_option("--seed", seed);
    gen->add_option("--archive", archive, "lines of <task><TAB><success> for proposals");
    gen->add_option("--backend", backend)->check(CLI::IsMember({"mock", "http"}));
    gen->add_flag("--nl", nl, "append natural-language descriptions");

    auto* st = app.add_subcommand("stats", "bootstrap CIs and Mann-Whitney tests over aggregates CSVs");
    std::vector<std::string> st_files;
    std::string st_metric = "learned_interesting";
    long st_round = -1;
    st->add_option("files", st_files)->required();
    st->add_option("--metric", st_metric);
    st->add_option("--round", st_round, "round to compare (default: last per seed)");

    auto* plot = app.add_subcommand("plot", "render an SVG from a results CSV");
    std::string pl_file, pl_out, pl_metric = "learned_interesting", heat, condition;
    std::uint64_t pl_seed = 0;
    plot->add_option("file", pl_file)->required();
    plot->add_option("--out", pl_out)->required();
    plot->add_option("--metric", pl_metric);
    plot->add_option("--heatmap", heat, "per-task column from tasks.csv")->check(CLI::IsMember({"success", "weight"}));
    plot->add_option("--condition", condition);
    plot->add_option("--seed", pl_seed);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        if (*run) return cmd_run(run_cfg, run_out, threads);
        if (*part) return cmd_partition(part_file, moi_kind, tmpl);
        if (*gen) return cmd_gen(mode, gen_world, n, seed, archive, backend, nl);
        if (*st) return cmd_stats(st_files, st_metric, st_round);
        if (*plot) return cmd_plot(pl_file, pl_out, pl_metric, heat, condition, pl_seed);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 1;
    } catch (const TransportError& e) {
        std::cerr << "backend error: " << e.what() << "\n";
        return 2;
    } catch (const ProtocolError& e) {
        std::cerr << "backend error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
