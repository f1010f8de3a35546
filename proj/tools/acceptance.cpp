// Acceptance runner: one PASS/FAIL line per criterion.
//
//   omni_acceptance [--only 1,4,7] [--known-failing 9]
//
// Exit status is 0 when every selected criterion passes, or when the set of
// failures equals the --known-failing list exactly; 3 otherwise.

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "omni/curriculum.hpp"
#include "omni/fmclient.hpp"
#include "omni/harness.hpp"
#include "omni/interestingness.hpp"
#include "omni/mock_fm.hpp"
#include "omni/stats.hpp"
#include "omni/taskdsl.hpp"
#include "omni/world.hpp"

using namespace omni;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

// Tolerances.
constexpr double kExact = 1e-12;
constexpr double kDecayBand = 1.5;       // C2: weight within this multiple of uniform counts as decayed
constexpr double kSignificance = 0.05;  // C7, C9
constexpr double kOracleGap = 1.0;      // C7

std::string join(const std::vector<double>& v) {
    std::ostringstream os;
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? " " : "") << v[i];
    return os.str();
}

Outcome c1() {
    const double a = reweight(0.1, 0.1), b = reweight(0.5, 0.1);
    bool ok = std::abs(a - 0.5) <= kExact && std::abs(b - 0.9) <= kExact;
    double prev = -1.0;
    for (int i = 0; i <= 10000; ++i) {
        const double p = i / 10000.0, f = reweight(p, 0.1);
        if (f < p || f < prev) ok = false;
        prev = f;
    }
    std::ostringstream os;
    os << std::setprecision(17) << "f(0.1)=" << a << " f(0.5)=" << b;
    return {ok, os.str()};
}

// One task ramps 0 -> 1 over 20 evaluations; nine others sit at fixed rates
// observed through 32-episode binomial estimates.
Outcome c2() {
    const std::size_t n = 10, ramp = 20, tail = 30, total = ramp + tail + 30;
    CurriculumConfig cfg;
    cfg.ema_beta = 0.1;
    CurriculumState cs(cfg);
    std::vector<TaskId> ids;
    for (std::size_t i = 0; i < n; ++i) {
        ids.emplace_back("task " + std::to_string(i));
        cs.add_task(ids.back(), 0.0);
    }
    Rng rng = make_stream(2, 0);
    std::size_t streak = 0, best = 0;
    double worst_tail = 0.0;
    for (std::size_t r = 1; r <= total; ++r) {
        std::unordered_map<TaskId, double> ev;
        for (std::size_t i = 0; i < n; ++i) {
            const double p = i == 0 ? std::min(1.0, static_cast<double>(r) / ramp) : 0.1 + 0.05 * i;
            std::binomial_distribution<int> draw(32, p);
            ev[ids[i]] = draw(rng) / 32.0;
        }
        cs = record_evaluation(std::move(cs), ev);
        const auto d = weights_from_lp(cs);
        if (r <= ramp) {
            streak = d.argmax() == 0 ? streak + 1 : 0;
            best = std::max(best, streak);
        }
        if (r >= ramp + tail) worst_tail = std::max(worst_tail, d.weights[0] * n);
    }
    std::ostringstream os;
    os << "argmax streak " << best << "/" << ramp << ", max weight/uniform after +" << tail << " = " << worst_tail;
    return {best >= 10 && worst_tail <= kDecayBand, os.str()};
}

// Boring iff the task carries a repeat count above one.
class RepeatRuleMoi : public InterestModel {
public:
    std::vector<InterestVerdict> predict(const MoiQuery& q) override {
        check_query(q);
        std::vector<InterestVerdict> out;
        for (const auto& c : q.candidates) {
            const auto p = crafter::parse_single(c);
            out.push_back({TaskId(c), !p || p->count <= 1, VerdictSource::fm});
        }
        return out;
    }
};

class CoinMoi : public InterestModel {
public:
    explicit CoinMoi(std::uint64_t seed) : rng_(make_stream(seed, 5)) {}
    std::vector<InterestVerdict> predict(const MoiQuery& q) override {
        std::vector<InterestVerdict> out;
        for (const auto& c : q.candidates) out.push_back({TaskId(c), bernoulli(rng_, 0.5), VerdictSource::fm});
        return out;
    }

private:
    Rng rng_;
};

Outcome c3() {
    RepeatRuleMoi m;
    const std::vector<std::pair<TaskId, double>> in = {
        {TaskId("collect wood"), 0.9}, {TaskId("collect 2 wood"), 0.8}, {TaskId("place table"), 0.3}};
    const auto r = partition(in, m);
    bool ok = r.interesting == std::vector<TaskId>{TaskId("collect wood"), TaskId("place table")} &&
              r.boring == std::vector<TaskId>{TaskId("collect 2 wood")};
    Rng rng = make_stream(3, 0);
    std::size_t bad = 0;
    for (std::uint64_t s = 0; s < 1000; ++s) {
        const std::size_t k = 1 + uniform_index(rng, 30);
        std::vector<std::pair<TaskId, double>> q;
        for (std::size_t i = 0; i < k; ++i) q.emplace_back(TaskId("t" + std::to_string(i)), uniform01(rng));
        CoinMoi coin(s);
        const auto p = partition(q, coin);
        std::set<TaskId> a(p.interesting.begin(), p.interesting.end()), b(p.boring.begin(), p.boring.end());
        std::set<TaskId> all = a;
        all.insert(b.begin(), b.end());
        if (a.size() != p.interesting.size() || b.size() != p.boring.size() || a.size() + b.size() != k ||
            all.size() != k)
            ++bad;
    }
    return {ok && bad == 0, "hand trace " + std::string(ok ? "ok" : "wrong") + ", " + std::to_string(bad) +
                                "/1000 random partitions malformed"};
}

Outcome c4() {
    using namespace dsl;
    std::ifstream in(std::string(OMNI_DATA_DIR) + "/listings/kitchen_tasks.txt");
    std::vector<std::string> listings;
    for (std::string l; std::getline(in, l);)
        if (!l.empty() && l[0] != '#') listings.push_back(l);
    if (listings.empty()) return {false, "no listings found"};
    std::size_t failures = 0;
    for (const auto& text : listings) {
        try {
            const std::string c = serialize_task(parse_task(text));
            if (serialize_task(parse_task(c)) != c) ++failures;
        } catch (const std::exception&) {
            ++failures;
        }
    }
    // the apple listing is the first entry
    const auto apple = parse_task(listings.front());
    WorldSnapshot up, down;
    up.set("Apple", Attribute::isPickedUp, true);
    down.set("Apple", Attribute::isPickedUp, false);
    const std::vector<WorldSnapshot> snaps = {up, down};
    std::vector<std::size_t> perm = {0, 1};
    std::size_t completed = 0;
    bool ordered_completes = false;
    do {
        TaskProgress p;
        for (auto k : perm) p = advance_progress(p, apple, snaps[k]);
        if (p.complete(apple)) {
            ++completed;
            if (perm == std::vector<std::size_t>{0, 1}) ordered_completes = true;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    std::ostringstream os;
    os << listings.size() << " listings, " << failures << " round-trip failures, apple completes on " << completed
       << " ordering(s)";
    return {failures == 0 && completed == 1 && ordered_completes, os.str()};
}

Outcome c5() {
    using namespace dsl;
    const auto& aff = kitchen_affordances();
    Rng rng = make_stream(5, 0);
    std::size_t bad = 0, lmin = 99, lmax = 0;
    for (int i = 0; i < 1000; ++i) {
        const auto t = random_task(rng, aff);
        if (!achievable(t, aff)) ++bad;
        lmin = std::min(lmin, t.states.size());
        lmax = std::max(lmax, t.states.size());
        try {
            validate(t);
        } catch (const std::exception&) {
            ++bad;
        }
    }
    int calls = 0;
    DrawFn forced = [&](Rng& r) {
        if (calls++ == 0) return RequirementDraw{"Fridge", {Attribute::isPickedUp, true}};
        return draw_requirement(r, aff);
    };
    RandomTaskOptions one;
    one.max_states = 1;
    one.max_objects_per_state = 1;
    one.max_attributes_per_object = 1;
    GenerationStats st;
    const auto t = random_task(rng, aff, one, forced, &st);
    const auto& o = t.states[0].objects[0];
    const bool resampled = st.rejections >= 1 && achievable(t, aff) &&
                           !(o.object == "Fridge" && o.requirements[0].attribute == Attribute::isPickedUp);
    std::ostringstream os;
    os << bad << " invalid of 1000, lengths " << lmin << ".." << lmax << ", forced draw rejections "
       << st.rejections;
    return {bad == 0 && lmin >= 1 && lmax <= 10 && resampled && !requirement_achievable("Fridge", {Attribute::isPickedUp, true}, aff),
            os.str()};
}

Outcome c6() {
    struct Want {
        const char* name;
        std::size_t i, b, e;
    };
    bool ok = true;
    std::ostringstream os;
    for (const auto& w : {Want{"crafter-repeats", 15, 90, 1023}, Want{"crafter-compounds", 15, 195, 1023},
                          Want{"crafter-synonyms", 90, 540, 1023}}) {
        const auto c = world::census(world::synth_preset(w.name));
        ok = ok && c.interesting == w.i && c.boring == w.b && c.extreme == w.e;
        os << w.name << " " << c.interesting << "/" << c.boring << "/" << c.extreme << "  ";
    }
    return {ok, os.str()};
}

harness::ExperimentConfig c7_config(harness::Condition c, std::size_t stride) {
    harness::ExperimentConfig cfg;
    cfg.condition = c;
    cfg.preset = "crafter-repeats";
    cfg.rounds = 200;
    cfg.batch_size = 32;
    cfg.seeds = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
    cfg.task_record_stride = stride;
    return cfg;
}

harness::ExperimentRecord c7_run(std::size_t stride) {
    harness::ExperimentRecord all;
    for (auto c : {harness::Condition::uniform, harness::Condition::lp, harness::Condition::omni,
                   harness::Condition::oracle}) {
        auto r = harness::run_experiment(c7_config(c, stride));
        all.tasks.insert(all.tasks.end(), r.tasks.begin(), r.tasks.end());
        all.aggregates.insert(all.aggregates.end(), r.aggregates.begin(), r.aggregates.end());
        all.failures.insert(all.failures.end(), r.failures.begin(), r.failures.end());
        all.backend_calls += r.backend_calls;
    }
    return all;
}

Outcome c7() {
    const auto rec = c7_run(0);
    if (!rec.failures.empty()) return {false, "run failure: " + rec.failures.front().message};
    const auto u = rec.final_values("uniform", "learned_interesting"), l = rec.final_values("lp", "learned_interesting"),
               o = rec.final_values("omni", "learned_interesting"),
               q = rec.final_values("oracle", "learned_interesting");
    const double mu = stats::median(u), ml = stats::median(l), mo = stats::median(o), mq = stats::median(q);
    const double p_ol = stats::mann_whitney_u(o, l).p, p_lu = stats::mann_whitney_u(l, u).p;
    std::ostringstream os;
    os << "medians uniform " << mu << " lp " << ml << " omni " << mo << " oracle " << mq << "; p(omni,lp) " << p_ol
       << " p(lp,uniform) " << p_lu;
    return {mo > ml && ml > mu && p_ol < kSignificance && p_lu < kSignificance && std::abs(mo - mq) <= kOracleGap,
            os.str()};
}

Outcome c8() {
    struct Curves {
        std::vector<double> all, roots;
    };
    auto run = [](bool normalize) {
        harness::ExperimentConfig cfg;
        cfg.condition = harness::Condition::lp;
        cfg.preset = "random-floor";
        cfg.rounds = 200;
        cfg.batch_size = 8;
        cfg.task_record_stride = 1;
        cfg.seeds = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
        cfg.curriculum.normalize_to_random = normalize;
        const auto rec = harness::run_experiment(cfg);
        // roots are the tasks a random policy already solves sometimes
        std::map<std::pair<std::uint64_t, std::size_t>, double> learned_roots;
        for (const auto& r : rec.tasks)
            if (r.task.rfind("root ", 0) == 0 && r.task.find("child") == std::string::npos &&
                r.success >= cfg.curriculum.alpha)
                learned_roots[{r.seed, r.round}] += 1;
        std::map<std::size_t, std::vector<double>> all, roots;
        for (const auto& a : rec.aggregates) {
            all[a.round].push_back(static_cast<double>(a.learned));
            roots[a.round].push_back(learned_roots[{a.seed, a.round}]);
        }
        Curves c;
        for (auto& [k, v] : all) c.all.push_back(stats::median(v));
        for (auto& [k, v] : roots) c.roots.push_back(stats::median(v));
        return c;
    };
    const auto on = run(true), off = run(false);
    auto first = [](const std::vector<double>& c, double k) {
        for (std::size_t i = 0; i < c.size(); ++i)
            if (c[i] >= k) return i + 1;
        return c.size() + 1;  // never
    };
    const double k_all = off.all.back(), k_roots = off.roots.back();
    const auto a_on = first(on.all, k_all), a_off = first(off.all, k_all);
    const auto r_on = first(on.roots, k_roots), r_off = first(off.roots, k_roots);
    std::ostringstream os;
    os << "learned " << k_all << ": round " << a_on << " vs " << a_off << "; roots " << k_roots << ": round " << r_on
       << " vs " << r_off;
    return {a_on <= a_off && r_on < r_off, os.str()};
}

Outcome c9() {
    std::map<std::string, std::vector<double>> res;
    for (auto c : {harness::Condition::uniform, harness::Condition::lp, harness::Condition::omni}) {
        harness::ExperimentConfig cfg;
        cfg.world = harness::WorldKind::chaincraft;
        cfg.preset = "infinite-kitchen";
        cfg.condition = c;
        cfg.rounds = 100;
        cfg.batch_size = 8;
        cfg.curriculum.eval_frequency_updates = 5;
        cfg.curriculum.eval_episodes = 8;
        cfg.curriculum.random_episodes = 32;
        cfg.curriculum.alpha = 0.6;
        cfg.seeds = {0, 1, 2, 3, 4};
        cfg.task_record_stride = 0;
        const auto rec = harness::run_experiment(cfg);
        if (!rec.failures.empty()) return {false, "run failure: " + rec.failures.front().message};
        res[harness::to_string(c)] = rec.final_values(harness::to_string(c), "learned_count");
    }
    const auto &u = res["uniform"], &l = res["lp"], &o = res["omni"];
    const double p_ol = stats::mann_whitney_u(o, l).p, p_lu = stats::mann_whitney_u(l, u).p;
    std::ostringstream os;
    os << "learned uniform [" << join(u) << "] lp [" << join(l) << "] omni [" << join(o) << "]; p(omni,lp) " << p_ol
       << " p(lp,uniform) " << p_lu;
    const bool ok = stats::median(o) > stats::median(l) && stats::median(l) > stats::median(u) &&
                    p_ol < kSignificance && p_lu < kSignificance;
    return {ok, os.str()};
}

// Two-sided exact p by listing every split of the pooled ranks.
double enumerated_p(const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> pool = a;
    pool.insert(pool.end(), b.begin(), b.end());
    const std::size_t n = pool.size(), na = a.size();
    auto u_of = [&](const std::vector<bool>& pick) {
        double u = 0;
        for (std::size_t i = 0; i < n; ++i)
            if (pick[i])
                for (std::size_t j = 0; j < n; ++j)
                    if (!pick[j]) u += pool[i] > pool[j] ? 1.0 : pool[i] == pool[j] ? 0.5 : 0.0;
        return u;
    };
    std::vector<bool> obs(n, false);
    std::fill(obs.begin(), obs.begin() + static_cast<long>(na), true);
    const double mean = na * (n - na) / 2.0, dev = std::abs(u_of(obs) - mean);
    std::vector<bool> pick(n, false);
    std::fill(pick.end() - static_cast<long>(na), pick.end(), true);
    std::size_t hit = 0, total = 0;
    do {
        ++total;
        if (std::abs(u_of(pick) - mean) >= dev - 1e-12) ++hit;
    } while (std::next_permutation(pick.begin(), pick.end()));
    return static_cast<double>(hit) / static_cast<double>(total);
}

Outcome c10() {
    const std::vector<double> a = {1, 2, 3}, b = {4, 5, 6};
    const double p = stats::mann_whitney_u(a, b).p, e = enumerated_p(a, b);
    Rng rng = make_stream(10, 0);
    const auto ci = stats::bootstrap_ci(std::vector<double>(20, 4.25), rng);
    std::ostringstream os;
    os << "p " << p << " enumerated " << e << "; constant CI [" << ci.low << ", " << ci.high << "]";
    return {std::abs(p - 0.1) <= kExact && std::abs(e - 0.1) <= kExact && ci.low == 4.25 && ci.high == 4.25 &&
                ci.median == 4.25,
            os.str()};
}

Outcome c11() {
    const auto x = c7_run(20), y = c7_run(20);
    const bool same_tasks = harness::tasks_csv(x) == harness::tasks_csv(y);
    const bool same_aggs = harness::aggregates_csv(x) == harness::aggregates_csv(y);

    auto backend = std::make_shared<fm::ScriptedBackend>();
    backend->add(fm::Matcher::substring("collect"), std::string("collect wood: True"));
    fm::FmClient client(backend);
    const fm::CompletionRequest req{"system", "Is collect wood interesting?", "mock", 0.0, 64};
    const auto first = client.complete(req);
    const auto before = backend->calls();
    const auto second = client.complete(req);
    const bool cached = backend->calls() == before && first == second;

    std::ostringstream os;
    os << "tasks.csv " << (same_tasks ? "identical" : "differs") << " (" << harness::tasks_csv(x).size()
       << " bytes), aggregates.csv " << (same_aggs ? "identical" : "differs") << ", second request backend calls "
       << backend->calls() - before;
    return {same_tasks && same_aggs && !x.tasks.empty() && cached, os.str()};
}

std::set<int> parse_list(const std::string& s) {
    std::set<int> out;
    std::stringstream ss(s);
    for (std::string tok; std::getline(ss, tok, ',');)
        if (!tok.empty()) out.insert(std::stoi(tok));
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"OMNI acceptance criteria"};
    std::string only, known;
    app.add_option("--only", only, "comma-separated criteria to run");
    app.add_option("--known-failing", known, "criteria expected to fail");
    CLI11_PARSE(app, argc, argv);

    const std::vector<std::function<Outcome()>> criteria = {c1, c2, c3, c4, c5, c6, c7, c8, c9, c10, c11};
    std::set<int> selected;
    try {
        selected = parse_list(only);
    } catch (const std::exception&) {
        std::cerr << "bad --only list\n";
        return 1;
    }
    std::set<int> expected_fail, failed;
    try {
        expected_fail = parse_list(known);
    } catch (const std::exception&) {
        std::cerr << "bad --known-failing list\n";
        return 1;
    }
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const int id = static_cast<int>(i) + 1;
        if (!selected.empty() && !selected.count(id)) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i]();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (!o.pass) failed.insert(id);
        std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << id << " (" << std::fixed << std::setprecision(1)
                  << secs << "s) " << std::defaultfloat << std::setprecision(6) << o.detail
                  << (!o.pass && expected_fail.count(id) ? " [known failing]" : "") << std::endl;
    }
    std::set<int> expected_here;
    for (int id : expected_fail)
        if (selected.empty() || selected.count(id)) expected_here.insert(id);
    return failed == expected_here ? 0 : 3;
}
