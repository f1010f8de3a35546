#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <queue>
#include <set>

#include "omni/world.hpp"
#include "omni/world_io.hpp"

using namespace omni;
using namespace omni::world;

namespace {

SynthSpec chain3() {
    SynthSpec s;
    s.add("a", {}, 0.1, 0.01, 0.0, Category::interesting);
    s.add("b", {0}, 0.1, 0.01, 0.05, Category::interesting);
    s.add("c", {1}, 0.1, 0.01, 0.0, Category::interesting);
    return s;
}

SynthSpec random_dag(Rng& rng, std::size_t n) {
    SynthSpec s;
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<std::size_t> pre;
        for (std::size_t j = 0; j < i; ++j)
            if (bernoulli(rng, 0.2)) pre.push_back(j);
        s.add("t" + std::to_string(i), pre, uniform01(rng) * 0.3, uniform01(rng) * 0.2, uniform01(rng) * 0.1,
              Category::interesting);
    }
    return s;
}

// Fewest actions from an empty inventory until `item` is held, by breadth-first search.
int shortest_plan(const ChainCraftSpec& s, const std::string& item) {
    const auto target = s.item_index(item);
    std::map<std::vector<int>, int> dist;
    std::queue<std::vector<int>> q;
    std::vector<int> start(s.items.size(), 0);
    dist[start] = 0;
    q.push(start);
    auto holds = [&](const std::vector<int>& inv, const std::vector<std::string>& tools) {
        for (const auto& t : tools)
            if (inv[s.item_index(t)] <= 0) return false;
        return true;
    };
    while (!q.empty()) {
        auto inv = q.front();
        q.pop();
        const int d = dist[inv];
        if (inv[target] > 0) return d;
        std::vector<std::vector<int>> next;
        for (const auto& g : s.gathers)
            if (holds(inv, g.tools)) {
                auto n = inv;
                ++n[s.item_index(g.item)];
                next.push_back(n);
            }
        for (const auto& r : s.recipes) {
            bool ok = holds(inv, r.tools);
            for (const auto& [k, c] : r.inputs) ok = ok && inv[s.item_index(k)] >= c;
            if (!ok) continue;
            auto n = inv;
            for (const auto& [k, c] : r.inputs) n[s.item_index(k)] -= c;
            ++n[s.item_index(r.output)];
            next.push_back(n);
        }
        for (auto& n : next) {
            if (*std::max_element(n.begin(), n.end()) > 6) continue;
            if (dist.emplace(n, d + 1).second) q.push(n);
        }
    }
    return -1;
}

std::size_t action_of(const ChainCraftSpec& s, const std::string& name) {
    for (std::size_t a = 0; a < s.num_actions(); ++a)
        if (s.action_name(a) == name) return a;
    throw std::runtime_error("no action " + name);
}

}  // namespace

// ------------------------------------------------------------ synthetic

TEST(Synth, UpdateRuleByHand) {
    SynthSpec s;
    s.add("x", {}, 0.1, 0.01, 0.0, Category::interesting);
    const auto q = synth_train(synth_init(s), std::vector<std::uint32_t>{1}, s).q[0];
    EXPECT_NEAR(q, 0.109, 1e-12);
    const auto q3 = synth_train(synth_init(s), std::vector<std::uint32_t>{3}, s).q[0];
    EXPECT_NEAR(q3, 1.0 - 0.99 * std::pow(0.9, 3), 1e-12);
}

TEST(Synth, ZeroAllocationIsIdentity) {
    auto s = chain3();
    auto st = synth_init(s);
    st.q = {0.3, 0.6, 0.9};
    EXPECT_EQ(synth_train(st, std::vector<std::uint32_t>(3, 0), s).q, st.q);
    EXPECT_THROW(synth_train(st, std::vector<std::uint32_t>(2, 0), s), PreconditionError);
    EXPECT_THROW(synth_train(st, std::map<std::string, std::uint32_t>{{"zzz", 1}}, s), PreconditionError);
}

TEST(Synth, GateBlocksUntilPrerequisiteCrossesRho) {
    auto s = chain3();
    auto st = synth_init(s);
    st = synth_train(st, std::vector<std::uint32_t>{0, 100000, 100000}, s);
    EXPECT_EQ(st.q[1], s.q0[1]);
    EXPECT_EQ(st.q[2], s.q0[2]);
    st.q[0] = 0.5;
    st = synth_train(st, std::vector<std::uint32_t>{0, 1, 0}, s);
    EXPECT_NEAR(st.q[1], 1.0 - 0.99 * (1.0 - 0.1 * 0.5), 1e-12);
}

TEST(Synth, MonotoneBoundedAndGated) {
    Rng rng(17);
    for (int trial = 0; trial < 200; ++trial) {
        auto s = random_dag(rng, 12);
        auto st = synth_init(s);
        std::vector<bool> opened(s.size(), false);
        for (int step = 0; step < 40; ++step) {
            for (std::size_t i = 0; i < s.size(); ++i) {
                double m = 1.0;
                for (auto p : s.prereqs[i]) m = std::min(m, st.q[p]);
                if (s.prereqs[i].empty() || m >= s.rho) opened[i] = true;
            }
            std::vector<std::uint32_t> alloc(s.size());
            for (auto& a : alloc) a = static_cast<std::uint32_t>(uniform_index(rng, 5));
            const auto next = synth_train(st, alloc, s);
            for (std::size_t i = 0; i < s.size(); ++i) {
                ASSERT_GE(next.q[i], st.q[i]);
                ASSERT_LE(next.q[i], 1.0);
                if (!opened[i]) {
                    ASSERT_EQ(next.q[i], s.q0[i]);
                }
            }
            st = next;
        }
    }
}

TEST(Synth, OrderIndependent) {
    Rng rng(4);
    for (int trial = 0; trial < 100; ++trial) {
        auto s = random_dag(rng, 8);
        auto st = synth_init(s);
        for (auto& q : st.q) q = uniform01(rng);
        std::vector<std::uint32_t> alloc(s.size());
        for (auto& a : alloc) a = static_cast<std::uint32_t>(uniform_index(rng, 4));

        // same world with tasks listed in reverse
        const std::size_t n = s.size();
        SynthSpec r;
        r.tasks.resize(n);
        r.prereqs.resize(n);
        r.eta.resize(n);
        r.q0.resize(n);
        r.r.resize(n);
        r.category.resize(n);
        SynthState rst{std::vector<double>(n)};
        std::vector<std::uint32_t> ralloc(n);
        for (std::size_t i = 0; i < n; ++i) {
            const auto j = n - 1 - i;
            r.tasks[j] = s.tasks[i];
            for (auto p : s.prereqs[i]) r.prereqs[j].push_back(n - 1 - p);
            r.eta[j] = s.eta[i];
            r.q0[j] = s.q0[i];
            r.r[j] = s.r[i];
            r.category[j] = s.category[i];
            rst.q[j] = st.q[i];
            ralloc[j] = alloc[i];
        }
        const auto a = synth_train(st, alloc, s);
        const auto b = synth_train(rst, ralloc, r);
        for (std::size_t i = 0; i < n; ++i) EXPECT_EQ(a.q[i], b.q[n - 1 - i]);
    }
}

TEST(Synth, EvalFloor) {
    SynthSpec s;
    s.add("x", {}, 0.1, 0.0, 0.05, Category::interesting);
    s.add("y", {}, 0.0, 0.0, 0.0, Category::extreme);
    auto st = synth_init(s);
    EXPECT_EQ(synth_eval(st, s)[0], 0.05);
    st.q[0] = 0.8;
    EXPECT_EQ(synth_eval(st, s)[0], 0.8);
    for (int i = 0; i < 50; ++i) st = synth_train(st, std::vector<std::uint32_t>{0, 1000}, s);
    EXPECT_EQ(synth_eval(st, s)[1], 0.0);
}

TEST(Synth, ValidationRejectsBadSpecs) {
    auto s = chain3();
    s.prereqs[0] = {2};
    EXPECT_THROW(s.validate(), ConfigError);
    s = chain3();
    s.eta[1] = 1.5;
    EXPECT_THROW(s.validate(), ConfigError);
    s = chain3();
    s.r.pop_back();
    EXPECT_THROW(s.validate(), ConfigError);
    EXPECT_THROW(synth_preset("nope"), ConfigError);
}

TEST(Synth, BenchmarkCensus) {
    auto c = census(crafter_repeats());
    EXPECT_EQ(c.interesting, 15u);
    EXPECT_EQ(c.boring, 90u);
    EXPECT_EQ(c.extreme, 1023u);
    c = census(crafter_compounds());
    EXPECT_EQ(c.interesting, 15u);
    EXPECT_EQ(c.boring, 195u);
    EXPECT_EQ(c.extreme, 1023u);
    c = census(crafter_synonyms());
    EXPECT_EQ(c.interesting, 90u);
    EXPECT_EQ(c.boring, 540u);
    EXPECT_EQ(c.extreme, 1023u);
    for (auto name : {"crafter-repeats", "crafter-compounds", "crafter-synonyms", "random-floor"})
        EXPECT_NO_THROW(synth_preset(name).validate()) << name;
}

TEST(Synth, RepeatTasksHangOffTheirSingleTask) {
    const auto s = crafter_repeats();
    const auto i = s.index_of("collect 2 wood");
    ASSERT_EQ(s.prereqs[i].size(), 1u);
    EXPECT_EQ(s.tasks[s.prereqs[i][0]], "collect wood");
    EXPECT_EQ(s.category[i], Category::boring);
    for (std::size_t k = 0; k < s.size(); ++k)
        for (auto p : s.prereqs[k]) EXPECT_NE(s.category[p], Category::boring) << s.tasks[k];
}

// ------------------------------------------------------------ ChainCraft

TEST(ChainCraft, GatherAndIllegalCraft) {
    const auto s = chaincraft_default();
    const auto task = hold_task("Diamond");
    Rng rng(1);
    auto e = env_reset(s, task);
    auto r = env_step(s, task, e, action_of(s, "gather Wood"), rng);
    EXPECT_EQ(r.state.inventory[s.item_index("Wood")], 1);
    EXPECT_TRUE(r.snapshot.objects.at("Wood").values.at(dsl::Attribute::visible) == dsl::Value(true));

    auto c = env_step(s, task, e, action_of(s, "craft Plank"), rng);
    EXPECT_EQ(c.state.inventory, e.inventory);
    EXPECT_FALSE(c.done);
    EXPECT_DOUBLE_EQ(c.reward, -s.step_penalty);

    auto stone = env_step(s, task, e, action_of(s, "gather Stone"), rng);
    EXPECT_EQ(stone.state.inventory[s.item_index("Stone")], 0);
    EXPECT_THROW(env_step(s, task, e, s.num_actions(), rng), PreconditionError);
}

TEST(ChainCraft, ZeroPenaltyGivesZeroReward) {
    auto s = chaincraft_default();
    s.step_penalty = 0.0;
    const auto task = hold_task("Diamond");
    Rng rng(1);
    EXPECT_EQ(env_step(s, task, env_reset(s, task), action_of(s, "craft Plank"), rng).reward, 0.0);
}

TEST(ChainCraft, ScriptedWoodPickaxeIsOptimal) {
    const auto s = chaincraft_default();
    const auto task = hold_task("WoodPickaxe");
    std::vector<std::string> plan(4, "gather Wood");
    for (int i = 0; i < 4; ++i) plan.push_back("craft Plank");
    for (auto a : {"craft Table", "craft Stick", "craft WoodPickaxe"}) plan.push_back(a);
    EXPECT_EQ(static_cast<int>(plan.size()), shortest_plan(s, "WoodPickaxe"));

    Rng rng(0);
    auto e = env_reset(s, task);
    double ret = 0.0;
    for (std::size_t i = 0; i < plan.size(); ++i) {
        auto r = env_step(s, task, e, action_of(s, plan[i]), rng);
        ret += r.reward;
        e = r.state;
        EXPECT_EQ(r.done, i + 1 == plan.size()) << plan[i];
        if (i + 1 == plan.size()) {
            EXPECT_EQ(r.reward, s.completion_reward);
        }
    }
    EXPECT_NEAR(ret, 1.0 - 10 * s.step_penalty, 1e-12);
}

TEST(ChainCraft, MultiStateTaskNeedsOrder) {
    const auto s = chaincraft_default();
    auto task = dsl::parse_task(
        R"([[obj_attributes("Plank", {"isPickedUp": True})], [obj_attributes("Wood", {"isPickedUp": True})]])");
    Rng rng(0);
    auto e = env_reset(s, task);
    EXPECT_EQ(e.horizon, 100);
    for (auto a : {"gather Wood", "craft Plank"}) e = env_step(s, task, e, action_of(s, a), rng).state;
    EXPECT_EQ(e.progress.next_index, 1u);
    auto r = env_step(s, task, e, action_of(s, "gather Wood"), rng);
    EXPECT_TRUE(r.done);
    EXPECT_EQ(r.reward, 1.0);
}

TEST(ChainCraft, ReturnBounds) {
    const auto s = chaincraft_default();
    const auto aff = chaincraft_affordances(s);
    Rng rng(9);
    for (int ep = 0; ep < 300; ++ep) {
        const auto task = dsl::random_task(rng, aff, {3, 1, 1});
        auto e = env_reset(s, task);
        double ret = 0.0;
        for (;;) {
            auto r = env_step(s, task, e, uniform_index(rng, s.num_actions()), rng, false);
            ret += r.reward;
            e = r.state;
            if (r.done) break;
        }
        EXPECT_GE(ret, -e.horizon * s.step_penalty - 1e-12);
        EXPECT_LE(ret, 1.0);
    }
}

TEST(ChainCraft, SpecValidation) {
    auto s = chaincraft_default();
    s.recipes.push_back({"Wood", {{"Plank", 1}}, {}});
    EXPECT_THROW(s.validate(), ConfigError);
    s = chaincraft_default();
    s.gathers.push_back({"Gold", {}, 1.0});
    EXPECT_THROW(s.validate(), ConfigError);
}

// ------------------------------------------------------------ learning

TEST(Learner, OneStepTaskIsLearned) {
    const auto s = chaincraft_default();
    const auto task = hold_task("Wood");
    const TaskId id = dsl::canonicalize(task);
    TabularLearner L(s);
    Rng rng(2);
    for (int i = 0; i < 500; ++i) train_episode(L, task, id, rng);
    EXPECT_GE(evaluate_policy(L, {{id, &task}}, 200, rng)[0], 0.95);
}

TEST(Learner, InfeasibleTaskStaysAtRandomRate) {
    auto s = chaincraft_default();
    std::erase_if(s.recipes, [](const Recipe& r) { return r.output == "IronPickaxe"; });
    const auto task = hold_task("Diamond");
    const TaskId id = dsl::canonicalize(task);
    Rng rng(3);
    const double t_rdn = random_policy_rate(s, task, 100, rng);
    EXPECT_EQ(t_rdn, 0.0);
    TabularLearner L(s);
    for (int i = 0; i < 300; ++i) train_episode(L, task, id, rng);
    EXPECT_LE(evaluate_policy(L, {{id, &task}}, 50, rng)[0], t_rdn + 0.05);
}

TEST(Learner, PureExplorationStillFillsTable) {
    const auto s = chaincraft_default();
    const auto task = hold_task("Table");
    const TaskId id = dsl::canonicalize(task);
    TabularLearner L(s);
    Rng rng(4);
    train_episode(L, task, id, rng, 1.0);
    EXPECT_GT(L.table_size(), 0u);
    EXPECT_THROW(TabularLearner(s, {0.5, 0.1, 1.0, 3}), ConfigError);
    EXPECT_THROW(TabularLearner(s, {0.5, 1.5, 0.9, 3}), ConfigError);
}

TEST(Learner, UntrainedMatchesRandomPolicy) {
    const auto s = chaincraft_default();
    const auto task = hold_task("Plank");
    const TaskId id = dsl::canonicalize(task);
    TabularLearner L(s);
    Rng a(5), b(6);
    const double greedy = evaluate_policy(L, {{id, &task}}, 2000, a)[0];
    const double random = random_policy_rate(s, task, 2000, b);
    EXPECT_NEAR(greedy, random, 0.05);
    EXPECT_GT(random, 0.1);
}

TEST(Learner, TriviallySatisfiedAndDeterministic) {
    const auto s = chaincraft_default();
    const auto trivial = dsl::parse_task(R"([[obj_attributes("Diamond", {"isPickedUp": False})]])");
    const auto hard = hold_task("StonePickaxe");
    const TaskId ti = dsl::canonicalize(trivial), hi = dsl::canonicalize(hard);
    TabularLearner L(s);
    Rng train(8);
    for (int i = 0; i < 100; ++i) train_episode(L, hard, hi, train);
    Rng a(7), b(7);
    const auto x = evaluate_policy(L, {{ti, &trivial}, {hi, &hard}}, 20, a);
    EXPECT_EQ(x[0], 1.0);
    EXPECT_EQ(x, evaluate_policy(L, {{ti, &trivial}, {hi, &hard}}, 20, b));
    EXPECT_THROW(evaluate_policy(L, {{ti, &trivial}}, 0, a), PreconditionError);
}

// ------------------------------------------------------------ files

TEST(WorldFiles, ShippedChainCraftEqualsDefault) {
    const auto f = parse_chaincraft(read_file(std::string(OMNI_DATA_DIR) + "/worlds/chaincraft.ini"));
    const auto d = chaincraft_default();
    EXPECT_EQ(f.items, d.items);
    ASSERT_EQ(f.gathers.size(), d.gathers.size());
    for (std::size_t i = 0; i < f.gathers.size(); ++i) {
        EXPECT_EQ(f.gathers[i].item, d.gathers[i].item);
        EXPECT_EQ(f.gathers[i].tools, d.gathers[i].tools);
        EXPECT_EQ(f.gathers[i].prob, d.gathers[i].prob);
    }
    ASSERT_EQ(f.recipes.size(), d.recipes.size());
    for (std::size_t i = 0; i < f.recipes.size(); ++i) {
        EXPECT_EQ(f.recipes[i].output, d.recipes[i].output);
        EXPECT_EQ(f.recipes[i].inputs, d.recipes[i].inputs);
        EXPECT_EQ(f.recipes[i].tools, d.recipes[i].tools);
    }
    EXPECT_EQ(f.horizon_per_state, d.horizon_per_state);
    EXPECT_EQ(f.step_penalty, d.step_penalty);
}

TEST(WorldFiles, ChainCraftErrors) {
    EXPECT_THROW(parse_chaincraft("[gather Wood]\nprob = 1\n"), ConfigError);
    EXPECT_THROW(parse_chaincraft("[chaincraft]\nitems = A\n[teleport A]\nx = 1\n"), ConfigError);
    EXPECT_THROW(parse_chaincraft("[chaincraft]\nitems = A\n[recipe B]\ninputs = A:1\n"), ConfigError);
    EXPECT_THROW(parse_chaincraft("[chaincraft\n"), ConfigError);
}

TEST(WorldFiles, SyntheticCsv) {
    const auto s = parse_synth_spec(read_file(std::string(OMNI_DATA_DIR) + "/worlds/tiny_tree.csv"));
    ASSERT_EQ(s.size(), 5u);
    EXPECT_EQ(s.prereqs[s.index_of("make wood pickaxe")].size(), 2u);
    EXPECT_EQ(s.category[4], Category::extreme);
    const auto again = parse_synth_spec(synth_spec_csv(s));
    EXPECT_EQ(again.tasks, s.tasks);
    EXPECT_EQ(again.prereqs, s.prereqs);
    EXPECT_EQ(again.eta, s.eta);
    EXPECT_EQ(again.r, s.r);

    const auto big = crafter_repeats();
    const auto rt = parse_synth_spec(synth_spec_csv(big));
    EXPECT_EQ(rt.tasks, big.tasks);
    EXPECT_EQ(rt.q0, big.q0);
    EXPECT_EQ(rt.category, big.category);

    EXPECT_THROW(parse_synth_spec("name,prereqs,eta,q0,r,category\nb,a,0.1,0,0,interesting\na,,0.1,0,0,interesting\n"),
                 ConfigError);
    EXPECT_THROW(parse_synth_spec("name,prereqs,eta,q0,r,category\na,,0.1,0,0,weird\n"), ConfigError);
    EXPECT_THROW(parse_synth_spec("name,prereqs,eta,q0,r,category\na,,zero,0,0,boring\n"), ConfigError);
}
