#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "omni/interestingness.hpp"
#include "omni/mock_fm.hpp"

using namespace omni;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
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

class ConstMoi : public InterestModel {
public:
    explicit ConstMoi(bool v) : v_(v) {}
    std::vector<InterestVerdict> predict(const MoiQuery& q) override {
        ++calls;
        std::vector<InterestVerdict> out;
        for (const auto& c : q.candidates) out.push_back({TaskId(c), v_, VerdictSource::oracle});
        return out;
    }
    int calls = 0;

private:
    bool v_;
};

// Verdicts from a seeded hash of (query size, candidate): adversarial but
// reproducible.
class RandomMoi : public InterestModel {
public:
    explicit RandomMoi(std::uint64_t seed) : seed_(seed) {}
    std::vector<InterestVerdict> predict(const MoiQuery& q) override {
        std::vector<InterestVerdict> out;
        for (const auto& c : q.candidates) {
            Rng r = make_stream(seed_ ^ std::hash<std::string>{}(c), q.done_well.size());
            out.push_back({TaskId(c), bernoulli(r, 0.5), VerdictSource::fm});
        }
        return out;
    }

private:
    std::uint64_t seed_;
};

class ThrowingMoi : public InterestModel {
public:
    std::vector<InterestVerdict> predict(const MoiQuery&) override { throw TransportError("offline"); }
};

std::vector<std::pair<TaskId, double>> rates(std::initializer_list<std::pair<const char*, double>> xs) {
    std::vector<std::pair<TaskId, double>> out;
    for (auto [k, v] : xs) out.emplace_back(TaskId(k), v);
    return out;
}

}  // namespace

TEST(Oracle, MembershipOnly) {
    OracleMoi m(std::set<std::string>{"collect wood"});
    const auto v = m.predict({{}, {"collect wood", "collect 2 wood"}});
    ASSERT_EQ(v.size(), 2u);
    EXPECT_TRUE(v[0].interesting);
    EXPECT_FALSE(v[1].interesting);
    EXPECT_EQ(v[0].source, VerdictSource::oracle);
    const auto w = m.predict({{"place table"}, {"collect wood", "collect 2 wood"}});
    EXPECT_EQ(w[0].interesting, v[0].interesting);
    EXPECT_EQ(w[1].interesting, v[1].interesting);
    EXPECT_THROW(m.predict({{"x"}, {}}), PreconditionError);
    EXPECT_THROW(m.predict({{"x"}, {"x"}}), PreconditionError);
}

TEST(Oracle, ShippedSets) {
    EXPECT_EQ(oracles::crafter_set().size(), 15u);
    EXPECT_EQ(oracles::crafter_synonym_set().size(), 90u);
    EXPECT_EQ(load_task_list(std::string(OMNI_DATA_DIR) + "/oracles/crafter_interesting.txt"), oracles::crafter_set());
    auto b = oracles::babyai();
    EXPECT_TRUE(b->interesting("go to some object"));
    EXPECT_FALSE(b->interesting("go to some object, then open some door"));
}

TEST(MockFm, RepeatRule) {
    RepeatRuleMoi m;
    const auto v = m.predict({{}, {"make 3 stone sword"}});
    EXPECT_FALSE(v[0].interesting);

    auto client = std::make_shared<fm::FmClient>(mock::crafter_backend());
    FmInterestModel fmm(client, templates::crafter());
    const auto w = fmm.predict({{"make stone sword"}, {"make 3 stone sword", "collect iron"}});
    EXPECT_FALSE(w[0].interesting);
    EXPECT_TRUE(w[1].interesting);
    EXPECT_EQ(w[0].source, VerdictSource::fm);
}

TEST(MockFm, ExtremesAndUnknownsAreBoring) {
    fm::CompletionRequest r;
    r.user_text = "You can do these tasks well: collect wood.\nSuggest whether the given tasks are interesting: "
                  "extreme task 0001, fly to moon, place table.";
    EXPECT_EQ(mock::crafter_moi_answer(r), "extreme task 0001: False\nfly to moon: False\nplace table: True\n");
}

TEST(Partition, HandTrace) {
    RepeatRuleMoi m;
    const auto r = partition(rates({{"collect wood", 0.9}, {"collect 2 wood", 0.8}, {"place table", 0.3}}), m);
    EXPECT_EQ(r.interesting, (std::vector<TaskId>{TaskId("collect wood"), TaskId("place table")}));
    EXPECT_EQ(r.boring, (std::vector<TaskId>{TaskId("collect 2 wood")}));
    EXPECT_EQ(r.rounds, 2u);

    auto client = std::make_shared<fm::FmClient>(mock::crafter_backend());
    FmInterestModel fmm(client, templates::crafter());
    const auto s = partition(rates({{"collect wood", 0.9}, {"collect 2 wood", 0.8}, {"place table", 0.3}}), fmm);
    EXPECT_EQ(s.interesting, r.interesting);
    EXPECT_EQ(s.boring, r.boring);
}

TEST(Partition, SingleTaskAndWorstCase) {
    ConstMoi yes(true);
    const auto one = partition(rates({{"a", 0.5}}), yes);
    EXPECT_EQ(one.interesting.size(), 1u);
    EXPECT_TRUE(one.boring.empty());
    EXPECT_EQ(one.rounds, 1u);
    EXPECT_EQ(yes.calls, 0);

    const auto all = partition(rates({{"a", 0.5}, {"b", 0.4}, {"c", 0.3}, {"d", 0.2}}), yes);
    EXPECT_EQ(all.interesting.size(), 4u);
    EXPECT_EQ(all.rounds, 4u);
}

TEST(Partition, TiesBreakByName) {
    ConstMoi yes(true);
    const auto r = partition(rates({{"b", 0.5}, {"a", 0.5}, {"c", 0.9}}), yes);
    EXPECT_EQ(r.interesting, (std::vector<TaskId>{TaskId("c"), TaskId("a"), TaskId("b")}));
}

TEST(Partition, DisjointAndCoveringForRandomMois) {
    Rng rng = make_stream(77, 0);
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        const std::size_t n = 1 + uniform_index(rng, 25);
        std::vector<std::pair<TaskId, double>> in;
        for (std::size_t i = 0; i < n; ++i) in.emplace_back(TaskId("t" + std::to_string(i)), uniform01(rng));
        RandomMoi m(seed);
        const auto r = partition(in, m);
        std::set<TaskId> a(r.interesting.begin(), r.interesting.end()), b(r.boring.begin(), r.boring.end());
        ASSERT_EQ(a.size(), r.interesting.size());
        ASSERT_EQ(b.size(), r.boring.size());
        for (const auto& t : a) ASSERT_FALSE(b.count(t));
        ASSERT_EQ(a.size() + b.size(), n);
        ASSERT_LE(r.rounds, n);
        ASSERT_EQ(r.rounds, a.size());
    }
}

TEST(Partition, MoiErrorsPropagate) {
    ThrowingMoi m;
    EXPECT_THROW(partition(rates({{"a", 0.5}, {"b", 0.4}}), m), TransportError);
    ConstMoi yes(true);
    EXPECT_THROW(partition(rates({{"a", 0.5}, {"a", 0.4}}), yes), PreconditionError);
}

TEST(Prompt, CrafterTemplate) {
    const auto p = build_prompt({{"collect wood"}, {"collect drink"}}, templates::crafter());
    EXPECT_NE(p.user.find("You can do these tasks well: collect wood."), std::string::npos);
    EXPECT_NE(p.user.find("Suggest whether the given tasks are interesting: collect drink."), std::string::npos);
    EXPECT_EQ(p, build_prompt({{"collect wood"}, {"collect drink"}}, templates::crafter()));
    EXPECT_THROW(build_prompt({{"collect wood"}, {}}, templates::crafter()), TemplateError);
    EXPECT_THROW(build_prompt({{"a"}, {"b"}}, PromptTemplate::parse("no placeholders")), TemplateError);
}

TEST(Prompt, BabyAiTemplateQuotes) {
    const auto p = build_prompt({{"go to some object"}, {"open some door"}}, templates::babyai());
    EXPECT_NE(p.user.find("Tasks the agent currently do well: \"go to some object\""), std::string::npos);
    EXPECT_FALSE(p.system.empty());
}

TEST(Prompt, DataFilesMatchEmbeddedCopies) {
    const std::string dir = std::string(OMNI_DATA_DIR) + "/prompts/";
    EXPECT_EQ(slurp(dir + "crafter_moi.txt"), prompt_data::crafter_moi);
    EXPECT_EQ(slurp(dir + "crafter_moi_synonyms.txt"), prompt_data::crafter_moi_synonyms);
    EXPECT_EQ(slurp(dir + "babyai_moi.txt"), prompt_data::babyai_moi);
    EXPECT_EQ(slurp(dir + "kitchen_propose.txt"), prompt_data::kitchen_propose);
    EXPECT_EQ(slurp(dir + "kitchen_translate.txt"), prompt_data::kitchen_translate);
    const auto loaded = PromptTemplate::load(dir + "babyai_moi.txt");
    EXPECT_EQ(loaded.user, templates::babyai().user);
}

TEST(Verdicts, CrafterFormat) {
    const auto v = parse_verdicts("collect drink: True\ncollect wood: False", {"collect drink", "collect wood"});
    ASSERT_EQ(v.verdicts.size(), 2u);
    EXPECT_EQ(v.verdicts[0], std::make_pair(std::string("collect drink"), true));
    EXPECT_EQ(v.verdicts[1], std::make_pair(std::string("collect wood"), false));
    EXPECT_TRUE(v.unanswered.empty());
}

TEST(Verdicts, PredictionsBlock) {
    const std::string text =
        "Reasoning: opening doors is new.\nPredictions:\n\"pick up some object\": False\n"
        "\"go to some object, then open some door\": True\n";
    const auto v = parse_verdicts(text, {"pick up some object", "go to some object, then open some door"});
    ASSERT_EQ(v.verdicts.size(), 2u);
    EXPECT_FALSE(v.verdicts[0].second);
    EXPECT_TRUE(v.verdicts[1].second);
}

TEST(Verdicts, MissingAndGarbage) {
    const auto v = parse_verdicts("collect drink: True", {"collect drink", "collect wood"});
    EXPECT_EQ(v.unanswered, std::vector<std::string>{"collect wood"});
    EXPECT_THROW(parse_verdicts("I am not sure.", {"collect drink"}), ParseError);
}

TEST(Verdicts, RenderParseIdentity) {
    Rng rng = make_stream(4, 4);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<std::pair<std::string, bool>> v;
        std::vector<std::string> c;
        const std::size_t n = 1 + uniform_index(rng, 10);
        for (std::size_t i = 0; i < n; ++i) {
            c.push_back("task " + std::to_string(i) + (bernoulli(rng, 0.5) ? ", then go" : ""));
            v.emplace_back(c.back(), bernoulli(rng, 0.5));
        }
        for (bool quoted : {false, true}) {
            const auto p = parse_verdicts(render_verdicts(v, quoted), c);
            EXPECT_EQ(p.verdicts, v);
            EXPECT_TRUE(p.unanswered.empty());
        }
    }
}

TEST(FmMoi, RequeriesOnlyUnanswered) {
    auto b = std::make_shared<fm::ScriptedBackend>();
    std::vector<std::string> prompts;
    b->add(fm::Matcher::substring("Suggest"), fm::Responder([&](const fm::CompletionRequest& r) {
               prompts.push_back(r.user_text);
               const auto last = r.user_text.substr(r.user_text.rfind("interesting: "));
               // answer only the first candidate of each request
               const auto first = last.substr(13, last.find_first_of(",.", 13) - 13);
               return first + ": True\n";
           }));
    auto client = std::make_shared<fm::FmClient>(b);
    FmInterestModel m(client, templates::crafter());
    const auto v = m.predict({{"collect wood"}, {"place table", "collect stone"}});
    EXPECT_TRUE(v[0].interesting);
    EXPECT_TRUE(v[1].interesting);
    ASSERT_EQ(prompts.size(), 2u);
    EXPECT_NE(prompts[1].find("interesting: collect stone."), std::string::npos);
}

TEST(FmMoi, RegeneratesThenGivesUp) {
    auto b = std::make_shared<fm::ScriptedBackend>();
    int n = 0;
    b->add(fm::Matcher::substring("Suggest"), fm::Responder([&](const fm::CompletionRequest&) {
               return ++n < 3 ? std::string("hmm") : std::string("place table: False\n");
           }));
    FmInterestModel m(std::make_shared<fm::FmClient>(b), templates::crafter());
    EXPECT_FALSE(m.predict({{"collect wood"}, {"place table"}})[0].interesting);
    EXPECT_EQ(n, 3);

    auto bad = std::make_shared<fm::ScriptedBackend>();
    bad->add(fm::Matcher::substring("Suggest"), std::string("no idea"));
    FmInterestModel g(std::make_shared<fm::FmClient>(bad), templates::crafter());
    EXPECT_THROW(g.predict({{"collect wood"}, {"place table"}}), ProtocolError);
    EXPECT_EQ(bad->calls(), 3u);
}

TEST(FmMoi, ChunksLargeQueriesAndCaches) {
    auto b = mock::crafter_backend();
    auto client = std::make_shared<fm::FmClient>(b);
    FmInterestModel m(client, templates::crafter(), FmMoiOptions{4, 3, "mock", 2048});
    std::vector<std::string> c;
    for (int k = 2; k <= 10; ++k) c.push_back("collect " + std::to_string(k) + " wood");
    c.push_back("place table");
    const auto v = m.predict({{"collect wood"}, c});
    EXPECT_EQ(b->calls(), 3u);
    for (std::size_t i = 0; i + 1 < v.size(); ++i) EXPECT_FALSE(v[i].interesting);
    EXPECT_TRUE(v.back().interesting);
    const auto again = m.predict({{"collect wood"}, c});
    EXPECT_EQ(b->calls(), 3u);
    EXPECT_EQ(again[0].source, VerdictSource::cached);
}

TEST(Embedding, Clusters) {
    HashedNgramEmbedder e;
    const auto l = embed_and_cluster({"collect wood", "collect wood"}, e, 0.01, 2);
    EXPECT_EQ(l[0], l[1]);
    const auto s = embed_and_cluster({"collect wood", "make iron sword"}, e, 0.0, 2);
    EXPECT_NE(s[0], s[1]);
    EXPECT_THROW(embed_and_cluster({}, e, 0.1, 2), PreconditionError);
}

TEST(Embedding, RepeatsCoCluster) {
    HashedNgramEmbedder e;
    const std::vector<std::string> t = {"collect wood", "collect 2 wood", "make iron sword"};
    const double d01 = cosine_distance(e.embed(t[0]), e.embed(t[1]));
    const double d02 = cosine_distance(e.embed(t[0]), e.embed(t[2]));
    const double d12 = cosine_distance(e.embed(t[1]), e.embed(t[2]));
    const double eps = 0.25;
    ASSERT_LT(d01, eps);
    ASSERT_GT(std::min(d02, d12), eps);
    const auto l = embed_and_cluster(t, e, eps, 2);
    EXPECT_EQ(l, (std::vector<int>{0, 0, 1}));
}

TEST(Embedding, Moi) {
    const std::vector<std::string> u = {"collect wood", "collect 2 wood", "make iron sword"};
    EmbeddingMoi m(u, std::make_shared<HashedNgramEmbedder>(), 0.25, 2);
    const auto v = m.predict({{"collect wood"}, {"collect 2 wood", "make iron sword"}});
    EXPECT_FALSE(v[0].interesting);
    EXPECT_TRUE(v[1].interesting);
    EXPECT_EQ(v[0].source, VerdictSource::embedding);

    EmbeddingMoi zero(u, std::make_shared<HashedNgramEmbedder>(), 0.0, 2);
    for (const auto& x : zero.predict({{"collect wood"}, {"collect 2 wood", "make iron sword"}}))
        EXPECT_TRUE(x.interesting);
}

TEST(Embedding, UnitVectors) {
    HashedNgramEmbedder e;
    for (const auto& s : {"a", "collect wood", "make 5 iron pickaxe"}) {
        const auto v = e.embed(s);
        double n = 0;
        for (double x : v) n += x * x;
        EXPECT_NEAR(n, 1.0, 1e-12);
        EXPECT_EQ(v.size(), 256u);
    }
}

TEST(Smoother, EmaOfRawSuccess) {
    SuccessSmoother s(0.1);
    s.observe(TaskId("a"), 0.5);
    EXPECT_DOUBLE_EQ(s.value(TaskId("a")), 0.5);
    s.observe(TaskId("a"), 1.0);
    EXPECT_NEAR(s.value(TaskId("a")), 0.55, 1e-15);
    EXPECT_DOUBLE_EQ(s.value(TaskId("b")), 0.0);
}
