#include <gtest/gtest.h>

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>

#include "omni/taskdsl.hpp"

using namespace omni;
using namespace omni::dsl;

namespace {

// Task listings as printed in the kitchen examples (pick-up/put-down, the
// prompt input, the proposal output, the random-generation input).
const char* kApple = R"([[obj_attributes("Apple", "isPickedUp": True)], [obj_attributes("Apple", "isPickedUp": False)]])";

const std::vector<std::string> kListings = {
    kApple,
    R"([[obj_attributes("Apple", {"visible": True})]])",
    R"([[obj_attributes("Knife", {"visible": True})]])",
    R"([[obj_attributes("Potato", {"visible": True})]])",
    R"([[obj_attributes("Bread", {"visible": True})]])",
    R"([[obj_attributes("Apple", {"visible": True, "isPickedUp": True})]])",
    R"([[obj_attributes("Fridge", {"visible": True})],[obj_attributes("Fridge", {"isOpen": True})]])",
    R"([[obj_attributes("Plate", {"visible": True})]])",
    R"([[obj_attributes("Potato", {"visible": True})], [obj_attributes("Knife", {"visible": True})], [obj_attributes("Potato", {"isSliced": True})]])",
    R"([[obj_attributes("Knife", {"visible": True})], [obj_attributes("Knife", {"isPickedUp": True})]])",
    R"([[obj_attributes("CoffeeMachine", {"visible": True})]])",
    R"([[obj_attributes("SideTable", {"receptacleObjects": "Apple"}),obj_attributes("ButterKnife", {"isPickedUp": False})]])",
    R"([[obj_attributes("Egg", {"isPickedUp": True, "isBroken": True})],[obj_attributes("Sink", {"receptacleObjects": "Potato"}),obj_attributes("Bread", {"isSliced": True})]])",
    R"([[obj_attributes("ButterKnife", {"isPickedUp": True}),obj_attributes("SoapBottle", {"isPickedUp": False})],[obj_attributes("SideTable", {"receptacleObjects": "ButterKnife"}),obj_attributes("Fork", {"isPickedUp": False})],[obj_attributes("Pot", {"receptacleObjects": "Spatula"}),obj_attributes("Microwave", {"receptacleObjects": "Knife"})]])",
};

WorldSnapshot kitchen_snapshot() {
    WorldSnapshot s;
    for (const auto& o : kitchen_affordances().objects()) s.add_object(o);
    return s;
}

// Random valid spec over the full value vocabulary, independent of the
// affordance-aware generator.
TaskSpec arbitrary_task(Rng& rng) {
    static const std::vector<std::string> names = {"Apple", "Fridge", "Mug", "Knife", "Sink", "Pot", "Egg", "Bowl_1"};
    TaskSpec t;
    const std::size_t len = 1 + uniform_index(rng, 10);
    for (std::size_t s = 0; s < len; ++s) {
        EnvStateSpec st;
        const std::size_t nobj = 1 + uniform_index(rng, 3);
        for (std::size_t k = 0; k < nobj; ++k) {
            ObjectRequirement o{names[uniform_index(rng, names.size())], {}};
            std::vector<std::size_t> attrs(kAttributeNames.size());
            std::iota(attrs.begin(), attrs.end(), 0);
            std::shuffle(attrs.begin(), attrs.end(), rng);
            const std::size_t na = 1 + uniform_index(rng, 4);
            for (std::size_t m = 0; m < na; ++m) {
                const auto a = static_cast<Attribute>(attrs[m]);
                Value v;
                if (is_boolean(a)) v = bernoulli(rng, 0.5);
                else if (a == Attribute::temperature) v = static_cast<Temperature>(uniform_index(rng, 3));
                else {
                    ObjectSet set;
                    const std::size_t n = 1 + uniform_index(rng, 3);
                    for (std::size_t q = 0; q < n; ++q) set.insert(names[uniform_index(rng, names.size())]);
                    v = set;
                }
                o.requirements.push_back({a, v});
            }
            sort_requirements(o);
            st.objects.push_back(o);
        }
        t.states.push_back(st);
    }
    return t;
}

}  // namespace

TEST(Parse, AppleTaskFromPrintedForm) {
    const auto t = parse_task(kApple);
    ASSERT_EQ(t.states.size(), 2u);
    ASSERT_EQ(t.states[0].objects.size(), 1u);
    EXPECT_EQ(t.states[0].objects[0].object, "Apple");
    ASSERT_EQ(t.states[0].objects[0].requirements.size(), 1u);
    EXPECT_EQ(t.states[0].objects[0].requirements[0].attribute, Attribute::isPickedUp);
    EXPECT_EQ(std::get<bool>(t.states[0].objects[0].requirements[0].expected), true);
    EXPECT_EQ(std::get<bool>(t.states[1].objects[0].requirements[0].expected), false);
}

TEST(Parse, SingleState) {
    const auto t = parse_task(R"([[obj_attributes("Knife", {"visible": True})]])");
    EXPECT_EQ(t.states.size(), 1u);
    EXPECT_EQ(serialize_task(t), R"([[obj_attributes("Knife", {"visible": True})]])");
}

TEST(Parse, Errors) {
    EXPECT_THROW(parse_task(R"([[obj_attributes("Apple", {"isFlying": True})]])"), ParseError);
    EXPECT_THROW(parse_task(R"([[obj_attributes("Apple", {"visible": "Hot"})]])"), ParseError);
    EXPECT_THROW(parse_task(R"([[obj_attributes("Apple", {"temperature": True})]])"), ParseError);
    EXPECT_THROW(parse_task(R"([[]])"), ParseError);
    EXPECT_THROW(parse_task(R"([])"), ParseError);
    EXPECT_THROW(parse_task(R"([[obj_attributes("Apple", {"visible": True, "visible": False})]])"), ParseError);
    EXPECT_THROW(parse_task(R"([[obj_attributes("Apple", {"visible": True})]] x)"), ParseError);
    try {
        parse_task(R"([[obj_attributes("Apple", {"isFlying": True})]])");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.position(), 27u);  // the opening quote of "isFlying"
    }
}

TEST(Parse, WhitespaceInsensitive) {
    const auto a = parse_task(R"([[obj_attributes("Mug",{"isDirty":False,"temperature":"Hot"})]])");
    const auto b = parse_task("[ [ obj_attributes( \"Mug\" , {\n \"temperature\" : Hot ,\n\t\"isDirty\": False } ) ] ]");
    EXPECT_EQ(a, b);
}

TEST(Listings, ParseAndRoundTripByteIdentically) {
    for (const auto& text : kListings) {
        const auto t = parse_task(text);
        const std::string c = serialize_task(t);
        EXPECT_EQ(serialize_task(parse_task(c)), c) << text;
        EXPECT_EQ(parse_task(c), t) << text;
    }
}

TEST(Serialize, CanonicalOrderAndDeterminism) {
    const auto t = parse_task(R"([[obj_attributes("Egg", {"isPickedUp": True, "isBroken": True})]])");
    EXPECT_EQ(serialize_task(t), R"([[obj_attributes("Egg", {"isBroken": True, "isPickedUp": True})]])");
    EXPECT_EQ(serialize_task(t), serialize_task(t));
}

TEST(Serialize, RoundTripProperty) {
    Rng rng = make_stream(2024, 0);
    for (int i = 0; i < 10000; ++i) {
        const auto t = arbitrary_task(rng);
        const auto text = serialize_task(t);
        const auto back = parse_task(text);
        ASSERT_EQ(back, t) << text;
        ASSERT_EQ(serialize_task(back), text);
    }
}

TEST(Satisfied, Basics) {
    WorldSnapshot s = kitchen_snapshot();
    s.set("Apple", Attribute::isPickedUp, true);
    EXPECT_TRUE(requirement_satisfied(s, {"Apple", {{Attribute::isPickedUp, true}}}));
    s.set("Fridge", Attribute::receptacleObjects, ObjectSet{"Apple", "Egg"});
    EXPECT_TRUE(requirement_satisfied(s, {"Fridge", {{Attribute::receptacleObjects, ObjectSet{"Apple"}}}}));
    EXPECT_FALSE(requirement_satisfied(s, {"Fridge", {{Attribute::receptacleObjects, ObjectSet{"Bread"}}}}));
    WorldSnapshot empty;
    EXPECT_THROW(requirement_satisfied(empty, {"Apple", {{Attribute::visible, true}}}), EvaluationError);
}

TEST(Satisfied, IndependentOfUnmentionedObjects) {
    Rng rng = make_stream(5, 5);
    const auto objs = kitchen_affordances().objects();
    for (int trial = 0; trial < 500; ++trial) {
        const auto t = random_task(rng, kitchen_affordances());
        WorldSnapshot s = kitchen_snapshot();
        const auto& req = t.states[0].objects[0];
        if (bernoulli(rng, 0.5))
            for (const auto& r : req.requirements) s.set(req.object, r.attribute, r.expected);
        const bool before = requirement_satisfied(s, req);
        for (int k = 0; k < 5; ++k) {
            const auto& o = objs[uniform_index(rng, objs.size())];
            if (o == req.object) continue;
            s.set(o, Attribute::isOpen, true);
            s.set(o, Attribute::temperature, Temperature::Hot);
        }
        EXPECT_EQ(requirement_satisfied(s, req), before);
    }
}

TEST(Progress, AppleTrace) {
    const auto t = parse_task(kApple);
    WorldSnapshot up = kitchen_snapshot(), down = kitchen_snapshot();
    up.set("Apple", Attribute::isPickedUp, true);
    TaskProgress p;
    p = advance_progress(p, t, up);
    EXPECT_EQ(p.next_index, 1u);
    p = advance_progress(p, t, up);
    EXPECT_EQ(p.next_index, 1u);
    p = advance_progress(p, t, down);
    EXPECT_TRUE(p.complete(t));
    p = advance_progress(p, t, up);
    EXPECT_EQ(p.next_index, 2u);

    // state 1 satisfied, state 0 not: no skipping ahead
    EXPECT_EQ(advance_progress(TaskProgress{}, t, down).next_index, 0u);
}

namespace {
// Completes iff the snapshots are fed in the order of the task's states.
void check_orderings(const TaskSpec& t, const std::vector<WorldSnapshot>& snaps) {
    std::vector<std::size_t> perm(snaps.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<std::size_t> identity = perm;
    std::size_t completed = 0;
    do {
        TaskProgress p;
        std::size_t last = 0;
        for (auto k : perm) {
            p = advance_progress(p, t, snaps[k]);
            EXPECT_LE(p.next_index, last + 1);
            EXPECT_GE(p.next_index, last);
            last = p.next_index;
        }
        if (p.complete(t)) {
            ++completed;
            EXPECT_EQ(perm, identity);
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    EXPECT_EQ(completed, 1u);
}
}  // namespace

TEST(Progress, OnlyOrderedTraceCompletes) {
    const auto apple = parse_task(kApple);
    WorldSnapshot up = kitchen_snapshot(), down = kitchen_snapshot();
    up.set("Apple", Attribute::isPickedUp, true);
    check_orderings(apple, {up, down});

    const auto three = parse_task(
        R"([[obj_attributes("Potato", {"visible": True})], [obj_attributes("Knife", {"visible": True})], [obj_attributes("Potato", {"isSliced": True})]])");
    std::vector<WorldSnapshot> snaps(3, kitchen_snapshot());
    snaps[0].set("Potato", Attribute::visible, true);
    snaps[1].set("Knife", Attribute::visible, true);
    snaps[2].set("Potato", Attribute::isSliced, true);
    check_orderings(three, snaps);
}

TEST(Random, AlwaysAchievableAndBounded) {
    Rng rng = make_stream(9, 0);
    for (int i = 0; i < 1000; ++i) {
        const auto t = random_task(rng, kitchen_affordances());
        EXPECT_TRUE(achievable(t, kitchen_affordances()));
        EXPECT_GE(t.states.size(), 1u);
        EXPECT_LE(t.states.size(), 10u);
        EXPECT_NO_THROW(validate(t));
    }
    RandomTaskOptions one;
    one.max_states = 1;
    for (int i = 0; i < 100; ++i) EXPECT_EQ(random_task(rng, kitchen_affordances(), one).states.size(), 1u);
}

TEST(Random, FridgePickupIsResampled) {
    EXPECT_FALSE(requirement_achievable("Fridge", {Attribute::isPickedUp, true}, kitchen_affordances()));
    int calls = 0;
    DrawFn forced = [&](Rng& r) {
        // the first draw is the unachievable requirement
        if (calls++ == 0) return RequirementDraw{"Fridge", {Attribute::isPickedUp, true}};
        return draw_requirement(r, kitchen_affordances());
    };
    RandomTaskOptions opt;
    opt.max_states = 1;
    opt.max_objects_per_state = 1;
    opt.max_attributes_per_object = 1;
    Rng rng = make_stream(1, 0);
    GenerationStats st;
    const auto t = random_task(rng, kitchen_affordances(), opt, forced, &st);
    EXPECT_GE(st.rejections, 1u);
    EXPECT_TRUE(achievable(t, kitchen_affordances()));
    const auto& o = t.states[0].objects[0];
    EXPECT_FALSE(o.object == "Fridge" && o.requirements[0].attribute == Attribute::isPickedUp);
}

// Objects like CounterTop accept only two attributes; a second requirement on
// them is hard to hit and must not abort generation.
TEST(Random, SparseObjectsNeverAbort) {
    Rng rng = make_stream(5, 0);
    for (int i = 0; i < 20000; ++i) ASSERT_NO_THROW(random_task(rng, kitchen_affordances())) << i;
}

TEST(Random, ResampleCapRaises) {
    DrawFn bad = [](Rng&) { return RequirementDraw{"Fridge", {Attribute::isPickedUp, true}}; };
    Rng rng = make_stream(1, 0);
    EXPECT_THROW(random_task(rng, kitchen_affordances(), {}, bad), GenerationError);
}

TEST(Canonical, StableIds) {
    const auto a = parse_task(R"([[obj_attributes("Egg", {"isPickedUp": True, "isBroken": True})]])");
    const auto b = parse_task(R"([[obj_attributes("Egg", {"isBroken": True, "isPickedUp": True})]])");
    EXPECT_EQ(canonicalize(a), canonicalize(a));
    EXPECT_EQ(canonicalize(a), canonicalize(b));
    const auto c = parse_task(
        R"([[obj_attributes("Sink", {"receptacleObjects": "Potato"}),obj_attributes("Bread", {"isSliced": True})]])");
    const auto d = parse_task(
        R"([[obj_attributes("Bread", {"isSliced": True}),obj_attributes("Sink", {"receptacleObjects": "Potato"})]])");
    EXPECT_EQ(canonicalize(c), canonicalize(d));
    const auto e = parse_task(R"([[obj_attributes("Mug_1", {"visible": True})]])");
    const auto f = parse_task(R"([[obj_attributes("Mug_2", {"visible": True})]])");
    EXPECT_NE(canonicalize(e), canonicalize(f));
    EXPECT_EQ(canonicalize(e, true), canonicalize(f, true));
}

TEST(Canonical, InstructionAbstraction) {
    EXPECT_EQ(abstract_instruction("go to a red ball"), abstract_instruction("go to a blue key"));
    EXPECT_EQ(abstract_instruction("go to a red ball"), "go to <object>");
    EXPECT_NE(abstract_instruction("go to a red ball"), abstract_instruction("open the red door"));
}

TEST(Affordances, DataFileMatchesEmbeddedTable) {
    const auto file = load_affordances(std::string(OMNI_DATA_DIR) + "/kitchen_affordances.txt");
    EXPECT_EQ(file.flags, kitchen_affordances().flags);
    EXPECT_EQ(file.flags.size(), 43u);
    EXPECT_THROW(parse_affordances(std::string("Apple pickupable\n")), ConfigError);
    EXPECT_THROW(parse_affordances(std::string("Apple: flying\n")), ConfigError);
}

TEST(Archive, ReadWrite) {
    std::vector<ArchiveEntry> in;
    for (const auto& l : kListings) in.push_back({parse_task(l), std::nullopt});
    in[0].natural_language = "lift the apple and set it back";
    std::stringstream ss;
    write_archive(ss, in);
    const auto out = read_archive(ss);
    ASSERT_EQ(out.size(), in.size());
    for (std::size_t i = 0; i < in.size(); ++i) EXPECT_EQ(out[i].spec, in[i].spec);
    EXPECT_EQ(out[0].natural_language, in[0].natural_language);
}

TEST(Listings, DataFileMatches) {
    std::ifstream in(std::string(OMNI_DATA_DIR) + "/listings/kitchen_tasks.txt");
    std::vector<std::string> lines;
    for (std::string l; std::getline(in, l);)
        if (!l.empty() && l[0] != '#') lines.push_back(l);
    EXPECT_EQ(lines, kListings);
}
