#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "omni/core.hpp"
#include "omni/error.hpp"

namespace omni::dsl {

enum class Attribute {
    visible,
    isToggled,
    isBroken,
    isFilledWithLiquid,
    isDirty,
    isCooked,
    temperature,
    isSliced,
    isOpen,
    isPickedUp,
    receptacleObjects,
};

inline constexpr std::array<std::string_view, 11> kAttributeNames = {
    "visible", "isToggled", "isBroken", "isFilledWithLiquid", "isDirty", "isCooked",
    "temperature", "isSliced", "isOpen", "isPickedUp", "receptacleObjects"};

inline std::string_view name_of(Attribute a) { return kAttributeNames[static_cast<std::size_t>(a)]; }

inline std::optional<Attribute> attribute_from(std::string_view s) {
    for (std::size_t i = 0; i < kAttributeNames.size(); ++i)
        if (kAttributeNames[i] == s) return static_cast<Attribute>(i);
    return std::nullopt;
}

inline bool is_boolean(Attribute a) {
    return a != Attribute::temperature && a != Attribute::receptacleObjects;
}

enum class Temperature { Hot, Cold, RoomTemp };

inline std::string_view name_of(Temperature t) {
    switch (t) {
        case Temperature::Hot: return "Hot";
        case Temperature::Cold: return "Cold";
        case Temperature::RoomTemp: return "RoomTemp";
    }
    return "RoomTemp";
}

inline std::optional<Temperature> temperature_from(std::string_view s) {
    if (s == "Hot") return Temperature::Hot;
    if (s == "Cold") return Temperature::Cold;
    if (s == "RoomTemp") return Temperature::RoomTemp;
    return std::nullopt;
}

using ObjectSet = std::set<std::string>;
using Value = std::variant<bool, Temperature, ObjectSet>;

struct AttributeRequirement {
    Attribute attribute;
    Value expected;
    bool operator==(const AttributeRequirement&) const = default;
};

// Requirements are kept sorted by attribute name, which is also the
// canonical serialization order.
struct ObjectRequirement {
    std::string object;
    std::vector<AttributeRequirement> requirements;
    bool operator==(const ObjectRequirement&) const = default;
};

struct EnvStateSpec {
    std::vector<ObjectRequirement> objects;
    bool operator==(const EnvStateSpec&) const = default;
};

inline constexpr std::size_t kDefaultMaxStates = 10;

struct TaskSpec {
    std::vector<EnvStateSpec> states;
    std::optional<std::string> natural_language;

    // Structural equality ignores the NL label.
    bool operator==(const TaskSpec& o) const { return states == o.states; }
};

inline void sort_requirements(ObjectRequirement& o) {
    std::sort(o.requirements.begin(), o.requirements.end(),
              [](const AttributeRequirement& a, const AttributeRequirement& b) {
                  return name_of(a.attribute) < name_of(b.attribute);
              });
}

inline void validate(const TaskSpec& t, std::size_t max_states = kDefaultMaxStates) {
    if (t.states.empty()) throw PreconditionError("task has no states");
    if (t.states.size() > max_states)
        throw PreconditionError("task has " + std::to_string(t.states.size()) + " states, limit " +
                                std::to_string(max_states));
    for (const auto& s : t.states) {
        if (s.objects.empty()) throw PreconditionError("empty environment state");
        for (const auto& o : s.objects) {
            if (o.object.empty()) throw PreconditionError("empty object name");
            std::set<Attribute> seen;
            for (const auto& r : o.requirements) {
                if (!seen.insert(r.attribute).second)
                    throw PreconditionError("duplicate attribute " + std::string(name_of(r.attribute)));
                const bool ok = is_boolean(r.attribute)       ? std::holds_alternative<bool>(r.expected)
                                : r.attribute == Attribute::temperature ? std::holds_alternative<Temperature>(r.expected)
                                                                        : std::holds_alternative<ObjectSet>(r.expected);
                if (!ok) throw PreconditionError("value kind does not match " + std::string(name_of(r.attribute)));
            }
        }
    }
}

// ---------------------------------------------------------------- parsing

namespace detail {

class Parser {
public:
    explicit Parser(std::string_view s) : s_(s) {}

    TaskSpec task() {
        TaskSpec t;
        expect('[');
        skip_ws();
        if (peek() == ']') fail("empty task");
        for (;;) {
            t.states.push_back(state());
            skip_ws();
            if (peek() == ',') {
                ++i_;
                continue;
            }
            expect(']');
            break;
        }
        skip_ws();
        if (i_ != s_.size()) fail("trailing characters");
        return t;
    }

private:
    std::string_view s_;
    std::size_t i_ = 0;

    [[noreturn]] void fail(const std::string& m) const { throw ParseError(m, i_); }

    void skip_ws() {
        while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
    }

    char peek() {
        skip_ws();
        return i_ < s_.size() ? s_[i_] : '\0';
    }

    void expect(char c) {
        if (peek() != c) fail(std::string("expected '") + c + "'");
        ++i_;
    }

    std::string ident() {
        skip_ws();
        const std::size_t b = i_;
        while (i_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_')) ++i_;
        if (b == i_) fail("expected identifier");
        return std::string(s_.substr(b, i_ - b));
    }

    std::string str() {
        skip_ws();
        if (i_ >= s_.size() || (s_[i_] != '"' && s_[i_] != '\'')) fail("expected string literal");
        const char q = s_[i_++];
        std::string out;
        while (i_ < s_.size() && s_[i_] != q) {
            if (s_[i_] == '\\' && i_ + 1 < s_.size()) ++i_;
            out += s_[i_++];
        }
        if (i_ >= s_.size()) fail("unterminated string");
        ++i_;
        return out;
    }

    EnvStateSpec state() {
        EnvStateSpec st;
        expect('[');
        if (peek() == ']') fail("empty state");
        for (;;) {
            st.objects.push_back(object());
            if (peek() == ',') {
                ++i_;
                continue;
            }
            expect(']');
            break;
        }
        return st;
    }

    ObjectRequirement object() {
        const std::size_t at = (skip_ws(), i_);
        if (ident() != "obj_attributes") {
            i_ = at;
            fail("expected obj_attributes");
        }
        expect('(');
        ObjectRequirement o;
        o.object = str();
        if (o.object.empty()) fail("empty object name");
        expect(',');
        // The printed single-line example drops the braces around the dict.
        const bool braced = peek() == '{';
        if (braced) ++i_;
        const char close = braced ? '}' : ')';
        std::set<Attribute> seen;
        if (peek() != close) {
            for (;;) {
                const std::size_t key_at = (skip_ws(), i_);
                const std::string key = str();
                auto a = attribute_from(key);
                if (!a) {
                    i_ = key_at;
                    fail("unknown attribute \"" + key + "\"");
                }
                if (!seen.insert(*a).second) {
                    i_ = key_at;
                    fail("duplicate attribute \"" + key + "\"");
                }
                expect(':');
                o.requirements.push_back({*a, value(*a)});
                if (peek() == ',') {
                    ++i_;
                    continue;
                }
                break;
            }
        }
        if (o.requirements.empty()) fail("object requirement has no attributes");
        expect(close);
        if (braced) expect(')');
        sort_requirements(o);
        return o;
    }

    Value value(Attribute a) {
        const std::size_t at = (skip_ws(), i_);
        const char c = peek();
        if (is_boolean(a)) {
            if (c == '"' || c == '\'' || c == '[') fail("expected True/False for " + std::string(name_of(a)));
            const std::string w = ident();
            if (w == "True" || w == "true") return true;
            if (w == "False" || w == "false") return false;
            i_ = at;
            fail("expected True/False for " + std::string(name_of(a)));
        }
        if (a == Attribute::temperature) {
            const std::string w = (c == '"' || c == '\'') ? str() : ident();
            if (auto t = temperature_from(w)) return *t;
            i_ = at;
            fail("expected Hot/Cold/RoomTemp");
        }
        ObjectSet objs;
        if (c == '[') {
            ++i_;
            if (peek() != ']') {
                for (;;) {
                    objs.insert(str());
                    if (peek() == ',') {
                        ++i_;
                        continue;
                    }
                    break;
                }
            }
            expect(']');
        } else if (c == '"' || c == '\'') {
            objs.insert(str());
        } else {
            fail("expected object name or list for receptacleObjects");
        }
        return objs;
    }
};

}  // namespace detail

inline TaskSpec parse_task(std::string_view text) {
    TaskSpec t = detail::Parser(text).task();
    validate(t, static_cast<std::size_t>(-1));
    return t;
}

// ---------------------------------------------------------- serialization

inline std::string serialize_value(const Value& v) {
    if (auto b = std::get_if<bool>(&v)) return *b ? "True" : "False";
    if (auto t = std::get_if<Temperature>(&v)) return "\"" + std::string(name_of(*t)) + "\"";
    const auto& s = std::get<ObjectSet>(v);
    if (s.size() == 1) return "\"" + *s.begin() + "\"";
    std::string out = "[";
    bool first = true;
    for (const auto& o : s) {
        if (!first) out += ", ";
        out += "\"" + o + "\"";
        first = false;
    }
    return out + "]";
}

inline std::string serialize_object(const ObjectRequirement& o) {
    ObjectRequirement c = o;
    sort_requirements(c);
    std::string out = "obj_attributes(\"" + c.object + "\", {";
    for (std::size_t i = 0; i < c.requirements.size(); ++i) {
        if (i) out += ", ";
        out += "\"" + std::string(name_of(c.requirements[i].attribute)) + "\": " +
               serialize_value(c.requirements[i].expected);
    }
    return out + "})";
}

inline std::string serialize_task(const TaskSpec& t) {
    std::string out = "[";
    for (std::size_t i = 0; i < t.states.size(); ++i) {
        if (i) out += ", ";
        out += "[";
        for (std::size_t j = 0; j < t.states[i].objects.size(); ++j) {
            if (j) out += ", ";
            out += serialize_object(t.states[i].objects[j]);
        }
        out += "]";
    }
    return out + "]";
}

// ------------------------------------------------------------ snapshots

struct ObjectState {
    std::map<Attribute, Value> values;
};

// Attributes missing from an object's state read as False / RoomTemp / empty.
struct WorldSnapshot {
    std::map<std::string, ObjectState> objects;

    void set(const std::string& obj, Attribute a, Value v) { objects[obj].values[a] = std::move(v); }
    void add_object(const std::string& obj) { objects[obj]; }
};

inline Value default_value(Attribute a) {
    if (a == Attribute::temperature) return Temperature::RoomTemp;
    if (a == Attribute::receptacleObjects) return ObjectSet{};
    return false;
}

inline bool requirement_satisfied(const WorldSnapshot& snap, const ObjectRequirement& req) {
    auto it = snap.objects.find(req.object);
    if (it == snap.objects.end()) throw EvaluationError("object not in snapshot: " + req.object);
    for (const auto& r : req.requirements) {
        auto v = it->second.values.find(r.attribute);
        const Value actual = v == it->second.values.end() ? default_value(r.attribute) : v->second;
        if (r.attribute == Attribute::receptacleObjects) {
            const auto& need = std::get<ObjectSet>(r.expected);
            const auto& have = std::get<ObjectSet>(actual);
            if (!std::includes(have.begin(), have.end(), need.begin(), need.end())) return false;
        } else if (actual != r.expected) {
            return false;
        }
    }
    return true;
}

inline bool state_satisfied(const WorldSnapshot& snap, const EnvStateSpec& st) {
    for (const auto& o : st.objects)
        if (!requirement_satisfied(snap, o)) return false;
    return true;
}

struct TaskProgress {
    std::size_t next_index = 0;
    bool complete(const TaskSpec& t) const { return next_index >= t.states.size(); }
};

inline TaskProgress advance_progress(TaskProgress p, const TaskSpec& t, const WorldSnapshot& snap) {
    if (p.complete(t)) return p;
    if (state_satisfied(snap, t.states[p.next_index])) ++p.next_index;
    return p;
}

// ------------------------------------------------------------ affordances

enum Flag : unsigned {
    pickupable = 1u << 0,
    openable = 1u << 1,
    sliceable = 1u << 2,
    toggleable = 1u << 3,
    fillable = 1u << 4,
    receptacle = 1u << 5,
    temperature_mutable = 1u << 6,
    breakable = 1u << 7,
    dirtyable = 1u << 8,
    cookable = 1u << 9,
};

inline const std::map<std::string, unsigned>& flag_names() {
    static const std::map<std::string, unsigned> m = {
        {"pickupable", pickupable}, {"openable", openable},     {"sliceable", sliceable},
        {"toggleable", toggleable}, {"fillable", fillable},     {"receptacle", receptacle},
        {"temperature", temperature_mutable}, {"breakable", breakable}, {"dirtyable", dirtyable},
        {"cookable", cookable}};
    return m;
}

// Object name -> capability bits. Ordered so generation is reproducible.
struct AffordanceTable {
    std::map<std::string, unsigned> flags;

    bool has(const std::string& obj) const { return flags.count(obj) != 0; }
    unsigned of(const std::string& obj) const {
        auto it = flags.find(obj);
        if (it == flags.end()) throw EvaluationError("object not in affordance table: " + obj);
        return it->second;
    }
    std::vector<std::string> objects() const {
        std::vector<std::string> out;
        for (const auto& [k, _] : flags) out.push_back(k);
        return out;
    }
};

// Format: one "Object: flag,flag" per line; '#' starts a comment.
inline AffordanceTable parse_affordances(std::istream& in) {
    AffordanceTable t;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            if (b == std::string::npos) return std::string();
            return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
        };
        line = trim(line);
        if (line.empty()) continue;
        const auto colon = line.find(':');
        if (colon == std::string::npos)
            throw ConfigError("affordance line " + std::to_string(lineno) + ": missing ':'");
        const std::string obj = trim(line.substr(0, colon));
        if (obj.empty()) throw ConfigError("affordance line " + std::to_string(lineno) + ": empty object");
        unsigned bits = 0;
        std::stringstream ss(line.substr(colon + 1));
        std::string f;
        while (std::getline(ss, f, ',')) {
            f = trim(f);
            if (f.empty()) continue;
            auto it = flag_names().find(f);
            if (it == flag_names().end())
                throw ConfigError("affordance line " + std::to_string(lineno) + ": unknown flag " + f);
            bits |= it->second;
        }
        t.flags[obj] = bits;
    }
    return t;
}

inline AffordanceTable parse_affordances(const std::string& text) {
    std::istringstream in(text);
    return parse_affordances(in);
}

inline AffordanceTable load_affordances(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open affordance table " + path);
    return parse_affordances(in);
}

// The 43 kitchen objects of the proposal prompt. Capability flags are our own
// reading of what each object supports in a typical simulator kitchen.
inline constexpr const char* kKitchenAffordances = R"(Apple: pickupable,sliceable,temperature
Bowl: pickupable,receptacle,fillable,breakable,dirtyable,temperature
Bread: pickupable,sliceable,cookable,temperature
ButterKnife: pickupable
Cabinet: openable,receptacle
CoffeeMachine: toggleable,receptacle
CounterTop: receptacle
Cup: pickupable,receptacle,fillable,breakable,dirtyable,temperature
DishSponge: pickupable
Drawer: openable,receptacle
Egg: pickupable,sliceable,breakable,cookable,temperature
Faucet: toggleable
Floor: receptacle
Fork: pickupable
Fridge: openable,receptacle
GarbageCan: receptacle
HousePlant: fillable
Kettle: pickupable,openable,fillable,temperature
Knife: pickupable
Lettuce: pickupable,sliceable,temperature
LightSwitch: toggleable
Microwave: openable,toggleable,receptacle
Mug: pickupable,receptacle,fillable,breakable,dirtyable,temperature
Pan: pickupable,receptacle,dirtyable,temperature
PaperTowelRoll: pickupable
PepperShaker: pickupable
Plate: pickupable,receptacle,breakable,dirtyable
Pot: pickupable,receptacle,fillable,dirtyable,temperature
Potato: pickupable,sliceable,cookable,temperature
SaltShaker: pickupable
SideTable: receptacle
Sink: receptacle
SinkBasin: receptacle
SoapBottle: pickupable
Spatula: pickupable
Spoon: pickupable
Stool: receptacle
StoveBurner: toggleable,receptacle
StoveKnob: toggleable
Toaster: toggleable,receptacle
Tomato: pickupable,sliceable,temperature
Window: breakable
WineBottle: pickupable,fillable,breakable
)";

inline const AffordanceTable& kitchen_affordances() {
    static const AffordanceTable t = parse_affordances(std::string(kKitchenAffordances));
    return t;
}

inline bool attribute_applicable(Attribute a, unsigned f) {
    switch (a) {
        case Attribute::visible: return true;
        case Attribute::isToggled: return f & toggleable;
        case Attribute::isBroken: return f & breakable;
        case Attribute::isFilledWithLiquid: return f & fillable;
        case Attribute::isDirty: return f & dirtyable;
        case Attribute::isCooked: return f & cookable;
        case Attribute::temperature: return f & temperature_mutable;
        case Attribute::isSliced: return f & sliceable;
        case Attribute::isOpen: return f & openable;
        case Attribute::isPickedUp: return f & pickupable;
        case Attribute::receptacleObjects: return f & receptacle;
    }
    return false;
}

inline bool requirement_achievable(const std::string& obj, const AttributeRequirement& r,
                                   const AffordanceTable& aff) {
    if (!aff.has(obj)) return false;
    if (!attribute_applicable(r.attribute, aff.of(obj))) return false;
    if (r.attribute == Attribute::receptacleObjects) {
        const auto& contents = std::get<ObjectSet>(r.expected);
        if (contents.empty()) return false;
        for (const auto& c : contents)
            if (c == obj || !aff.has(c) || !(aff.of(c) & pickupable)) return false;
    }
    return true;
}

inline bool achievable(const TaskSpec& t, const AffordanceTable& aff) {
    for (const auto& s : t.states)
        for (const auto& o : s.objects)
            for (const auto& r : o.requirements)
                if (!requirement_achievable(o.object, r, aff)) return false;
    return true;
}

// --------------------------------------------------------- random tasks

struct RequirementDraw {
    std::string object;
    AttributeRequirement requirement;
};

// Hook for tests: lets a caller force particular first draws.
using DrawFn = std::function<RequirementDraw(Rng&)>;

struct GenerationStats {
    std::size_t rejections = 0;
};

inline constexpr std::size_t kResampleCap = 100;

inline RequirementDraw draw_requirement(Rng& rng, const AffordanceTable& aff) {
    const auto objs = aff.objects();
    RequirementDraw d;
    d.object = objs[uniform_index(rng, objs.size())];
    const auto a = static_cast<Attribute>(uniform_index(rng, kAttributeNames.size()));
    d.requirement.attribute = a;
    if (is_boolean(a)) {
        d.requirement.expected = bernoulli(rng, 0.5);
    } else if (a == Attribute::temperature) {
        d.requirement.expected = static_cast<Temperature>(uniform_index(rng, 3));
    } else {
        d.requirement.expected = ObjectSet{objs[uniform_index(rng, objs.size())]};
    }
    return d;
}

struct RandomTaskOptions {
    std::size_t max_states = kDefaultMaxStates;
    std::size_t max_objects_per_state = 2;
    std::size_t max_attributes_per_object = 2;
};

inline TaskSpec random_task(Rng& rng, const AffordanceTable& aff, RandomTaskOptions opt = {},
                            const DrawFn& draw = {}, GenerationStats* stats = nullptr) {
    if (aff.flags.empty()) throw GenerationError("empty affordance table");
    if (opt.max_states < 1) throw PreconditionError("max_states must be >= 1");
    auto next = [&](Rng& r) { return draw ? draw(r) : draw_requirement(r, aff); };

    TaskSpec t;
    const std::size_t len = 1 + uniform_index(rng, opt.max_states);
    for (std::size_t s = 0; s < len; ++s) {
        EnvStateSpec st;
        const std::size_t n_obj = 1 + uniform_index(rng, opt.max_objects_per_state);
        const std::size_t n_attr_target = 1 + uniform_index(rng, opt.max_attributes_per_object);
        for (std::size_t k = 0; k < n_obj; ++k) {
            ObjectRequirement cur;
            for (std::size_t m = 0; m < n_attr_target; ++m) {
                if (!cur.object.empty()) {
                    std::size_t applicable = 0;
                    for (std::size_t ai = 0; ai < kAttributeNames.size(); ++ai)
                        applicable += attribute_applicable(static_cast<Attribute>(ai), aff.of(cur.object));
                    if (applicable <= cur.requirements.size()) break;
                }
                bool added = false;
                for (std::size_t tries = 1; !added; ++tries) {
                    if (tries > kResampleCap) {
                        // extra attributes are optional; only the first one must land
                        if (!cur.object.empty()) break;
                        throw GenerationError("no achievable requirement after " + std::to_string(kResampleCap) +
                                              " draws");
                    }
                    RequirementDraw d = next(rng);
                    // the first draw picks the object; later attributes stay on it
                    if (!cur.object.empty()) d.object = cur.object;
                    bool ok = requirement_achievable(d.object, d.requirement, aff);
                    if (ok && cur.object.empty())
                        for (const auto& o : st.objects) ok = ok && o.object != d.object;
                    for (const auto& r : cur.requirements) ok = ok && r.attribute != d.requirement.attribute;
                    if (!ok) {
                        if (stats) ++stats->rejections;
                        continue;
                    }
                    cur.object = d.object;
                    cur.requirements.push_back(d.requirement);
                    added = true;
                }
                if (!added) break;
            }
            sort_requirements(cur);
            st.objects.push_back(std::move(cur));
        }
        t.states.push_back(std::move(st));
    }
    return t;
}

// ---------------------------------------------------------- canonical ids

// Instance suffixes like "Apple_1" or "Mug|+01.2|..." collapse to the type.
inline std::string object_type(const std::string& name) {
    std::string s = name.substr(0, name.find('|'));
    const auto us = s.rfind('_');
    if (us != std::string::npos && us + 1 < s.size() &&
        std::all_of(s.begin() + static_cast<long>(us) + 1, s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
        s.erase(us);
    return s;
}

// Stable id: objects within a state sorted, attributes sorted. With
// abstraction on, every object name is replaced by its type.
inline TaskId canonicalize(const TaskSpec& t, bool abstract_instances = false) {
    TaskSpec c = t;
    for (auto& st : c.states) {
        for (auto& o : st.objects) {
            if (abstract_instances) {
                o.object = object_type(o.object);
                for (auto& r : o.requirements)
                    if (auto* set = std::get_if<ObjectSet>(&r.expected)) {
                        ObjectSet abs;
                        for (const auto& x : *set) abs.insert(object_type(x));
                        *set = std::move(abs);
                    }
            }
            sort_requirements(o);
        }
        std::sort(st.objects.begin(), st.objects.end(), [](const ObjectRequirement& a, const ObjectRequirement& b) {
            return serialize_object(a) < serialize_object(b);
        });
    }
    return TaskId(serialize_task(c));
}

// Text-instruction abstraction ("go to a red ball" -> "go to <object>").
inline std::string abstract_instruction(const std::string& text) {
    static const std::set<std::string> colors = {"red", "green", "blue", "purple", "yellow", "grey"};
    static const std::set<std::string> kinds = {"ball", "box", "key", "door", "object"};
    std::istringstream in(text);
    std::vector<std::string> words;
    for (std::string w; in >> w;) words.push_back(w);
    std::vector<std::string> out;
    for (std::size_t i = 0; i < words.size(); ++i) {
        std::string w = words[i];
        std::string trail;
        while (!w.empty() && (w.back() == ',' || w.back() == '.')) {
            trail.insert(trail.begin(), w.back());
            w.pop_back();
        }
        if ((w == "a" || w == "the" || w == "some") && i + 1 < words.size()) {
            std::size_t j = i + 1;
            if (colors.count(words[j])) ++j;
            if (j < words.size()) {
                std::string k = words[j];
                std::string ktrail;
                while (!k.empty() && (k.back() == ',' || k.back() == '.')) {
                    ktrail.insert(ktrail.begin(), k.back());
                    k.pop_back();
                }
                if (kinds.count(k)) {
                    out.push_back((k == "door" ? "<door>" : "<object>") + ktrail);
                    i = j;
                    continue;
                }
            }
        }
        out.push_back(w + trail);
    }
    std::string r;
    for (std::size_t i = 0; i < out.size(); ++i) r += (i ? " " : "") + out[i];
    return r;
}

// ---------------------------------------------------------------- archive

struct ArchiveEntry {
    TaskSpec spec;
    std::optional<std::string> natural_language;
};

// One canonical task per line, optional tab + natural-language text.
inline std::vector<ArchiveEntry> read_archive(std::istream& in) {
    std::vector<ArchiveEntry> out;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        ArchiveEntry e;
        const auto tab = line.find('\t');
        e.spec = parse_task(line.substr(0, tab));
        if (tab != std::string::npos) e.natural_language = line.substr(tab + 1);
        e.spec.natural_language = e.natural_language;
        out.push_back(std::move(e));
    }
    return out;
}

inline void write_archive(std::ostream& os, const std::vector<ArchiveEntry>& entries) {
    for (const auto& e : entries) {
        os << serialize_task(e.spec);
        if (e.natural_language) os << '\t' << *e.natural_language;
        os << '\n';
    }
}

}  // namespace omni::dsl
