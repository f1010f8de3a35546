#pragma once

// Declarative world files.
//
// Synthetic worlds are a CSV table:
//   name,prereqs,eta,q0,r,category
//   collect wood,,0.05,0.01,0.15,interesting
//   place table,collect wood,0.05,0.01,0.08,interesting
// prereqs are ';'-separated names of earlier rows.
//
// ChainCraft worlds are INI:
//   [chaincraft]  items, horizon_per_state, step_penalty, completion_reward
//   [gather Wood] tools, prob
//   [recipe Plank] inputs = Wood:1, tools

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <sstream>
#include <string>

#include "omni/report.hpp"
#include "omni/world.hpp"

namespace omni::world {

namespace io_detail {
inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    return s.substr(b, s.find_last_not_of(" \t\r\n") - b + 1);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream in(s);
    for (std::string x; std::getline(in, x, sep);)
        if (auto t = trim(x); !t.empty()) out.push_back(t);
    return out;
}

inline double number(const std::string& s, const std::string& what) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("bad number for " + what + ": '" + s + "'");
    }
}
}  // namespace io_detail

inline SynthSpec parse_synth_spec(const std::string& csv, double rho = 0.5) {
    const auto t = report::parse_csv(csv);
    const auto cn = t.column("name"), cp = t.column("prereqs"), ce = t.column("eta"), cq = t.column("q0"),
               cr = t.column("r"), cc = t.column("category");
    SynthSpec s;
    s.rho = rho;
    for (const auto& row : t.rows) {
        if (row.size() != t.header.size()) throw ConfigError("synthetic world row has the wrong field count");
        std::vector<std::size_t> pre;
        for (const auto& p : io_detail::split(row[cp], ';')) {
            try {
                pre.push_back(s.index_of(p));
            } catch (const PreconditionError&) {
                throw ConfigError("prerequisite '" + p + "' must be listed before " + row[cn]);
            }
        }
        Category c;
        if (row[cc] == "interesting") c = Category::interesting;
        else if (row[cc] == "boring") c = Category::boring;
        else if (row[cc] == "extreme") c = Category::extreme;
        else throw ConfigError("unknown category " + row[cc]);
        s.add(io_detail::trim(row[cn]), std::move(pre), io_detail::number(row[ce], "eta"),
              io_detail::number(row[cq], "q0"), io_detail::number(row[cr], "r"), c);
    }
    try {
        s.validate();
    } catch (const PreconditionError& e) {
        throw ConfigError(e.what());
    }
    return s;
}

inline std::string synth_spec_csv(const SynthSpec& s) {
    std::string o = report::csv_line({"name", "prereqs", "eta", "q0", "r", "category"});
    for (std::size_t i = 0; i < s.size(); ++i) {
        std::string pre;
        for (auto p : s.prereqs[i]) pre += (pre.empty() ? "" : ";") + s.tasks[p];
        o += report::csv_line({s.tasks[i], pre, report::fmt(s.eta[i]), report::fmt(s.q0[i]), report::fmt(s.r[i]),
                               to_string(s.category[i])});
    }
    return o;
}

inline ChainCraftSpec parse_chaincraft(const std::string& ini) {
    namespace pt = boost::property_tree;
    pt::ptree tree;
    std::istringstream in(ini);
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError(std::string("chaincraft file: ") + e.what());
    }
    ChainCraftSpec s;
    bool have_main = false;
    try {
        for (const auto& [section, body] : tree) {
            if (section == "chaincraft") {
                have_main = true;
                s.items = io_detail::split(body.get<std::string>("items"), ',');
                s.horizon_per_state = body.get("horizon_per_state", s.horizon_per_state);
                s.step_penalty = body.get("step_penalty", s.step_penalty);
                s.completion_reward = body.get("completion_reward", s.completion_reward);
            } else if (section.rfind("gather ", 0) == 0) {
                s.gathers.push_back({io_detail::trim(section.substr(7)),
                                     io_detail::split(body.get<std::string>("tools", ""), ','),
                                     body.get("prob", 1.0)});
            } else if (section.rfind("recipe ", 0) == 0) {
                Recipe r;
                r.output = io_detail::trim(section.substr(7));
                for (const auto& kv : io_detail::split(body.get<std::string>("inputs", ""), ',')) {
                    const auto colon = kv.find(':');
                    const std::string k = io_detail::trim(kv.substr(0, colon));
                    const int n = colon == std::string::npos
                                      ? 1
                                      : static_cast<int>(io_detail::number(io_detail::trim(kv.substr(colon + 1)), k));
                    r.inputs[k] += n;
                }
                r.tools = io_detail::split(body.get<std::string>("tools", ""), ',');
                s.recipes.push_back(std::move(r));
            } else {
                throw ConfigError("unknown chaincraft section [" + section + "]");
            }
        }
    } catch (const pt::ptree_error& e) {
        throw ConfigError(std::string("chaincraft file: ") + e.what());
    }
    if (!have_main) throw ConfigError("chaincraft file lacks a [chaincraft] section");
    if (s.horizon_per_state < 1) throw ConfigError("horizon_per_state must be positive");
    s.validate();
    return s;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace omni::world
