#pragma once
// Configuration files and on-disk exports.
//
// Config format: flat "key = value" lines, '#' comments, rationals written
// as "p/q". Exports are JSON (nlohmann) with every rational rendered as
// "p/q" so parsing an export reproduces the exact in-memory values.

#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "badapprox/analysis.hpp"
#include "badapprox/cantor.hpp"
#include "badapprox/construction.hpp"
#include "badapprox/errors.hpp"
#include "badapprox/params.hpp"

namespace badapprox {

struct RunConfig {
    WeightPair weights{Rat(1), Rat(1)};
    std::optional<ExponentPair> rho_override;
    long N_min = 2;
    long max_level = 2;
    RatRect window{{Rat(1, 2), Rat(1, 2)}, {Rat(1, 2), Rat(1, 2)}};
    RatRect root_region{{Rat(41, 128), Rat(59, 128)}, {Rat(1, 128), Rat(1, 128)}};
    Rat epsilon = Rat(5, 3);
    long seed = 1;
    long samples = 200;
    std::string output_dir = "out";
};

inline std::map<std::string, std::string> parse_kv_file(std::istream& in) {
    std::map<std::string, std::string> kv;
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](std::string s) {
            size_t a = s.find_first_not_of(" \t\r");
            size_t b = s.find_last_not_of(" \t\r");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError("config: empty key");
        if (kv.count(key)) throw ConfigError("config: duplicate key " + key);
        kv[key] = val;
    }
    return kv;
}

inline RunConfig config_from_map(const std::map<std::string, std::string>& kv) {
    RunConfig c;
    auto rat = [&](const std::string& k, const Rat& dflt) {
        auto it = kv.find(k);
        if (it == kv.end()) return dflt;
        try {
            return parse_rat(it->second);
        } catch (const std::invalid_argument& e) {
            throw ConfigError("config key " + k + ": " + e.what());
        }
    };
    auto integer = [&](const std::string& k, long dflt) {
        auto it = kv.find(k);
        if (it == kv.end()) return dflt;
        try {
            size_t pos = 0;
            long v = std::stol(it->second, &pos);
            if (pos != it->second.size()) throw std::invalid_argument(it->second);
            return v;
        } catch (const std::exception&) {
            throw ConfigError("config key " + k + ": not an integer: " + it->second);
        }
    };
    c.weights = {rat("tau1", Rat(1)), rat("tau2", Rat(1))};
    if (kv.count("rho1") != kv.count("rho2"))
        throw ConfigError("config: rho1 and rho2 must be given together");
    if (kv.count("rho1")) c.rho_override = ExponentPair{rat("rho1", Rat(0)), rat("rho2", Rat(0))};
    c.N_min = integer("N_min", c.N_min);
    c.max_level = integer("max_level", c.max_level);
    c.window = {{rat("window_center1", Rat(1, 2)), rat("window_center2", Rat(1, 2))},
                {rat("window_halfwidth1", Rat(1, 2)), rat("window_halfwidth2", Rat(1, 2))}};
    c.root_region = {{rat("root_center1", Rat(41, 128)), rat("root_center2", Rat(59, 128))},
                     {rat("root_halfwidth1", Rat(1, 128)), rat("root_halfwidth2", Rat(1, 128))}};
    c.epsilon = rat("epsilon", c.epsilon);
    c.seed = integer("seed", c.seed);
    c.samples = integer("samples", c.samples);
    auto it = kv.find("output_dir");
    if (it != kv.end()) c.output_dir = it->second;
    static const char* known[] = {"tau1",         "tau2",
                                  "rho1",         "rho2",
                                  "N_min",        "max_level",
                                  "window_center1",    "window_center2",
                                  "window_halfwidth1", "window_halfwidth2",
                                  "root_center1",      "root_center2",
                                  "root_halfwidth1",   "root_halfwidth2",
                                  "epsilon",      "seed",
                                  "samples",      "output_dir"};
    for (const auto& [k, v] : kv) {
        bool ok = false;
        for (const char* name : known) ok = ok || k == name;
        if (!ok) throw ConfigError("config: unknown key " + k);
    }
    if (c.epsilon <= 0) throw ConfigError("config: epsilon must be positive");
    if (c.max_level < 1) throw ConfigError("config: max_level must be at least 1");
    if (c.seed < 0) throw ConfigError("config: seed must be nonnegative");
    return c;
}

inline RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open " + path);
    return config_from_map(parse_kv_file(in));
}

// Resolve the full parameter set from a config (exponent selection, base
// selection, validation).
inline ConstructionParams resolve_params(const RunConfig& c) {
    c.weights.validate();
    ExponentPair e = c.rho_override ? *c.rho_override : choose_exponents(c.weights);
    e.validate(c.weights);
    auto [N, t] = choose_base(e, c.N_min);
    ConstructionParams P{c.weights, e, N, t};
    P.validate();
    return P;
}

// ---- JSON rendering ----

inline nlohmann::json json_rat(const Rat& r) { return rat_str(r); }

inline nlohmann::json json_point(const RatPoint& p) {
    return nlohmann::json::array({p.p1.get_str(), p.p2.get_str(), p.q.get_str()});
}

inline nlohmann::json json_rect(const RatRect& r) {
    return {{"center", {json_rat(r.center.x1), json_rat(r.center.x2)}},
            {"halfwidth", {json_rat(r.halfwidth.x1), json_rat(r.halfwidth.x2)}}};
}

inline nlohmann::json json_line(const Line& l) {
    return {{"a", json_rat(l.a)}, {"b", json_rat(l.b)}, {"c", json_rat(l.c)}};
}

inline nlohmann::json export_levels(const LevelState& state) {
    nlohmann::json slabs = nlohmann::json::array();
    for (const auto& s : state.removed)
        slabs.push_back({{"level", s.level},
                         {"line", json_line(s.line)},
                         {"host", json_rect(s.host)},
                         {"delta", {json_rat(s.delta.x1), json_rat(s.delta.x2)}}});
    nlohmann::json leading = nlohmann::json::array();
    for (const auto& lr : leading_rationals(state))
        leading.push_back({{"point", json_point(lr.point)}, {"level", lr.level}});
    return {{"depth", state.level},
            {"window", json_rect(state.window)},
            {"removed_slabs", slabs},
            {"leading_rationals", leading}};
}

inline nlohmann::json export_tree(const MassTree& tree) {
    nlohmann::json nodes = nlohmann::json::array();
    std::vector<long> layer_base{0};
    for (const auto& layer : tree.layers)
        layer_base.push_back(layer_base.back() + static_cast<long>(layer.size()));
    for (size_t n = 0; n < tree.layers.size(); ++n)
        for (const auto& v : tree.layers[n]) {
            long parent_index = v.parent < 0 ? -1 : layer_base[n - 1] + v.parent;
            nodes.push_back({{"center", json_point(v.center)},
                             {"level", v.layer},
                             {"mass", json_rat(v.mass)},
                             {"parent_index", parent_index}});
        }
    nlohmann::json layers = nlohmann::json::array();
    for (size_t n = 0; n < tree.layers.size(); ++n) {
        Rat total = 0;
        for (const auto& v : tree.layers[n]) total += v.mass;
        layers.push_back({{"layer", n},
                          {"node_count", tree.layers[n].size()},
                          {"mass_checksum", json_rat(total)}});
    }
    nlohmann::json gs = nlohmann::json::array();
    for (const auto& g : tree.G_sequence) gs.push_back(g.get_str());
    return {{"epsilon", json_rat(tree.epsilon)},
            {"root_region", json_rect(tree.B)},
            {"G_sequence", gs},
            {"layers", layers},
            {"nodes", nodes}};
}

inline nlohmann::json export_ledger(const std::vector<LedgerRow>& rows) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& r : rows)
        out.push_back({{"level", r.level},
                       {"removed_exact", json_rat(r.removed_exact)},
                       {"paper_bound", json_rat(r.paper_bound)}});
    return out;
}

inline void write_json(const std::string& path, const nlohmann::json& j) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << j.dump(2) << "\n";
}

// Decimal rendering for plot files: 12 significant digits.
inline std::string decimal12(const Rat& r) {
    std::ostringstream os;
    os.precision(12);
    os << r.get_d();
    return os.str();
}

inline void write_mass_samples_csv(const std::string& path, const std::vector<MassSample>& data) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "sample_id,x1,x2,r,mu_upper,x1_exact,x2_exact,r_exact,mu_upper_exact\n";
    for (const auto& s : data)
        out << s.sample_id << ',' << decimal12(s.center.x1) << ',' << decimal12(s.center.x2) << ','
            << decimal12(s.radius) << ',' << decimal12(s.mu_upper) << ',' << rat_str(s.center.x1)
            << ',' << rat_str(s.center.x2) << ',' << rat_str(s.radius) << ','
            << rat_str(s.mu_upper) << '\n';
}

inline void write_layer_outlines_csv(const std::string& path, const MassTree& tree) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "layer,node,lo1,hi1,lo2,hi2\n";
    for (size_t n = 0; n < tree.layers.size(); ++n)
        for (size_t i = 0; i < tree.layers[n].size(); ++i) {
            RealRect r = node_shrink(tree.params, tree.layers[n][i]);
            auto b1 = r.center.x1.enclosure(64);
            auto b2 = r.center.x2.enclosure(64);
            auto h1 = r.halfwidth.x1.enclosure(64);
            auto h2 = r.halfwidth.x2.enclosure(64);
            out << n << ',' << i << ',' << decimal12(Rat(b1.first - h1.second)) << ','
                << decimal12(Rat(b1.second + h1.second)) << ','
                << decimal12(Rat(b2.first - h2.second)) << ','
                << decimal12(Rat(b2.second + h2.second)) << '\n';
        }
}

inline void write_ledger_csv(const std::string& path, const std::vector<LedgerRow>& rows) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "level,removed_exact,paper_bound\n";
    for (const auto& r : rows)
        out << r.level << ',' << rat_str(r.removed_exact) << ',' << rat_str(r.paper_bound) << '\n';
}

}  // namespace badapprox
