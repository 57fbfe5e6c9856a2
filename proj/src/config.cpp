#include "dsaqos/config.hpp"

#include <algorithm>
#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>

#include "dsaqos/errors.hpp"

namespace dsaqos {

namespace {

struct RawValue {
    std::string text;
    int line = 0;
};

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return {};
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
    std::istringstream in(s);
    std::vector<std::string> out;
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

double parse_double(const std::string& text, const std::string& field, int line) {
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (end != text.c_str() + text.size() || text.empty() || errno == ERANGE)
        throw ConfigError(field + ": '" + text + "' is not a number", line);
    return v;
}

long long parse_int(const std::string& text, const std::string& field, int line) {
    errno = 0;
    char* end = nullptr;
    const long long v = std::strtoll(text.c_str(), &end, 10);
    if (end != text.c_str() + text.size() || text.empty() || errno == ERANGE)
        throw ConfigError(field + ": '" + text + "' is not an integer", line);
    return v;
}

std::uint64_t parse_uint64(const std::string& text, const std::string& field, int line) {
    const long long v = parse_int(text, field, line);
    if (v < 0) throw ConfigError(field + ": must be nonnegative", line);
    return static_cast<std::uint64_t>(v);
}

std::vector<double> parse_double_list(const std::string& text, const std::string& field,
                                      int line) {
    std::vector<double> out;
    for (const auto& tok : split_ws(text)) out.push_back(parse_double(tok, field, line));
    if (out.empty()) throw ConfigError(field + ": expected at least one number", line);
    return out;
}

const std::map<std::string, std::set<std::string>> kSchema = {
    {"", {"version"}},
    {"system", {"W", "K", "c", "p_idle"}},
    {"arrivals", {"states", "transition", "values"}},
    {"qos", {"d_max"}},
    {"sweep", {"alphas", "algorithms"}},
    {"simulate", {"horizon", "seed", "warmup", "backlog_guard", "d_values"}},
};

class KeyTable {
public:
    void insert(const std::string& section, const std::string& key, RawValue v) {
        const int at = v.line;
        const auto schema_it = kSchema.find(section);
        if (schema_it == kSchema.end() || !schema_it->second.count(key))
            throw ConfigError(section.empty()
                                  ? "unknown key '" + key + "' before any section"
                                  : "unknown key '" + key + "' in section [" + section + "]",
                              at);
        if (!kv_.emplace(section + "." + key, std::move(v)).second)
            throw ConfigError("duplicate key '" + key + "'", at);
    }

    const RawValue* find(const std::string& section, const std::string& key) const {
        const auto it = kv_.find(section + "." + key);
        return it == kv_.end() ? nullptr : &it->second;
    }

    const RawValue& require(const std::string& section, const std::string& key) const {
        const auto* v = find(section, key);
        if (!v)
            throw ConfigError("missing required key '" + key + "' in section [" + section +
                              "]");
        return *v;
    }

private:
    std::map<std::string, RawValue> kv_;
};

}  // namespace

ExperimentConfig parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");

    KeyTable kv;
    std::set<std::string> sections_seen;
    std::string section;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("malformed section header '" + line + "'", lineno);
            section = trim(line.substr(1, line.size() - 2));
            if (!kSchema.count(section) || section.empty())
                throw ConfigError("unknown section [" + section + "]", lineno);
            if (!sections_seen.insert(section).second)
                throw ConfigError("duplicate section [" + section + "]", lineno);
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("expected 'key = value', got '" + line + "'", lineno);
        kv.insert(section, trim(line.substr(0, eq)), {trim(line.substr(eq + 1)), lineno});
    }

    const auto& ver = kv.require("", "version");
    if (parse_int(ver.text, "version", ver.line) != 1)
        throw ConfigError("version: only version 1 is understood, got '" + ver.text + "'",
                          ver.line);

    SystemParams params;
    {
        const auto& w = kv.require("system", "W");
        const auto& k = kv.require("system", "K");
        const auto& c = kv.require("system", "c");
        const auto& p = kv.require("system", "p_idle");
        params.W = static_cast<int>(parse_int(w.text, "system.W", w.line));
        params.K = static_cast<int>(parse_int(k.text, "system.K", k.line));
        params.c = parse_double(c.text, "system.c", c.line);
        params.p_idle = parse_double(p.text, "system.p_idle", p.line);
        try {
            params.validate();
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string("section [system]: ") + e.what(), w.line);
        }
    }

    const auto& trans = kv.require("arrivals", "transition");
    const auto& vals = kv.require("arrivals", "values");
    std::vector<std::vector<double>> transition;
    {
        std::string rows = trans.text;
        std::replace(rows.begin(), rows.end(), ';', '\n');
        std::istringstream in_rows(rows);
        std::string row;
        while (std::getline(in_rows, row)) {
            row = trim(row);
            if (row.empty())
                throw ConfigError("arrivals.transition: empty row (stray ';'?)", trans.line);
            transition.push_back(parse_double_list(row, "arrivals.transition", trans.line));
        }
    }
    std::vector<double> values = parse_double_list(vals.text, "arrivals.values", vals.line);
    if (const auto* st = kv.find("arrivals", "states")) {
        const long long m = parse_int(st->text, "arrivals.states", st->line);
        if (m != static_cast<long long>(values.size()))
            throw ConfigError("arrivals.states: declared " + st->text + " states but got " +
                              std::to_string(values.size()) + " values", st->line);
    }

    const auto& dm = kv.require("qos", "d_max");
    const double d_max = parse_double(dm.text, "qos.d_max", dm.line);
    if (!(d_max > 0.0)) throw ConfigError("qos.d_max: must be positive", dm.line);

    std::vector<double> sweep;
    std::vector<Algorithm> algorithms;
    if (sections_seen.count("sweep")) {
        const auto& alphas = kv.require("sweep", "alphas");
        sweep = parse_double_list(alphas.text, "sweep.alphas", alphas.line);
        for (std::size_t i = 0; i < sweep.size(); ++i) {
            if (!(sweep[i] > 0.0))
                throw ConfigError("sweep.alphas: factors must be positive", alphas.line);
            if (i > 0 && sweep[i] <= sweep[i - 1])
                throw ConfigError("sweep.alphas: factors must be strictly increasing",
                                  alphas.line);
        }
        const auto& algs = kv.require("sweep", "algorithms");
        for (const auto& tok : split_ws(algs.text)) {
            try {
                algorithms.push_back(algorithm_from_string(tok));
            } catch (const std::invalid_argument& e) {
                throw ConfigError(std::string("sweep.algorithms: ") + e.what(), algs.line);
            }
        }
        if (algorithms.empty())
            throw ConfigError("sweep.algorithms: expected at least one algorithm", algs.line);
        for (std::size_t i = 0; i < algorithms.size(); ++i)
            for (std::size_t j = i + 1; j < algorithms.size(); ++j)
                if (algorithms[i] == algorithms[j])
                    throw ConfigError(std::string("sweep.algorithms: '") +
                                      to_string(algorithms[i]) + "' listed twice", algs.line);
    }

    std::optional<SimConfig> sim;
    std::vector<double> sim_d_values;
    if (sections_seen.count("simulate")) {
        SimConfig sc;
        const auto& hz = kv.require("simulate", "horizon");
        const auto& sd = kv.require("simulate", "seed");
        sc.horizon = parse_uint64(hz.text, "simulate.horizon", hz.line);
        sc.seed = parse_uint64(sd.text, "simulate.seed", sd.line);
        sc.warmup = sc.horizon / 100;  // default: 1% of the horizon
        if (const auto* wu = kv.find("simulate", "warmup"))
            sc.warmup = parse_uint64(wu->text, "simulate.warmup", wu->line);
        if (const auto* bg = kv.find("simulate", "backlog_guard"))
            sc.backlog_guard = parse_double(bg->text, "simulate.backlog_guard", bg->line);
        try {
            sc.validate();
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string("section [simulate]: ") + e.what(), hz.line);
        }
        if (const auto* dv = kv.find("simulate", "d_values")) {
            sim_d_values = parse_double_list(dv->text, "simulate.d_values", dv->line);
            for (double d : sim_d_values)
                if (!(d >= 0.0))
                    throw ConfigError("simulate.d_values: thresholds must be nonnegative",
                                      dv->line);
        }
        sim = sc;
    }

    try {
        return ExperimentConfig{params,
                                MarkovArrivalProcess(std::move(transition), std::move(values)),
                                d_max,
                                std::move(sweep),
                                std::move(algorithms),
                                sim,
                                std::move(sim_d_values)};
    } catch (const std::invalid_argument& e) {
        throw ConfigError("section [arrivals]: " + std::string(e.what()), trans.line);
    }
}

}  // namespace dsaqos
