#include "robcred/config.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace robcred {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

double parse_double(const std::string& s, const std::string& where) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw DataError("expected a number for " + where + ", got '" + s + "'");
    }
}

std::vector<double> parse_list(const std::string& s, const std::string& where) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_double(trim(item), where));
    if (out.empty()) throw DataError("empty list for " + where);
    return out;
}

const std::map<std::string, std::string>& section(const ConfigSections& cfg,
                                                  const std::string& name) {
    auto it = cfg.find(name);
    if (it == cfg.end()) throw DataError("missing [" + name + "] section");
    return it->second;
}

std::string require(const std::map<std::string, std::string>& sec,
                    const std::string& sec_name, const std::string& key) {
    auto it = sec.find(key);
    if (it == sec.end())
        throw DataError("missing key '" + key + "' in [" + sec_name + "]");
    return it->second;
}

ThetaMapped parse_mapped(const ConfigSections& cfg, const std::string& name) {
    const auto& sec = section(cfg, name);
    const std::string fam = require(sec, name, "family");
    ThetaMapped m;
    auto coef = sec.find("coef");
    if (coef != sec.end()) m.coef = parse_double(coef->second, name + ".coef");
    if (fam == "exp" || fam == "exponential") {
        m.family = Family::Exponential;
    } else if (fam == "pareto") {
        m.family = Family::Pareto;
        m.shape = parse_double(require(sec, name, "t"), name + ".t");
    } else if (fam == "lognormal") {
        m.family = Family::Lognormal;
        m.shape = parse_double(require(sec, name, "sigma"), name + ".sigma");
    } else if (fam == "loglogistic") {
        m.family = Family::LogLogistic;
        m.shape = parse_double(require(sec, name, "sigma"), name + ".sigma");
    } else {
        throw DataError("unknown family '" + fam + "' in [" + name + "]");
    }
    return m;
}

}  // namespace

ConfigSections parse_config(std::istream& in) {
    ConfigSections cfg;
    std::string line, current;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw DataError("unterminated section header", lineno);
            current = trim(line.substr(1, line.size() - 2));
            if (current.empty()) throw DataError("empty section name", lineno);
            cfg[current];  // register even if empty
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw DataError("expected 'key = value'", lineno);
        if (current.empty())
            throw DataError("key outside any [section]", lineno);
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw DataError("empty key", lineno);
        if (!cfg[current].emplace(key, value).second)
            throw DataError("duplicate key '" + key + "' in [" + current + "]",
                            lineno);
    }
    return cfg;
}

ConfigSections parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open config file '" + path + "'");
    return parse_config(in);
}

StudyConfig study_config_from(const ConfigSections& cfg) {
    StudyConfig sc;

    const auto& prior = section(cfg, "prior");
    const std::string pf = require(prior, "prior", "family");
    if (pf == "gamma") {
        sc.prior = PriorModel::gamma(
            parse_double(require(prior, "prior", "alpha"), "prior.alpha"),
            parse_double(require(prior, "prior", "beta"), "prior.beta"));
    } else if (pf == "normal") {
        sc.prior = PriorModel::normal(
            parse_double(require(prior, "prior", "mu"), "prior.mu"),
            parse_double(require(prior, "prior", "v2"), "prior.v2"));
    } else {
        throw DataError("unknown prior family '" + pf + "' (gamma|normal)");
    }

    sc.contamination.central = parse_mapped(cfg, "central");
    sc.contamination.contaminant = parse_mapped(cfg, "contaminant");

    if (auto it = cfg.find("grids"); it != cfg.end()) {
        const auto& grids = it->second;
        if (auto g = grids.find("q"); g != grids.end())
            sc.q_grid = parse_list(g->second, "grids.q");
        if (auto g = grids.find("epsilon"); g != grids.end())
            sc.epsilon_grid = parse_list(g->second, "grids.epsilon");
    }

    if (auto it = cfg.find("run"); it != cfg.end()) {
        const auto& run = it->second;
        auto get_int = [&](const char* key, int& dst) {
            if (auto g = run.find(key); g != run.end()) {
                const double v = parse_double(g->second, std::string("run.") + key);
                dst = static_cast<int>(v);
                if (dst != v || dst < 1)
                    throw DataError(std::string("run.") + key +
                                    " must be a positive integer");
            }
        };
        get_int("n", sc.n);
        get_int("N", sc.N);
        get_int("reps", sc.reps);
        if (auto g = run.find("p"); g != run.end())
            sc.p = parse_double(g->second, "run.p");
        if (auto g = run.find("seed"); g != run.end()) {
            try {
                sc.seed = std::stoull(g->second);
            } catch (const std::exception&) {
                throw DataError("run.seed must be a non-negative integer");
            }
        }
    }
    return sc;
}

}  // namespace robcred
