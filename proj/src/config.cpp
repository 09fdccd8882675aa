#include "imedub/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "imedub/errors.hpp"

namespace imedub {

namespace {

using nlohmann::json;

const json* find(const json& obj, const char* key) {
    auto it = obj.find(key);
    return it == obj.end() ? nullptr : &*it;
}

std::uint64_t as_uint(const json& j, const std::string& field) {
    if (!j.is_number_integer() || (j.is_number_integer() && !j.is_number_unsigned() && j.get<std::int64_t>() < 0)) {
        throw ConfigError(field, "expected a nonnegative integer");
    }
    return j.get<std::uint64_t>();
}

double as_double(const json& j, const std::string& field) {
    if (!j.is_number()) throw ConfigError(field, "expected a number");
    return j.get<double>();
}

bool as_bool(const json& j, const std::string& field) {
    if (!j.is_boolean()) throw ConfigError(field, "expected true or false");
    return j.get<bool>();
}

std::string as_string(const json& j, const std::string& field) {
    if (!j.is_string()) throw ConfigError(field, "expected a string");
    return j.get<std::string>();
}

PolicySpec parse_policy(const json& j, const std::string& field) {
    PolicySpec spec;
    const json* name = &j;
    if (j.is_object()) {
        name = find(j, "name");
        if (!name) throw ConfigError(field + ".name", "missing policy name");
    }
    const std::string name_field = j.is_object() ? field + ".name" : field;
    try {
        spec.kind = policy_kind_from_string(as_string(*name, name_field));
    } catch (const ParameterError& e) {
        throw ConfigError(name_field, e.what());
    }
    if (!j.is_object()) return spec;

    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string& key = it.key();
        const std::string sub = field + "." + key;
        if (key == "name") continue;
        if (spec.kind == PolicyKind::Osub && key == "gamma") {
            spec.osub.gamma = as_uint(*it, sub);
        } else if (spec.kind == PolicyKind::Osub && key == "c") {
            spec.osub.c = as_double(*it, sub);
            if (!(spec.osub.c >= 0.0)) throw ConfigError(sub, "must be nonnegative");
        } else if (spec.kind == PolicyKind::Uts && key == "leader_probability") {
            spec.uts.leader_probability = as_double(*it, sub);
            const double p = spec.uts.leader_probability;
            if (!(p >= 0.0 && p <= 1.0)) throw ConfigError(sub, "must lie in [0, 1]");
        } else {
            throw ConfigError(sub, "unknown parameter for policy " + spec.name());
        }
    }
    return spec;
}

GraphSpec parse_graph(const json& j) {
    GraphSpec spec;
    if (j.is_string()) {
        if (j.get<std::string>() != "line") throw ConfigError("graph", "expected \"line\" or an object");
        return spec;
    }
    if (!j.is_object()) throw ConfigError("graph", "expected \"line\" or an object");
    const json* type = find(j, "type");
    if (!type) throw ConfigError("graph.type", "missing");
    const std::string kind = as_string(*type, "graph.type");
    if (kind == "line") return spec;
    if (kind != "edges") throw ConfigError("graph.type", "expected \"line\" or \"edges\"");

    spec.line = false;
    const json* edges = find(j, "edges");
    if (!edges || !edges->is_array()) throw ConfigError("graph.edges", "expected an array of [a, b] pairs");
    for (std::size_t i = 0; i < edges->size(); ++i) {
        const std::string field = "graph.edges[" + std::to_string(i) + "]";
        const json& e = (*edges)[i];
        if (!e.is_array() || e.size() != 2) throw ConfigError(field, "expected [a, b]");
        spec.edges.emplace_back(as_uint(e[0], field + "[0]"), as_uint(e[1], field + "[1]"));
    }
    return spec;
}

GridSpec parse_grid(const json& j) {
    if (j.is_array()) {
        std::vector<std::uint64_t> points;
        for (std::size_t i = 0; i < j.size(); ++i) points.push_back(as_uint(j[i], "grid[" + std::to_string(i) + "]"));
        return points;
    }
    if (!j.is_object()) throw ConfigError("grid", "expected a list of time steps or {\"type\": \"log\", ...}");
    const json* type = find(j, "type");
    if (type && as_string(*type, "grid.type") != "log") throw ConfigError("grid.type", "only \"log\" is supported");
    LogGrid grid;
    if (const json* p = find(j, "points")) grid.points = as_uint(*p, "grid.points");
    if (grid.points < 2) throw ConfigError("grid.points", "need at least 2 points");
    return grid;
}

}  // namespace

nlohmann::ordered_json family_to_json(const Family& family) {
    nlohmann::ordered_json j;
    j["kind"] = std::string(to_string(family.kind));
    if (family.kind == FamilyKind::Gaussian) j["variance"] = family.variance;
    return j;
}

Family family_from_json(const json& j, const std::string& field) {
    const json* kind = &j;
    if (j.is_object()) {
        kind = find(j, "kind");
        if (!kind) throw ConfigError(field + ".kind", "missing");
    }
    const std::string kind_field = j.is_object() ? field + ".kind" : field;
    FamilyKind parsed;
    try {
        parsed = family_kind_from_string(as_string(*kind, kind_field));
    } catch (const ParameterError& e) {
        throw ConfigError(kind_field, e.what());
    }
    switch (parsed) {
        case FamilyKind::Bernoulli: return Family::bernoulli();
        case FamilyKind::Exponential: return Family::exponential();
        case FamilyKind::Gaussian: {
            double variance = 1.0;
            if (j.is_object()) {
                if (const json* v = find(j, "variance")) variance = as_double(*v, field + ".variance");
            }
            try {
                return Family::gaussian(variance);
            } catch (const ParameterError& e) {
                throw ConfigError(field + ".variance", e.what());
            }
        }
    }
    throw ConfigError(field, "unknown family");
}

ExperimentConfig parse_config(const json& doc) {
    if (!doc.is_object()) throw ConfigError("", "config must be a JSON object");
    static const std::vector<std::string> known = {"family", "means",  "graph",   "policies",         "horizon",
                                                   "runs",   "seed",   "grid",    "check_invariants", "traces",
                                                   "output_dir", "workers"};
    for (auto it = doc.begin(); it != doc.end(); ++it) {
        if (std::find(known.begin(), known.end(), it.key()) == known.end()) {
            throw ConfigError(it.key(), "unknown field");
        }
    }

    ExperimentConfig cfg;
    if (const json* f = find(doc, "family")) cfg.family = family_from_json(*f);

    const json* means = find(doc, "means");
    if (!means || !means->is_array() || means->empty()) throw ConfigError("means", "expected a nonempty array");
    for (std::size_t i = 0; i < means->size(); ++i) {
        cfg.means.push_back(as_double((*means)[i], "means[" + std::to_string(i) + "]"));
    }

    if (const json* g = find(doc, "graph")) cfg.graph = parse_graph(*g);

    if (const json* p = find(doc, "policies")) {
        if (!p->is_array() || p->empty()) throw ConfigError("policies", "expected a nonempty array");
        cfg.policies.clear();
        for (std::size_t i = 0; i < p->size(); ++i) {
            cfg.policies.push_back(parse_policy((*p)[i], "policies[" + std::to_string(i) + "]"));
        }
    }

    if (const json* v = find(doc, "horizon")) cfg.horizon = as_uint(*v, "horizon");
    if (const json* v = find(doc, "runs")) cfg.runs = as_uint(*v, "runs");
    if (const json* v = find(doc, "seed")) cfg.seed = as_uint(*v, "seed");
    if (const json* v = find(doc, "grid")) cfg.grid = parse_grid(*v);
    if (const json* v = find(doc, "traces")) cfg.traces = as_bool(*v, "traces");
    if (const json* v = find(doc, "check_invariants")) cfg.check_invariants = as_bool(*v, "check_invariants");
    if (const json* v = find(doc, "output_dir")) cfg.output_dir = as_string(*v, "output_dir");
    if (const json* v = find(doc, "workers")) cfg.workers = as_uint(*v, "workers");
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("", "cannot open config file " + path.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("", "invalid JSON in " + path.string() + ": " + e.what());
    }
    return parse_config(doc);
}

UnimodalGraph build_graph(const ExperimentConfig& cfg) {
    try {
        if (cfg.graph.line) return line_graph(cfg.means.size());
        return UnimodalGraph(cfg.means.size(), cfg.graph.edges);
    } catch (const ParameterError& e) {
        throw ConfigError("graph", e.what());
    }
}

BanditConfig build_bandit(const ExperimentConfig& cfg) {
    for (std::size_t i = 0; i < cfg.means.size(); ++i) {
        if (!expfam::in_domain(cfg.family, cfg.means[i])) {
            throw ConfigError("means[" + std::to_string(i) + "]", "outside the mean domain of " + describe(cfg.family));
        }
    }
    UnimodalGraph graph = build_graph(cfg);
    const auto report = graph.validate_unimodal(cfg.means);
    if (!report) throw ConfigError("means", "not unimodal with respect to the graph: " + report.message);
    return BanditConfig(cfg.family, cfg.means, std::move(graph));
}

std::vector<std::uint64_t> log_grid(std::uint64_t horizon, std::size_t points) {
    std::vector<std::uint64_t> out;
    if (horizon == 0) return out;
    const double top = std::log(static_cast<double>(horizon));
    for (std::size_t i = 0; i < points; ++i) {
        const double x = points == 1 ? top : top * static_cast<double>(i) / static_cast<double>(points - 1);
        auto t = static_cast<std::uint64_t>(std::llround(std::exp(x)));
        out.push_back(std::clamp<std::uint64_t>(t, 1, horizon));
    }
    out.push_back(horizon);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<std::uint64_t> resolve_grid(const GridSpec& grid, std::uint64_t horizon) {
    if (const auto* log = std::get_if<LogGrid>(&grid)) return log_grid(horizon, log->points);
    return std::get<std::vector<std::uint64_t>>(grid);
}

void validate(const ExperimentConfig& cfg) {
    if (cfg.runs < 1) throw ConfigError("runs", "must be at least 1");
    if (cfg.policies.empty()) throw ConfigError("policies", "need at least one policy");
    if (cfg.horizon < cfg.means.size()) {
        throw ConfigError("horizon", "must be at least the number of arms (" + std::to_string(cfg.means.size()) + ")");
    }
    const auto grid = resolve_grid(cfg.grid, cfg.horizon);
    if (grid.empty()) throw ConfigError("grid", "empty");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const std::string field = "grid[" + std::to_string(i) + "]";
        if (grid[i] < 1 || grid[i] > cfg.horizon) throw ConfigError(field, "outside [1, horizon]");
        if (i > 0 && grid[i] <= grid[i - 1]) throw ConfigError(field, "grid must be strictly increasing");
    }
    (void)build_bandit(cfg);
}

nlohmann::ordered_json canonical_json(const ExperimentConfig& cfg) {
    nlohmann::ordered_json j;
    j["family"] = family_to_json(cfg.family);
    j["means"] = cfg.means;
    if (cfg.graph.line) {
        j["graph"] = "line";
    } else {
        nlohmann::ordered_json g;
        g["type"] = "edges";
        g["edges"] = nlohmann::ordered_json::array();
        for (auto [a, b] : cfg.graph.edges) g["edges"].push_back({a, b});
        j["graph"] = g;
    }
    j["policies"] = nlohmann::ordered_json::array();
    for (const auto& p : cfg.policies) {
        nlohmann::ordered_json pj;
        pj["name"] = p.name();
        if (p.kind == PolicyKind::Osub) {
            if (p.osub.gamma) pj["gamma"] = *p.osub.gamma;
            pj["c"] = p.osub.c;
        }
        if (p.kind == PolicyKind::Uts) pj["leader_probability"] = p.uts.leader_probability;
        j["policies"].push_back(pj);
    }
    j["horizon"] = cfg.horizon;
    j["runs"] = cfg.runs;
    j["seed"] = cfg.seed;
    j["grid"] = resolve_grid(cfg.grid, cfg.horizon);
    return j;
}

std::string config_digest(const ExperimentConfig& cfg) {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char c : canonical_json(cfg).dump()) {
        hash ^= c;
        hash *= 0x100000001b3ULL;
    }
    std::ostringstream os;
    os << std::hex;
    os.width(16);
    os.fill('0');
    os << hash;
    return os.str();
}

}  // namespace imedub
