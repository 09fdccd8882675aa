#include "imedub/trace.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "json.hpp"

#include "imedub/config.hpp"
#include "imedub/errors.hpp"

namespace imedub {

namespace {

using nlohmann::json;
using ojson = nlohmann::ordered_json;

constexpr const char* kFormat = "imedub-trace";
constexpr int kVersion = 1;

ojson encode(double x) {
    if (std::isfinite(x)) return x;
    if (std::isnan(x)) return "nan";
    return x > 0 ? "inf" : "-inf";
}

double decode(const json& j) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "inf") return std::numeric_limits<double>::infinity();
        if (s == "-inf") return -std::numeric_limits<double>::infinity();
        if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    }
    throw InputError("expected a number, got " + j.dump());
}

ojson encode_decision(const StepRecord& rec) {
    ojson d;
    d["leader"] = rec.leader;
    d["best_mean"] = encode(rec.best_mean);
    d["candidates"] = rec.candidates;
    ojson index = ojson::array();
    for (double v : rec.index_values) index.push_back(encode(v));
    d["index"] = index;
    ojson arms = ojson::array();
    for (const auto& s : rec.arms) arms.push_back({s.arm, s.count, encode(s.mean)});
    d["arms"] = arms;
    return d;
}

StepRecord decode_decision(const json& d, std::uint64_t time, ArmIndex chosen) {
    StepRecord rec;
    rec.time = time;
    rec.chosen = chosen;
    rec.leader = d.at("leader").get<ArmIndex>();
    rec.best_mean = decode(d.at("best_mean"));
    rec.candidates = d.at("candidates").get<std::vector<ArmIndex>>();
    for (const auto& v : d.at("index")) rec.index_values.push_back(decode(v));
    for (const auto& a : d.at("arms")) {
        if (!a.is_array() || a.size() != 3) throw InputError("decision arm entry must be [arm, count, mean]");
        rec.arms.push_back({a[0].get<ArmIndex>(), a[1].get<std::uint64_t>(), decode(a[2])});
    }
    return rec;
}

}  // namespace

TraceWriter::TraceWriter(const std::filesystem::path& path, const TraceHeader& header) : out_(path) {
    if (!out_) throw IoError("cannot write trace file " + path.string());
    ojson h;
    h["format"] = kFormat;
    h["version"] = kVersion;
    h["policy"] = header.policy;
    h["run"] = header.run;
    h["seed"] = header.seed;
    h["family"] = family_to_json(header.family);
    h["means"] = header.means;
    h["arm_count"] = header.arm_count;
    ojson edges = ojson::array();
    for (auto [a, b] : header.edges) edges.push_back({a, b});
    h["edges"] = edges;
    out_ << h.dump() << '\n';
}

void TraceWriter::write(const TraceStep& step) {
    ojson j;
    j["t"] = step.time;
    j["arm"] = step.arm;
    j["reward"] = encode(step.reward);
    if (step.decision) j["decision"] = encode_decision(*step.decision);
    out_ << j.dump() << '\n';
    if (!out_) throw IoError("failed writing trace line");
}

Trace read_trace(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open trace file " + path.string());
    Trace trace;
    std::string line;
    std::size_t line_no = 0;
    try {
        if (!std::getline(in, line)) throw InputError("empty trace file");
        ++line_no;
        const json h = json::parse(line);
        if (h.value("format", "") != kFormat) throw InputError("not an imedub trace");
        if (h.value("version", 0) != kVersion) throw InputError("unsupported trace version");
        trace.header.policy = h.at("policy").get<std::string>();
        trace.header.run = h.at("run").get<std::size_t>();
        trace.header.seed = h.at("seed").get<std::uint64_t>();
        trace.header.family = family_from_json(h.at("family"), "family");
        trace.header.means = h.at("means").get<std::vector<double>>();
        trace.header.arm_count = h.at("arm_count").get<std::size_t>();
        for (const auto& e : h.at("edges")) trace.header.edges.emplace_back(e.at(0).get<ArmIndex>(), e.at(1).get<ArmIndex>());

        while (std::getline(in, line)) {
            ++line_no;
            if (line.empty()) continue;
            const json j = json::parse(line);
            TraceStep step;
            step.time = j.at("t").get<std::uint64_t>();
            step.arm = j.at("arm").get<ArmIndex>();
            step.reward = decode(j.at("reward"));
            if (auto it = j.find("decision"); it != j.end()) step.decision = decode_decision(*it, step.time, step.arm);
            trace.steps.push_back(std::move(step));
        }
    } catch (const json::exception& e) {
        throw InputError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    } catch (const ConfigError& e) {
        throw InputError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
    return trace;
}

std::string trace_file_name(std::string_view policy, std::size_t run) {
    std::string digits = std::to_string(run);
    if (digits.size() < 5) digits.insert(0, 5 - digits.size(), '0');
    return std::string(policy) + "_run" + digits + ".jsonl";
}

std::vector<ReplayMismatch> replay(const Trace& trace) {
    std::vector<ReplayMismatch> out;
    PullStats stats(trace.header.arm_count);
    for (const auto& step : trace.steps) {
        if (step.time != stats.time()) {
            out.push_back({step.time, "step time does not match the number of preceding pulls"});
        }
        if (step.decision) {
            const auto& rec = *step.decision;
            if (rec.best_mean != stats.best_mean()) out.push_back({step.time, "best mean differs"});
            for (const auto& s : rec.arms) {
                if (s.arm >= stats.arm_count()) {
                    out.push_back({step.time, "snapshot arm out of range"});
                    continue;
                }
                if (s.count != stats.count(s.arm)) {
                    out.push_back({step.time, "pull count of arm " + std::to_string(s.arm) + " differs"});
                }
                if (s.mean != stats.mean(s.arm)) {
                    out.push_back({step.time, "empirical mean of arm " + std::to_string(s.arm) + " differs"});
                }
            }
        }
        if (step.arm >= stats.arm_count()) {
            out.push_back({step.time, "pulled arm out of range"});
            continue;
        }
        stats.record(step.arm, step.reward);
    }
    return out;
}

TraceCheck check_trace(const std::filesystem::path& path) {
    const Trace trace = read_trace(path);
    TraceCheck result;
    result.path = path;
    result.policy = trace.header.policy;
    result.mismatches = replay(trace);

    UnimodalGraph graph = [&] {
        try {
            return UnimodalGraph(trace.header.arm_count, trace.header.edges);
        } catch (const ParameterError& e) {
            throw InputError(path.string() + ": bad graph in header: " + e.what());
        }
    }();
    const std::string run_id = path.filename().string();
    result.invariants_checked = trace.header.policy == to_string(PolicyKind::ImedUb);
    for (const auto& step : trace.steps) {
        if (!step.decision) continue;
        ++result.decisions;
        if (!result.invariants_checked) continue;
        auto found = check_step(*step.decision, graph, trace.header.family, run_id);
        result.violations.insert(result.violations.end(), found.begin(), found.end());
    }
    return result;
}

std::vector<TraceCheck> check_trace_dir(const std::filesystem::path& dir) {
    if (!std::filesystem::is_directory(dir)) throw IoError("not a directory: " + dir.string());
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".jsonl") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    std::vector<TraceCheck> out;
    for (const auto& f : files) out.push_back(check_trace(f));
    return out;
}

}  // namespace imedub
