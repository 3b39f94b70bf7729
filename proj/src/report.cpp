#include "smale/report.hpp"

#include <fstream>
#include <stdexcept>

namespace smale {

CheckResult CheckResult::passed(std::string name, std::optional<double> observed,
                                std::optional<double> threshold) {
    CheckResult r;
    r.name = std::move(name);
    r.status = CheckStatus::pass;
    r.observed = observed;
    r.threshold = threshold;
    return r;
}

CheckResult CheckResult::failed(std::string name, std::optional<double> observed,
                                std::optional<double> threshold, std::string witness) {
    CheckResult r;
    r.name = std::move(name);
    r.status = CheckStatus::fail;
    r.observed = observed;
    r.threshold = threshold;
    r.witness = std::move(witness);
    return r;
}

CheckResult CheckResult::skip(std::string name, std::string reason) {
    CheckResult r;
    r.name = std::move(name);
    r.status = CheckStatus::skipped;
    r.reason = std::move(reason);
    return r;
}

bool VerificationReport::all_passed() const { return fail_count() == 0; }

long VerificationReport::fail_count() const {
    long n = 0;
    for (const auto& c : checks)
        if (c.status == CheckStatus::fail) ++n;
    return n;
}

Json VerificationReport::to_json() const {
    Json j;
    j["report_schema_version"] = kReportSchemaVersion;
    j["artifact_version"] = kArtifactVersion;
    j["suite"] = suite;
    j["config"] = config.to_json();
    Json arr = Json::array();
    for (const auto& c : checks) {
        Json e;
        e["name"] = c.name;
        e["status"] = c.status == CheckStatus::pass
                          ? "PASS"
                          : (c.status == CheckStatus::fail ? "FAIL" : "SKIPPED");
        if (c.observed) e["observed"] = *c.observed;
        if (c.threshold) e["threshold"] = *c.threshold;
        if (!c.witness.empty()) e["witness"] = c.witness;
        if (!c.reason.empty()) e["reason"] = c.reason;
        arr.push_back(e);
    }
    j["checks"] = arr;
    j["timings"] = Json{{"wall_seconds", wall_seconds}};
    return j;
}

void VerificationReport::write(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("report: cannot write " + path);
    out << to_json().dump(2) << "\n";
}

namespace {

void diff_rec(const Json& a, const Json& b, const std::string& path,
              std::vector<std::string>& out) {
    if (path == "/timings") return;
    if (a.type() != b.type()) {
        out.push_back(path + ": type differs");
        return;
    }
    if (a.is_object()) {
        for (auto it = a.begin(); it != a.end(); ++it) {
            const std::string sub = path + "/" + it.key();
            if (sub == "/timings") continue;
            if (!b.contains(it.key()))
                out.push_back(sub + ": missing on right");
            else
                diff_rec(it.value(), b.at(it.key()), sub, out);
        }
        for (auto it = b.begin(); it != b.end(); ++it)
            if (!a.contains(it.key()) && path + "/" + it.key() != "/timings")
                out.push_back(path + "/" + it.key() + ": missing on left");
        return;
    }
    if (a.is_array()) {
        if (a.size() != b.size()) {
            out.push_back(path + ": array length " + std::to_string(a.size()) + " vs " +
                          std::to_string(b.size()));
            return;
        }
        for (std::size_t i = 0; i < a.size(); ++i)
            diff_rec(a[i], b[i], path + "/" + std::to_string(i), out);
        return;
    }
    if (a != b) out.push_back(path + ": " + a.dump() + " vs " + b.dump());
}

}  // namespace

DiffResult compare_reports(const Json& a, const Json& b) {
    DiffResult r;
    if (a.value("report_schema_version", -1) != b.value("report_schema_version", -2)) {
        r.comparable = false;
        r.differences.push_back("report schema versions differ");
        return r;
    }
    diff_rec(a, b, "", r.differences);
    return r;
}

DiffResult compare_report_files(const std::string& pa, const std::string& pb) {
    auto load = [](const std::string& p) {
        std::ifstream in(p);
        if (!in) throw std::invalid_argument("diff: cannot open " + p);
        Json j;
        in >> j;  // throws nlohmann parse_error on corrupt input
        return j;
    };
    return compare_reports(load(pa), load(pb));
}

}  // namespace smale
