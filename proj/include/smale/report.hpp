#pragma once

#include <optional>
#include <string>
#include <vector>

#include "smale/config.hpp"

namespace smale {

inline constexpr const char* kArtifactVersion = "1.0.0";
inline constexpr int kReportSchemaVersion = 1;

enum class CheckStatus { pass, fail, skipped };

struct CheckResult {
    std::string name;
    CheckStatus status = CheckStatus::skipped;
    std::optional<double> observed;
    std::optional<double> threshold;
    std::string witness;  // enough to reproduce a FAIL in isolation
    std::string reason;   // for SKIPPED

    static CheckResult passed(std::string name, std::optional<double> observed = {},
                              std::optional<double> threshold = {});
    static CheckResult failed(std::string name, std::optional<double> observed,
                              std::optional<double> threshold, std::string witness);
    static CheckResult skip(std::string name, std::string reason);
};

struct VerificationReport {
    std::string suite;
    ExperimentConfig config;
    std::vector<CheckResult> checks;
    double wall_seconds = 0.0;

    bool all_passed() const;
    long fail_count() const;
    Json to_json() const;  // deterministic except the "timings" object
    void write(const std::string& path) const;
};

struct DiffResult {
    bool comparable = true;  // schema versions match and both parse
    std::vector<std::string> differences;
    bool empty() const { return comparable && differences.empty(); }
};

// field-level diff ignoring the timings subtree
DiffResult compare_reports(const Json& a, const Json& b);
DiffResult compare_report_files(const std::string& a, const std::string& b);

}  // namespace smale
