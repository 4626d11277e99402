#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "toeplitz/verify/verify.hpp"

namespace toeplitz::cli {

// Invalid configuration; `field` is a JSON-style path such as "u.-2".
struct ConfigError : std::runtime_error {
    ConfigError(std::string field, const std::string& what)
        : std::runtime_error(field + ": " + what), field(std::move(field)) {}
    std::string field;
};

struct RunConfig {
    bool self_dual = true;
    int N = 1;
    int n = 0;
    std::map<int, std::string> u;  // exact rationals "p/q"
    int M = 6;
    int half_width = 0;  // 0: 2N + M + 2
    unsigned seed = 1;
    std::string out;     // artifact directory; empty: $TOEPLITZ_ARTIFACT_DIR, then "artifacts"
    // per-command extras
    bool dump = false;        // gamma: print canonical text
    bool symbolic = false;    // restrict: keep free parameters symbolic
    int steps = 4;            // verify: forward steps
    std::string lambda = "1/1000";
    std::map<int, std::string> alpha, beta;

    int window() const { return half_width > 0 ? half_width : 2 * N + M + 2; }
    RecursionSpec spec() const;  // requires validate()
    void validate() const;       // throws ConfigError
    nlohmann::json to_json() const;
    static RunConfig from_json(const nlohmann::json& j);  // throws ConfigError
};

Rational parse_field(const std::string& field, const std::string& text);
std::filesystem::path artifact_dir(const RunConfig& c);

// Writes `text` under the artifact directory and returns the path.
std::filesystem::path write_artifact(const RunConfig& c, const std::string& name, const std::string& text);

// Subcommands return a report; artifacts are written as a side effect.
Report cmd_gamma(const RunConfig& c);
Report cmd_balance(const RunConfig& c);
Report cmd_restrict(const RunConfig& c);
Report cmd_confine(const RunConfig& c);
Report cmd_verify(const RunConfig& c);
Report cmd_appendix(const RunConfig& c);

// The acceptance suite: one entry per criterion.
struct Criterion {
    int id;
    std::string title;
    std::function<Report()> run;
};
const std::vector<Criterion>& acceptance_criteria();

struct CriterionResult {
    int id;
    std::string title;
    Report report;
    std::string error;  // set when the run threw
    double seconds = 0;
    bool pass() const { return error.empty() && report.pass() && !report.checks.empty(); }
};
CriterionResult run_criterion(const Criterion& c);

Report cmd_all(const RunConfig& c);

}  // namespace toeplitz::cli
