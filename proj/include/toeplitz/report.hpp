#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace toeplitz {

// One verified statement.  `claim` is a short key (e.g. "P3.1") grouping
// checks in the final document.
struct Check {
    std::string claim;
    std::string name;
    bool pass = false;
    std::string detail;
};

struct Report {
    std::vector<Check> checks;

    void add(std::string claim, std::string name, bool pass, std::string detail = {}) {
        checks.push_back({std::move(claim), std::move(name), pass, std::move(detail)});
    }
    void merge(const Report& o) { checks.insert(checks.end(), o.checks.begin(), o.checks.end()); }
    bool pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
    const Check* first_failure() const {
        for (const auto& c : checks)
            if (!c.pass) return &c;
        return nullptr;
    }
    nlohmann::json to_json() const {
        auto arr = nlohmann::json::array();
        for (const auto& c : checks)
            arr.push_back({{"claim", c.claim}, {"name", c.name}, {"status", c.pass ? "pass" : "fail"}, {"detail", c.detail}});
        return arr;
    }
};

}  // namespace toeplitz
