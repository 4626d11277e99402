#include "toeplitz/verify/verify.hpp"

namespace toeplitz {

namespace {

const std::vector<std::string>& known_claims() {
    static const std::vector<std::string> ids = {"P2.1", "P3.1", "P3.2", "P4.1", "P4.2", "P4.3", "P5.1",
                                                 "R5.2", "L6.2", "L6.3", "L6.4", "P6.5", "T7.1", "T1.1",
                                                 "T1.2", "L8.1", "P8.2"};
    return ids;
}

}  // namespace

nlohmann::json emit_report(const Report& all) {
    std::map<std::string, std::vector<const Check*>> by;
    for (const auto& c : all.checks) by[c.claim].push_back(&c);
    std::vector<std::string> order = known_claims();
    for (const auto& [id, v] : by)
        if (std::find(order.begin(), order.end(), id) == order.end()) order.push_back(id);

    nlohmann::json claims = nlohmann::json::array();
    int passed = 0, failed = 0, not_run = 0;
    for (const auto& id : order) {
        auto it = by.find(id);
        nlohmann::json e = {{"claim", id}};
        if (it == by.end()) {
            e["status"] = "not run";
            e["checks"] = nlohmann::json::array();
            ++not_run;
            claims.push_back(e);
            continue;
        }
        bool ok = true;
        auto checks = nlohmann::json::array();
        for (const Check* c : it->second) {
            ok = ok && c->pass;
            checks.push_back({{"name", c->name}, {"status", c->pass ? "pass" : "fail"}, {"detail", c->detail}});
        }
        e["status"] = ok ? "pass" : "fail";
        e["checks"] = checks;
        (ok ? passed : failed)++;
        claims.push_back(e);
    }
    nlohmann::json doc;
    doc["claims"] = claims;
    doc["summary"] = {{"checks", all.checks.size()}, {"claims_passed", passed}, {"claims_failed", failed},
                      {"claims_not_run", not_run}};
    doc["status"] = failed == 0 ? "pass" : "fail";
    return doc;
}

int report_status(const Report& all) { return all.pass() ? 0 : 1; }

}  // namespace toeplitz
