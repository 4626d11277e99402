#include <doctest.h>

#include <fstream>
#include <sstream>

#include "cli.hpp"

using namespace toeplitz;
using namespace toeplitz::cli;

namespace {

std::string field_of(const RunConfig& c) {
    try {
        c.validate();
    } catch (const ConfigError& e) {
        return e.field;
    }
    return "";
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::stringstream s;
    s << f.rdbuf();
    return s.str();
}

RunConfig base(const std::string& dir) {
    RunConfig c;
    c.u = {{1, "1"}};
    c.out = (std::filesystem::temp_directory_path() / dir).string();
    std::filesystem::remove_all(c.out);
    return c;
}

}  // namespace

TEST_CASE("config validation names the offending field") {
    RunConfig c = base("tz_cli_cfg");
    CHECK(field_of(c) == "");
    c.M = 2;
    CHECK(field_of(c) == "M");
    c.M = 6;
    c.half_width = 9;
    CHECK(field_of(c) == "half_width");
    c.half_width = 0;
    c.u[1] = "0";
    CHECK(field_of(c) == "u.1");
    c.u[1] = "0.5";
    CHECK(field_of(c) == "u.1");
    c.u[1] = "1/2";
    c.self_dual = false;
    CHECK(field_of(c) == "u.-1");
    c.u[-1] = "3";
    CHECK(field_of(c) == "");
    c.u[2] = "1";
    CHECK(field_of(c) == "u.2");
}

TEST_CASE("config from JSON") {
    auto c = RunConfig::from_json(nlohmann::json::parse(
        R"({"mode": "general", "N": 2, "n": 1, "u": {"1": "1/2", "2": "3", "-2": -1}, "M": 4, "seed": 9})"));
    CHECK_FALSE(c.self_dual);
    CHECK(c.N == 2);
    CHECK(c.u.at(-2) == "-1");
    CHECK(c.window() == 10);
    CHECK(c.spec().u_at(1) == frac(1, 2));
    CHECK(RunConfig::from_json(c.to_json()).to_json() == c.to_json());

    auto field = [](const char* text) {
        try {
            RunConfig::from_json(nlohmann::json::parse(text));
        } catch (const ConfigError& e) {
            return e.field;
        }
        return std::string();
    };
    CHECK(field(R"({"u": {"1": 0.5}})") == "u.1");
    CHECK(field(R"({"u": {"x": "1"}})") == "u.x");
    CHECK(field(R"({"mode": "dual"})") == "mode");
    CHECK(field(R"({"colour": 1})") == "colour");
    CHECK(field(R"([1])") == "$");
}

TEST_CASE("gamma command: canonical dump and deterministic artifacts") {
    RunConfig c = base("tz_cli_gamma");
    Report r = cmd_gamma(c);
    CHECK(r.pass());
    const std::string first = slurp(std::filesystem::path(c.out) / "gamma.json");
    CHECK(cmd_gamma(c).pass());
    CHECK(slurp(std::filesystem::path(c.out) / "gamma.json") == first);
    auto j = nlohmann::json::parse(first);
    CHECK(j["sites"].size() == 5);
    // Gamma_0 = u1 (1 - x_0^2)(x_1 + x_{-1}) with u1 = 1
    auto g0 = symbolic_gamma(1, true, 0).gamma;
    auto want = (1 - MultiPoly::variable(x_var(0)) * MultiPoly::variable(x_var(0))) *
                (MultiPoly::variable(x_var(1)) + MultiPoly::variable(x_var(-1))) * MultiPoly::variable(u_var(1));
    CHECK(g0 == want);
    CHECK(j["sites"][2]["symbolic"] == g0.str());
}

TEST_CASE("confine command records a_+ and a_-") {
    RunConfig c = base("tz_cli_confine");
    c.M = 5;
    CHECK(cmd_confine(c).pass());
    auto j = nlohmann::json::parse(slurp(std::filesystem::path(c.out) / "confine.json"));
    CHECK(j["solution"]["restricted"][param_ap().name()] == "-1/4");
    CHECK(j["solution"]["restricted"][param_am().name()] == "1/4");
    CHECK(j["report"]["status"] == "pass");
}

TEST_CASE("verify command writes both traces") {
    RunConfig c = base("tz_cli_verify");
    c.M = 5;
    CHECK(cmd_verify(c).pass());
    const auto dir = std::filesystem::path(c.out);
    CHECK(slurp(dir / "trace_exact.csv").rfind("step,k,field,valuation", 0) == 0);
    CHECK(slurp(dir / "trace_numeric.csv").find(",0,x,") != std::string::npos);
}

TEST_CASE("appendix command") {
    RunConfig c = base("tz_cli_appendix");
    c.N = 3;
    c.u = {{3, "1"}};
    Report r = cmd_appendix(c);
    CHECK(r.pass());
    bool l81 = false, p82 = false;
    for (const auto& k : r.checks) l81 = l81 || k.claim == "L8.1", p82 = p82 || k.claim == "P8.2";
    CHECK(l81);
    CHECK(p82);
}

TEST_CASE("acceptance criteria are numbered 1 to 12") {
    const auto& a = acceptance_criteria();
    REQUIRE(a.size() == 12);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].id == int(i) + 1);
    auto r = run_criterion(a[8]);
    CHECK(r.pass());
}
