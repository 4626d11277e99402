#include <doctest.h>

#include <set>

#include "toeplitz/confine/confine.hpp"

using namespace toeplitz;

namespace {

std::string failures(const Report& r) {
    std::string s;
    for (const auto& c : r.checks)
        if (!c.pass) s += c.claim + " " + c.name + " [" + c.detail.substr(0, 200) + "]\n";
    return s;
}

const Check* find(const Report& r, const std::string& claim, const std::string& part) {
    for (const auto& c : r.checks)
        if (c.claim == claim && c.name.find(part) != std::string::npos) return &c;
    return nullptr;
}

RecursionSpec spec_for(int N, bool sd, int n) {
    RecursionSpec s{N, sd, n, {}};
    for (int i = 1; i <= N; ++i) {
        s.u[i] = frac(i + 1, 3);
        if (!sd) s.u[-i] = frac(-2 * i - 1, 5);
    }
    return s;
}

}  // namespace

TEST_CASE("plans cover every balance parameter once") {
    for (bool sd : {true, false})
        for (int N : {1, 2, 3}) {
            const int W = 2 * N + 5;
            auto p = make_plan(N, sd, 0, W);
            std::set<VarId> seen(p.free.begin(), p.free.end());
            std::size_t count = p.free.size();
            for (const auto& s : p.steps) {
                CHECK(s.equations.size() == s.unknowns.size());
                for (VarId v : s.unknowns) seen.insert(v), ++count;
            }
            CHECK(seen.size() == count);
            // Regular sites carry a_k (and b_k); the pole adds a_±, and a in general.
            std::size_t want = sd ? 2 * W - 2 + 2 : 2 * (2 * W - 2) + 2 + 3;
            CHECK(count == want);
        }
    auto p = make_plan(2, false, 0, 9);
    CHECK(p.redundant.size() == 1);
    CHECK(p.rewrite.count(param_a(1)) == 1);
    CHECK_THROWS_AS(make_plan(2, true, 0, 4), std::invalid_argument);
}

TEST_CASE("closed form of a_+ and a_- for the self-dual N=1 recursion") {
    for (int n : {-2, 0, 3})
        for (Rational u1 : {Rational(1), frac(2, 3)}) {
            CAPTURE(n);
            RecursionSpec spec{1, true, n, {{1, u1}}};
            RestrictOptions o;
            o.half_width = 5;
            o.stop_after = "(5)";
            auto r = restrict_parameters(spec, o);
            CHECK(failures(r.report) == "");
            CHECK(r.values.at(param_ap()) == MultiRat(Rational(-(n + 1)) / (4 * u1)));
            CHECK(r.values.at(param_am()) == MultiRat(Rational(-(n - 1)) / (4 * u1)));
            CHECK(find(r.report, "R5.2", "a_+") != nullptr);
        }
}

TEST_CASE("reflected singularity of the self-dual N=1 recursion") {
    // Γ_0 has no k x_k term, so a pole at n = 3 forces x_{-2} = eps.
    RecursionSpec spec{1, true, 3, {{1, frac(2, 3)}}};
    RestrictOptions o;
    o.half_width = 6;
    CHECK_THROWS_AS(restrict_parameters(spec, o), SingularLeadingCoefficient);
}

TEST_CASE("pole structure of Gamma_n and supports of the conditions") {
    for (bool sd : {true, false})
        for (int N : {1, 2}) {
            CAPTURE(sd);
            CAPTURE(N);
            auto r = check_pole_structure(N, sd, 0);
            CHECK(failures(r) == "");
            CHECK(r.checks.size() >= (sd ? 4u : 8u));
            auto s = check_condition_supports(N, sd, 0);
            CHECK(failures(s) == "");
        }
    auto g = check_pole_structure(1, false, 2);
    CHECK(find(g, "P4.2", "two-way") != nullptr);
    CHECK(failures(g) == "");
}

TEST_CASE("tangency propagates through the restricted balance") {
    const int M = 6;
    for (bool sd : {true, false})
        for (int N : {1, 2}) {
            CAPTURE(sd);
            CAPTURE(N);
            RecursionSpec spec = spec_for(N, sd, 0);
            RestrictOptions o;
            o.half_width = 2 * N + 8;
            o.fixed = random_free_values(make_plan(N, sd, 0, o.half_width), 7);
            auto r = restrict_parameters(spec, o);
            CHECK(failures(r.report) == "");
            auto p = check_tangency_propagation(r, M);
            CHECK(failures(p) == "");
            if (!sd) {
                CHECK(find(r.report, "L6.3", "equals A") != nullptr);
                CHECK(find(r.report, "L6.4", "det A") != nullptr);
                CHECK(find(r.report, "P4.3", "vanishes without") != nullptr);
            }
            if (!sd && N == 2) CHECK(find(r.report, "P6.5", "free of a_{3}") != nullptr);
        }
}

TEST_CASE("restriction with symbolic free parameters") {
    RecursionSpec spec = spec_for(1, false, 0);
    RestrictOptions o;
    o.half_width = 6;
    auto r = restrict_parameters(spec, o);
    CHECK(failures(r.report) == "");
    CHECK(r.values.at(param_am()) == MultiRat(frac(3, 2)));
    CHECK(failures(check_tangency_propagation(r, 4)) == "");
}

TEST_CASE("confined solutions") {
    for (bool sd : {true, false}) {
        CAPTURE(sd);
        RecursionSpec spec = spec_for(1, sd, 0);
        ConfineOptions o;
        o.M = 5;
        auto c = build_confined(spec, o);
        auto r = verify_confinement(c);
        CHECK(failures(r) == "");
        CHECK(c.free_parameter_count() == (sd ? 2 : 4));
        CHECK(c.x.at(0).valuation() == -1);
        CHECK(find(r, "T7.1", "forward iteration") != nullptr);
        auto j = c.to_json();
        CHECK(j["free_parameters"] == (sd ? 2 : 4));
    }
}

TEST_CASE("confined solution away from the origin, self-dual N=2") {
    ConfineOptions o;
    o.M = 4;
    o.alpha = {{-4, frac(1, 3)}, {-3, frac(-2, 5)}, {-2, frac(3, 7)}};
    auto c = build_confined(spec_for(2, true, 0), o);
    auto r = verify_confinement(c);
    CHECK(failures(r) == "");
    CHECK(c.free_parameter_count() == 4);
    CHECK(c.alpha.at(-3) == frac(-2, 5));
}
