#include <doctest.h>

#include "toeplitz/verify/verify.hpp"

using namespace toeplitz;

namespace {

RecursionSpec sd1(int n = 0) { return RecursionSpec{1, true, n, {{1, frac(2, 3)}}}; }

}  // namespace

TEST_CASE("report aggregation") {
    Report empty;
    auto j = emit_report(empty);
    CHECK(j["status"] == "pass");
    CHECK(j["summary"]["checks"] == 0);
    CHECK(j["summary"]["claims_not_run"] == j["claims"].size());
    CHECK(report_status(empty) == 0);

    Report one;
    one.add("P2.1", "sigma is an involution", true, "");
    j = emit_report(one);
    CHECK(j["claims"][0]["claim"] == "P2.1");
    CHECK(j["claims"][0]["status"] == "pass");
    CHECK(j["summary"]["claims_passed"] == 1);
    CHECK(report_status(one) == 0);

    one.add("X9.9", "injected", false, "forced");
    j = emit_report(one);
    CHECK(j["status"] == "fail");
    CHECK(j["claims"].back()["claim"] == "X9.9");
    CHECK(report_status(one) == 1);
}

TEST_CASE("pole threshold") {
    CHECK(pole_threshold(frac(1, 1000)) == 32);
    CHECK(pole_threshold(frac(1, 100)) == 10);
    CHECK(pole_threshold(Rational(4)) == 1);
    CHECK_THROWS_AS(pole_threshold(Rational(0)), std::invalid_argument);
}

TEST_CASE("numeric iteration from a generic seed") {
    RecursionSpec g{1, false, 0, {{1, frac(2, 3)}, {-1, frac(-3, 5)}}};
    SiteValues<Rational> seed;
    seed.x = {{-2, frac(1, 3)}, {-1, frac(-2, 7)}};
    seed.y = {{-2, frac(3, 11)}, {-1, frac(1, 5)}};
    auto t = iterate_numeric(g, seed, 4, Rational(1000));
    CHECK(t.events.empty());
    CHECK(t.nx.size() == 6);
    CHECK(t.ny.size() == 6);
    CHECK(t.csv().rfind("step,k,field,numerator_digits", 0) == 0);
    // identical input, identical trace
    CHECK(t.to_json() == iterate_numeric(g, seed, 4, Rational(1000)).to_json());
}

TEST_CASE("singular and degenerate seeds") {
    SiteValues<Rational> seed;
    seed.x = {{-2, frac(1, 3)}, {-1, Rational(1)}};  // v_{-1} = 0
    CHECK_THROWS_AS(iterate_numeric(sd1(), seed, 1, Rational(10)), SingularStep);
    seed.x = {{-2, Rational(0)}, {-1, Rational(0)}};
    CHECK_THROWS_AS(iterate_numeric(sd1(), seed, 1, Rational(10)), DegenerateParameters);
    seed.x = {{-2, Rational(1)}};
    CHECK_THROWS_AS(iterate_numeric(sd1(), seed, 1, Rational(10)), std::invalid_argument);
}

TEST_CASE("exact lambda trace matches the confined valuations") {
    ConfineOptions o;
    o.M = 5;
    auto c = build_confined(sd1(), o);
    SiteValues<LSeries> seed;
    const MultiRat eps(1);
    for (int k : {-2, -1}) seed.x[k] = c.x.at(k).substitute(eps_var(), eps);
    auto t = iterate_exact(sd1(), seed, 4);
    CHECK(t.x.at(0).valuation() == -1);
    for (int k : {1, 2, 3}) CHECK(t.x.at(k).valuation() >= 0);
    REQUIRE(t.events.size() == 1);
    CHECK(t.events[0].k == 0);
    for (int k : {0, 1, 2}) CHECK(t.x.at(k).agrees_with(c.x.at(k).substitute(eps_var(), eps)));
    CHECK(t.csv().find("1,0,x,-1") != std::string::npos);
}

TEST_CASE("numeric shadow of a confined solution") {
    const Rational lam = frac(1, 1000);
    for (int eps : {1, -1})
        for (auto alpha : {frac(2, 7), frac(-3, 5)}) {
            CAPTURE(eps);
            const RecursionSpec spec = sd1();
            const int n = spec.n;
            // Exact over Q(λ): the plateau and x_{n-1} = eps + λ are exact in λ.
            SiteValues<MultiRat> fs;
            fs.x[n - 2] = MultiRat(alpha);
            fs.x[n - 1] = MultiRat(eps) + MultiRat::variable(lambda_var());
            auto exact = iterate_rational(spec, fs, 4);
            REQUIRE(exact.events.size() == 1);
            CHECK(exact.events[0].k == n);
            CHECK(exact.events[0].valuation == -1);

            SiteValues<Rational> ns;
            ns.x[n - 2] = alpha;
            ns.x[n - 1] = eps + lam;
            auto num = iterate_numeric(spec, ns, 4, pole_threshold(lam));
            for (const auto& [k, q] : num.nx) CHECK(exact.fx.at(k).evaluate({{lambda_var(), lam}}) == q);
            CHECK(abs(num.nx.at(n)) > 100);
            CHECK(abs(num.nx.at(n + 2)) < 10);
            CHECK(abs(num.nx.at(n + 3)) < 10);
            REQUIRE(num.events.size() == 1);
            CHECK(num.events[0].k == n);
            CHECK(num.events[0].returned);

            // The Laurent expansion of the Q(λ) trace is the λ-series trace.
            SiteValues<LSeries> ls;
            ls.x[n - 2] = LSeries::constant(MultiRat(alpha), kExact, SeriesVar::Lambda);
            ls.x[n - 1] = LSeries::constant(MultiRat(eps), kExact, SeriesVar::Lambda) +
                          LSeries::monomial(MultiRat(1), 1, kExact, SeriesVar::Lambda);
            auto series = iterate_exact(spec, ls, 4);
            for (const auto& [k, f] : exact.fx) {
                const LSeries& s = series.x.at(k);
                const int tr = std::min(s.trunc(), 6);
                CHECK(s.agrees_with(expand(f, lambda_var(), tr, SeriesVar::Lambda)));
            }
        }
}
