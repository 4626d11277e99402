#include <doctest.h>

#include "toeplitz/gamma/gamma.hpp"

using namespace toeplitz;

namespace {
MultiPoly X(int k) { return MultiPoly::variable(x_var(k)); }
MultiPoly Y(int k) { return MultiPoly::variable(y_var(k)); }
MultiPoly Uv(int i) { return MultiPoly::variable(u_var(i)); }

std::string failures(const Report& r) {
    std::string s;
    for (const auto& c : r.checks)
        if (!c.pass) s += c.name + " [" + c.detail + "]\n";
    return s;
}
}  // namespace

TEST_CASE("definition and vector-field constructions agree") {
    for (auto [N, sd] : {std::pair{1, false}, {2, false}, {1, true}, {2, true}, {3, true}}) {
        for (int k = -2; k <= 2; ++k) {
            CAPTURE(N);
            CAPTURE(sd);
            CAPTURE(k);
            const auto& a = symbolic_gamma(N, sd, k, GammaPath::VectorField);
            const auto& b = symbolic_gamma(N, sd, k, GammaPath::Definition);
            CHECK(a.gamma == b.gamma);
            CHECK(a.gamma_tilde == b.gamma_tilde);
        }
    }
}

TEST_CASE("N=1 closed forms") {
    for (int k : {-1, 0, 3}) {
        const auto& g = symbolic_gamma(1, false, k);
        MultiPoly vk = 1 - X(k) * Y(k);
        CHECK(g.gamma == k * X(k) + vk * (Uv(1) * X(k + 1) + Uv(-1) * X(k - 1)));
        CHECK(g.gamma_tilde == k * Y(k) + vk * (Uv(1) * Y(k - 1) + Uv(-1) * Y(k + 1)));
        const auto& s = symbolic_gamma(1, true, k);
        CHECK(s.gamma == k * X(k) + Uv(1) * (1 - X(k) * X(k)) * (X(k + 1) + X(k - 1)));
    }
}

TEST_CASE("duality maps Gamma to its dual") {
    for (int N : {1, 2})
        for (int k : {-1, 0, 2}) CHECK(sigma_poly(symbolic_gamma(N, false, k).gamma) == symbolic_gamma(N, false, k).gamma_tilde);
}

TEST_CASE("structure of Gamma_k") {
    for (auto [N, sd] : {std::pair{1, false}, {2, false}, {1, true}, {2, true}, {3, true}}) {
        for (int k : {0, 1}) {
            CAPTURE(N);
            CAPTURE(sd);
            CAPTURE(k);
            Report r = verify_gamma_structure(N, sd, k);
            CHECK_MESSAGE(r.pass(), failures(r));
        }
    }
}

TEST_CASE("build_gamma substitutes numeric u") {
    RecursionSpec spec{2, false, 0, {{1, Rational(1)}, {2, Rational(3)}, {-1, Rational(0)}, {-2, frac(1, 2)}}};
    spec.validate();
    GammaPair g = build_gamma(spec, 0);
    for (VarId v : g.gamma.variables()) CHECK_FALSE(detail::parse_u(v).has_value());
    CHECK(g.gamma.coefficient_of(x_var(2), 1) == 3 * (1 - X(0) * Y(0)) * (1 - X(1) * Y(1)));
}

TEST_CASE("RecursionSpec validation") {
    CHECK_THROWS_AS((RecursionSpec{1, true, 0, {{1, Rational(0)}}}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((RecursionSpec{1, true, 0, {{-1, Rational(1)}}}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((RecursionSpec{1, false, 0, {{1, Rational(1)}}}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((RecursionSpec{1, true, 0, {{2, Rational(1)}}}.validate()), std::invalid_argument);
    RecursionSpec s{2, false, 0, {{1, Rational(1)}, {2, Rational(2)}, {-2, Rational(5)}}};
    CHECK(s.sigma().u_at(-2) == 2);
    CHECK(s.sigma().u_at(2) == 5);
    CHECK(s.sigma().u_at(-1) == 1);
}

TEST_CASE("forward step, self-dual N=1") {
    RecursionSpec spec{1, true, 0, {{1, Rational(1)}}};
    SiteValues<Rational> vals;
    vals.x[-1] = frac(1, 3);
    vals.x[0] = frac(1, 2);
    forward_step(spec, 0, vals);
    // 0 = 0 + (1 - 1/4)(x_1 + 1/3)
    CHECK(vals.x.at(1) == frac(-1, 3));
    GammaPair g = build_gamma(spec, 0);
    CHECK(eval_sites(g.gamma, spec, vals, StepRing<Rational>::from) == 0);

    // continue a few steps; every solved Gamma vanishes
    for (int k = 1; k <= 3; ++k) {
        forward_step(spec, k, vals);
        CHECK(eval_sites(build_gamma(spec, k).gamma, spec, vals, StepRing<Rational>::from) == 0);
    }
}

TEST_CASE("forward step, general N=2 solves both equations") {
    RecursionSpec spec{2, false, 0, {{1, frac(1, 3)}, {2, Rational(1)}, {-1, Rational(2)}, {-2, frac(-1, 2)}}};
    SiteValues<Rational> vals;
    for (int j = -2; j <= 1; ++j) {
        vals.x[j] = frac(j + 5, 7);
        vals.y[j] = frac(2 * j - 1, 9);
    }
    forward_step(spec, 0, vals);
    auto g = build_gamma(spec, 0);
    CHECK(eval_sites(g.gamma, spec, vals, StepRing<Rational>::from) == 0);
    CHECK(eval_sites(g.gamma_tilde, spec, vals, StepRing<Rational>::from) == 0);
}

TEST_CASE("singular step") {
    RecursionSpec spec{1, true, 0, {{1, Rational(1)}}};
    SiteValues<Rational> vals;
    vals.x[-1] = frac(1, 3);
    vals.x[0] = Rational(1);
    CHECK_THROWS_AS(forward_step(spec, 0, vals), SingularStep);
    SiteValues<Rational> missing;
    missing.x[0] = frac(1, 2);
    CHECK_THROWS_AS(forward_step(spec, 0, missing), std::out_of_range);
}

TEST_CASE("forward step over series matches symbolic Gamma") {
    RecursionSpec spec{1, true, 0, {{1, Rational(1)}}};
    SiteValues<LSeries> vals;
    vals.x[-1] = LSeries::constant(MultiRat(frac(1, 3)), kExact, SeriesVar::T);
    vals.x[0] = LSeries::constant(MultiRat(frac(1, 2)), kExact, SeriesVar::T) +
                LSeries::monomial(MultiRat(1), 1, kExact, SeriesVar::T);
    forward_step_series(spec, 0, vals, SeriesVar::T);
    auto [G, Gt] = gamma_on_series(spec, vals, 0, false);
    CHECK(G.valuation() >= G.trunc());
    CHECK(G.trunc() >= 8);
}
