#include <doctest.h>

#include <random>

#include "toeplitz/errors.hpp"
#include "toeplitz/series/lseries.hpp"

using namespace toeplitz;

namespace {

MultiRat R(long p, long q = 1) { return MultiRat(frac(p, q)); }
MultiRat V(const char* s) { return MultiRat::variable(intern(s)); }
LSeries S(int start, std::vector<MultiRat> c, int trunc = kExact, SeriesVar v = SeriesVar::T) {
    return LSeries::from_coeffs(v, start, std::move(c), trunc);
}

LSeries random_series(std::mt19937& rng, int start, int len, int trunc) {
    std::uniform_int_distribution<int> d(-4, 4);
    std::vector<MultiRat> c;
    for (int i = 0; i < len; ++i) c.push_back(R(d(rng), 1 + std::abs(d(rng))) + (i % 2 ? V("a_{1}") * R(d(rng)) : MultiRat()));
    if (c[0].is_zero()) c[0] = R(1);
    return S(start, c, trunc);
}

}  // namespace

TEST_CASE("truncation propagation") {
    LSeries f = S(1, {R(1)}, 3), g = S(-1, {R(1)}, 2);
    LSeries h = f * g;
    CHECK(h.trunc() == 2);
    CHECK(h.valuation() == 0);
    CHECK(h.coeff(0) == R(1));
    CHECK(h.coeff(1).is_zero());
    CHECK_THROWS_AS(h.coeff(2), std::out_of_range);
    CHECK((f + g).trunc() == 2);
    LSeries p = S(-1, {R(1, 2)}, 4) * S(1, {R(2)}, 6);
    CHECK(p.coeff(0) == R(1));
    CHECK(p.trunc() == 5);
}

TEST_CASE("inversion") {
    LSeries inv = S(0, {R(1), R(1)}).invert(6);
    CHECK(inv.trunc() == 6);
    for (int i = 0; i < 6; ++i) CHECK(inv.coeff(i) == R(i % 2 ? -1 : 1));
    LSeries i2 = S(1, {R(2)}).invert();
    CHECK(i2.is_exact());
    CHECK(i2.valuation() == -1);
    CHECK(i2.coeff(-1) == R(1, 2));
    CHECK_THROWS_AS(LSeries::big_o(3).invert(), ZeroLeadingCoefficient);
}

TEST_CASE("differentiation") {
    LSeries f = S(0, {V("c"), V("a")});
    LSeries d = f.differentiate();
    CHECK(d.coeff(0) == V("a"));
    CHECK(S(-1, {R(1)}).differentiate().coeff(-2) == R(-1));
    CHECK(S(0, {R(1), R(1)}, 5).differentiate().trunc() == 4);
}

TEST_CASE("composition") {
    LSeries f = S(2, {R(1)});
    LSeries s = S(1, {R(1), R(1)}, kExact, SeriesVar::Lambda);
    LSeries c = compose(f, s);
    CHECK(c.variable() == SeriesVar::Lambda);
    CHECK(c.coeff(2) == R(1));
    CHECK(c.coeff(3) == R(2));
    CHECK(c.coeff(4) == R(1));
    LSeries c2 = compose(S(-1, {R(1)}), S(1, {R(2)}, kExact, SeriesVar::Lambda));
    CHECK(c2.valuation() == -1);
    CHECK(c2.coeff(-1) == R(1, 2));
    CHECK(c2.coeff(0).is_zero());
    CHECK_THROWS(compose(f, S(0, {R(1)}, kExact, SeriesVar::Lambda)));
}

TEST_CASE("reversion") {
    LSeries r = reverse(S(1, {R(1)}));
    CHECK(r.is_exact());
    CHECK(r.coeff(1) == R(1));
    LSeries r2 = reverse(S(1, {R(2), R(1)}, 8));
    CHECK(r2.trunc() == 8);
    CHECK(r2.coeff(1) == R(1, 2));
    CHECK(r2.coeff(2) == R(-1, 8));
    LSeries back = compose(S(1, {R(2), R(1)}, 8), r2);
    CHECK(back.agrees_with(S(1, {R(1)}, 8, SeriesVar::Lambda)));
    CHECK_THROWS_AS(reverse(S(2, {R(1)})), NotReversible);
    CHECK_THROWS_AS(reverse(LSeries::big_o(4)), NotReversible);
}

TEST_CASE("properties on random series") {
    std::mt19937 rng(3);
    for (int it = 0; it < 15; ++it) {
        LSeries f = random_series(rng, -1, 5, 4), g = random_series(rng, 0, 5, 5), h = random_series(rng, 1, 4, 6);
        CHECK((f * g).agrees_with(g * f));
        CHECK(((f * g) * h).agrees_with(f * (g * h)));
        LSeries one = f * f.invert();
        CHECK(one.agrees_with(LSeries::constant(R(1), one.trunc())));
        CHECK(one.trunc() == f.trunc() - f.valuation());
        CHECK((f * g).differentiate().agrees_with(f.differentiate() * g + f * g.differentiate()));
        CHECK((f * g).valuation() == f.valuation() + g.valuation());
        LSeries s = random_series(rng, 1, 5, 7);
        LSeries r = reverse(s);
        LSeries rl = compose(s, r);
        CHECK(rl.trunc() == 7);
        CHECK(rl.agrees_with(LSeries::monomial(R(1), 1, kExact, SeriesVar::Lambda)));
    }
}

TEST_CASE("implicit reparametrization inversion formulas") {
    VarId a = intern("a"), al = intern("alpha");
    MultiRat A = MultiRat::variable(a);
    MultiRat f1 = V("p_{0}") + V("p_{1}") * A + V("p_{2}") * A * A;
    MultiRat f2 = V("q_{0}") + V("q_{1}") * A + V("q_{2}") * A * A + V("q_{3}") * A * A * A;
    LSeries fam = S(0, {A, f1, f2}, 3);
    auto sol = implicit_reparam({fam}, {a}, {{a, MultiRat::variable(al)}});
    const LSeries& g = sol.at(a);
    CHECK(g.trunc() == 3);
    MultiRat F1 = f1.substitute(a, MultiRat::variable(al)), F2 = f2.substitute(a, MultiRat::variable(al));
    CHECK(g.coeff(0) == MultiRat::variable(al));
    CHECK(g.coeff(1) == -F1);
    CHECK(g.coeff(2) == F1 * F1.derivative(al) - F2);
    LSeries res = fam.substitute_series(sol);
    CHECK(res.agrees_with(LSeries::constant(MultiRat::variable(al), 3)));
    CHECK(res.trunc() == 3);
}

TEST_CASE("implicit reparametrization edge cases") {
    VarId a1 = intern("a_{1}"), a2 = intern("a_{2}");
    auto sol = implicit_reparam({LSeries::constant(V("a_{1}"), 5), LSeries::constant(V("a_{2}"), 5)}, {a1, a2},
                                {{a1, V("alpha_{1}")}, {a2, V("alpha_{2}")}});
    CHECK(sol.at(a1).agrees_with(LSeries::constant(V("alpha_{1}"), 5)));
    CHECK(sol.at(a2).trunc() == 5);
    CHECK_THROWS_AS(implicit_reparam({LSeries::constant(R(3), 5)}, {a1}), SingularJacobian);
}

TEST_CASE("jet reparametrization matches the symbolic one") {
    VarId d = intern("jd", VarKind::Jet, 4);
    MultiRat D = MultiRat::variable(d), al = V("alpha");
    MultiRat x = al + D;  // a = alpha + d
    LSeries fam = S(0, {D, x * x, x * x * x, MultiRat(1) / (x + 1)}, 4);
    auto sol = implicit_reparam({fam}, {d});
    LSeries res = fam.substitute_series(sol);
    CHECK(res.trunc() == 4);
    CHECK(res.agrees_with(LSeries::big_o(4)));
    CHECK(sol.at(d).coeff(1) == -al * al);
    CHECK(sol.at(d).coeff(2) == MultiRat(2) * al * al * al - al * al * al);
}

TEST_CASE("laurent expansion of rational functions") {
    VarId l = intern("lambda");
    MultiRat L = MultiRat::variable(l);
    LSeries e = expand(MultiRat(1) / (L * (1 - L)), l, 4, SeriesVar::Lambda);
    CHECK(e.valuation() == -1);
    for (int p = -1; p < 4; ++p) CHECK(e.coeff(p) == R(1));
    CHECK(e.trunc() == 4);
}

TEST_CASE("json rendering") {
    auto j = S(-1, {R(1, 2), V("a")}, 3).to_json();
    CHECK(j["variable"] == "t");
    CHECK(j["valuation"] == -1);
    CHECK(j["trunc"] == 3);
    CHECK(j["coeffs"][0] == "1/2");
}
