#include <doctest.h>

#include <random>

#include "toeplitz/flow/flow.hpp"

using namespace toeplitz;

namespace {

std::string failures(const Report& r) {
    std::string s;
    for (const auto& c : r.checks)
        if (!c.pass) s += c.claim + " " + c.name + " [" + c.detail + "]\n";
    return s;
}

// Fixed generic rationals for every parameter of a window around n.
std::map<VarId, MultiRat> numeric(int n, int W, bool sd) {
    std::map<VarId, MultiRat> m;
    std::mt19937 gen(20240601u + unsigned(n * 31 + W));
    std::uniform_int_distribution<int> num(-9, 9), den(2, 7);
    auto next = [&] {
        int a = num(gen);
        return MultiRat(frac(a == 0 ? 5 : a, den(gen)));
    };
    for (int k = n - W; k <= n + W; ++k) {
        if (std::abs(k - n) == 1 && sd) continue;
        m[param_a(k)] = next();
        if (!sd) m[param_b(k)] = next();
    }
    m[param_ap()] = next();
    m[param_am()] = next();
    if (!sd) m[param_a0()] = next();
    return m;
}

}  // namespace

TEST_CASE("flow right-hand side on trivial windows") {
    LatticeWindow<Rational> zero(-3, 3, false, Boundary::Zero, Rational(0), Rational(1));
    auto [fx, fy] = flow_rhs(zero, 0);
    CHECK(fx == 0);
    CHECK(fy == 0);
    auto s = symbolic_window(-3, 3, false);
    auto [gx, gy] = flow_rhs(s, 1);
    MultiPoly x0 = MultiPoly::variable(x_var(0)), x2 = MultiPoly::variable(x_var(2));
    MultiPoly v1 = 1 - MultiPoly::variable(x_var(1)) * MultiPoly::variable(y_var(1));
    CHECK(gx == v1 * (x2 - x0));
    CHECK(gy == v1 * (MultiPoly::variable(y_var(2)) - MultiPoly::variable(y_var(0))));
}

TEST_CASE("self-dual balance") {
    auto b = solve_balance(0, BalanceMode::SelfDual, 6, 4);
    CHECK(failures(check_balance_residual(b)) == "");
    auto disp = check_selfdual_display(b);
    CHECK(disp.checks.size() > 20);
    CHECK(failures(disp) == "");
    CHECK(failures(check_parameter_count(b)) == "");
    CHECK(b.x.at(0).valuation() == -1);
    CHECK(b.x.at(3).trunc() == 4);
    CHECK(b.x.at(6).trunc() == 1);
}

TEST_CASE("general balance: displays, blocks and determinants") {
    auto b = solve_balance(0, BalanceMode::General, 6, 4);
    CHECK(failures(check_balance_residual(b)) == "");
    auto disp = check_general_display(b);
    CHECK(failures(disp) == "");
    bool saw_det = false;
    for (const auto& c : disp.checks) saw_det = saw_det || c.name.find("r(r+2)") != std::string::npos;
    CHECK(saw_det);
    CHECK(failures(check_parameter_count(b)) == "");
}

TEST_CASE("dependence table") {
    auto b = solve_balance(0, BalanceMode::General, 7, 3);
    auto r = check_dependence_table(b);
    CHECK(r.checks.size() == 2);
    CHECK(failures(r) == "");
}

TEST_CASE("sigma on the general balance") {
    auto b = solve_balance(1, BalanceMode::General, 5, 3);
    auto r = check_sigma_balance(b);
    CHECK(r.checks.size() == 5);
    CHECK(failures(r) == "");
    // σ is an involution on parameters.
    MultiRat e = MultiRat::variable(param_a0()) * MultiRat::variable(param_ap()) + MultiRat::variable(param_b(4));
    CHECK(sigma_params(sigma_params(e, 1), 1) == e);
}

TEST_CASE("specialized balances and genericity") {
    auto assign = numeric(2, 6, false);
    auto b = solve_balance(2, BalanceMode::General, 6, 4, assign);
    CHECK(failures(check_balance_residual(b)) == "");
    CHECK(b.x.at(2).coeff(-1).is_constant());
    CHECK_NOTHROW(b.validate());

    auto bad = assign;
    bad[param_a(3)] = bad[param_a(1)];
    CHECK_THROWS_AS(solve_balance(2, BalanceMode::General, 6, 4, bad), DegenerateParameters);
    bad = assign;
    bad[param_a(1)] = MultiRat();
    CHECK_THROWS_AS(solve_balance(2, BalanceMode::General, 6, 4, bad), DegenerateParameters);
    CHECK_THROWS_AS(solve_balance(0, BalanceMode::General, 4, 4), std::invalid_argument);
}

TEST_CASE("Gamma differential equations along the balance") {
    SUBCASE("self-dual N=1") {
        RecursionSpec spec{1, true, 3, {{1, frac(2, 3)}}};
        auto b = solve_balance(3, BalanceMode::SelfDual, 7, 5, numeric(3, 7, true));
        auto r = check_gamma_ode(spec, b);
        CHECK(failures(r) == "");
    }
    SUBCASE("general N=2") {
        RecursionSpec spec{2, false, 1, {{1, frac(1, 2)}, {-1, frac(-3, 5)}, {2, frac(2, 7)}, {-2, 3}}};
        auto b = solve_balance(1, BalanceMode::General, 8, 5, numeric(1, 8, false));
        auto r = check_gamma_ode(spec, b);
        CHECK(failures(r) == "");
    }
}
