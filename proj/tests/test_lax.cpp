#include <doctest.h>

#include "toeplitz/lax/lax.hpp"

using namespace toeplitz;

namespace {

MultiPoly X(int k) { return MultiPoly::variable(x_var(k)); }
MultiPoly Y(int k) { return MultiPoly::variable(y_var(k)); }
MultiPoly Vk(int k) { return 1 - X(k) * Y(k); }

// Relabels every site variable k -> k + d.
MultiPoly shift_sites(const MultiPoly& p, int d) {
    std::map<VarId, MultiPoly> m;
    for (VarId v : p.variables()) {
        const std::string& s = v.name();
        int k = std::stoi(s.substr(3, s.size() - 4));
        m[v] = s[0] == 'x' ? X(k + d) : Y(k + d);
    }
    return p.eval<MultiPoly>([&](VarId v) { return m.at(v); }, [](const Rational& c) { return MultiPoly(c); });
}

using Dense = std::vector<std::vector<MultiPoly>>;
Dense mul(const Dense& a, const Dense& b) {
    std::size_t n = a.size();
    Dense c(n, std::vector<MultiPoly>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t j = 0; j < n; ++j) c[i][j] += a[i][k] * b[k][j];
    return c;
}

}  // namespace

TEST_CASE("lax matrices at the origin are shifts") {
    LatticeWindow<MultiPoly> w(-3, 3, false, Boundary::Zero, MultiPoly(), MultiPoly(1));
    auto L1 = build_lax(w, LaxKind::L1, -3, 3);
    auto L2 = build_lax(w, LaxKind::L2, -3, 3);
    for (int i = 0; i < 7; ++i)
        for (int j = 0; j < 7; ++j) {
            CHECK(L1[i][j] == MultiPoly(j == i + 1 ? 1 : 0));
            CHECK(L2[i][j] == MultiPoly(i == j + 1 ? 1 : 0));
        }
}

TEST_CASE("lax entries") {
    auto w = symbolic_window(-5, 5, false);
    CHECK(lax_entry(w, LaxKind::L1, 1, 1) == -X(1) * Y(0));
    CHECK(lax_entry(w, LaxKind::L1, 0, 1) == Vk(0));
    CHECK(lax_entry(w, LaxKind::L1, 0, 2).is_zero());
    CHECK(lax_entry(w, LaxKind::L2, 1, 0) == 1 - Y(0) * X(0));
    CHECK(lax_entry(w, LaxKind::L2, 2, 0).is_zero());
    CHECK(matrix_power_entry(w, LaxKind::L1, 1, 1, 0) == -X(1) * Y(-1));
}

TEST_CASE("duality of the lax matrices") {
    auto w = symbolic_window(-5, 5, false);
    auto ws = w.sigma();
    auto A = build_lax(ws, LaxKind::L1, -3, 3);
    auto B = build_lax(w, LaxKind::L2, -3, 3);
    for (int i = 0; i < 7; ++i)
        for (int j = 0; j < 7; ++j) CHECK(A[i][j] == B[j][i]);
    for (int s = 1; s <= 3; ++s)
        CHECK(sigma_sites(matrix_power_entry(w, LaxKind::L1, s, 1, 0)) == matrix_power_entry(w, LaxKind::L2, s, 0, 1));
}

TEST_CASE("powers agree with dense multiplication") {
    auto w = symbolic_window(-8, 8, false);
    Dense L = build_lax(w, LaxKind::L1, -6, 6);
    Dense L2 = mul(L, L), L3 = mul(L2, L);
    const int c = 6;  // index of site 0
    CHECK(L2[c][c] == matrix_power_entry(w, LaxKind::L1, 2, 0, 0));
    CHECK(L2[c + 1][c] == matrix_power_entry(w, LaxKind::L1, 2, 1, 0));
    CHECK(L3[c][c] == matrix_power_entry(w, LaxKind::L1, 3, 0, 0));
    CHECK(L3[c][c + 1] == matrix_power_entry(w, LaxKind::L1, 3, 0, 1));
    Dense M = build_lax(w, LaxKind::L2, -6, 6);
    Dense M3 = mul(mul(M, M), M);
    CHECK(M3[c][c] == matrix_power_entry(w, LaxKind::L2, 3, 0, 0));
    CHECK(M3[c][c + 1] == matrix_power_entry(w, LaxKind::L2, 3, 0, 1));
}

TEST_CASE("explicit square") {
    auto w = symbolic_window(-6, 6, false);
    int k = 1;
    MultiPoly e = -X(k + 1) * Y(k - 1) * Vk(k) + X(k).pow(2) * Y(k - 1).pow(2) - X(k) * Y(k - 2) * Vk(k - 1);
    CHECK(matrix_power_entry(w, LaxKind::L1, 2, k, k) == e);
}

TEST_CASE("window stability and shift covariance") {
    auto small = symbolic_window(-5, 5, false), big = symbolic_window(-9, 9, false);
    for (int s = 1; s <= 3; ++s) {
        CHECK(matrix_power_entry(small, LaxKind::L1, s, 0, 0) == matrix_power_entry(big, LaxKind::L1, s, 0, 0));
        CHECK(shift_sites(matrix_power_entry(big, LaxKind::L1, s, 0, 0), 1) ==
              matrix_power_entry(big, LaxKind::L1, s, 1, 1));
        CHECK(shift_sites(matrix_power_entry(big, LaxKind::L2, s, 1, 0), 1) ==
              matrix_power_entry(big, LaxKind::L2, s, 2, 1));
    }
    CHECK_THROWS_AS(matrix_power_entry(small, LaxKind::L1, 4, 4, 4), WindowTooSmall);
}

TEST_CASE("hamiltonians") {
    auto w = symbolic_window(-4, 4, false);
    MultiPoly h = hamiltonian(w, LaxKind::L1, 1) - hamiltonian(w, LaxKind::L2, 1);
    MultiPoly expect;
    for (int k = w.k_min() + 2; k + 1 <= w.k_max(); ++k) expect += X(k) * Y(k - 1) - X(k - 1) * Y(k);
    CHECK(h == expect);
    LatticeWindow<MultiPoly> z(-4, 4, false, Boundary::Zero, MultiPoly(), MultiPoly(1));
    CHECK(hamiltonian(z, LaxKind::L1, 2).is_zero());
    auto sd = symbolic_window(-6, 6, true);
    for (int i = 1; i <= 3; ++i) CHECK(hamiltonian(sd, LaxKind::L1, i) == hamiltonian(sd, LaxKind::L2, i));
}

TEST_CASE("semi-infinite boundary") {
    LatticeWindow<MultiPoly> w(1, 6, false, Boundary::SemiInfinite, MultiPoly(), MultiPoly(1));
    for (int k = 1; k <= 6; ++k) {
        w.set_x(k, X(k));
        w.set_y(k, Y(k));
    }
    CHECK(lax_entry(w, LaxKind::L1, 1, 1) == -X(1));
    CHECK(lax_entry(w, LaxKind::L1, 1, 0).is_zero());
}

TEST_CASE("appendix structure") {
    for (int s = 2; s <= 4; ++s) {
        Report r = verify_appendix_structure(s, 0);
        for (const auto& c : r.checks) {
            INFO(c.name << " " << c.detail);
            CHECK(c.pass);
        }
    }
    CHECK(verify_appendix_structure(3, 5).pass());
}
