#include <set>

#include "toeplitz/gamma/gamma.hpp"

namespace toeplitz {

namespace {

MultiPoly X(int k) { return MultiPoly::variable(x_var(k)); }
MultiPoly Y(int k) { return MultiPoly::variable(y_var(k)); }
MultiPoly Uv(int i) { return MultiPoly::variable(u_var(i)); }

std::string bad_support(const MultiPoly& p, int x_lo, int x_hi, int y_lo, int y_hi) {
    std::string bad;
    for (VarId v : p.variables()) {
        if (detail::parse_u(v)) continue;
        auto s = detail::parse_site(v);
        bool ok = s && (s->first == 'x' ? (s->second >= x_lo && s->second <= x_hi)
                                        : (s->second >= y_lo && s->second <= y_hi));
        if (!ok) bad += (bad.empty() ? "" : ", ") + v.name();
    }
    return bad;
}

// Displayed leading and trailing terms of Γ_k for N >= 2 (site variables
// only, u symbolic).  `once`: count the N=2 coincident term a single time.
MultiPoly displayed_general(int N, int k, bool once) {
    auto v = [](int j) { return 1 - X(j) * Y(j); };
    auto up = [&](int hi) {
        MultiPoly p(1);
        for (int i = 0; i <= hi; ++i) p = p * v(k + i);
        return p;
    };
    auto down = [&](int hi) {
        MultiPoly p(1);
        for (int i = 0; i <= hi; ++i) p = p * v(k - i);
        return p;
    };
    MultiPoly sum;
    for (int j = 1; j <= N - 2; ++j) sum += X(k + j) * Y(k + j - 1);
    MultiPoly D = Uv(N) * X(k + N) * up(N - 1);
    D -= Uv(N) * X(k + N - 1).pow(2) * Y(k + N - 2) * up(N - 2);
    D -= Uv(N) * X(k + N - 1) * (X(k) * Y(k - 1) + 2 * sum) * up(N - 2);
    D += (Uv(N - 1) * X(k + N - 1) - Uv(-N) * Y(k + N - 1) * X(k - 1) * X(k)) * up(N - 2);
    D += k * X(k);
    MultiPoly tail = -(Uv(-N) * X(k - N) * v(k - N + 1));
    if (!(once && N == 2)) tail += Uv(N) * X(k) * X(k + 1) * Y(k - N + 1);
    D -= tail * down(N - 2);
    return D;
}

MultiPoly displayed_selfdual(int N, int k, bool once) {
    auto v = [](int j) { return 1 - X(j) * X(j); };
    auto up = [&](int hi) {
        MultiPoly p(1);
        for (int i = 0; i <= hi; ++i) p = p * v(k + i);
        return p;
    };
    auto down = [&](int hi) {
        MultiPoly p(1);
        for (int i = 0; i <= hi; ++i) p = p * v(k - i);
        return p;
    };
    MultiPoly sum;
    for (int j = 0; j <= N - 2; ++j) sum += X(k + j) * X(k + j - 1);
    MultiPoly D = Uv(N) * X(k + N) * up(N - 1) + Uv(N - 1) * X(k + N - 1) * up(N - 2);
    D -= Uv(N) * X(k + N - 1) * (X(k + N - 1) * X(k + N - 2) + 2 * sum) * up(N - 2);
    D += k * X(k);
    MultiPoly tail = -(X(k - N) * v(k - N + 1));
    if (!(once && N == 2)) tail += X(k) * X(k + 1) * X(k - N + 1);
    D -= Uv(N) * tail * down(N - 2);
    return D;
}

}  // namespace

Report verify_gamma_structure(int N, bool sd, int k) {
    Report rep;
    const std::string tag = std::string(sd ? "self-dual" : "general") + " N=" + std::to_string(N);
    const GammaPair& g = symbolic_gamma(N, sd, k);
    const MultiPoly& G = g.gamma;

    // (i) supports
    std::string bad = sd ? bad_support(G, k - N, k + N, k - N, k + N) : bad_support(G, k - N, k + N, k - N + 1, k + N - 1);
    rep.add("P8.2", tag + " support of Gamma_k", bad.empty(), bad);
    if (!sd) {
        bad = bad_support(g.gamma_tilde, k - N + 1, k + N - 1, k - N, k + N);
        rep.add("P8.2", tag + " support of dual Gamma_k", bad.empty(), bad);
    }

    // (iii) linear in the outermost variables
    rep.add("P8.2", tag + " degree one in x_{k+N}, x_{k-N}",
            G.degree_in(x_var(k + N)) == 1 && G.degree_in(x_var(k - N)) == 1);
    if (!sd)
        rep.add("P8.2", tag + " dual degree one in y_{k+N}, y_{k-N}",
                g.gamma_tilde.degree_in(y_var(k + N)) == 1 && g.gamma_tilde.degree_in(y_var(k - N)) == 1);

    // outermost coefficients u_N prod v_{k+i}, u_{-N} prod v_{k-i}
    {
        MultiPoly pu(1), pd(1);
        for (int i = 0; i < N; ++i) {
            pu = pu * (1 - X(k + i) * (sd ? X(k + i) : Y(k + i)));
            pd = pd * (1 - X(k - i) * (sd ? X(k - i) : Y(k - i)));
        }
        rep.add("P8.2", tag + " coefficient of x_{k+N}", G.coefficient_of(x_var(k + N), 1) == Uv(N) * pu);
        rep.add("P8.2", tag + " coefficient of x_{k-N}", G.coefficient_of(x_var(k - N), 1) == Uv(sd ? N : -N) * pd);
    }

    // (ii) displayed terms
    if (N == 1) {
        // Closed forms; the general display involves u_{N-1} and does not apply.
        MultiPoly expect, expect_t;
        if (sd) {
            expect = k * X(k) + Uv(1) * (1 - X(k) * X(k)) * (X(k + 1) + X(k - 1));
            expect_t = expect;
        } else {
            MultiPoly vk = 1 - X(k) * Y(k);
            expect = k * X(k) + vk * (Uv(1) * X(k + 1) + Uv(-1) * X(k - 1));
            expect_t = k * Y(k) + vk * (Uv(1) * Y(k - 1) + Uv(-1) * Y(k + 1));
        }
        rep.add("P8.2", tag + " closed form", G == expect, G.str());
        if (!sd) rep.add("P8.2", tag + " dual closed form", g.gamma_tilde == expect_t, g.gamma_tilde.str());
    } else {
        MultiPoly D = sd ? displayed_selfdual(N, k, true) : displayed_general(N, k, true);
        MultiPoly R = G - D;
        MultiPoly vk = 1 - X(k) * (sd ? X(k) : Y(k));
        auto F = R.divide_exact(vk);
        rep.add("P8.2", tag + " remainder divisible by v_k", F.has_value());
        if (F) {
            bad = sd ? bad_support(*F, k - N + 1, k + N - 2, k - N + 1, k + N - 2)
                     : bad_support(*F, k - N + 1, k + N - 2, k - N + 2, k + N - 2);
            rep.add("P8.2", tag + " remainder support", bad.empty(), bad);
        }
    }

    // σ(Γ_k) = Γ̃_k
    if (!sd) rep.add("P8.2", tag + " duality", sigma_poly(G) == g.gamma_tilde);
    return rep;
}

}  // namespace toeplitz
