#include <set>

#include "toeplitz/flow/flow.hpp"

namespace toeplitz {

namespace {

MultiRat P(VarId v) { return MultiRat::variable(v); }

// Coefficient when known, nullopt past the truncation.
std::optional<MultiRat> known(const LSeries& s, int p) {
    if (p >= s.trunc()) return std::nullopt;
    return s.coeff(p);
}

void expect(Report& rep, const std::string& claim, const std::string& name, const LSeries& s, int p,
            const MultiRat& want) {
    auto got = known(s, p);
    if (!got) return;
    rep.add(claim, name, *got == want, *got == want ? std::string() : "got " + got->str() + ", expected " + want.str());
}

MultiRat det2(const std::vector<std::vector<MultiRat>>& A) { return A[0][0] * A[1][1] - A[0][1] * A[1][0]; }

}  // namespace

Report check_selfdual_display(const BalanceSolution& b) {
    Report rep;
    if (!b.self_dual()) throw std::invalid_argument("self-dual display needs a self-dual balance");
    const int n = b.n;
    const MultiRat e = P(eps_var());
    auto A = [&](int j) -> MultiRat {
        if (j == n + 1) return -1;
        if (j == n - 1) return 1;
        return b.value(param_a(j));
    };
    auto Ac = [&](int j) { return 1 - A(j) * A(j); };
    const MultiRat ap = b.value(param_ap()), am = b.value(param_am());

    for (int k = b.lo(); k <= b.hi(); ++k) {
        if (std::abs(k - n) < 2) continue;
        const LSeries& x = b.x.at(k);
        const std::string tag = "x_{" + std::to_string(k) + "}";
        expect(rep, "P3.1", tag + " t^0", x, 0, e * A(k));
        expect(rep, "P3.1", tag + " t^1", x, 1, e * Ac(k) * (A(k + 1) - A(k - 1)));
        if (!known(x, 2)) continue;
        MultiRat kappa = k == n + 2 ? -4 * ap : k == n - 2 ? 4 * am : MultiRat();
        MultiRat two = MultiRat(frac(1, 2)) * Ac(k) *
                       (A(k - 2) * Ac(k - 1) + A(k + 2) * Ac(k + 1) -
                        A(k) * ((A(k + 1) - A(k - 1)).pow(2) + 2 - 2 * A(k - 1) * A(k + 1)) + kappa);
        expect(rep, "P3.1", tag + " t^2", x, 2, e * two);
    }
    for (int s : {1, -1}) {
        const MultiRat a = s > 0 ? ap : am;
        const LSeries& x = b.x.at(n + s);
        const std::string tag = std::string("x_{n") + (s > 0 ? "+1}" : "-1}");
        expect(rep, "P3.1", tag + " t^0", x, 0, e * MultiRat(-s));
        expect(rep, "P3.1", tag + " t^1", x, 1, 4 * e * a);
        expect(rep, "P3.1", tag + " t^2", x, 2, 4 * e * a * (2 * A(n + 2 * s) - s * (am + ap)));
    }
    {
        const LSeries& x = b.x.at(n);
        const MultiRat pre = e * MultiRat(frac(-1, 2));
        expect(rep, "P3.1", "x_n t^-1", x, -1, pre);
        expect(rep, "P3.1", "x_n t^0", x, 0, pre * (ap - am));
        expect(rep, "P3.1", "x_n t^1", x, 1,
               pre * MultiRat(frac(1, 3)) *
                   ((ap - am).pow(2) + 4 * (ap * A(n + 2) - am * A(n - 2) + 1 - 2 * ap * am)));
    }

    // v_k = 1 - x_k^2
    auto v = [&](int k) { return LSeries::constant(MultiRat(1)) - b.x.at(k) * b.x.at(k); };
    for (int k = b.lo(); k <= b.hi(); ++k) {
        if (std::abs(k - n) < 2) continue;
        LSeries vk = v(k);
        const std::string tag = "v_{" + std::to_string(k) + "}";
        expect(rep, "P3.1", tag + " t^0", vk, 0, Ac(k));
        expect(rep, "P3.1", tag + " t^1", vk, 1, -2 * A(k) * Ac(k) * (A(k + 1) - A(k - 1)));
    }
    for (int s : {1, -1}) {
        LSeries vs = v(n + s);
        const std::string tag = std::string("v_{n") + (s > 0 ? "+1}" : "-1}");
        expect(rep, "P3.1", tag + " t^0", vs, 0, MultiRat());
        expect(rep, "P3.1", tag + " t^1", vs, 1, 8 * s * (s > 0 ? ap : am));
    }
    {
        LSeries vn = v(n);
        expect(rep, "P3.1", "v_n t^-2", vn, -2, MultiRat(frac(-1, 4)));
        expect(rep, "P3.1", "v_n t^-1", vn, -1, MultiRat(frac(-1, 2)) * (ap - am));
    }
    return rep;
}

Report check_general_display(const BalanceSolution& b) {
    Report rep;
    if (b.self_dual()) throw std::invalid_argument("general display needs a general balance");
    const int n = b.n;
    const MultiRat p1 = b.value(param_a(n + 1)), m1 = b.value(param_a(n - 1));
    const MultiRat ap = b.value(param_ap()), am = b.value(param_am()), a = b.value(param_a0());

    for (int k = b.lo(); k <= b.hi(); ++k) {
        if (std::abs(k - n) < 2) continue;
        expect(rep, "P3.2", "x_{" + std::to_string(k) + "} t^0", b.x.at(k), 0, b.value(param_a(k)));
        expect(rep, "P3.2", "y_{" + std::to_string(k) + "} t^0", b.y.at(k), 0, b.value(param_b(k)));
    }
    for (int s : {1, -1}) {
        const MultiRat self = s > 0 ? p1 : m1, other = s > 0 ? m1 : p1, as = s > 0 ? ap : am;
        const std::string tag = std::string("n") + (s > 0 ? "+1" : "-1");
        expect(rep, "P3.2", "x_" + tag + " t^0", b.x.at(n + s), 0, self);
        expect(rep, "P3.2", "y_" + tag + " t^0", b.y.at(n + s), 0, self.inverse());
        expect(rep, "P3.2", "x_" + tag + " t^1", b.x.at(n + s), 1, self * as);
        expect(rep, "P3.2", "y_" + tag + " t^1", b.y.at(n + s), 1, -as / other);
        if (auto x1 = known(b.x.at(n + s), 1), y1 = known(b.y.at(n + s), 1); x1 && y1) {
            MultiRat rel = *x1 + m1 * p1 * *y1;
            rep.add("P3.2", "first-order relation at " + tag, rel.is_zero(), rel.str());
        }
    }
    expect(rep, "P3.2", "x_n t^-1", b.x.at(n), -1, p1 * m1 / (m1 - p1));
    expect(rep, "P3.2", "y_n t^-1", b.y.at(n), -1, (p1 - m1).inverse());
    expect(rep, "P3.2", "x_n t^0", b.x.at(n), 0, p1 * m1 * a / (m1 - p1));
    MultiRat yn1 = a + (p1 * ap - m1 * am) / (p1 - m1);
    expect(rep, "P3.2", "y_n t^0", b.y.at(n), 0, yn1 / (m1 - p1));

    // Block matrices: A(r) = C(r) at level r.  With B = C(1) - C(0) the
    // operators are L_± = B^{-1} C(0) - I and L_n = B^{-1} C(0).
    auto block = [&](int site, int r) -> const std::vector<std::vector<MultiRat>>* {
        auto it = b.blocks.find({site, r});
        return it == b.blocks.end() ? nullptr : &it->second;
    };
    const VarId rv = intern("r");
    const MultiRat R = P(rv);
    auto op = [&](int site, bool shift) -> std::optional<std::vector<std::vector<MultiRat>>> {
        auto c0 = block(site, 0), c1 = block(site, 1);
        if (!c0 || !c1) return std::nullopt;
        std::vector<std::vector<MultiRat>> B(2, std::vector<MultiRat>(2)), L = B;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) B[i][j] = (*c1)[i][j] - (*c0)[i][j];
        MultiRat d = det2(B);
        if (d.is_zero()) return std::nullopt;
        std::vector<std::vector<MultiRat>> Bi = {{B[1][1] / d, -B[0][1] / d}, {-B[1][0] / d, B[0][0] / d}};
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                L[i][j] = Bi[i][0] * (*c0)[0][j] + Bi[i][1] * (*c0)[1][j];
                if (shift && i == j) L[i][j] -= 1;
            }
        return L;
    };
    const MultiRat g = (m1 - p1).inverse();
    for (int s : {1, -1}) {
        const MultiRat self = s > 0 ? p1 : m1, other = s > 0 ? m1 : p1;
        const std::string tag = std::string("L_") + (s > 0 ? "+" : "-");
        auto L = op(n + s, true);
        rep.add("P3.2", tag + " extracted from the block at n" + (s > 0 ? "+1" : "-1"), L.has_value());
        if (!L) continue;
        std::vector<std::vector<MultiRat>> want = {{-other, -m1 * p1 * self}, {self.inverse(), self}};
        bool same = true;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) same = same && (*L)[i][j] == s * g * want[i][j];
        rep.add("P3.2", tag + " matches the displayed matrix", same);
        auto M = *L;
        for (int i = 0; i < 2; ++i) M[i][i] += R + 1;
        MultiRat d = det2(M);
        rep.add("P3.2", "det(" + tag + " + (r+1) Id) = r(r+1)", d == R * (R + 1), d.str());
        // A(r) = B (L + (r+1) Id), so det A(r) = det B r(r+1) at every recorded level.
        const auto* c0 = block(n + s, 0);
        const auto* c1 = block(n + s, 1);
        MultiRat dB = ((*c1)[0][0] - (*c0)[0][0]) * ((*c1)[1][1] - (*c0)[1][1]) -
                      ((*c1)[0][1] - (*c0)[0][1]) * ((*c1)[1][0] - (*c0)[1][0]);
        for (const auto& [key, A] : b.blocks)
            if (key.first == n + s)
                rep.add("P3.2", tag + " block at r=" + std::to_string(key.second) + " has det B r(r+1)",
                        det2(A) == dB * key.second * (key.second + 1));
    }
    {
        auto L = op(n, false);
        rep.add("P3.2", "L_n extracted from the block at n", L.has_value());
        if (L) {
            std::vector<std::vector<MultiRat>> want = {{1, -p1 * m1}, {-(p1 * m1).inverse(), 1}};
            bool same = true;
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) same = same && (*L)[i][j] == want[i][j];
            rep.add("P3.2", "L_n matches the displayed matrix", same);
            auto M = *L;
            for (int i = 0; i < 2; ++i) M[i][i] += R;
            MultiRat d = det2(M);
            rep.add("P3.2", "det(L_n + r Id) = r(r+2)", d == R * (R + 2), d.str());
        }
    }
    return rep;
}

Report check_dependence_table(const BalanceSolution& b) {
    Report rep;
    if (b.self_dual()) throw std::invalid_argument("dependence table is stated for the general balance");
    if (b.M < 3) throw std::invalid_argument("dependence table needs M >= 3");
    if (!b.assignment.empty()) throw std::invalid_argument("dependence table needs the symbolic balance");
    const int n = b.n;
    using Set = std::set<VarId>;
    auto a = [](int k) { return param_a(k); };
    // At n±1 the table's b is y^{(0)} = 1/a_{n±1}.
    auto bb = [&](int k) { return std::abs(k - n) == 1 ? param_a(k) : param_b(k); };
    auto c = [&](int k) { return Set{a(k), bb(k)}; };
    auto U = [](Set s, const Set& t) {
        s.insert(t.begin(), t.end());
        return s;
    };
    const VarId A0 = param_a0(), Ap = param_ap(), Am = param_am();
    auto pm = [&](int s) { return s > 0 ? Ap : Am; };

    struct Row {
        std::string name;
        const LSeries* series;
        int first;  // power of the first column
        std::vector<Set> cols;
    };
    std::vector<Row> rows;
    const Set both = {a(n + 1), a(n - 1)};
    rows.push_back({"x_n", &b.x.at(n), -1, {both, {A0}, U(U({Ap, Am}, c(n + 2)), c(n - 2))}});
    rows.push_back({"y_n", &b.y.at(n), -1, {both, {A0, Ap, Am}, U(c(n + 2), c(n - 2))}});
    for (int s : {1, -1}) {
        const std::string t = s > 0 ? "+" : "-";
        rows.push_back({"x_{n" + t + "1}", &b.x.at(n + s), 0, {{a(n + s)}, {pm(s)}, U(c(n + 2 * s), {pm(-s), A0, a(n - s)})}});
        rows.push_back({"y_{n" + t + "1}", &b.y.at(n + s), 0, {{a(n + s)}, {a(n - s), pm(s)}, U(c(n + 2 * s), {pm(-s), A0})}});
        rows.push_back({"x_{n" + t + "2}", &b.x.at(n + 2 * s), 0,
                        {{a(n + 2 * s)}, {a(n + 3 * s), a(n + s), bb(n + 2 * s)}, {a(n + 4 * s), bb(n + 3 * s), pm(s)}}});
        rows.push_back({"y_{n" + t + "2}", &b.y.at(n + 2 * s), 0,
                        {{bb(n + 2 * s)}, {bb(n + 3 * s), bb(n + s), a(n + 2 * s)}, {bb(n + 4 * s), a(n + 3 * s), pm(s), a(n - s)}}});
    }
    // Regular sites: the lattice is translation invariant away from the pole;
    // take those with k±2 outside the pole block and inside the window.
    for (int k = b.lo(); k <= b.hi(); ++k) {
        if (std::abs(k - n) <= 2) continue;
        rows.push_back({"x_{" + std::to_string(k) + "}", &b.x.at(k), 0,
                        {{a(k)}, {a(k + 1), a(k - 1), bb(k)}, {a(k + 2), a(k - 2), bb(k + 1), bb(k - 1)}}});
        rows.push_back({"y_{" + std::to_string(k) + "}", &b.y.at(k), 0,
                        {{bb(k)}, {bb(k + 1), bb(k - 1), a(k)}, {bb(k + 2), bb(k - 2), a(k + 1), a(k - 1)}}});
    }

    int checked = 0, bad = 0, strict = 0;
    std::string first_bad, strict_list;
    for (const auto& row : rows) {
        Set allowed;
        for (std::size_t i = 0; i < row.cols.size(); ++i) {
            allowed = U(allowed, row.cols[i]);
            auto coef = known(*row.series, row.first + int(i));
            if (!coef) continue;
            Set got;
            for (VarId v : coef->variables())
                if (v != eps_var()) got.insert(v);
            ++checked;
            Set extra;
            for (VarId v : got)
                if (!allowed.count(v)) extra.insert(v);
            if (!extra.empty()) {
                if (!bad++) {
                    first_bad = row.name + " column " + std::to_string(i) + ": unexpected";
                    for (VarId v : extra) first_bad += " " + v.name();
                }
            } else if (got.size() < allowed.size()) {
                ++strict;
                strict_list += (strict_list.empty() ? "" : ", ") + row.name + "[" + std::to_string(i) + "]";
            }
        }
    }
    rep.add("P3.2", "dependence table: supports contained in the listed sets", bad == 0 && checked > 0,
            bad ? first_bad : std::to_string(checked) + " cells; strict containment in: " + (strict ? strict_list : "none"));

    // z_k^{(2)} = (1/2) č_k č_{k+1} c_{k+2} + terms free of a_{k+2}, b_{k+2}.
    int rk = 0, rbad = 0;
    std::string rfirst;
    for (int k = b.lo(); k + 2 <= b.hi(); ++k) {
        if (std::abs(k - n) <= 1 || std::abs(k + 1 - n) <= 1 || std::abs(k + 2 - n) <= 1) continue;
        for (int w = 0; w < 2; ++w) {
            const LSeries& z = w ? b.y.at(k) : b.x.at(k);
            auto z2 = known(z, 2);
            if (!z2) continue;
            ++rk;
            const VarId ck2 = w ? param_b(k + 2) : param_a(k + 2);
            const VarId other = w ? param_a(k + 2) : param_b(k + 2);
            auto cc = [&](int j) { return 1 - P(param_a(j)) * P(param_b(j)); };
            MultiRat lin = z2->derivative(ck2);
            MultiRat rest = *z2 - lin * P(ck2);
            bool ok = lin == MultiRat(frac(1, 2)) * cc(k) * cc(k + 1) && !rest.contains(ck2) && !rest.contains(other);
            if (!ok && !rbad++) rfirst = std::string(w ? "y_{" : "x_{") + std::to_string(k) + "}";
        }
    }
    rep.add("P3.2", "z_k^{(2)} = (1/2) c_k c_{k+1} c_{k+2} + terms free of c_{k+2}", rbad == 0 && rk > 0,
            rbad ? rfirst : std::to_string(rk) + " coefficients");
    return rep;
}

GammaSeries gamma_series(const RecursionSpec& spec, const BalanceSolution& b) {
    GammaSeries out;
    const auto vals = b.sites();
    for (int k = b.lo() + spec.N; k <= b.hi() - spec.N; ++k) {
        auto [G, Gt] = gamma_on_series(spec, vals, k, true);
        out.gamma[k] = G;
        out.gamma_tilde[k] = Gt;
    }
    return out;
}

Report check_gamma_ode(const RecursionSpec& spec, const BalanceSolution& b) {
    Report rep;
    if (spec.self_dual != b.self_dual()) throw std::invalid_argument("recursion and balance disagree on self-duality");
    GammaSeries gs = gamma_series(spec, b);
    const LSeries one = LSeries::constant(MultiRat(1));
    int checked = 0, bad = 0;
    std::string first;
    for (const auto& [k, G] : gs.gamma) {
        if (!gs.gamma.count(k - 1) || !gs.gamma.count(k + 1)) continue;
        const LSeries& x = b.x.at(k);
        const LSeries& y = b.self_dual() ? x : b.y.at(k);
        LSeries v = one - x * y;
        LSeries res = G.differentiate() - v * (gs.gamma.at(k + 1) - gs.gamma.at(k - 1));
        LSeries rt;
        if (!b.self_dual()) {
            const LSeries& Gt = gs.gamma_tilde.at(k);
            LSeries mix = x * Gt - y * G;
            res -= (b.x.at(k + 1) - b.x.at(k - 1)) * mix;
            rt = Gt.differentiate() - v * (gs.gamma_tilde.at(k + 1) - gs.gamma_tilde.at(k - 1)) +
                 (b.y.at(k + 1) - b.y.at(k - 1)) * mix;
        }
        ++checked;
        for (const LSeries* r : {&res, &rt}) {
            if (r->is_zero()) continue;
            if (!bad++) first = "k=" + std::to_string(k) + ": " + r->str();
        }
    }
    rep.add("P2.1", std::string(b.self_dual() ? "self-dual" : "general") + " Gamma ODE residuals vanish to truncation",
            bad == 0 && checked > 0, bad ? first : std::to_string(checked) + " sites");
    return rep;
}

}  // namespace toeplitz
