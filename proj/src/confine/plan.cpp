#include <random>

#include "toeplitz/confine/confine.hpp"

namespace toeplitz {

UValues numeric_u(const RecursionSpec& spec) {
    return [spec](int i) { return MultiRat(spec.u_at(i)); };
}

UValues symbolic_u(bool self_dual) {
    return [self_dual](int i) { return MultiRat::variable(u_var(self_dual ? std::abs(i) : i)); };
}

std::pair<LSeries, LSeries> gamma_along(int N, bool sd, const UValues& u, const SiteValues<LSeries>& s, int k,
                                        bool time_dependent, int order) {
    const GammaPair& g = symbolic_gamma(N, sd, k);
    auto series = [&](VarId v) -> const LSeries& {
        auto site = detail::parse_site(v);
        const auto& m = (site->first == 'y' && !sd) ? s.y : s.x;
        auto it = m.find(site->second);
        if (it == m.end()) throw WindowTooSmall("series for " + v.name() + " missing");
        return it->second;
    };
    // A product needs each factor to order + (pole orders of the other factors).
    int cap = kExact;
    if (order < kExact) {
        int shortfall = 0;
        for (const MultiPoly* p : {&g.gamma, &g.gamma_tilde}) {
            for (const auto& t : p->terms()) {
                int d = 0;
                for (auto x : t.mono)
                    if (detail::parse_site(mono_var(x))) d += int(mono_exp(x)) * std::max(0, -series(mono_var(x)).valuation());
                shortfall = std::max(shortfall, d);
            }
        }
        cap = order + 1 + shortfall;
    }
    std::map<int, LSeries> ucache;
    auto value = [&](VarId v) -> LSeries {
        if (detail::parse_site(v)) {
            const LSeries& x = series(v);
            return x.trunc() > cap ? x.truncated(cap) : x;
        }
        if (auto i = detail::parse_u(v)) {
            auto it = ucache.find(*i);
            if (it != ucache.end()) return it->second;
            LSeries c = LSeries::constant(u(*i));
            if (time_dependent && std::abs(*i) == 1) c += LSeries::monomial(MultiRat(1), 1);
            return ucache.emplace(*i, c).first->second;
        }
        throw std::invalid_argument("unexpected symbol " + v.name());
    };
    auto cst = [](const Rational& c) { return LSeries::constant(MultiRat(c)); };
    LSeries G = g.gamma.eval<LSeries>(value, cst);
    LSeries Gt = sd ? G : g.gamma_tilde.eval<LSeries>(value, cst);
    return {G, Gt};
}

std::string ConditionRef::str(int n) const {
    auto site = [&](int k) {
        int d = k - n;
        if (d == 0) return std::string("n");
        return "n" + std::string(d > 0 ? "+" : "") + std::to_string(d);
    };
    std::string s = tilde ? "dual Gamma_{" : "Gamma_{";
    s += site(k) + "}^(" + std::to_string(order) + ")";
    return s;
}

nlohmann::json RestrictionPlan::to_json() const {
    nlohmann::json j;
    j["N"] = N;
    j["mode"] = self_dual ? "self-dual" : "general";
    j["n"] = n;
    j["half_width"] = half_width;
    auto names = [](const std::vector<VarId>& v) {
        auto a = nlohmann::json::array();
        for (VarId x : v) a.push_back(x.name());
        return a;
    };
    j["free"] = names(free);
    auto st = nlohmann::json::array();
    for (const auto& s : steps) {
        auto eq = nlohmann::json::array();
        for (const auto& c : s.equations) eq.push_back(c.str(n));
        st.push_back({{"label", s.label}, {"equations", eq}, {"unknowns", names(s.unknowns)}, {"excluded", names(s.excluded)}});
    }
    j["steps"] = st;
    auto rw = nlohmann::json::object();
    for (const auto& [v, e] : rewrite) rw[v.name()] = e.str();
    j["rewrite"] = rw;
    auto red = nlohmann::json::array();
    for (const auto& c : redundant) red.push_back(c.str(n));
    j["redundant"] = red;
    return j;
}

namespace {

ConditionRef G(int k, int order = 0) { return {false, k, order}; }
ConditionRef T(int k, int order = 0) { return {true, k, order}; }

std::string ordinal(int first, int j, int jmin, int jmax) {
    // rows (first), (first+1) and the dots row (first+2) of a table block
    if (j == jmin) return "(" + std::to_string(first) + ")";
    if (j == jmax && jmax - jmin >= 2) return "(" + std::to_string(first + 2) + ")";
    return "(" + std::to_string(first + 1) + ")";
}

}  // namespace

RestrictionPlan make_plan(int N, bool sd, int n, int W) {
    if (N < 1) throw std::invalid_argument("N must be at least 1");
    if (W < 2 * N + 1) throw std::invalid_argument("restriction window half-width must be at least 2N + 1");
    RestrictionPlan p;
    p.N = N;
    p.self_dual = sd;
    p.n = n;
    p.half_width = W;
    const VarId am = param_am(), ap = param_ap();
    auto step = [&](std::string label, std::vector<ConditionRef> eq, std::vector<VarId> unk, std::vector<VarId> ex = {}) {
        p.steps.push_back({std::move(label), std::move(eq), std::move(unk), std::move(ex)});
    };
    auto left_rows = [&] {
        for (int j = 1; j <= W - 2 * N; ++j) {
            std::string lab = j == 1 ? "(1)" : j == 2 ? "(2)" : "(3)";
            const int k = n - N - j, s = n - 2 * N - j;
            if (sd) step(lab, {G(k)}, {param_a(s)});
            else step(lab, {G(k), T(k)}, {param_a(s), param_b(s)});
        }
    };

    if (sd) {
        for (int k = n - 2 * N; k <= n - 2; ++k) p.free.push_back(param_a(k));
        left_rows();
        if (N == 1) {
            step("(4)", {G(n - 1)}, {am});
            step("(5)", {G(n + 1)}, {ap});
            step("(10)", {G(n)}, {param_a(n + 2)});
            for (int j = 2; j <= W - 1; ++j) step(j == 2 ? "(11)" : "(12)", {G(n + j)}, {param_a(n + 1 + j)});
            return p;
        }
        step("(4)", {G(n - N)}, {am});
        step("(5)", {G(n - N + 1)}, {ap});
        for (int j = 2; j <= N - 1; ++j) step(ordinal(6, j, 2, N - 1), {G(n - N + j)}, {param_a(n + j)});
        step("(9)", {G(n + 1)}, {param_a(n + N)}, {param_a(n + N + 1)});
        step("(10)", {G(n)}, {param_a(n + N + 1)});
        for (int j = 2; j <= W - N; ++j) step(j == 2 ? "(11)" : "(12)", {G(n + j)}, {param_a(n + N + j)});
        return p;
    }

    for (int k = n - 2 * N; k <= n - 2; ++k) {
        p.free.push_back(param_a(k));
        p.free.push_back(param_b(k));
    }
    p.free.push_back(param_a(n - 1));
    // Γ̃_{n-N}^{(0)} is affine in b_{n+1} = 1/a_{n+1}, not in a_{n+1}.
    p.rewrite[param_a(n + 1)] = MultiRat::variable(param_b(n + 1)).inverse();
    p.redundant.push_back(T(n + 1));
    left_rows();
    step("(4)", {G(n - N)}, {am});
    step("(4)", {T(n - N)}, {param_b(n + 1)});
    auto c = [](int k) { return std::vector<VarId>{param_a(k), param_b(k)}; };
    if (N == 1) {
        step("(5)", {G(n + 1)}, {ap});
        step("(9a)", {G(n - 1, 1)}, {param_a0()});
        step("(10)", {G(n), T(n)}, c(n + 2));
        for (int j = 2; j <= W - 1; ++j) step(j == 2 ? "(11)" : "(12)", {G(n + j), T(n + j)}, c(n + 1 + j));
        return p;
    }
    step("(5)", {G(n - N + 1), T(n - N + 1)}, {ap, param_a0()});
    for (int j = 2; j <= N - 1; ++j) step(ordinal(6, j, 2, N - 1), {G(n - N + j), T(n - N + j)}, c(n + j));
    step("(9a)", {G(n - 1, 1)}, {param_a(n + N)});
    step("(9b)", {G(n + 1)}, {param_b(n + N)}, {param_a(n + N + 1)});
    step("(10)", {G(n), T(n)}, c(n + N + 1));
    for (int j = 2; j <= W - N; ++j) step(j == 2 ? "(11)" : "(12)", {G(n + j), T(n + j)}, c(n + N + j));
    return p;
}

std::map<VarId, MultiRat> random_free_values(const RestrictionPlan& plan, unsigned seed) {
    std::mt19937 gen(seed);
    std::uniform_int_distribution<int> num(1, 9), den(2, 9), sign(0, 1);
    auto draw = [&] {
        int p = num(gen) * (sign(gen) ? 1 : -1);
        return frac(p, den(gen));
    };
    std::map<VarId, MultiRat> out;
    std::map<VarId, Rational> raw;
    for (VarId v : plan.free) {
        Rational r = draw();
        while (plan.self_dual && r * r == 1) r = draw();
        raw[v] = r;
    }
    if (!plan.self_dual) {
        // v_k = 1 - a_k b_k must not vanish at the plateau.
        for (int k = plan.n - 2 * plan.N; k <= plan.n - 2; ++k)
            while (raw[param_a(k)] * raw[param_b(k)] == 1) raw[param_b(k)] = draw();
    }
    for (const auto& [v, r] : raw) out[v] = MultiRat(r);
    return out;
}

}  // namespace toeplitz
