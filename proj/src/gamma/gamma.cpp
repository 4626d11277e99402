#include "toeplitz/gamma/gamma.hpp"

#include <mutex>
#include <tuple>

namespace toeplitz {

VarId u_var(int i) { return intern("u_{" + std::to_string(i) + "}"); }

Rational RecursionSpec::u_at(int i) const {
    if (i == 0 || std::abs(i) > N) return Rational(0);
    int key = (self_dual && i < 0) ? -i : i;
    auto it = u.find(key);
    return it == u.end() ? Rational(0) : it->second;
}

void RecursionSpec::validate() const {
    if (N < 1) throw std::invalid_argument("N must be at least 1");
    for (const auto& [i, c] : u) {
        if (i == 0 || std::abs(i) > N) throw std::invalid_argument("u index " + std::to_string(i) + " outside ±1..±N");
        if (self_dual && i < 0) throw std::invalid_argument("self-dual spec takes u_1..u_N only");
    }
    if (u_at(N) == 0) throw std::invalid_argument("u_N must be nonzero");
    if (!self_dual && u_at(-N) == 0) throw std::invalid_argument("u_{-N} must be nonzero");
}

RecursionSpec RecursionSpec::sigma() const {
    RecursionSpec s = *this;
    if (self_dual) return s;
    s.u.clear();
    for (const auto& [i, c] : u) s.u[-i] = c;
    return s;
}

namespace detail {

std::optional<std::pair<char, int>> parse_site(VarId v) {
    const std::string& s = v.name();
    if (s.size() < 5 || (s[0] != 'x' && s[0] != 'y') || s[1] != '_' || s[2] != '{' || s.back() != '}') return std::nullopt;
    try {
        std::size_t used = 0;
        int k = std::stoi(s.substr(3, s.size() - 4), &used);
        if (used != s.size() - 4) return std::nullopt;
        return std::make_pair(s[0], k);
    } catch (...) {
        return std::nullopt;
    }
}

std::optional<int> parse_u(VarId v) {
    const std::string& s = v.name();
    if (s.size() < 5 || s[0] != 'u' || s[1] != '_' || s[2] != '{' || s.back() != '}') return std::nullopt;
    try {
        return std::stoi(s.substr(3, s.size() - 4));
    } catch (...) {
        return std::nullopt;
    }
}

}  // namespace detail

MultiPoly sigma_poly(const MultiPoly& p) {
    std::vector<Term> out;
    for (const auto& t : p.terms()) {
        Monomial m;
        for (auto e : t.mono) {
            VarId v = mono_var(e);
            if (auto s = detail::parse_site(v)) v = s->first == 'x' ? y_var(s->second) : x_var(s->second);
            else if (auto i = detail::parse_u(v)) v = u_var(-*i);
            m.push_back(mono_entry(v, mono_exp(e)));
        }
        std::sort(m.begin(), m.end());
        out.push_back({m, t.coeff});
    }
    return MultiPoly::from_terms(std::move(out));
}

namespace {

MultiPoly U(int i, bool self_dual) { return MultiPoly::variable(u_var(self_dual ? std::abs(i) : i)); }

GammaPair gamma_vector_field(int N, bool sd, int k) {
    auto w = symbolic_window(k - N - 2, k + N + 2, sd);
    const MultiPoly vk = w.v(k);
    // V^u[x_k] = sum_i u_i X_i^(1)[x_k] + u_{-i} X_i^(2)[x_k],
    // X_i^(l)[x_k] = -v_k Tr(L_l^{i-1} dL_l/dy_k), X_i^(l)[y_k] = v_k Tr(L_l^{i-1} dL_l/dx_k).
    MultiPoly Vx, Vy;
    for (int i = 1; i <= N; ++i) {
        Vx += U(i, sd) * trace_dy(w, LaxKind::L1, i, k) + U(-i, sd) * trace_dy(w, LaxKind::L2, i, k);
        if (!sd) Vy += U(i, sd) * trace_dx(w, LaxKind::L1, i, k) + U(-i, sd) * trace_dx(w, LaxKind::L2, i, k);
    }
    GammaPair g;
    g.k = k;
    g.gamma = -(vk * Vx) + k * w.x(k);
    g.gamma_tilde = sd ? g.gamma : -(vk * Vy) + k * w.y(k);
    return g;
}

MultiPoly divide_or_throw(const MultiPoly& num, const MultiPoly& den, int k) {
    auto q = num.divide_exact(den);
    if (!q) throw NonPolynomialResult("bracket of Gamma_" + std::to_string(k) + " is not divisible by " + den.str());
    return *q;
}

GammaPair gamma_definition(int N, bool sd, int k) {
    auto w = symbolic_window(k - N - 2, k + N + 2, sd);
    const MultiPoly vk = w.v(k);
    auto P = [&](LaxKind l, int s, int i, int j) { return matrix_power_entry(w, l, s, i, j); };
    GammaPair g;
    g.k = k;
    if (sd) {
        // (v_k/x_k)(2 P'(L)_{k+1,k} - (L P'(L))_{k+1,k+1} - (L P'(L))_{k,k}) + k x_k
        MultiPoly br;
        for (int i = 1; i <= N; ++i)
            br += U(i, true) * (2 * P(LaxKind::L1, i - 1, k + 1, k) - P(LaxKind::L1, i, k + 1, k + 1) -
                                P(LaxKind::L1, i, k, k));
        g.gamma = divide_or_throw(vk * br, w.x(k), k) + k * w.x(k);
        g.gamma_tilde = g.gamma;
        return g;
    }
    MultiPoly common, bx, by;
    for (int i = 1; i <= N; ++i) {
        common += U(i, false) * P(LaxKind::L1, i - 1, k + 1, k) + U(-i, false) * P(LaxKind::L2, i - 1, k, k + 1);
        bx -= U(i, false) * P(LaxKind::L1, i, k + 1, k + 1) + U(-i, false) * P(LaxKind::L2, i, k, k);
        by -= U(i, false) * P(LaxKind::L1, i, k, k) + U(-i, false) * P(LaxKind::L2, i, k + 1, k + 1);
    }
    g.gamma = divide_or_throw(vk * (bx + common), w.y(k), k) + k * w.x(k);
    g.gamma_tilde = divide_or_throw(vk * (by + common), w.x(k), k) + k * w.y(k);
    return g;
}

}  // namespace

const GammaPair& symbolic_gamma(int N, bool self_dual, int k, GammaPath path) {
    static std::mutex mu;
    static std::map<std::tuple<int, bool, int, int>, GammaPair> cache;
    auto key = std::make_tuple(N, self_dual, k, int(path));
    {
        std::lock_guard lock(mu);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }
    GammaPair g = path == GammaPath::VectorField ? gamma_vector_field(N, self_dual, k) : gamma_definition(N, self_dual, k);
    std::lock_guard lock(mu);
    return cache.emplace(key, std::move(g)).first->second;
}

GammaPair build_gamma(const RecursionSpec& spec, int k, GammaPath path) {
    const GammaPair& s = symbolic_gamma(spec.N, spec.self_dual, k, path);
    std::map<VarId, MultiPoly> sub;
    for (int i = 1; i <= spec.N; ++i) {
        sub[u_var(i)] = MultiPoly(spec.u_at(i));
        if (!spec.self_dual) sub[u_var(-i)] = MultiPoly(spec.u_at(-i));
    }
    auto apply = [&](const MultiPoly& p) {
        return p.eval<MultiPoly>(
            [&](VarId v) {
                auto it = sub.find(v);
                return it == sub.end() ? MultiPoly::variable(v) : it->second;
            },
            [](const Rational& c) { return MultiPoly(c); });
    };
    GammaPair g;
    g.k = k;
    g.gamma = apply(s.gamma);
    g.gamma_tilde = spec.self_dual ? g.gamma : apply(s.gamma_tilde);
    return g;
}

void forward_step_series(const RecursionSpec& spec, int k, SiteValues<LSeries>& vals, SeriesVar tag) {
    auto embed = [tag](const Rational& c) { return LSeries::constant(MultiRat(c), kExact, tag); };
    auto is_zero = [](const LSeries& s) { return s.is_zero(); };
    auto div = [](const LSeries& a, const LSeries& b) { return a * b.invert(); };
    forward_step(spec, k, vals, embed, div, is_zero);
}

std::pair<LSeries, LSeries> gamma_on_series(const RecursionSpec& spec, const SiteValues<LSeries>& vals, int k,
                                            bool time_dependent_u, SeriesVar tag) {
    const GammaPair& g = symbolic_gamma(spec.N, spec.self_dual, k);
    auto value = [&](VarId v) -> LSeries {
        if (auto s = detail::parse_site(v)) {
            const auto& m = (s->first == 'y' && !spec.self_dual) ? vals.y : vals.x;
            auto it = m.find(s->second);
            if (it == m.end()) throw WindowTooSmall("series for " + v.name() + " missing");
            return it->second;
        }
        if (auto i = detail::parse_u(v)) {
            LSeries c = LSeries::constant(MultiRat(spec.u_at(*i)), kExact, tag);
            if (time_dependent_u && std::abs(*i) == 1) c += LSeries::monomial(MultiRat(1), 1, kExact, tag);
            return c;
        }
        throw std::invalid_argument("unexpected symbol " + v.name());
    };
    auto cst = [tag](const Rational& c) { return LSeries::constant(MultiRat(c), kExact, tag); };
    LSeries G = g.gamma.eval<LSeries>(value, cst);
    LSeries Gt = spec.self_dual ? G : g.gamma_tilde.eval<LSeries>(value, cst);
    return {G, Gt};
}

}  // namespace toeplitz
