#include "toeplitz/confine/confine.hpp"

namespace toeplitz {

namespace {

MultiRat P(VarId v) { return MultiRat::variable(v); }

LSeries cst(const MultiRat& c, SeriesVar v = SeriesVar::T) { return LSeries::constant(c, kExact, v); }

std::string site_name(const char* f, int k) { return std::string(f) + "_{" + std::to_string(k) + "}"; }

}  // namespace

int ConfinedSolution::free_parameter_count() const { return int(alpha.size() + beta.size()) + 1; }

SiteValues<LSeries> ConfinedSolution::sites() const { return {x, y}; }

nlohmann::json ConfinedSolution::to_json() const {
    nlohmann::json j;
    j["n"] = n;
    j["mode"] = self_dual ? "self-dual" : "general";
    j["N"] = spec.N;
    auto U = nlohmann::json::object();
    for (const auto& [i, c] : spec.u) U[std::to_string(i)] = to_string(c);
    j["U"] = U;
    j["M"] = M;
    auto par = nlohmann::json::object();
    for (const auto& [name, v] : parameters) par[name] = v.str();
    j["parameters"] = par;
    j["free_parameters"] = free_parameter_count();
    auto res = nlohmann::json::object();
    for (const auto& [p, v] : restricted) res[p.name()] = v.str();
    j["restricted"] = res;
    auto sites = nlohmann::json::array();
    for (const auto& [k, s] : x) {
        nlohmann::json e = {{"site", k}, {"x", s.to_json()}, {"valuation", s.valuation()}, {"verified_order", s.trunc()}};
        if (!self_dual) e["y"] = y.at(k).to_json();
        e["status"] = s.trunc() > std::min(s.valuation(), 0) ? "verified" : "unverified";
        sites.push_back(e);
    }
    j["sites"] = sites;
    return j;
}

ConfinedSolution build_confined(const RecursionSpec& spec, const ConfineOptions& opt) {
    spec.validate();
    const int N = spec.N, n = spec.n, M = opt.M;
    const bool sd = spec.self_dual;
    if (M < 3) throw std::invalid_argument("truncation M must be at least 3");
    const int W = opt.half_width > 0 ? opt.half_width : 2 * N + M + 2;
    const RestrictionPlan plan = make_plan(N, sd, n, W);
    const auto drawn = random_free_values(plan, opt.seed);

    ConfinedSolution c;
    c.n = n;
    c.self_dual = sd;
    c.spec = spec;
    c.M = M;

    // Plateau parameters x_k(0) = α_k + d_k (general also b_k = β_k + e_k and
    // a_{n-1} = α_{n-1} + d_{n-1}); d, e and the shift δ of u_{±1} are jets of
    // order M, later replaced by series without constant term.
    struct Member {
        bool tilde;
        int k;
        Rational value;
    };
    std::vector<Member> family;
    std::vector<VarId> targets;
    std::map<VarId, MultiRat> fixed;
    auto pick = [&](const std::map<int, Rational>& given, VarId p, int k) {
        auto it = given.find(k);
        return it != given.end() ? it->second : drawn.at(p).constant_value();
    };
    const int top = sd ? n - 2 : n - 1;
    for (int k = n - 2 * N; k <= top; ++k) {
        Rational a = pick(opt.alpha, param_a(k), k);
        c.alpha[k] = a;
        VarId d = intern("_d_{" + std::to_string(k) + "}#" + std::to_string(M), VarKind::Jet, M);
        // self-dual regular sites start at eps*a_k
        fixed[param_a(k)] = sd ? P(eps_var()) * (MultiRat(a) + P(d)) : MultiRat(a) + P(d);
        family.push_back({false, k, a});
        targets.push_back(d);
        if (sd || k == n - 1) continue;
        Rational b = pick(opt.beta, param_b(k), k);
        c.beta[k] = b;
        VarId e = intern("_e_{" + std::to_string(k) + "}#" + std::to_string(M), VarKind::Jet, M);
        fixed[param_b(k)] = MultiRat(b) + P(e);
        family.push_back({true, k, b});
        targets.push_back(e);
    }
    for (const auto& [k, a] : c.alpha) c.parameters.emplace_back(site_name("alpha", k), MultiRat(a));
    for (const auto& [k, b] : c.beta) c.parameters.emplace_back(site_name("beta", k), MultiRat(b));
    if (sd) c.parameters.emplace_back("eps", P(eps_var()));

    const VarId delta = intern("_delta#" + std::to_string(M), VarKind::Jet, M);
    RestrictOptions ro;
    ro.half_width = W;
    ro.fixed = fixed;
    ro.max_M = W - 2;
    ro.u = [spec, delta](int i) {
        MultiRat r(spec.u_at(i));
        return std::abs(i) == 1 ? r + P(delta) : r;
    };
    RestrictionResult r = restrict_parameters(spec, ro);
    BalanceSolution b = r.balance(M);
    for (VarId p : {param_ap(), param_am(), param_a0()})
        if (auto it = r.values.find(p); it != r.values.end()) c.restricted[p] = it->second.substitute(delta, MultiRat());

    auto substitute = [&](const std::map<VarId, LSeries>& m) {
        for (auto& [k, s] : b.x) s = s.substitute_series(m);
        for (auto& [k, s] : b.y) s = s.substitute_series(m);
    };
    // u_{±1} + t = U_{±1}: the balance then solves the recursion with constant U.
    substitute({{delta, LSeries::monomial(MultiRat(-1), 1)}});

    std::vector<LSeries> F;
    for (const auto& m : family) {
        const LSeries& s = (m.tilde ? b.y : b.x).at(m.k);
        F.push_back(s - cst(MultiRat(m.value)));
    }
    substitute(implicit_reparam(F, targets));

    const LSeries lam = sd ? b.x.at(n - 1) - cst(P(eps_var())) : b.y.at(n - 1) - cst(MultiRat(c.alpha.at(n - 1)).inverse());
    if (lam.is_zero() || lam.valuation() != 1)
        throw NotReversible("lambda(t) = " + lam.str() + " has no invertible linear term");
    const LSeries t_of_lambda = reverse(lam, SeriesVar::Lambda);
    for (const auto& [k, s] : b.x) c.x[k] = compose(s, t_of_lambda);
    if (!sd)
        for (const auto& [k, s] : b.y) c.y[k] = compose(s, t_of_lambda);
    return c;
}

Report verify_confinement(const ConfinedSolution& c) {
    Report rep;
    const int n = c.n, N = c.spec.N;
    const bool sd = c.self_dual;
    const std::string T = sd ? "T1.2" : "T1.1";
    const MultiRat eps = P(eps_var());
    const auto lam = SeriesVar::Lambda;
    // Equal on every known coefficient (the series carry their truncation).
    int order = 1000;
    auto same = [&](const LSeries& s, const LSeries& want) {
        order = std::min(order, s.trunc());
        return (s - want).is_zero() && s.trunc() > 1;
    };
    auto exact_const = [&](const LSeries& s, const MultiRat& v) { return same(s, cst(v, lam)); };
    auto upto = [&] { return "to O(lambda^" + std::to_string(order) + ")"; };

    bool plateau = true;
    for (int k = n - 2 * N; k <= n - 2; ++k) {
        plateau = plateau && exact_const(c.x.at(k), MultiRat(c.alpha.at(k)));
        if (!sd) plateau = plateau && exact_const(c.y.at(k), MultiRat(c.beta.at(k)));
    }
    rep.add(T, "plateau sites equal their initial values", plateau, upto());
    if (sd) {
        LSeries want = cst(eps, lam) + LSeries::monomial(MultiRat(1), 1, kExact, lam);
        rep.add(T, "x_{n-1} = eps + lambda", same(c.x.at(n - 1), want), c.x.at(n - 1).str());
    } else {
        const MultiRat a = MultiRat(c.alpha.at(n - 1));
        LSeries want = cst(a.inverse(), lam) + LSeries::monomial(MultiRat(1), 1, kExact, lam);
        rep.add(T, "x_{n-1} = alpha_{n-1}", exact_const(c.x.at(n - 1), a), c.x.at(n - 1).str());
        rep.add(T, "y_{n-1} = 1/alpha_{n-1} + lambda", same(c.y.at(n - 1), want), c.y.at(n - 1).str());
    }
    rep.add(T, "x_n has a simple pole in lambda", c.x.at(n).valuation() == -1, c.x.at(n).str());
    if (!sd) rep.add(T, "y_n has a simple pole in lambda", c.y.at(n).valuation() == -1, c.y.at(n).str());
    if (sd) {
        const LSeries& s = c.x.at(n + 1);
        rep.add(T, "x_{n+1} has constant term -eps", s.trunc() > 0 && s.coeff(0) == -eps, s.str());
    }
    bool regular = true;
    std::string irregular;
    for (const auto& [k, s] : c.x) {
        if (k == n) continue;
        bool ok = s.valuation() >= 0 && (sd || c.y.at(k).valuation() >= 0);
        if (!ok && irregular.empty()) irregular = "k=" + std::to_string(k);
        regular = regular && ok;
    }
    rep.add(T, "every site other than n is regular at lambda = 0", regular, irregular);
    const int want_count = sd ? 2 * N : 4 * N;
    rep.add(T, "free parameters including lambda", c.free_parameter_count() == want_count,
            std::to_string(c.free_parameter_count()) + " (expected " + std::to_string(want_count) + ")");

    // Γ_k(x(λ); U) on every site whose support lies in the window.
    const auto s = c.sites();
    const int lo = c.x.begin()->first, hi = c.x.rbegin()->first;
    int verified = 0, unverified = 0;
    std::string bad;
    for (int k = lo + N; k <= hi - N; ++k) {
        auto g = gamma_on_series(c.spec, s, k, false, lam);
        for (const LSeries* p : {&g.first, &g.second}) {
            if (!p->is_zero() && bad.empty()) bad = "k=" + std::to_string(k) + ": " + p->str();
        }
        (std::min(g.first.trunc(), g.second.trunc()) > 0 ? verified : unverified)++;
    }
    rep.add("T7.1", "Gamma_k(x(lambda); U) vanishes on every known coefficient", bad.empty() && verified > 0,
            bad.empty() ? std::to_string(verified) + " sites verified, " + std::to_string(unverified) + " unverified" : bad);

    // Independent forward iteration over λ-series from the 2N sites below the pole.
    SiteValues<LSeries> it;
    for (int k = n - 2 * N; k <= n - 1; ++k) {
        it.x[k] = c.x.at(k);
        if (!sd) it.y[k] = c.y.at(k);
    }
    std::string diverged;
    int compared = 0;
    for (int k = n - N; k <= n - N + 2; ++k) {
        const int site = k + N;
        try {
            forward_step_series(c.spec, k, it, lam);
        } catch (const Error& e) {
            diverged = "site " + std::to_string(site) + ": " + e.what();
            break;
        }
        auto agree = [&](const LSeries& a, const LSeries& b, const char* f) {
            if (!a.agrees_with(b) && diverged.empty())
                diverged = std::string(f) + "_" + std::to_string(site) + ": forward " + a.str() + " vs built " + b.str();
            compared += std::max(0, std::min(a.trunc(), b.trunc()) - std::min(a.valuation(), b.valuation()));
        };
        agree(it.x.at(site), c.x.at(site), "x");
        if (!sd) agree(it.y.at(site), c.y.at(site), "y");
    }
    rep.add("T7.1", "forward iteration from the seed reproduces sites n, n+1, n+2", diverged.empty() && compared > 0,
            diverged.empty() ? std::to_string(compared) + " coefficients compared" : diverged);
    return rep;
}

}  // namespace toeplitz
