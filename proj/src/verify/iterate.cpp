#include <cmath>
#include <cstdio>
#include <sstream>

#include "toeplitz/verify/verify.hpp"

namespace toeplitz {

namespace {

template <class R>
int seed_range(const RecursionSpec& spec, const SiteValues<R>& seed, IterationTrace& t) {
    spec.validate();
    if (int(seed.x.size()) != 2 * spec.N)
        throw std::invalid_argument("seed must hold exactly 2N = " + std::to_string(2 * spec.N) + " sites");
    const int lo = seed.x.begin()->first;
    if (seed.x.rbegin()->first != lo + 2 * spec.N - 1) throw std::invalid_argument("seed sites must be consecutive");
    if (!spec.self_dual)
        for (const auto& [k, v] : seed.x)
            if (!seed.y.count(k)) throw std::invalid_argument("seed lacks y_" + std::to_string(k));
    t.self_dual = spec.self_dual;
    t.first = lo;
    t.seed_size = 2 * spec.N;
    return lo;
}

template <class R, class Zero>
void reject_zero_seed(const SiteValues<R>& seed, Zero is_zero) {
    bool all = true;
    for (const auto& [k, v] : seed.x) all = all && is_zero(v);
    for (const auto& [k, v] : seed.y) all = all && is_zero(v);
    if (all) throw DegenerateParameters("seed vanishes identically");
}

std::string digits(const Integer& z) {
    Integer a = abs(z);
    return std::to_string(a == 0 ? 1 : a.get_str().size());
}

std::string magnitude(const Rational& q) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6e", std::fabs(q.get_d()));
    return buf;
}

}  // namespace

VarId lambda_var() { return intern("lambda"); }

Rational pole_threshold(const Rational& lambda) {
    if (lambda <= 0) throw std::invalid_argument("lambda must be positive");
    Rational inv = 1 / lambda;
    Integer m = sqrt(Integer(inv.get_num() / inv.get_den()));
    while (Rational(m * m) < inv) ++m;
    return Rational(m);
}

IterationTrace iterate_exact(const RecursionSpec& spec, const SiteValues<LSeries>& seed, int steps) {
    IterationTrace t;
    t.mode = TraceMode::ExactLambda;
    const int lo = seed_range(spec, seed, t);
    reject_zero_seed(seed, [](const LSeries& s) { return s.is_zero() && s.trunc() > 0; });
    SiteValues<LSeries> v = seed;
    for (int i = 0; i < steps; ++i) forward_step_series(spec, lo + spec.N + i, v, SeriesVar::Lambda);
    t.x = v.x;
    t.y = v.y;
    for (const auto& [k, s] : t.x) {
        int val = s.valuation();
        if (!spec.self_dual) val = std::min(val, t.y.at(k).valuation());
        if (val < 0 && val < s.trunc()) t.events.push_back({k, val, Rational(0), true});
    }
    return t;
}

IterationTrace iterate_rational(const RecursionSpec& spec, const SiteValues<MultiRat>& seed, int steps) {
    IterationTrace t;
    t.mode = TraceMode::RationalLambda;
    const int lo = seed_range(spec, seed, t);
    reject_zero_seed(seed, [](const MultiRat& s) { return s.is_zero(); });
    SiteValues<MultiRat> v = seed;
    for (int i = 0; i < steps; ++i) forward_step(spec, lo + spec.N + i, v);
    t.fx = v.x;
    t.fy = v.y;
    // Order in λ at λ = 0 from the numerator and denominator.
    auto order = [](const MultiRat& r) {
        auto low = [](const MultiPoly& p) {
            if (p.is_zero()) return 0;
            int m = 1 << 20;
            for (int e = 0;; ++e) {
                if (!p.coefficient_of(lambda_var(), std::uint32_t(e)).is_zero()) return e;
                if (e > int(p.degree_in(lambda_var()))) return m;
            }
        };
        return low(r.num()) - low(r.den());
    };
    for (const auto& [k, r] : t.fx) {
        int val = order(r);
        if (!spec.self_dual) val = std::min(val, order(t.fy.at(k)));
        if (val < 0) t.events.push_back({k, val, Rational(0), true});
    }
    return t;
}

IterationTrace iterate_numeric(const RecursionSpec& spec, const SiteValues<Rational>& seed, int steps,
                               const Rational& threshold) {
    IterationTrace t;
    t.mode = TraceMode::NumericRational;
    const int lo = seed_range(spec, seed, t);
    reject_zero_seed(seed, [](const Rational& s) { return s == 0; });
    SiteValues<Rational> v = seed;
    for (int i = 0; i < steps; ++i) forward_step(spec, lo + spec.N + i, v);
    t.nx = v.x;
    t.ny = v.y;
    auto size = [&](int k) {
        Rational m = abs(t.nx.at(k));
        if (!spec.self_dual) m = std::max(m, Rational(abs(t.ny.at(k))));
        return m;
    };
    const int hi = t.nx.rbegin()->first;
    for (int k = lo; k <= hi; ++k) {
        Rational m = size(k);
        if (m <= threshold) continue;
        bool back = false;
        for (int j = k + 1; j <= std::min(hi, k + spec.N); ++j) back = back || size(j) <= threshold;
        t.events.push_back({k, 0, m, back});
    }
    return t;
}

std::vector<int> IterationTrace::sites() const {
    std::vector<int> s;
    if (mode == TraceMode::ExactLambda)
        for (const auto& [k, v] : x) s.push_back(k);
    else if (mode == TraceMode::RationalLambda)
        for (const auto& [k, v] : fx) s.push_back(k);
    else
        for (const auto& [k, v] : nx) s.push_back(k);
    return s;
}

std::string IterationTrace::csv() const {
    std::ostringstream os;
    const bool numeric = mode == TraceMode::NumericRational;
    os << (numeric ? "step,k,field,numerator_digits,denominator_digits,magnitude\n" : "step,k,field,valuation\n");
    for (int k : sites()) {
        const int step = k - first - seed_size + 1;  // seed rows have step <= 0
        for (const char* f : {"x", "y"}) {
            const bool isx = f[0] == 'x';
            if (!isx && self_dual) continue;
            os << step << ',' << k << ',' << f << ',';
            if (numeric) {
                const Rational& q = (isx ? nx : ny).at(k);
                os << digits(q.get_num()) << ',' << digits(q.get_den()) << ',' << magnitude(q) << '\n';
            } else if (mode == TraceMode::ExactLambda) {
                const LSeries& s = (isx ? x : y).at(k);
                os << (s.is_zero() ? std::string("unknown") : std::to_string(s.valuation())) << '\n';
            } else {
                os << ((isx ? fx : fy).at(k).is_zero() ? "zero" : "rational") << '\n';
            }
        }
    }
    return os.str();
}

nlohmann::json IterationTrace::to_json() const {
    nlohmann::json j;
    j["mode"] = mode == TraceMode::ExactLambda      ? "exact-lambda"
                : mode == TraceMode::RationalLambda ? "rational-lambda"
                                                    : "numeric";
    j["first"] = first;
    j["seed_size"] = seed_size;
    auto sites_j = nlohmann::json::array();
    for (int k : sites()) {
        nlohmann::json e = {{"k", k}};
        if (mode == TraceMode::ExactLambda) {
            e["x"] = x.at(k).to_json();
            if (!self_dual) e["y"] = y.at(k).to_json();
        } else if (mode == TraceMode::RationalLambda) {
            e["x"] = fx.at(k).str();
            if (!self_dual) e["y"] = fy.at(k).str();
        } else {
            e["x"] = to_string(nx.at(k));
            if (!self_dual) e["y"] = to_string(ny.at(k));
        }
        sites_j.push_back(e);
    }
    j["sites"] = sites_j;
    auto ev = nlohmann::json::array();
    for (const auto& e : events) {
        nlohmann::json o = {{"k", e.k}};
        if (mode == TraceMode::NumericRational) {
            o["magnitude"] = to_string(e.magnitude);
            o["returned"] = e.returned;
        } else {
            o["valuation"] = e.valuation;
        }
        ev.push_back(o);
    }
    j["events"] = ev;
    return j;
}

}  // namespace toeplitz
