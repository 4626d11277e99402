#include "toeplitz/exact/rat.hpp"

#include <algorithm>
#include <deque>
#include <mutex>
#include <ostream>
#include <shared_mutex>
#include <stdexcept>
#include <unordered_map>

#include "toeplitz/errors.hpp"

namespace toeplitz {

namespace {

struct FactorTable {
    std::shared_mutex mu;
    std::deque<MultiPoly> polys;
    std::deque<std::vector<VarId>> vars;
    std::deque<unsigned> degrees;
    std::unordered_multimap<std::size_t, std::uint32_t> by_hash;
};

FactorTable& table() {
    static FactorTable t;
    return t;
}

bool subset(const std::vector<VarId>& a, const std::vector<VarId>& b) {  // a ⊆ b, both sorted
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

// `p` must be primitive, nonconstant, free of special variables.
std::uint32_t register_factor(const MultiPoly& p) {
    auto& t = table();
    std::size_t h = p.hash();
    {
        std::shared_lock lock(t.mu);
        auto [lo, hi] = t.by_hash.equal_range(h);
        for (auto it = lo; it != hi; ++it)
            if (t.polys[it->second] == p) return it->second;
    }
    std::unique_lock lock(t.mu);
    auto [lo, hi] = t.by_hash.equal_range(h);
    for (auto it = lo; it != hi; ++it)
        if (t.polys[it->second] == p) return it->second;
    auto id = static_cast<std::uint32_t>(t.polys.size());
    t.polys.push_back(p);
    t.vars.push_back(p.variables());
    t.degrees.push_back(p.total_degree());
    t.by_hash.emplace(h, id);
    return id;
}

void den_add(MultiRat::Den& d, std::uint32_t id, int e) {
    auto it = std::lower_bound(d.begin(), d.end(), id, [](const auto& x, std::uint32_t i) { return x.first < i; });
    if (it != d.end() && it->first == id) it->second += e;
    else d.insert(it, {id, e});
}

MultiRat::Den den_merge(const MultiRat::Den& a, const MultiRat::Den& b) {
    MultiRat::Den r = a;
    for (const auto& [id, e] : b) den_add(r, id, e);
    return r;
}

MultiPoly den_product(const MultiRat::Den& d) {
    MultiPoly p(1);
    for (const auto& [id, e] : d) p = p * factor_poly(id).pow(static_cast<unsigned>(e));
    return p;
}

// D = c * prod f^e over registered factors.
std::pair<Rational, MultiRat::Den> factorize(const MultiPoly& D) {
    if (D.is_zero()) throw DivisionByZero("zero denominator");
    auto [c, p] = D.primitive_part();
    MultiRat::Den out;
    Monomial g = p.monomial_gcd();
    if (!g.empty()) {
        p = p.divide_monomial(g);
        for (auto x : g) den_add(out, register_factor(MultiPoly::variable(mono_var(x))), int(mono_exp(x)));
    }
    if (!p.is_constant()) {
        auto pv = p.variables();
        auto& t = table();
        std::size_t n;
        {
            std::shared_lock lock(t.mu);
            n = t.polys.size();
        }
        for (std::uint32_t id = 0; id < n && !p.is_constant(); ++id) {
            const MultiPoly* f;
            bool ok;
            {
                std::shared_lock lock(t.mu);
                f = &t.polys[id];
                ok = f->size() > 1 && t.degrees[id] <= p.total_degree() && subset(t.vars[id], pv);
            }
            if (!ok) continue;
            while (!p.is_constant()) {
                auto q = p.divide_exact(*f);
                if (!q) break;
                p = std::move(*q);
                den_add(out, id, 1);
            }
            if (!p.is_constant()) pv = p.variables();
        }
        if (!p.is_constant()) {
            auto [c2, p2] = p.primitive_part();
            c *= c2;
            den_add(out, register_factor(p2), 1);
            p = MultiPoly(1);
        }
    }
    c *= p.constant_term();
    return {c, out};
}

}  // namespace

const MultiPoly& factor_poly(std::uint32_t id) {
    auto& t = table();
    std::shared_lock lock(t.mu);
    return t.polys.at(id);
}

std::size_t factor_count() {
    auto& t = table();
    std::shared_lock lock(t.mu);
    return t.polys.size();
}

std::pair<MultiPoly, std::pair<Rational, MultiRat::Den>> invert_poly(const MultiPoly& p) {
    if (p.is_zero()) throw DivisionByZero("division by the zero rational function");
    MultiPoly extra(1), d = p;
    for (VarId v : p.variables()) {
        if (v.kind() != VarKind::Involution) continue;
        auto [p0, p1] = d.split_involution(v);
        if (p1.is_zero()) continue;
        if (p0.is_zero()) {
            extra = extra * MultiPoly::variable(v);
            d = p1;
        } else {
            MultiPoly conj = p0 - p1 * MultiPoly::variable(v);
            extra = extra * conj;
            d = d * conj;
        }
        if (d.is_zero()) throw DivisionByZero("zero divisor (" + p.str() + ") is not invertible");
    }
    auto [p0, q] = d.split_jet();
    if (!q.is_zero()) {
        if (p0.is_zero()) throw DivisionByZero("jet without constant part (" + p.str() + ") is not invertible");
        unsigned J = d.max_jet_order();
        if (p0.is_constant()) {
            Rational c0 = p0.constant_term();
            MultiPoly r = -q * Rational(1 / c0), s(1), pw(1);
            for (unsigned j = 1; j < J; ++j) {
                pw = pw * r;
                if (pw.is_zero()) break;
                s += pw;
            }
            extra = extra * s;
            d = p0;
        } else {
            MultiPoly s, mq(1);
            for (unsigned j = 0; j < J; ++j) {
                s += mq * p0.pow(J - 1 - j);
                mq = mq * (-q);
                if (mq.is_zero()) {
                    // remaining terms vanish; keep denominator p0^J for uniformity
                    break;
                }
            }
            extra = extra * s;
            d = p0.pow(J);
        }
    }
    if (d.is_constant()) return {extra, {d.constant_term(), {}}};
    auto f = factorize(d);
    return {extra, f};
}

MultiRat MultiRat::fraction(const MultiPoly& num, const MultiPoly& den) { return MultiRat(num) / MultiRat(den); }

Rational MultiRat::constant_value() const {
    if (!is_constant()) throw std::logic_error("constant_value of non-constant " + str());
    return num_.constant_term();
}

MultiPoly MultiRat::den() const { return den_product(den_); }

void MultiRat::cancel() {
    if (num_.is_zero()) {
        den_.clear();
        return;
    }
    if (den_.empty()) return;
    auto nv = num_.variables();
    for (auto& [id, e] : den_) {
        const MultiPoly& f = factor_poly(id);
        if (!subset(f.variables(), nv)) continue;
        while (e > 0) {
            auto q = num_.divide_exact(f);
            if (!q) break;
            num_ = std::move(*q);
            --e;
        }
        nv = num_.variables();
    }
    den_.erase(std::remove_if(den_.begin(), den_.end(), [](const auto& x) { return x.second == 0; }), den_.end());
}

MultiRat MultiRat::operator-() const {
    MultiRat r = *this;
    r.num_ = -r.num_;
    return r;
}

MultiRat operator+(const MultiRat& a, const MultiRat& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    if (a.den_.empty() && b.den_.empty()) return MultiRat(a.num_ + b.num_);
    if (a.den_ == b.den_) {
        MultiRat r;
        r.num_ = a.num_ + b.num_;
        r.den_ = a.den_;
        r.cancel();
        return r;
    }
    MultiRat::Den L = a.den_;
    for (const auto& [id, e] : b.den_) {
        auto it = std::lower_bound(L.begin(), L.end(), id, [](const auto& x, std::uint32_t i) { return x.first < i; });
        if (it != L.end() && it->first == id) it->second = std::max(it->second, e);
        else L.insert(it, {id, e});
    }
    auto cofactor = [&](const MultiRat::Den& d) {
        MultiPoly c(1);
        for (const auto& [id, e] : L) {
            int have = 0;
            for (const auto& [i2, e2] : d)
                if (i2 == id) have = e2;
            if (e > have) c = c * factor_poly(id).pow(unsigned(e - have));
        }
        return c;
    };
    MultiRat r;
    r.num_ = a.num_ * cofactor(a.den_) + b.num_ * cofactor(b.den_);
    r.den_ = std::move(L);
    r.cancel();
    return r;
}

MultiRat operator-(const MultiRat& a, const MultiRat& b) { return a + (-b); }

MultiRat operator*(const MultiRat& a, const MultiRat& b) {
    if (a.is_zero() || b.is_zero()) return MultiRat();
    if (a.den_.empty() && b.den_.empty()) return MultiRat(a.num_ * b.num_);
    MultiPoly na = a.num_, nb = b.num_;
    MultiRat::Den da = a.den_, db = b.den_;
    auto strip = [](MultiRat::Den& d, MultiPoly& n) {
        if (d.empty()) return;
        auto nv = n.variables();
        for (auto& [id, e] : d) {
            const MultiPoly& f = factor_poly(id);
            if (!subset(f.variables(), nv)) continue;
            while (e > 0) {
                auto q = n.divide_exact(f);
                if (!q) break;
                n = std::move(*q);
                --e;
            }
            nv = n.variables();
        }
        d.erase(std::remove_if(d.begin(), d.end(), [](const auto& x) { return x.second == 0; }), d.end());
    };
    strip(da, nb);
    strip(db, na);
    MultiRat r;
    r.num_ = na * nb;
    r.den_ = den_merge(da, db);
    if (r.num_.is_zero()) r.den_.clear();
    return r;
}

MultiRat MultiRat::inverse() const {
    auto [extra, cd] = invert_poly(num_);
    MultiRat r;
    r.num_ = den_product(den_) * extra * Rational(1 / cd.first);
    r.den_ = cd.second;
    r.cancel();
    return r;
}

MultiRat operator/(const MultiRat& a, const MultiRat& b) {
    if (b.is_zero()) throw DivisionByZero("division by zero rational function");
    if (a.is_zero()) return MultiRat();
    if (b.is_constant()) return a * MultiRat(Rational(1 / b.constant_value()));
    return a * b.inverse();
}

bool operator==(const MultiRat& a, const MultiRat& b) {
    if (a.den_ == b.den_) return a.num_ == b.num_;
    return (a - b).is_zero();
}

MultiRat MultiRat::pow(int e) const {
    if (e < 0) return inverse().pow(-e);
    MultiRat r(1), base = *this;
    unsigned u = static_cast<unsigned>(e);
    while (u) {
        if (u & 1u) r = r * base;
        u >>= 1;
        if (u) base = base * base;
    }
    return r;
}

std::vector<VarId> MultiRat::variables() const {
    auto v = num_.variables();
    for (const auto& [id, e] : den_) {
        auto fv = factor_poly(id).variables();
        v.insert(v.end(), fv.begin(), fv.end());
    }
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

bool MultiRat::contains(VarId v) const {
    if (num_.contains(v)) return true;
    for (const auto& [id, e] : den_)
        if (factor_poly(id).contains(v)) return true;
    return false;
}

MultiRat MultiRat::derivative(VarId v) const {
    MultiRat r = MultiRat(num_.derivative(v));
    MultiRat::Den d = den_;
    r.den_ = d;
    r.cancel();
    MultiRat log_d;
    for (const auto& [id, e] : den_) {
        const MultiPoly& f = factor_poly(id);
        if (!f.contains(v)) continue;
        log_d += MultiRat(f.derivative(v) * Rational(e)) / MultiRat(f);
    }
    if (log_d.is_zero()) return r;
    return r - *this * log_d;
}

namespace {

MultiRat poly_at(const MultiPoly& p, VarId v, const MultiRat& value) {
    std::uint32_t d = p.degree_in(v);
    if (d == 0) return MultiRat(p);
    if (value.is_polynomial()) return MultiRat(p.substitute(v, value.num()));
    MultiRat acc(p.coefficient_of(v, 0)), pw(1);
    for (std::uint32_t e = 1; e <= d; ++e) {
        pw = pw * value;
        MultiPoly c = p.coefficient_of(v, e);
        if (!c.is_zero()) acc += MultiRat(c) * pw;
    }
    return acc;
}

}  // namespace

MultiRat MultiRat::substitute(VarId v, const MultiRat& value) const {
    if (!contains(v)) return *this;
    MultiRat r = poly_at(num_, v, value);
    for (const auto& [id, e] : den_) {
        const MultiPoly& f = factor_poly(id);
        MultiRat fv = f.contains(v) ? poly_at(f, v, value) : MultiRat(f);
        r = r / fv.pow(e);
    }
    return r;
}

MultiRat MultiRat::substitute(const std::map<VarId, MultiRat>& values) const {
    auto val = [&](VarId w) {
        auto it = values.find(w);
        return it == values.end() ? MultiRat::variable(w) : it->second;
    };
    auto cst = [](const Rational& c) { return MultiRat(c); };
    auto touches = [&](const MultiPoly& p) {
        for (VarId w : p.variables())
            if (values.count(w)) return true;
        return false;
    };
    auto at = [&](const MultiPoly& p) { return touches(p) ? p.eval<MultiRat>(val, cst) : MultiRat(p); };
    MultiRat r = at(num_);
    for (const auto& [id, e] : den_) r = r / at(factor_poly(id)).pow(e);
    return r;
}

Rational MultiRat::evaluate(const std::map<VarId, Rational>& assignment) const {
    auto val = [&](VarId w) -> Rational {
        auto it = assignment.find(w);
        if (it == assignment.end()) throw std::invalid_argument("evaluate: variable " + w.name() + " is unassigned");
        return it->second;
    };
    auto cst = [](const Rational& c) { return c; };
    Rational n = num_.eval<Rational>(val, cst);
    Rational d = 1;
    for (const auto& [id, e] : den_) {
        Rational f = factor_poly(id).eval<Rational>(val, cst);
        if (f == 0) throw DivisionByZero("denominator factor " + factor_poly(id).str() + " vanishes");
        for (int i = 0; i < e; ++i) d *= f;
    }
    return n / d;
}

std::string MultiRat::str() const {
    if (den_.empty()) return num_.str();
    std::vector<std::string> fs;
    for (const auto& [id, e] : den_) {
        const MultiPoly& f = factor_poly(id);
        std::string s = f.size() > 1 ? "(" + f.str() + ")" : f.str();
        if (e != 1) s += "^" + std::to_string(e);
        fs.push_back(std::move(s));
    }
    std::sort(fs.begin(), fs.end());
    std::string d;
    for (const auto& s : fs) d += (d.empty() ? "" : "*") + s;
    return "(" + num_.str() + ")/(" + d + ")";
}

std::ostream& operator<<(std::ostream& os, const MultiRat& r) { return os << r.str(); }

}  // namespace toeplitz
