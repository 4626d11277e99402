#include "toeplitz/exact/poly.hpp"

#include <algorithm>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace toeplitz {

int mono_cmp(const Monomial& a, const Monomial& b) {
    std::size_t n = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i) {
        std::uint32_t va = std::uint32_t(a[i] >> 32), vb = std::uint32_t(b[i] >> 32);
        if (va != vb) return va < vb ? 1 : -1;
        std::uint32_t ea = mono_exp(a[i]), eb = mono_exp(b[i]);
        if (ea != eb) return ea > eb ? 1 : -1;
    }
    if (a.size() > n) return 1;
    if (b.size() > n) return -1;
    return 0;
}

bool mono_mul(const Monomial& a, const Monomial& b, Monomial& out) {
    out.clear();
    unsigned jet_deg = 0, jet_min = 16;
    auto push = [&](VarId v, std::uint32_t e) {
        if (v.kind() == VarKind::Involution) {
            e &= 1u;
            if (!e) return;
        } else if (v.kind() == VarKind::Jet) {
            jet_deg += e;
            jet_min = std::min(jet_min, v.jet_order());
        }
        out.push_back(mono_entry(v, e));
    };
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        std::uint32_t va = std::uint32_t(a[i] >> 32), vb = std::uint32_t(b[j] >> 32);
        if (va == vb) {
            push(mono_var(a[i]), mono_exp(a[i]) + mono_exp(b[j]));
            ++i, ++j;
        } else if (va < vb) {
            push(mono_var(a[i]), mono_exp(a[i]));
            ++i;
        } else {
            push(mono_var(b[j]), mono_exp(b[j]));
            ++j;
        }
    }
    for (; i < a.size(); ++i) push(mono_var(a[i]), mono_exp(a[i]));
    for (; j < b.size(); ++j) push(mono_var(b[j]), mono_exp(b[j]));
    return jet_deg < jet_min;
}

bool mono_divides(const Monomial& b, const Monomial& a) {
    std::size_t i = 0;
    for (auto x : b) {
        while (i < a.size() && (a[i] >> 32) < (x >> 32)) ++i;
        if (i == a.size() || (a[i] >> 32) != (x >> 32) || mono_exp(a[i]) < mono_exp(x)) return false;
    }
    return true;
}

Monomial mono_div(const Monomial& a, const Monomial& b) {
    Monomial out;
    std::size_t j = 0;
    for (auto x : a) {
        std::uint32_t e = mono_exp(x);
        if (j < b.size() && (b[j] >> 32) == (x >> 32)) {
            e -= mono_exp(b[j]);
            ++j;
        }
        if (e) out.push_back(mono_entry(mono_var(x), e));
    }
    return out;
}

unsigned mono_jet_degree(const Monomial& m) {
    unsigned d = 0;
    for (auto x : m)
        if (mono_var(x).kind() == VarKind::Jet) d += mono_exp(x);
    return d;
}

namespace {

void canonicalize(std::vector<Term>& terms) {
    std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) { return mono_cmp(a.mono, b.mono) > 0; });
    std::size_t out = 0;
    for (std::size_t i = 0; i < terms.size();) {
        std::size_t j = i + 1;
        Rational c = std::move(terms[i].coeff);
        while (j < terms.size() && mono_cmp(terms[j].mono, terms[i].mono) == 0) c += terms[j++].coeff;
        if (c != 0) {
            if (out != i) terms[out].mono = std::move(terms[i].mono);
            terms[out].coeff = std::move(c);
            ++out;
        }
        i = j;
    }
    terms.resize(out);
}

template <bool Negate>
std::vector<Term> merge(const std::vector<Term>& p, const std::vector<Term>& q) {
    std::vector<Term> r;
    r.reserve(p.size() + q.size());
    std::size_t i = 0, j = 0;
    while (i < p.size() && j < q.size()) {
        int c = mono_cmp(p[i].mono, q[j].mono);
        if (c > 0) {
            r.push_back(p[i++]);
        } else if (c < 0) {
            r.push_back(q[j++]);
            if (Negate) r.back().coeff = -r.back().coeff;
        } else {
            Rational s = Negate ? Rational(p[i].coeff - q[j].coeff) : Rational(p[i].coeff + q[j].coeff);
            if (s != 0) r.push_back(Term{p[i].mono, std::move(s)});
            ++i, ++j;
        }
    }
    for (; i < p.size(); ++i) r.push_back(p[i]);
    for (; j < q.size(); ++j) {
        r.push_back(q[j]);
        if (Negate) r.back().coeff = -r.back().coeff;
    }
    return r;
}

}  // namespace

MultiPoly::MultiPoly(const Rational& c) {
    if (c != 0) terms_.push_back(Term{{}, c});
}

MultiPoly MultiPoly::variable(VarId v, std::uint32_t e) {
    MultiPoly p;
    if (e == 0) return MultiPoly(1);
    if (v.kind() == VarKind::Involution) {
        if (e % 2 == 0) return MultiPoly(1);
        e = 1;
    }
    if (v.kind() == VarKind::Jet && e >= v.jet_order()) return p;
    p.terms_.push_back(Term{Monomial{mono_entry(v, e)}, Rational(1)});
    return p;
}

MultiPoly MultiPoly::from_terms(std::vector<Term> terms) {
    MultiPoly p;
    canonicalize(terms);
    p.terms_ = std::move(terms);
    return p;
}

Rational MultiPoly::constant_term() const {
    if (!terms_.empty() && terms_.back().mono.empty()) return terms_.back().coeff;
    return Rational(0);
}

MultiPoly MultiPoly::operator-() const {
    MultiPoly r = *this;
    for (auto& t : r.terms_) t.coeff = -t.coeff;
    return r;
}

MultiPoly& MultiPoly::operator+=(const MultiPoly& o) {
    if (o.is_zero()) return *this;
    if (is_zero()) return *this = o;
    terms_ = merge<false>(terms_, o.terms_);
    return *this;
}

MultiPoly& MultiPoly::operator-=(const MultiPoly& o) {
    if (o.is_zero()) return *this;
    terms_ = merge<true>(terms_, o.terms_);
    return *this;
}

MultiPoly& MultiPoly::operator*=(const Rational& c) {
    if (c == 0) {
        terms_.clear();
        return *this;
    }
    for (auto& t : terms_) t.coeff *= c;
    return *this;
}

MultiPoly& MultiPoly::operator*=(const MultiPoly& o) { return *this = *this * o; }

MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
    if (a.is_zero() || b.is_zero()) return MultiPoly();
    if (a.is_constant()) return b * a.terms_[0].coeff;
    if (b.is_constant()) return a * b.terms_[0].coeff;
    const MultiPoly& big = a.size() >= b.size() ? a : b;
    const MultiPoly& small = a.size() >= b.size() ? b : a;
    std::vector<Term> buf;
    buf.reserve(big.size() * small.size());
    Monomial tmp;
    for (const auto& s : small.terms_)
        for (const auto& t : big.terms_)
            if (mono_mul(s.mono, t.mono, tmp)) buf.push_back(Term{tmp, s.coeff * t.coeff});
    return MultiPoly::from_terms(std::move(buf));
}

bool operator==(const MultiPoly& a, const MultiPoly& b) {
    if (a.terms_.size() != b.terms_.size()) return false;
    for (std::size_t i = 0; i < a.terms_.size(); ++i)
        if (a.terms_[i].coeff != b.terms_[i].coeff || mono_cmp(a.terms_[i].mono, b.terms_[i].mono) != 0) return false;
    return true;
}

MultiPoly MultiPoly::pow(unsigned e) const {
    MultiPoly result(1), base = *this;
    while (e) {
        if (e & 1u) result = result * base;
        e >>= 1;
        if (e) base = base * base;
    }
    return result;
}

std::uint32_t MultiPoly::degree_in(VarId v) const {
    std::uint32_t d = 0;
    for (const auto& t : terms_)
        for (auto x : t.mono)
            if (mono_var(x) == v) d = std::max(d, mono_exp(x));
    return d;
}

unsigned MultiPoly::total_degree() const {
    unsigned d = 0;
    for (const auto& t : terms_) {
        unsigned s = 0;
        for (auto x : t.mono) s += mono_exp(x);
        d = std::max(d, s);
    }
    return d;
}

MultiPoly MultiPoly::coefficient_of(VarId v, std::uint32_t e) const {
    std::vector<Term> out;
    for (const auto& t : terms_) {
        std::uint32_t have = 0;
        Monomial m;
        for (auto x : t.mono) {
            if (mono_var(x) == v) have = mono_exp(x);
            else m.push_back(x);
        }
        if (have == e) out.push_back(Term{std::move(m), t.coeff});
    }
    return from_terms(std::move(out));
}

MultiPoly MultiPoly::derivative(VarId v) const {
    std::vector<Term> out;
    for (const auto& t : terms_) {
        for (std::size_t i = 0; i < t.mono.size(); ++i) {
            if (mono_var(t.mono[i]) != v) continue;
            std::uint32_t e = mono_exp(t.mono[i]);
            Monomial m = t.mono;
            if (e == 1) m.erase(m.begin() + i);
            else m[i] = mono_entry(v, e - 1);
            out.push_back(Term{std::move(m), t.coeff * e});
        }
    }
    return from_terms(std::move(out));
}

MultiPoly MultiPoly::substitute(VarId v, const MultiPoly& value) const {
    std::uint32_t d = degree_in(v);
    if (d == 0) return *this;
    MultiPoly result = coefficient_of(v, 0), pw(1);
    for (std::uint32_t e = 1; e <= d; ++e) {
        pw = pw * value;
        MultiPoly c = coefficient_of(v, e);
        if (!c.is_zero()) result += c * pw;
    }
    return result;
}

std::vector<VarId> MultiPoly::variables() const {
    std::vector<std::uint32_t> raw;
    for (const auto& t : terms_)
        for (auto x : t.mono) raw.push_back(std::uint32_t(x >> 32));
    std::sort(raw.begin(), raw.end());
    raw.erase(std::unique(raw.begin(), raw.end()), raw.end());
    std::vector<VarId> out;
    out.reserve(raw.size());
    for (auto r : raw) out.push_back(VarId{r});
    return out;
}

bool MultiPoly::contains(VarId v) const {
    for (const auto& t : terms_)
        for (auto x : t.mono)
            if (mono_var(x) == v) return true;
    return false;
}

bool MultiPoly::has_kind(VarKind k) const {
    for (const auto& t : terms_)
        for (auto x : t.mono)
            if (mono_var(x).kind() == k) return true;
    return false;
}

std::optional<MultiPoly> MultiPoly::divide_exact(const MultiPoly& q) const {
    if (q.is_zero()) throw std::domain_error("divide_exact by zero polynomial");
    if (q.has_kind(VarKind::Involution) || q.has_kind(VarKind::Jet))
        throw std::logic_error("divide_exact: divisor must be free of involution and jet variables");
    if (is_zero()) return MultiPoly();
    if (q.is_constant()) return *this * Rational(1 / q.terms_[0].coeff);
    const Term& lq = q.terms_.front();
    Rational inv = 1 / lq.coeff;
    std::vector<Term> quot;
    MultiPoly r = *this;
    while (!r.is_zero()) {
        const Term& lr = r.terms_.front();
        if (!mono_divides(lq.mono, lr.mono)) return std::nullopt;
        Term t{mono_div(lr.mono, lq.mono), lr.coeff * inv};
        MultiPoly step;
        step.terms_.reserve(q.size());
        for (const auto& s : q.terms_) {
            Monomial m;
            mono_mul(s.mono, t.mono, m);
            step.terms_.push_back(Term{std::move(m), s.coeff * t.coeff});
        }
        r -= step;
        quot.push_back(std::move(t));
    }
    return from_terms(std::move(quot));
}

Rational MultiPoly::content() const {
    if (terms_.empty()) return Rational(1);
    Integer g = 0, l = 1;
    for (const auto& t : terms_) {
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), t.coeff.get_num_mpz_t());
        mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), t.coeff.get_den_mpz_t());
    }
    Rational c(g, l);
    c.canonicalize();
    return abs(c);
}

std::pair<Rational, MultiPoly> MultiPoly::primitive_part() const {
    if (is_zero()) return {Rational(0), MultiPoly()};
    Rational c = content();
    if (terms_.front().coeff < 0) c = -c;
    return {c, *this * Rational(1 / c)};
}

Monomial MultiPoly::monomial_gcd() const {
    if (terms_.empty()) return {};
    Monomial g = terms_.front().mono;
    for (std::size_t k = 1; k < terms_.size() && !g.empty(); ++k) {
        Monomial next;
        const auto& m = terms_[k].mono;
        std::size_t j = 0;
        for (auto x : g) {
            while (j < m.size() && (m[j] >> 32) < (x >> 32)) ++j;
            if (j < m.size() && (m[j] >> 32) == (x >> 32))
                next.push_back(mono_entry(mono_var(x), std::min(mono_exp(x), mono_exp(m[j]))));
        }
        g = std::move(next);
    }
    return g;
}

MultiPoly MultiPoly::divide_monomial(const Monomial& m) const {
    if (m.empty()) return *this;
    MultiPoly r;
    r.terms_.reserve(terms_.size());
    for (const auto& t : terms_) {
        if (!mono_divides(m, t.mono)) throw std::logic_error("divide_monomial: not divisible");
        r.terms_.push_back(Term{mono_div(t.mono, m), t.coeff});
    }
    return r;  // division by a common monomial preserves the term order
}

std::pair<MultiPoly, MultiPoly> MultiPoly::split_involution(VarId v) const {
    std::vector<Term> p0, p1;
    for (const auto& t : terms_) {
        bool has = false;
        Monomial m;
        for (auto x : t.mono) {
            if (mono_var(x) == v) has = true;
            else m.push_back(x);
        }
        (has ? p1 : p0).push_back(Term{std::move(m), t.coeff});
    }
    return {from_terms(std::move(p0)), from_terms(std::move(p1))};
}

std::pair<MultiPoly, MultiPoly> MultiPoly::split_jet() const {
    MultiPoly p0, q;
    for (const auto& t : terms_) (mono_jet_degree(t.mono) ? q : p0).terms_.push_back(t);
    return {p0, q};
}

unsigned MultiPoly::max_jet_order() const {
    unsigned o = 0;
    for (const auto& t : terms_)
        for (auto x : t.mono)
            if (mono_var(x).kind() == VarKind::Jet) o = std::max(o, mono_var(x).jet_order());
    return o;
}

namespace {

struct Rendered {
    unsigned degree;
    std::string mono;
    Rational coeff;
};

std::string render_mono(const Monomial& m, unsigned& degree) {
    std::vector<std::pair<VarId, std::uint32_t>> vs;
    for (auto x : m) vs.emplace_back(mono_var(x), mono_exp(x));
    std::sort(vs.begin(), vs.end(), [](const auto& a, const auto& b) { return name_less(a.first, b.first); });
    std::string s;
    degree = 0;
    for (const auto& [v, e] : vs) {
        if (!s.empty()) s += '*';
        s += v.name();
        if (e != 1) s += '^' + std::to_string(e);
        degree += e;
    }
    return s;
}

}  // namespace

std::string MultiPoly::str() const {
    if (terms_.empty()) return "0";
    std::vector<Rendered> rs;
    rs.reserve(terms_.size());
    for (const auto& t : terms_) {
        unsigned d = 0;
        std::string m = render_mono(t.mono, d);
        rs.push_back(Rendered{d, std::move(m), t.coeff});
    }
    std::sort(rs.begin(), rs.end(), [](const Rendered& a, const Rendered& b) {
        if (a.degree != b.degree) return a.degree > b.degree;
        return a.mono < b.mono;
    });
    std::string s;
    for (std::size_t i = 0; i < rs.size(); ++i) {
        const auto& r = rs[i];
        Rational c = r.coeff;
        if (i == 0) {
            if (c < 0) s += '-';
        } else {
            s += c < 0 ? " - " : " + ";
        }
        c = abs(c);
        if (r.mono.empty()) {
            s += c.get_str();
        } else {
            if (c != 1) s += c.get_str() + '*';
            s += r.mono;
        }
    }
    return s;
}

std::size_t MultiPoly::hash() const {
    std::size_t h = terms_.size();
    for (const auto& t : terms_) {
        for (auto x : t.mono) h = h * 1000003u ^ std::hash<std::uint64_t>{}(x);
        h = h * 31u ^ std::hash<std::string>{}(t.coeff.get_str());
    }
    return h;
}

std::ostream& operator<<(std::ostream& os, const MultiPoly& p) { return os << p.str(); }

}  // namespace toeplitz
