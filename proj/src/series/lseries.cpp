#include "toeplitz/series/lseries.hpp"

#include <algorithm>
#include <ostream>
#include <stdexcept>

#include "toeplitz/errors.hpp"

namespace toeplitz {

const char* series_var_name(SeriesVar v) { return v == SeriesVar::T ? "t" : "lambda"; }

LSeries LSeries::constant(const MultiRat& c, int trunc, SeriesVar v) { return monomial(c, 0, trunc, v); }

LSeries LSeries::monomial(const MultiRat& c, int power, int trunc, SeriesVar v) {
    return from_coeffs(v, power, {c}, trunc);
}

LSeries LSeries::big_o(int trunc, SeriesVar v) { return from_coeffs(v, trunc, {}, trunc); }

LSeries LSeries::from_coeffs(SeriesVar v, int start, std::vector<MultiRat> coeffs, int trunc) {
    LSeries f(v);
    f.val_ = start;
    f.coeffs_ = std::move(coeffs);
    f.trunc_ = trunc;
    f.normalize();
    return f;
}

void LSeries::normalize() {
    if (trunc_ < kExact && val_ < trunc_ && int(coeffs_.size()) > trunc_ - val_) coeffs_.resize(trunc_ - val_);
    if (val_ >= trunc_) coeffs_.clear();
    while (!coeffs_.empty() && coeffs_.back().is_zero()) coeffs_.pop_back();
    std::size_t lead = 0;
    while (lead < coeffs_.size() && coeffs_[lead].is_zero()) ++lead;
    if (lead) {
        coeffs_.erase(coeffs_.begin(), coeffs_.begin() + long(lead));
        val_ += int(lead);
    }
    if (coeffs_.empty()) val_ = trunc_;
}

MultiRat LSeries::coeff(int p) const {
    if (p >= trunc_)
        throw std::out_of_range("coefficient of " + std::string(series_var_name(var_)) + "^" + std::to_string(p) +
                                " is beyond O(^" + std::to_string(trunc_) + ")");
    if (p < val_ || p >= stored_end()) return MultiRat();
    return coeffs_[std::size_t(p - val_)];
}

const MultiRat& LSeries::leading() const {
    if (coeffs_.empty()) throw ZeroLeadingCoefficient("series has no known nonzero coefficient");
    return coeffs_.front();
}

LSeries LSeries::truncated(int trunc) const {
    LSeries f = *this;
    f.trunc_ = std::min(trunc_, trunc);
    f.normalize();
    return f;
}

LSeries LSeries::operator-() const {
    LSeries f = *this;
    for (auto& c : f.coeffs_) c = -c;
    return f;
}

LSeries operator+(const LSeries& f, const LSeries& g) {
    if (f.var_ != g.var_) throw std::invalid_argument("adding series in different variables");
    int T = std::min(f.trunc_, g.trunc_);
    if (g.is_zero()) return f.truncated(T);
    if (f.is_zero()) return g.truncated(T);
    int lo = std::min(f.val_, g.val_);
    int hi = std::min(T, std::max(f.stored_end(), g.stored_end()));
    std::vector<MultiRat> c(std::size_t(std::max(0, hi - lo)));
    for (int p = lo; p < hi; ++p) {
        MultiRat s;
        if (p >= f.val_ && p < f.stored_end()) s = f.coeffs_[std::size_t(p - f.val_)];
        if (p >= g.val_ && p < g.stored_end()) s += g.coeffs_[std::size_t(p - g.val_)];
        c[std::size_t(p - lo)] = std::move(s);
    }
    return LSeries::from_coeffs(f.var_, lo, std::move(c), T);
}

LSeries operator-(const LSeries& f, const LSeries& g) { return f + (-g); }

LSeries operator*(const LSeries& f, const LSeries& g) {
    if (f.var_ != g.var_) throw std::invalid_argument("multiplying series in different variables");
    int T = std::min(sat_add(f.val_, g.trunc_), sat_add(g.val_, f.trunc_));
    if (f.is_zero() || g.is_zero()) return LSeries::big_o(T, f.var_);
    int lo = f.val_ + g.val_;
    int hi = std::min(T, f.stored_end() + g.stored_end() - 1);
    std::vector<MultiRat> c(std::size_t(std::max(0, hi - lo)));
    for (std::size_t i = 0; i < f.coeffs_.size(); ++i) {
        for (std::size_t j = 0; j < g.coeffs_.size(); ++j) {
            int p = lo + int(i + j);
            if (p >= hi) break;
            c[std::size_t(p - lo)] += f.coeffs_[i] * g.coeffs_[j];
        }
    }
    return LSeries::from_coeffs(f.var_, lo, std::move(c), T);
}

LSeries operator*(const LSeries& f, const MultiRat& c) {
    if (c.is_zero()) return LSeries(f.var_);
    LSeries r = f;
    for (auto& x : r.coeffs_) x *= c;
    r.normalize();
    return r;
}

LSeries LSeries::shift(int k) const {
    LSeries f = *this;
    f.val_ = sat_add(val_, k);
    f.trunc_ = sat_add(trunc_, k);
    return f;
}

bool LSeries::agrees_with(const LSeries& o) const {
    if (var_ != o.var_) return false;
    int T = std::min(trunc_, o.trunc_);
    int lo = std::min(val_, o.val_);
    int hi = std::min(T, std::max(stored_end(), o.stored_end()));
    for (int p = lo; p < hi; ++p)
        if (coeff(p) != o.coeff(p)) return false;
    return true;
}

bool operator==(const LSeries& f, const LSeries& g) {
    return f.var_ == g.var_ && f.trunc_ == g.trunc_ && f.val_ == g.val_ && f.coeffs_ == g.coeffs_;
}

LSeries LSeries::invert(int max_terms) const {
    if (coeffs_.empty()) throw ZeroLeadingCoefficient("inverting a series with no known nonzero coefficient");
    const MultiRat inv0 = coeffs_[0].inverse();
    if (is_exact() && coeffs_.size() == 1) return monomial(inv0, -val_, kExact, var_);
    int P = is_exact() ? max_terms : trunc_ - val_;
    std::vector<MultiRat> d(static_cast<std::size_t>(P));
    d[0] = inv0;
    for (int j = 1; j < P; ++j) {
        MultiRat s;
        for (int i = 1; i <= j && i < int(coeffs_.size()); ++i) s += coeffs_[std::size_t(i)] * d[std::size_t(j - i)];
        d[std::size_t(j)] = -s * inv0;
    }
    return from_coeffs(var_, -val_, std::move(d), -val_ + P);
}

LSeries LSeries::pow(int e, int max_terms) const {
    if (e < 0) return invert(max_terms).pow(-e, max_terms);
    LSeries r = constant(MultiRat(1), kExact, var_), b = *this;
    while (e) {
        if (e & 1) r = r * b;
        e >>= 1;
        if (e) b = b * b;
    }
    return r;
}

LSeries LSeries::differentiate() const {
    std::vector<MultiRat> c;
    for (std::size_t i = 0; i < coeffs_.size(); ++i) c.push_back(coeffs_[i] * MultiRat(val_ + int(i)));
    return from_coeffs(var_, val_ - 1, std::move(c), is_exact() ? kExact : trunc_ - 1);
}

LSeries LSeries::map_coeffs(const std::function<MultiRat(const MultiRat&)>& fn) const {
    LSeries f = *this;
    for (auto& c : f.coeffs_) c = fn(c);
    f.normalize();
    return f;
}

LSeries LSeries::substitute(VarId v, const MultiRat& value) const {
    return map_coeffs([&](const MultiRat& c) { return c.substitute(v, value); });
}

LSeries LSeries::substitute(const std::map<VarId, MultiRat>& values) const {
    return map_coeffs([&](const MultiRat& c) { return c.substitute(values); });
}

std::vector<VarId> LSeries::parameters() const {
    std::vector<VarId> out;
    for (const auto& c : coeffs_) {
        auto v = c.variables();
        out.insert(out.end(), v.begin(), v.end());
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

namespace {

// Evaluates p with the variables in `values` replaced by series; the other
// variables stay in the coefficients.
LSeries eval_poly(const MultiPoly& p, const std::map<VarId, LSeries>& values, SeriesVar tag) {
    std::map<Monomial, std::vector<Term>, bool (*)(const Monomial&, const Monomial&)> groups(
        [](const Monomial& a, const Monomial& b) { return mono_cmp(a, b) > 0; });
    for (const auto& t : p.terms()) {
        Monomial sub, rest;
        for (auto x : t.mono) (values.count(mono_var(x)) ? sub : rest).push_back(x);
        groups[sub].push_back(Term{rest, t.coeff});
    }
    std::map<std::pair<std::uint32_t, std::uint32_t>, LSeries> powers;
    std::function<const LSeries&(VarId, std::uint32_t)> power = [&](VarId v, std::uint32_t e) -> const LSeries& {
        auto key = std::make_pair(v.raw, e);
        auto it = powers.find(key);
        if (it != powers.end()) return it->second;
        LSeries r = e == 1 ? values.at(v) : power(v, e - 1) * values.at(v);
        return powers.emplace(key, std::move(r)).first->second;
    };
    LSeries acc(tag);
    for (auto& [mono, terms] : groups) {
        MultiRat c(MultiPoly::from_terms(terms));
        LSeries term = LSeries::constant(c, kExact, tag);
        for (auto x : mono) term = term * power(mono_var(x), mono_exp(x));
        acc += term;
    }
    return acc;
}

}  // namespace

LSeries eval_series(const MultiRat& r, const std::map<VarId, LSeries>& values, SeriesVar tag, int max_terms) {
    bool touched = false;
    for (VarId v : r.variables())
        if (values.count(v)) touched = true;
    if (!touched) return LSeries::constant(r, kExact, tag);
    LSeries num = eval_poly(r.num(), values, tag);
    MultiRat plain_den(1);
    for (const auto& [id, e] : r.den_factors()) {
        const MultiPoly& f = factor_poly(id);
        bool hit = false;
        for (VarId v : f.variables())
            if (values.count(v)) hit = true;
        if (!hit) {
            plain_den *= MultiRat(f).pow(e);
            continue;
        }
        num = num * eval_poly(f, values, tag).invert(max_terms).pow(e, max_terms);
    }
    if (plain_den != MultiRat(1)) num = num * plain_den.inverse();
    return num;
}

LSeries LSeries::substitute_series(const std::map<VarId, LSeries>& values, int max_terms) const {
    int cap = kExact;
    for (const auto& [v, s] : values) {
        if (s.variable() != var_) throw std::invalid_argument("substituting a series in a different variable");
        if (v.kind() == VarKind::Jet) {
            if (s.valuation() < 1) throw std::invalid_argument("jet variable " + v.name() + " replaced by a series with constant term");
            cap = std::min(cap, int(v.jet_order()));
        }
    }
    LSeries acc = big_o(trunc_, var_);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        LSeries c = eval_series(coeffs_[i], values, var_, max_terms);
        if (cap < kExact) c = c.truncated(cap);
        acc += c.shift(val_ + int(i));
    }
    if (cap < kExact && !coeffs_.empty()) acc = acc.truncated(val_ + cap);
    return acc;
}

std::string LSeries::str() const {
    std::string s;
    const char* x = series_var_name(var_);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        if (coeffs_[i].is_zero()) continue;
        int p = val_ + int(i);
        if (!s.empty()) s += " + ";
        s += "(" + coeffs_[i].str() + ")";
        if (p != 0) s += std::string("*") + x + (p == 1 ? "" : "^" + std::to_string(p));
    }
    if (!is_exact()) s += (s.empty() ? "" : " + ") + std::string("O(") + x + "^" + std::to_string(trunc_) + ")";
    return s.empty() ? "0" : s;
}

nlohmann::json LSeries::to_json() const {
    nlohmann::json j;
    j["variable"] = series_var_name(var_);
    j["valuation"] = is_zero() ? nlohmann::json(nullptr) : nlohmann::json(val_);
    j["trunc"] = is_exact() ? nlohmann::json(nullptr) : nlohmann::json(trunc_);
    auto arr = nlohmann::json::array();
    for (const auto& c : coeffs_) arr.push_back(c.str());
    j["coeffs"] = arr;
    return j;
}

std::ostream& operator<<(std::ostream& os, const LSeries& f) { return os << f.str(); }

LSeries compose(const LSeries& f, const LSeries& s) {
    if (s.is_zero() || s.valuation() < 1) {
        if (f.valuation() < 0 && s.is_zero()) throw ZeroLeadingCoefficient("composing a Laurent series with a zero series");
        throw std::invalid_argument("compose needs an inner series without constant term");
    }
    const int vs = s.valuation();
    const SeriesVar out = s.variable();
    if (f.is_zero()) return LSeries::big_o(f.is_exact() ? kExact : vs * f.trunc(), out);
    const int v = f.valuation();
    LSeries g = f.shift(-v);
    LSeries acc(out);
    for (int j = g.stored_end() - 1; j >= 0; --j) {
        acc = acc * s + LSeries::constant(g.coeff(j), kExact, out);
    }
    if (!g.is_exact()) acc = acc.truncated(vs * g.trunc());
    if (v != 0) {
        int terms = acc.is_exact() ? 12 : std::max(1, acc.trunc() - acc.valuation());
        acc = acc * s.pow(v, terms + 1);
    }
    return acc;
}

LSeries reverse(const LSeries& s, SeriesVar out) {
    if (s.is_zero() || s.valuation() != 1)
        throw NotReversible("series must have valuation exactly 1 (found " +
                            (s.is_zero() ? std::string("zero series") : std::to_string(s.valuation())) + ")");
    const int T = s.is_exact() ? 12 : s.trunc();
    const MultiRat c1 = s.leading();
    const MultiRat inv1 = c1.inverse();
    LSeries h = s - LSeries::monomial(c1, 1, kExact, s.variable());
    LSeries lam = LSeries::monomial(MultiRat(1), 1, kExact, out);
    LSeries r = LSeries::monomial(inv1, 1, 2, out);
    if (h.is_zero() && h.is_exact()) return LSeries::monomial(inv1, 1, kExact, out);
    for (int it = 0; it < T + 2; ++it) {
        LSeries nr = ((lam - compose(h, r)) * inv1).truncated(T);
        if (nr.trunc() <= r.trunc() && it > 0) {
            r = nr;
            break;
        }
        r = nr;
        if (r.trunc() >= T) break;
    }
    return r;
}

std::map<VarId, LSeries> implicit_reparam(const std::vector<LSeries>& family, const std::vector<VarId>& targets,
                                          const std::map<VarId, MultiRat>& values) {
    if (family.size() != targets.size()) throw std::invalid_argument("implicit_reparam: one series per target");
    if (family.empty()) return {};
    const SeriesVar tag = family.front().variable();
    const std::size_t n = family.size();
    // Jacobian of the constant-term map at the targets.
    std::vector<std::vector<MultiRat>> J(n, std::vector<MultiRat>(n));
    bool identity = true;
    for (std::size_t k = 0; k < n; ++k) {
        if (family[k].valuation() < 0) throw std::invalid_argument("implicit_reparam: family member has a pole");
        MultiRat c0 = family[k].coeff(0);
        for (std::size_t j = 0; j < n; ++j) J[k][j] = c0.derivative(targets[j]);
        if (c0 != MultiRat::variable(targets[k])) identity = false;
    }
    if (!identity) {
        // Fraction-free elimination to decide singularity.
        auto A = J;
        for (std::size_t c = 0; c < n; ++c) {
            std::size_t piv = c;
            while (piv < n && A[piv][c].is_zero()) ++piv;
            if (piv == n) throw SingularJacobian("constant-term map of the family is degenerate");
            std::swap(A[piv], A[c]);
            for (std::size_t r = c + 1; r < n; ++r) {
                if (A[r][c].is_zero()) continue;
                MultiRat f = A[r][c] / A[c][c];
                for (std::size_t k = c; k < n; ++k) A[r][k] -= f * A[c][k];
            }
        }
        throw std::invalid_argument("implicit_reparam: constant terms must equal the target parameters");
    }
    std::vector<LSeries> G;
    int T = kExact;
    for (std::size_t k = 0; k < n; ++k) {
        G.push_back(family[k] - LSeries::constant(MultiRat::variable(targets[k]), kExact, tag));
        T = std::min(T, family[k].trunc());
    }
    if (T >= kExact) T = 12;
    std::map<VarId, LSeries> a;
    auto target_value = [&](VarId v) {
        auto it = values.find(v);
        return it == values.end() ? MultiRat() : it->second;
    };
    for (std::size_t k = 0; k < n; ++k) a[targets[k]] = LSeries::constant(target_value(targets[k]), 1, tag);
    for (int it = 0; it < T + 2; ++it) {
        std::map<VarId, LSeries> next;
        int lo = kExact;
        for (std::size_t k = 0; k < n; ++k) {
            LSeries nk = (LSeries::constant(target_value(targets[k]), kExact, tag) - G[k].substitute_series(a, T + 1))
                             .truncated(T);
            lo = std::min(lo, nk.trunc());
            next[targets[k]] = std::move(nk);
        }
        int before = kExact;
        for (auto& [v, s] : a) before = std::min(before, s.trunc());
        a = std::move(next);
        if (lo >= T || lo <= before) break;
    }
    return a;
}

LSeries expand(const MultiRat& r, VarId v, int trunc, SeriesVar tag) {
    auto poly_series = [&](const MultiPoly& p) {
        std::uint32_t d = p.degree_in(v);
        std::vector<MultiRat> c;
        for (std::uint32_t e = 0; e <= d; ++e) c.emplace_back(p.coefficient_of(v, e));
        return LSeries::from_coeffs(tag, 0, std::move(c), kExact);
    };
    LSeries num = poly_series(r.num());
    if (r.is_polynomial()) return num.truncated(trunc);
    LSeries den = poly_series(r.den());
    int m = std::max(1, trunc - num.valuation() + den.valuation());
    if (num.is_zero()) return LSeries::big_o(kExact, tag);
    return (num * den.invert(m)).truncated(trunc);
}

}  // namespace toeplitz
