#pragma once

#include <boost/container/small_vector.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "toeplitz/exact/rational.hpp"
#include "toeplitz/exact/var.hpp"

namespace toeplitz {

// Sparse exponent vector: entries (var.raw << 32 | exponent), sorted by var.
using Monomial = boost::container::small_vector<std::uint64_t, 4>;

inline std::uint64_t mono_entry(VarId v, std::uint32_t e) { return (std::uint64_t(v.raw) << 32) | e; }
inline VarId mono_var(std::uint64_t x) { return VarId{std::uint32_t(x >> 32)}; }
inline std::uint32_t mono_exp(std::uint64_t x) { return std::uint32_t(x & 0xFFFFFFFFu); }

// Lexicographic term order (smaller var id is more significant).
int mono_cmp(const Monomial& a, const Monomial& b);
// Product with the involution and jet rules; false if the product vanishes.
bool mono_mul(const Monomial& a, const Monomial& b, Monomial& out);
bool mono_divides(const Monomial& b, const Monomial& a);  // b | a
Monomial mono_div(const Monomial& a, const Monomial& b);  // requires b | a
unsigned mono_jet_degree(const Monomial& m);

struct Term {
    Monomial mono;
    Rational coeff;
};

class MultiPoly {
public:
    MultiPoly() = default;
    MultiPoly(const Rational& c);  // NOLINT: constants convert implicitly
    MultiPoly(long c) : MultiPoly(Rational(c)) {}
    MultiPoly(int c) : MultiPoly(Rational(c)) {}

    static MultiPoly variable(VarId v, std::uint32_t e = 1);
    // Builds a canonical polynomial from arbitrary (unsorted, duplicated) terms.
    static MultiPoly from_terms(std::vector<Term> terms);

    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].mono.empty()); }
    bool is_monomial() const { return terms_.size() == 1; }
    Rational constant_term() const;
    std::size_t size() const { return terms_.size(); }
    const std::vector<Term>& terms() const { return terms_; }
    const Term& leading() const { return terms_.front(); }

    MultiPoly operator-() const;
    MultiPoly& operator+=(const MultiPoly& o);
    MultiPoly& operator-=(const MultiPoly& o);
    MultiPoly& operator*=(const MultiPoly& o);
    MultiPoly& operator*=(const Rational& c);
    friend MultiPoly operator+(MultiPoly a, const MultiPoly& b) { return a += b; }
    friend MultiPoly operator-(MultiPoly a, const MultiPoly& b) { return a -= b; }
    friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b);
    friend MultiPoly operator*(MultiPoly a, const Rational& c) { return a *= c; }
    friend MultiPoly operator*(const Rational& c, MultiPoly a) { return a *= c; }
    friend MultiPoly operator*(MultiPoly a, int c) { return a *= Rational(c); }
    friend MultiPoly operator*(int c, MultiPoly a) { return a *= Rational(c); }
    friend bool operator==(const MultiPoly& a, const MultiPoly& b);
    friend bool operator!=(const MultiPoly& a, const MultiPoly& b) { return !(a == b); }

    MultiPoly pow(unsigned e) const;

    std::uint32_t degree_in(VarId v) const;
    unsigned total_degree() const;
    MultiPoly coefficient_of(VarId v, std::uint32_t e) const;
    MultiPoly derivative(VarId v) const;
    MultiPoly substitute(VarId v, const MultiPoly& value) const;
    // Sorted by raw id.
    std::vector<VarId> variables() const;
    bool contains(VarId v) const;
    bool has_kind(VarKind k) const;

    // Exact division; std::nullopt when q does not divide *this.  q must be
    // free of involution and jet variables.
    std::optional<MultiPoly> divide_exact(const MultiPoly& q) const;

    // Positive rational c with *this / c having coprime integer coefficients.
    Rational content() const;
    // (c, p) with *this = c * p, p primitive with positive leading coefficient.
    std::pair<Rational, MultiPoly> primitive_part() const;
    Monomial monomial_gcd() const;
    MultiPoly divide_monomial(const Monomial& m) const;

    // p = p0 + p1 * v for an involution v.
    std::pair<MultiPoly, MultiPoly> split_involution(VarId v) const;
    // p = p0 + q with p0 free of jet variables.
    std::pair<MultiPoly, MultiPoly> split_jet() const;
    unsigned max_jet_order() const;

    std::string str() const;
    std::size_t hash() const;

    // Evaluates in any commutative ring R.  `value(VarId)` gives the image of
    // each variable, `constant(Rational)` embeds coefficients.
    template <class R, class ValueFn, class ConstFn>
    R eval(ValueFn&& value, ConstFn&& constant) const;

private:
    std::vector<Term> terms_;  // descending term order, no zero coefficients
};

std::ostream& operator<<(std::ostream& os, const MultiPoly& p);

template <class R, class ValueFn, class ConstFn>
R MultiPoly::eval(ValueFn&& value, ConstFn&& constant) const {
    std::unordered_map<std::uint32_t, std::vector<R>> powers;
    auto power = [&](VarId v, std::uint32_t e) -> const R& {
        auto& vec = powers[v.raw];
        if (vec.empty()) vec.push_back(value(v));
        while (vec.size() < e) vec.push_back(vec.back() * vec.front());
        return vec[e - 1];
    };
    R acc = constant(Rational(0));
    for (const auto& t : terms_) {
        if (t.mono.empty()) {
            acc = acc + constant(t.coeff);
            continue;
        }
        std::optional<R> prod;
        for (auto x : t.mono) {
            const R& f = power(mono_var(x), mono_exp(x));
            if (prod) *prod = *prod * f; else prod = f;
        }
        acc = acc + constant(t.coeff) * *prod;
    }
    return acc;
}

}  // namespace toeplitz
