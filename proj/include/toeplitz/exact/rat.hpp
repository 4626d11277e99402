#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "toeplitz/exact/poly.hpp"

namespace toeplitz {

// Registry of denominator factors.  Every factor is a nonconstant primitive
// polynomial with positive leading coefficient, free of involution and jet
// variables.  Ids are stable for the lifetime of the process.
const MultiPoly& factor_poly(std::uint32_t id);
std::size_t factor_count();

// Rational function num / prod_i f_i^{e_i}.  Denominators are kept factored
// over the registry so that common denominators never square up; after every
// operation the numerator is trial-divided by each denominator factor.
class MultiRat {
public:
    using Den = std::vector<std::pair<std::uint32_t, int>>;  // sorted by factor id

    MultiRat() = default;
    MultiRat(const MultiPoly& p) : num_(p) {}  // NOLINT
    MultiRat(const Rational& c) : num_(c) {}  // NOLINT
    MultiRat(long c) : num_(Rational(c)) {}    // NOLINT
    MultiRat(int c) : num_(Rational(c)) {}     // NOLINT
    static MultiRat variable(VarId v) { return MultiRat(MultiPoly::variable(v)); }
    static MultiRat fraction(const MultiPoly& num, const MultiPoly& den);

    bool is_zero() const { return num_.is_zero(); }
    bool is_polynomial() const { return den_.empty(); }
    bool is_constant() const { return den_.empty() && num_.is_constant(); }
    Rational constant_value() const;  // requires is_constant()
    const MultiPoly& num() const { return num_; }
    const Den& den_factors() const { return den_; }
    MultiPoly den() const;

    MultiRat operator-() const;
    friend MultiRat operator+(const MultiRat& a, const MultiRat& b);
    friend MultiRat operator-(const MultiRat& a, const MultiRat& b);
    friend MultiRat operator*(const MultiRat& a, const MultiRat& b);
    friend MultiRat operator/(const MultiRat& a, const MultiRat& b);
    MultiRat& operator+=(const MultiRat& o) { return *this = *this + o; }
    MultiRat& operator-=(const MultiRat& o) { return *this = *this - o; }
    MultiRat& operator*=(const MultiRat& o) { return *this = *this * o; }
    MultiRat& operator/=(const MultiRat& o) { return *this = *this / o; }
    friend bool operator==(const MultiRat& a, const MultiRat& b);
    friend bool operator!=(const MultiRat& a, const MultiRat& b) { return !(a == b); }

    MultiRat inverse() const;
    MultiRat pow(int e) const;

    std::vector<VarId> variables() const;
    bool contains(VarId v) const;
    MultiRat derivative(VarId v) const;
    MultiRat substitute(VarId v, const MultiRat& value) const;
    MultiRat substitute(const std::map<VarId, MultiRat>& values) const;
    Rational evaluate(const std::map<VarId, Rational>& assignment) const;

    std::string str() const;

private:
    void cancel();
    MultiPoly num_;
    Den den_;
};

std::ostream& operator<<(std::ostream& os, const MultiRat& r);

// 1/p as (numerator, factored denominator), removing involution and jet
// variables from the denominator.  Throws DivisionByZero when p is zero or
// (jets) has zero jet-free part.
std::pair<MultiPoly, std::pair<Rational, MultiRat::Den>> invert_poly(const MultiPoly& p);

}  // namespace toeplitz
