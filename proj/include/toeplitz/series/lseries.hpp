#pragma once

#include <climits>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "toeplitz/exact/rat.hpp"

namespace toeplitz {

enum class SeriesVar { T, Lambda };
const char* series_var_name(SeriesVar v);

// "No truncation": the stored coefficients are the whole series.
inline constexpr int kExact = INT_MAX / 4;
inline int sat_add(int a, int b) { return (a >= kExact || b >= kExact) ? kExact : a + b; }

// Truncated Laurent series sum_{p >= val} c_p s^p + O(s^trunc).
// Coefficients past the stored block and below trunc are zero.
class LSeries {
public:
    explicit LSeries(SeriesVar v = SeriesVar::T) : var_(v), val_(kExact), trunc_(kExact) {}

    static LSeries constant(const MultiRat& c, int trunc = kExact, SeriesVar v = SeriesVar::T);
    static LSeries monomial(const MultiRat& c, int power, int trunc = kExact, SeriesVar v = SeriesVar::T);
    static LSeries big_o(int trunc, SeriesVar v = SeriesVar::T);  // 0 + O(s^trunc)
    static LSeries from_coeffs(SeriesVar v, int start, std::vector<MultiRat> coeffs, int trunc);

    SeriesVar variable() const { return var_; }
    // Lowest power with a nonzero known coefficient; trunc() when none is known.
    int valuation() const { return val_; }
    int trunc() const { return trunc_; }
    bool is_exact() const { return trunc_ >= kExact; }
    // All known coefficients vanish.
    bool is_zero() const { return coeffs_.empty(); }
    // Coefficient of s^p; throws std::out_of_range if p >= trunc.
    MultiRat coeff(int p) const;
    const MultiRat& leading() const;
    // Highest power stored + 1 (== val when zero).
    int stored_end() const { return val_ + int(coeffs_.size()); }

    LSeries truncated(int trunc) const;
    LSeries operator-() const;
    friend LSeries operator+(const LSeries& f, const LSeries& g);
    friend LSeries operator-(const LSeries& f, const LSeries& g);
    friend LSeries operator*(const LSeries& f, const LSeries& g);
    friend LSeries operator*(const LSeries& f, const MultiRat& c);
    friend LSeries operator*(const MultiRat& c, const LSeries& f) { return f * c; }
    LSeries& operator+=(const LSeries& o) { return *this = *this + o; }
    LSeries& operator-=(const LSeries& o) { return *this = *this - o; }
    LSeries& operator*=(const LSeries& o) { return *this = *this * o; }
    LSeries shift(int k) const;  // multiply by s^k

    // Coefficientwise equality on the common known range.
    bool agrees_with(const LSeries& o) const;
    // Same trunc and same coefficients.
    friend bool operator==(const LSeries& f, const LSeries& g);

    // For exact non-monomial inputs the result is cut after `max_terms` terms.
    LSeries invert(int max_terms = 12) const;
    LSeries pow(int e, int max_terms = 12) const;
    LSeries differentiate() const;

    LSeries map_coeffs(const std::function<MultiRat(const MultiRat&)>& fn) const;
    LSeries substitute(VarId v, const MultiRat& value) const;
    LSeries substitute(const std::map<VarId, MultiRat>& values) const;
    // Coefficients are rewritten with variables replaced by series in the
    // same formal variable.  Jet variables may only be replaced by series
    // without constant term; the coefficient precision is then capped by the
    // jet order.
    LSeries substitute_series(const std::map<VarId, LSeries>& values, int max_terms = 12) const;
    std::vector<VarId> parameters() const;

    std::string str() const;
    nlohmann::json to_json() const;

private:
    void normalize();
    SeriesVar var_;
    int val_;
    std::vector<MultiRat> coeffs_;
    int trunc_;
};

std::ostream& operator<<(std::ostream& os, const LSeries& f);

// f(s(u)); val s >= 1.  The result is in s's variable.
LSeries compose(const LSeries& f, const LSeries& s);
// r with s(r(u)) = u, in the variable `out`.
LSeries reverse(const LSeries& s, SeriesVar out = SeriesVar::Lambda);

// Given F_k(t; a) = a_k + O(t), finds a_k(t) with F_k(t; a(t)) = values_k to
// the family's precision.  values default to 0 when absent.
std::map<VarId, LSeries> implicit_reparam(const std::vector<LSeries>& family, const std::vector<VarId>& targets,
                                          const std::map<VarId, MultiRat>& values = {});

// Laurent expansion in `v` of a rational function r (r viewed over the
// remaining variables), to O(v^trunc).
LSeries expand(const MultiRat& r, VarId v, int trunc, SeriesVar tag);

// Evaluates a coefficient ring element with variables replaced by series.
LSeries eval_series(const MultiRat& r, const std::map<VarId, LSeries>& values, SeriesVar tag, int max_terms = 12);

}  // namespace toeplitz
