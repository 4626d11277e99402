#pragma once

#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "toeplitz/lax/lax.hpp"
#include "toeplitz/series/lseries.hpp"

namespace toeplitz {

VarId u_var(int i);  // u_{i}

struct RecursionSpec {
    int N = 1;
    bool self_dual = true;
    int n = 0;                  // pole site
    std::map<int, Rational> u;  // keys 1..N, and -1..-N unless self-dual

    // u_i, using u_{-i} = u_i in the self-dual case.
    Rational u_at(int i) const;
    // Throws std::invalid_argument describing the first violated invariant.
    void validate() const;
    RecursionSpec sigma() const;  // u_i <-> u_{-i}
};

enum class GammaPath { VectorField, Definition };

struct GammaPair {
    int k = 0;
    MultiPoly gamma;
    MultiPoly gamma_tilde;  // equals gamma in the self-dual case
};

// Γ_k, Γ̃_k as polynomials in x_j, y_j and the symbols u_{i} (self-dual:
// y_j = x_j and u_{-i} = u_{i}).  Results are cached.
const GammaPair& symbolic_gamma(int N, bool self_dual, int k, GammaPath path = GammaPath::VectorField);

// Γ_k with the numeric u of the spec.
GammaPair build_gamma(const RecursionSpec& spec, int k, GammaPath path = GammaPath::VectorField);

// σ on polynomials: x_j <-> y_j and u_i <-> u_{-i}.
MultiPoly sigma_poly(const MultiPoly& p);

// Structure of Γ_k: supports, degree one in the outermost variables, the
// displayed leading and trailing terms, σ(Γ_k) = Γ̃_k.
Report verify_gamma_structure(int N, bool self_dual, int k = 0);

// Ring operations needed by forward_step for the value types in use.
template <class R>
struct StepRing;

template <>
struct StepRing<Rational> {
    static Rational from(const Rational& c) { return c; }
    static bool is_zero(const Rational& a) { return a == 0; }
    static Rational divide(const Rational& a, const Rational& b) { return a / b; }
};

template <>
struct StepRing<MultiRat> {
    static MultiRat from(const Rational& c) { return MultiRat(c); }
    static bool is_zero(const MultiRat& a) { return a.is_zero(); }
    static MultiRat divide(const MultiRat& a, const MultiRat& b) { return a / b; }
};

// Values of a forward iteration.  Self-dual runs leave y empty.
template <class R>
struct SiteValues {
    std::map<int, R> x, y;
};

// Evaluates p with site variables from `vals` (self-dual: y_j -> x_j), and
// u from the spec.
template <class R, class Embed>
R eval_sites(const MultiPoly& p, const RecursionSpec& spec, const SiteValues<R>& vals, Embed embed);

// Solves Γ_k = Γ̃_k = 0 for x_{k+N} (and y_{k+N}).  Throws SingularStep when
// the linear coefficient vanishes.
template <class R, class Embed, class Div, class IsZero>
void forward_step(const RecursionSpec& spec, int k, SiteValues<R>& vals, Embed embed, Div div, IsZero is_zero);

template <class R>
void forward_step(const RecursionSpec& spec, int k, SiteValues<R>& vals) {
    forward_step(spec, k, vals, StepRing<R>::from, StepRing<R>::divide, StepRing<R>::is_zero);
}

// Forward step over Laurent series: x_{k+N} = -B/A with honest truncation.
void forward_step_series(const RecursionSpec& spec, int k, SiteValues<LSeries>& vals, SeriesVar tag);

// Γ_k(t), Γ̃_k(t) on a window of series; with `time_dependent_u`, the slots
// u_1 and u_{-1} become u_{±1} + t.
std::pair<LSeries, LSeries> gamma_on_series(const RecursionSpec& spec, const SiteValues<LSeries>& vals, int k,
                                            bool time_dependent_u, SeriesVar tag = SeriesVar::T);

// ---------------------------------------------------------------------------

namespace detail {
std::optional<std::pair<char, int>> parse_site(VarId v);
std::optional<int> parse_u(VarId v);
}  // namespace detail

template <class R, class Embed>
R eval_sites(const MultiPoly& p, const RecursionSpec& spec, const SiteValues<R>& vals, Embed embed) {
    auto value = [&](VarId v) -> R {
        if (auto s = detail::parse_site(v)) {
            const auto& m = (s->first == 'y' && !spec.self_dual) ? vals.y : vals.x;
            auto it = m.find(s->second);
            if (it == m.end())
                throw std::out_of_range("site value " + v.name() + " missing from iteration window");
            return it->second;
        }
        if (auto i = detail::parse_u(v)) return embed(spec.u_at(*i));
        throw std::invalid_argument("unexpected symbol " + v.name() + " in recursion polynomial");
    };
    return p.template eval<R>(value, [&](const Rational& c) { return embed(c); });
}

template <class R, class Embed, class Div, class IsZero>
void forward_step(const RecursionSpec& spec, int k, SiteValues<R>& vals, Embed embed, Div div, IsZero is_zero) {
    const int top = k + spec.N;
    GammaPair g = build_gamma(spec, k);
    auto solve = [&](const MultiPoly& poly, VarId var, std::map<int, R>& into, const char* what) {
        MultiPoly A = poly.coefficient_of(var, 1), B = poly.coefficient_of(var, 0);
        R a = eval_sites(A, spec, vals, embed);
        if (is_zero(a))
            throw SingularStep(std::string("coefficient of ") + what + std::to_string(top) + " vanishes at k=" +
                               std::to_string(k) + " (v-product " + A.str() + ")");
        R b = eval_sites(B, spec, vals, embed);
        into[top] = div(-b, a);
    };
    solve(g.gamma, x_var(top), vals.x, "x_");
    if (!spec.self_dual) solve(g.gamma_tilde, y_var(top), vals.y, "y_");
}

}  // namespace toeplitz
