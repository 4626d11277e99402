#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "toeplitz/flow/flow.hpp"

namespace toeplitz {

// u_i as ring elements; index 0 is never asked for.
using UValues = std::function<MultiRat(int)>;
UValues numeric_u(const RecursionSpec& spec);
UValues symbolic_u(bool self_dual);  // u_{i} (self-dual: u_{|i|})

// Γ_k(t), Γ̃_k(t) along a window of t-series; with `time_dependent`, u_{±1}
// is replaced by u_{±1} + t.  Inputs are cut to what coefficients through
// t^order need.  Throws WindowTooSmall when a site is missing.
std::pair<LSeries, LSeries> gamma_along(int N, bool self_dual, const UValues& u, const SiteValues<LSeries>& s, int k,
                                        bool time_dependent, int order = kExact);

// ---------------------------------------------------------------- tangency

// Pole structure of Γ_n on the unrestricted balance (symbolic parameters
// and symbolic u), regularity of Γ_k for k != n, and in the general case the
// t^-2 coefficients of Γ_n, Γ̃_n, the two-way relation and Γ_n^{(-1)}.
Report check_pole_structure(int N, bool self_dual, int n);

// Supports of the constant terms Γ_k^{(0)} (k != n) in the balance parameters.
Report check_condition_supports(int N, bool self_dual, int n);

// ------------------------------------------------------------- restriction

// One coefficient of Γ_k (tilde = false) or Γ̃_k (tilde = true).
struct ConditionRef {
    bool tilde = false;
    int k = 0;
    int order = 0;
    std::string str(int n) const;
};

struct RestrictionStep {
    std::string label;                   // step label, "(4)", "(9b)", ...
    std::vector<ConditionRef> equations;  // solved jointly
    std::vector<VarId> unknowns;          // same count as equations
    std::vector<VarId> excluded;          // parameters that must be absent (crossed out)
};

struct RestrictionPlan {
    int N = 1;
    bool self_dual = true;
    int n = 0;
    int half_width = 0;
    std::vector<VarId> free;  // parameters kept arbitrary
    std::vector<RestrictionStep> steps;
    // Parameters expressed through fresh unknowns before the run
    // (general: a_{n+1} = 1/b_{n+1}, so that the step is affine).
    std::map<VarId, MultiRat> rewrite;
    // Conditions left out of the plan; asserted to vanish afterwards.
    std::vector<ConditionRef> redundant;

    nlohmann::json to_json() const;
};

// Ordered solve steps for the self-dual and general recursions, with separate
// N = 1 plans.  All balance parameters of the window are covered.
RestrictionPlan make_plan(int N, bool self_dual, int n, int half_width);

struct RestrictOptions {
    int half_width = 0;
    // Values for the free parameters (anything not listed stays symbolic).
    std::map<VarId, MultiRat> fixed;
    // u used in Γ; defaults to the numeric u of the recursion.
    UValues u;
    int max_M = 9;
    // Stop after the first step with this label ("" runs the whole plan).
    std::string stop_after;
};

struct RestrictionResult {
    RestrictionPlan plan;
    RecursionSpec spec;
    // Every balance parameter (free ones with their given values).
    std::map<VarId, MultiRat> values;
    Report report;
    UValues u;  // as used in Γ

    // Balance with all parameters substituted.
    BalanceSolution balance(int M) const;
    nlohmann::json to_json() const;
};

// Runs the plan step by step: each designated condition must be affine in
// its unknowns with invertible coefficient matrix, and free of parameters
// that are still to be solved.  Throws NonlinearStep or
// SingularLeadingCoefficient.
RestrictionResult restrict_parameters(const RecursionSpec& spec, const RestrictOptions& opt);

// Γ_k(t) (and Γ̃_k) on the restricted balance at truncation M: zero on every
// known coefficient, known to at least O(t^{M-2}), for every edge-free k.
Report check_tangency_propagation(const RestrictionResult& r, int M);

// Generic rational specialization for the free parameters of a plan
// (deterministic in `seed`).
std::map<VarId, MultiRat> random_free_values(const RestrictionPlan& plan, unsigned seed);

// -------------------------------------------------------------- confinement

struct ConfinedSolution {
    int n = 0;
    bool self_dual = true;
    RecursionSpec spec;  // constant U
    // x_k(λ), y_k(λ) (self-dual: y empty).
    std::map<int, LSeries> x, y;
    // Surviving parameters and their values: α_k (general also β_k and
    // α_{n-1}), plus ε in the self-dual case.
    std::vector<std::pair<std::string, MultiRat>> parameters;
    std::map<int, MultiRat> alpha, beta;
    std::map<VarId, MultiRat> restricted;  // a_±, and a in general, at constant U
    int M = 0;  // working truncation in t

    // Number of free parameters including λ (ε excluded).
    int free_parameter_count() const;
    SiteValues<LSeries> sites() const;
    nlohmann::json to_json() const;
};

struct ConfineOptions {
    int M = 5;           // balance truncation
    int half_width = 0;  // 0: 2N + M + 2
    unsigned seed = 1;   // for α, β when not given
    std::map<int, Rational> alpha, beta;
};

// Restriction over jets (plateau parameters and the u-shift), U-shift
// u_{±1} = U_{±1} - t, plateau reparametrization, reversal of λ(t) and
// composition.  Throws NotReversible when λ(t) has no linear term.
ConfinedSolution build_confined(const RecursionSpec& spec, const ConfineOptions& opt);

// Shape invariants, Γ(U) on the λ-series, and agreement with an independent
// forward iteration over λ-series from the plateau seed.
Report verify_confinement(const ConfinedSolution& c);

}  // namespace toeplitz
