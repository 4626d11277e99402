#pragma once

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "toeplitz/confine/confine.hpp"

namespace toeplitz {

enum class TraceMode { ExactLambda, RationalLambda, NumericRational };

struct PolePassage {
    int k = 0;
    int valuation = 0;     // exact modes
    Rational magnitude;    // numeric mode: |x_k|
    bool returned = true;  // numeric mode: back below the threshold within N steps
};

// Forward iteration from 2N consecutive seed sites.  Which value maps are
// filled depends on the mode; self-dual traces leave the y maps empty.
struct IterationTrace {
    TraceMode mode = TraceMode::ExactLambda;
    bool self_dual = true;
    int first = 0;  // lowest seed site
    int seed_size = 0;
    std::map<int, LSeries> x, y;      // ExactLambda
    std::map<int, MultiRat> fx, fy;   // RationalLambda: elements of Q(lambda)
    std::map<int, Rational> nx, ny;   // NumericRational
    std::vector<PolePassage> events;

    std::vector<int> sites() const;
    // step, k, field, valuation (exact modes) or numerator digits,
    // denominator digits and magnitude (numeric mode).
    std::string csv() const;
    nlohmann::json to_json() const;
};

// Iteration over λ-Laurent series.  Throws DegenerateParameters when the
// seed vanishes identically and SingularStep from the linear solves.
IterationTrace iterate_exact(const RecursionSpec& spec, const SiteValues<LSeries>& seed, int steps);

// Iteration over Q(λ) (λ a plain variable): exact for every λ at once.
IterationTrace iterate_rational(const RecursionSpec& spec, const SiteValues<MultiRat>& seed, int steps);

// Iteration over Q.  Sites with |x_k| (or |y_k|) above `threshold` are
// recorded as pole passages.
IterationTrace iterate_numeric(const RecursionSpec& spec, const SiteValues<Rational>& seed, int steps,
                               const Rational& threshold);

// The variable λ used by iterate_rational seeds.
VarId lambda_var();

// Smallest integer m with m^2 >= 1/λ, i.e. the threshold λ^{-1/2} rounded up.
Rational pole_threshold(const Rational& lambda);

// All checks grouped by claim id; every known claim is listed, unexercised
// ones as "not run".
nlohmann::json emit_report(const Report& all);

// 0 when every check passed, 1 otherwise.
int report_status(const Report& all);

}  // namespace toeplitz
